#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "kolflow/cns.hpp"
#include "kolflow/parallel.hpp"

namespace fs = std::filesystem;
using namespace kolflow;
using testing::dense_state;
using testing::show;

namespace {

fs::path fresh_dir(const std::string& tag) {
    fs::path d = fs::temp_directory_path() / ("kolflow_test_" + tag);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) out.push_back(line);
    return out;
}

// Small laminar run: 10 steps of n=16, samples at steps {0, 5, 10},
// checkpoints at {5, 10}. Completes in well under a second.
ConfigMap tiny_config(const std::string& out_dir) {
    ConfigMap cfg = default_config();
    cfg["grid_n"] = "16";
    cfg["dt"] = "1e-2";
    cfg["order"] = "4";
    cfg["t_max"] = "0.1";
    cfg["sample_interval"] = "0.05";
    cfg["checkpoint_interval"] = "0.05";
    cfg["output_dir"] = out_dir;
    return cfg;
}

}  // namespace

TEST_CASE("initial conditions build the documented exact spectra") {
    PrecisionConfig p = make_precision(40);
    GridSpec g(64);
    FlowParams params = make_flow_params("100", 4, p);

    InitialConditionSpec ic1;
    ic1.kind = IcKind::psi1;
    SpectralField w1 = initialize(ic1, g, p, params);
    BigReal half = parse_decimal("0.5", p);
    for (int sx : {-1, 1})
        for (int sy : {-1, 1}) {
            CHECK(w1.mode(sx, sy).re.identical(half));
            CHECK(w1.mode(sx, sy).im.is_zero());
        }
    long nonzero = 0;
    for (int q = 0; q < g.size(); ++q)
        if (!w1.c[q].re.is_zero() || !w1.c[q].im.is_zero()) ++nonzero;
    CHECK(nonzero == 4);

    InitialConditionSpec ic2;
    ic2.kind = IcKind::psi2;
    ic2.delta = "1e-10";
    SpectralField w2 = initialize(ic2, g, p, params);
    // psi gains -i delta/2 at (1,1); omega = -2 psi flips it to +i delta.
    CHECK(w2.mode(1, 1).re.identical(half));
    CHECK(w2.mode(1, 1).im.identical(parse_decimal("1e-10", p)));
    CHECK(w2.mode(-1, -1).im.identical(parse_decimal("-1e-10", p)));

    BigReal dist = l2_diff(w2, w1);
    BigReal expect = parse_decimal("1e-10", p) * sqrt(BigReal::of_long(2, p));
    CHECK(abs(dist - expect) < noise_floor(p) * expect);

    InitialConditionSpec bad;
    bad.kind = IcKind::psi2;
    bad.delta = "0";
    CHECK_THROWS_AS(initialize(bad, g, p, params), config_error);

    InitialConditionSpec lam;
    lam.kind = IcKind::laminar;
    SpectralField wl = initialize(lam, g, p, make_flow_params("40", 4, p));
    CHECK(wl.mode(0, 4).re.identical(BigReal::of_long(-5, p)));
    CHECK(inverse_laplacian(wl).mode(0, 4).re.identical(parse_decimal("0.3125", p)));
}

TEST_CASE("config parsing, defaults and overrides") {
    ConfigMap cfg = default_config();
    RunConfig rc = parse_run_config(cfg);
    CHECK(rc.grid.n == 64);
    CHECK(rc.total_steps == 1000);
    CHECK(rc.sample_stride == 50);
    CHECK(rc.checkpoint_stride == 500);
    CHECK(rc.step.order == 10);
    CHECK(rc.precision.decimal_digits == 40);
    CHECK(rc.ic.kind == IcKind::laminar);
    CHECK(rc.scale_guard == GuardMode::warn);
    CHECK(!rc.adaptive);

    apply_override(cfg, "dt=5e-4");
    apply_override(cfg, "ic_kind=psi1");
    rc = parse_run_config(cfg);
    CHECK(rc.total_steps == 2000);
    CHECK(rc.ic.kind == IcKind::psi1);

    CHECK_THROWS_AS(apply_override(cfg, "nonsense=1"), config_error);
    CHECK_THROWS_AS(apply_override(cfg, "dt"), config_error);
    CHECK_THROWS_AS(apply_override(cfg, "dt="), config_error);
}

TEST_CASE("interval ratios are validated in exact decimal arithmetic") {
    ConfigMap cfg = default_config();

    // 0.3 / 0.1 is exactly 3 in decimal even though neither is a binary
    // float; the validator must accept it.
    cfg["dt"] = "0.1";
    cfg["t_max"] = "0.3";
    cfg["sample_interval"] = "0.1";
    cfg["checkpoint_interval"] = "0.3";
    CHECK(parse_run_config(cfg).total_steps == 3);

    cfg["t_max"] = "0.35";
    CHECK_THROWS_AS(parse_run_config(cfg), config_error);
    cfg["t_max"] = "0.3";
    cfg["sample_interval"] = "0.1000000000000001";
    CHECK_THROWS_AS(parse_run_config(cfg), config_error);
}

TEST_CASE("config rejection catalogue") {
    auto expect_reject = [](const char* key, const char* value) {
        ConfigMap cfg = default_config();
        cfg[key] = value;
        CHECK_THROWS_AS(parse_run_config(cfg), config_error);
    };
    expect_reject("grid_n", "12");
    expect_reject("grid_n", "4");
    expect_reject("digits", "10");
    expect_reject("order", "0");
    expect_reject("dt", "0");
    expect_reject("dt", "-1e-3");
    expect_reject("t_max", "0");
    expect_reject("reynolds", "0");
    expect_reject("forcing_k", "32");  // at or above the n=64 Nyquist
    expect_reject("ic_kind", "vortex");
    expect_reject("adaptive", "yes");
    expect_reject("scale_guard", "maybe");
    expect_reject("dealias_fraction", "0/3");
    expect_reject("dealias_fraction", "4/3");
    expect_reject("sample_interval", "3e-4");

    ConfigMap cfg = default_config();
    cfg.erase("dt");
    CHECK_THROWS_AS(parse_run_config(cfg), config_error);
    cfg = default_config();
    cfg["ic_kind"] = "psi2";
    cfg["ic_delta"] = "0";
    CHECK_THROWS_AS(parse_run_config(cfg), config_error);
}

TEST_CASE("config files round trip through serialization") {
    fs::path dir = fresh_dir("cfgio");
    ConfigMap cfg = tiny_config((dir / "out").string());
    {
        std::ofstream os(dir / "run.conf");
        os << "# comment line\n\n" << serialize_config(cfg);
    }
    ConfigMap loaded = load_config_file((dir / "run.conf").string());
    CHECK(loaded == cfg);

    CHECK_THROWS_AS(load_config_file((dir / "missing.conf").string()), config_error);
    {
        std::ofstream os(dir / "bad.conf");
        os << "grid_n 16\n";
    }
    CHECK_THROWS_AS(load_config_file((dir / "bad.conf").string()), config_error);
    {
        std::ofstream os(dir / "unknown.conf");
        os << "not_a_key = 1\n";
    }
    CHECK_THROWS_AS(load_config_file((dir / "unknown.conf").string()), config_error);
}

TEST_CASE("output root environment variable") {
    setenv("KOLFLOW_OUTPUT_ROOT", "/tmp/kolflow_root_test", 1);
    CHECK(resolve_output_dir("abc") == "/tmp/kolflow_root_test/abc");
    CHECK(resolve_output_dir("/abs/path") == "/abs/path");
    unsetenv("KOLFLOW_OUTPUT_ROOT");
    CHECK(resolve_output_dir("abc") == "abc");
}

TEST_CASE("content hash basis and accumulation") {
    // Empty input must give the FNV-1a offset basis by definition.
    CHECK(fnv1a64("") == 14695981039346656037ULL);
    // One folding step, written out explicitly.
    uint64_t h = 14695981039346656037ULL;
    h ^= static_cast<unsigned char>('k');
    h *= 1099511628211ULL;
    CHECK(fnv1a64("k") == h);
    h ^= static_cast<unsigned char>('0');
    h *= 1099511628211ULL;
    CHECK(fnv1a64("k0") == h);
    CHECK(fnv1a64("k0") != fnv1a64("0k"));
}

TEST_CASE("checkpoints round trip bitwise and reject corruption") {
    fs::path dir = fresh_dir("ckpt");
    ConfigMap cm = tiny_config((dir / "out").string());
    RunConfig cfg = parse_run_config(cm);

    Checkpoint ck;
    ck.settings = cm;
    ck.step_index = 7;
    ck.current_order = 4;
    ck.samples_emitted = 2;
    ck.checkpoints_emitted = 1;
    ck.t_label = "7.0000e-002";
    ck.omega = dense_state(cfg.grid, cfg.precision, 47);

    const std::string path = (dir / "ck.txt").string();
    save_checkpoint(path, cfg, ck);
    Checkpoint back = load_checkpoint(path);
    CHECK(back.settings == cm);
    CHECK(back.step_index == 7);
    CHECK(back.current_order == 4);
    CHECK(back.samples_emitted == 2);
    CHECK(back.checkpoints_emitted == 1);
    CHECK(back.t_label == ck.t_label);
    for (int q = 0; q < cfg.grid.size(); ++q) {
        REQUIRE(back.omega.c[q].re.identical(ck.omega.c[q].re));
        REQUIRE(back.omega.c[q].im.identical(ck.omega.c[q].im));
    }

    std::string text = slurp(path);
    std::string flipped = text;
    size_t pos = flipped.find("e-0", flipped.size() / 2);
    REQUIRE(pos != std::string::npos);
    flipped[pos - 1] = flipped[pos - 1] == '5' ? '6' : '5';
    {
        std::ofstream os(dir / "bad.txt", std::ios::binary);
        os << flipped;
    }
    CHECK_THROWS_AS(load_checkpoint((dir / "bad.txt").string()), numeric_error);

    {
        std::ofstream os(dir / "short.txt", std::ios::binary);
        os << text.substr(0, text.size() / 2);
    }
    CHECK_THROWS_AS(load_checkpoint((dir / "short.txt").string()), numeric_error);
    CHECK_THROWS_AS(load_checkpoint((dir / "missing.txt").string()), config_error);
}

TEST_CASE("a small run emits the documented files") {
    fs::path dir = fresh_dir("run1");
    ConfigMap cm = tiny_config((dir / "out").string());
    RunConfig cfg = parse_run_config(cm);
    RunOutputs out = run(cfg);

    CHECK(out.steps == 10);
    CHECK(out.samples == 3);
    CHECK(out.scale_warning);  // eta of the n=16 laminar state is below dx
    CHECK(fs::exists(dir / "out" / "config.txt"));
    CHECK(slurp(dir / "out" / "config.txt") == serialize_config(cm));

    auto ts = lines_of(slurp(dir / "out" / "timeseries.csv"));
    REQUIRE(ts.size() == 4);
    CHECK(ts[0] ==
          "t,mean_dissipation,energy,enstrophy,sym_rot,sym_trans,courant,eta,eta_omega");
    CHECK(ts[1].substr(0, 12) == "0.0000000000");
    auto audit = lines_of(slurp(dir / "out" / "audit.csv"));
    REQUIRE(audit.size() == 4);
    CHECK(audit[0] ==
          "t,order,l2_omega,truncation_estimate,budget_residual,identity_residual,"
          "quadrature_residual,power_input,mode00_abs");

    CHECK(fs::exists(dir / "out" / "samples" / "snap_000000000.txt"));
    CHECK(fs::exists(dir / "out" / "samples" / "snap_000000005.txt"));
    CHECK(fs::exists(dir / "out" / "samples" / "snap_000000010.txt"));
    CHECK(fs::exists(dir / "out" / "checkpoints" / "ck_000000005.txt"));
    CHECK(fs::exists(dir / "out" / "checkpoints" / "ck_000000010.txt"));
    CHECK(!fs::exists(dir / "out" / "checkpoints" / "ck_000000000.txt"));

    auto snaps = list_sample_snapshots((dir / "out").string());
    REQUIRE(snaps.size() == 3);
    CHECK(snaps[0].first == 0);
    CHECK(snaps[2].first == 10);

    // The identity column is zero by construction; budget and quadrature
    // residuals sit at roundoff, far below the noise floor.
    PrecisionConfig p = cfg.precision;
    for (size_t i = 1; i < audit.size(); ++i) {
        std::istringstream row(audit[i]);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        REQUIRE(cells.size() == 9);
        CHECK(parse_decimal(cells[4], p) < noise_floor(p));
        CHECK(parse_decimal(cells[5], p) < noise_floor(p));
        CHECK(parse_decimal(cells[6], p) < noise_floor(p));
    }
}

TEST_CASE("the laminar state does not drift over a hundred steps") {
    fs::path dir = fresh_dir("drift");
    ConfigMap cm = tiny_config((dir / "out").string());
    cm["t_max"] = "1";
    cm["sample_interval"] = "0.5";
    cm["checkpoint_interval"] = "1";
    RunConfig cfg = parse_run_config(cm);
    run(cfg);

    Checkpoint final = load_checkpoint((dir / "out" / "checkpoints" / "ck_000000100.txt").string());
    SpectralField w0 = initialize(cfg.ic, cfg.grid, cfg.precision, cfg.params);
    BigReal drift = l2_diff(final.omega, w0);
    BigReal tol = noise_floor(cfg.precision);
    mul_long(tol, tol, 10);
    INFO("drift ", show(drift));
    CHECK(drift < tol);
}

TEST_CASE("runs are deterministic across repetitions and thread counts") {
    fs::path dir = fresh_dir("det");
    ConfigMap a = tiny_config((dir / "a").string());
    ConfigMap b = tiny_config((dir / "b").string());
    ConfigMap c = tiny_config((dir / "c").string());
    a["ic_kind"] = "psi1";
    b["ic_kind"] = "psi1";
    c["ic_kind"] = "psi1";
    run(parse_run_config(a));
    {
        parallel::ThreadGuard one(1);
        run(parse_run_config(b));
    }
    {
        parallel::ThreadGuard four(4);
        run(parse_run_config(c));
    }
    for (const char* f : {"timeseries.csv", "audit.csv"}) {
        CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
        CHECK(slurp(dir / "a" / f) == slurp(dir / "c" / f));
    }
    for (const auto& [step, path] : list_sample_snapshots((dir / "a").string())) {
        fs::path rel = fs::path(path).filename();
        CHECK(slurp(dir / "a" / "samples" / rel) == slurp(dir / "b" / "samples" / rel));
        CHECK(slurp(dir / "a" / "samples" / rel) == slurp(dir / "c" / "samples" / rel));
    }
}

TEST_CASE("restarting from a checkpoint reproduces the uninterrupted run") {
    fs::path dir = fresh_dir("restart");
    ConfigMap cm = tiny_config((dir / "full").string());
    cm["ic_kind"] = "psi1";
    RunConfig cfg = parse_run_config(cm);
    run(cfg);

    Checkpoint mid = load_checkpoint((dir / "full" / "checkpoints" / "ck_000000005.txt").string());
    ConfigMap cm2 = mid.settings;
    cm2["output_dir"] = (dir / "part2").string();
    RunOutputs out2 = run_from_checkpoint(parse_run_config(cm2), mid);
    CHECK(out2.steps == 5);

    // Continuation files carry no headers and only the rows after the split;
    // prefix + continuation must equal the uninterrupted file byte for byte.
    auto full_ts = lines_of(slurp(dir / "full" / "timeseries.csv"));
    auto part_ts = lines_of(slurp(dir / "part2" / "timeseries.csv"));
    REQUIRE(full_ts.size() == 4);  // header + samples at steps 0, 5, 10
    REQUIRE(part_ts.size() == 1);
    CHECK(part_ts[0] == full_ts[3]);
    auto full_audit = lines_of(slurp(dir / "full" / "audit.csv"));
    auto part_audit = lines_of(slurp(dir / "part2" / "audit.csv"));
    REQUIRE(part_audit.size() == 1);
    CHECK(part_audit[0] == full_audit[3]);

    CHECK(slurp(dir / "full" / "samples" / "snap_000000010.txt") ==
          slurp(dir / "part2" / "samples" / "snap_000000010.txt"));
    CHECK(!fs::exists(dir / "part2" / "samples" / "snap_000000005.txt"));
    CHECK(slurp(dir / "full" / "checkpoints" / "ck_000000010.txt") !=
          slurp(dir / "part2" / "checkpoints" / "ck_000000010.txt"));  // differing output_dir
    Checkpoint f10 = load_checkpoint((dir / "full" / "checkpoints" / "ck_000000010.txt").string());
    Checkpoint p10 = load_checkpoint((dir / "part2" / "checkpoints" / "ck_000000010.txt").string());
    for (int q = 0; q < cfg.grid.size(); ++q) {
        REQUIRE(f10.omega.c[q].re.identical(p10.omega.c[q].re));
        REQUIRE(f10.omega.c[q].im.identical(p10.omega.c[q].im));
    }
}

TEST_CASE("guards trip with the documented exception classes") {
    fs::path dir = fresh_dir("guards");

    ConfigMap cfl = tiny_config((dir / "cfl").string());
    cfl["dt"] = "0.2";  // laminar peak speed 2.5: courant > 1 at the first sample
    cfl["t_max"] = "0.2";
    cfl["sample_interval"] = "0.2";
    cfl["checkpoint_interval"] = "0.2";
    CHECK_THROWS_AS(run(parse_run_config(cfl)), guard_error);

    ConfigMap hard = tiny_config((dir / "hard").string());
    hard["scale_guard"] = "hard";  // eta < dx on the n=16 grid
    CHECK_THROWS_AS(run(parse_run_config(hard)), guard_error);
}

TEST_CASE("adaptive order control") {
    PrecisionConfig p = make_precision(40);
    GridSpec g(16);
    FlowParams params = make_flow_params("40", 4, p);
    StepConfig step = make_step("1e-2", 6, p);

    InitialConditionSpec lam;
    lam.kind = IcKind::laminar;
    SpectralField w0 = initialize(lam, g, p, params);
    TaylorSeries series = taylor_coefficients(w0, params, 6);

    // On the fixed point every coefficient beyond order zero is exactly
    // zero (the linear term cancels the forcing bitwise), so order 1 is
    // admissible for any target, even zero.
    CHECK(adapt_order(series, step, parse_decimal("1e-30", p)) == 1);
    CHECK(adapt_order(series, step, BigReal::zero(p)) == 1);

    // A generic state has strictly positive estimates. Scale the dense
    // state down so the per-order estimates decrease, then pick targets
    // between consecutive estimates to pin the selected order exactly.
    SpectralField wd = dense_state(g, p, 53);
    BigReal tiny = parse_decimal("1e-3", p);
    for (auto& c : wd.c) {
        mul(c.re, c.re, tiny);
        mul(c.im, c.im, tiny);
    }
    TaylorSeries sd = taylor_coefficients(wd, params, 8);
    auto est = [&](int m) { return l2_norm(sd.omega[m]) * pow_ui(step.dt, m); };
    for (int m = 1; m < 8; ++m) REQUIRE(est(m + 1) < est(m));
    CHECK(adapt_order(sd, step, sqrt(est(3) * est(4))) == 4);
    CHECK(adapt_order(sd, step, sqrt(est(6) * est(7))) == 7);
    CHECK_THROWS_AS(adapt_order(sd, step, BigReal::zero(p)), guard_error);

    // A run whose order cap cannot reach the target refuses to step.
    fs::path dir = fresh_dir("adapt");
    ConfigMap cm = tiny_config((dir / "out").string());
    cm["ic_kind"] = "psi1";
    cm["adaptive"] = "true";
    cm["adaptive_target"] = "1e-60";
    cm["order"] = "2";
    cm["reynolds"] = "100";
    CHECK_THROWS_AS(run(parse_run_config(cm)), guard_error);

    // With a reachable target the adaptive run completes and records the
    // orders it actually used.
    ConfigMap ok = tiny_config((dir / "ok").string());
    ok["adaptive"] = "true";
    ok["adaptive_target"] = "1e-30";
    ok["order"] = "6";
    RunOutputs out = run(parse_run_config(ok));
    CHECK(out.steps == 10);
    auto audit = lines_of(slurp(dir / "ok" / "audit.csv"));
    REQUIRE(audit.size() == 4);
    // order column of the final sampled row: the laminar run settles on 1.
    std::istringstream row(audit[3]);
    std::string cell;
    std::getline(row, cell, ',');
    std::getline(row, cell, ',');
    CHECK(cell == "1");
}

TEST_CASE("adaptive restart resumes at the recorded order") {
    fs::path dir = fresh_dir("adrestart");
    ConfigMap cm = tiny_config((dir / "full").string());
    cm["ic_kind"] = "psi1";
    cm["reynolds"] = "100";
    cm["adaptive"] = "true";
    cm["adaptive_target"] = "1e-8";
    cm["order"] = "8";
    run(parse_run_config(cm));

    Checkpoint mid = load_checkpoint((dir / "full" / "checkpoints" / "ck_000000005.txt").string());
    ConfigMap cm2 = mid.settings;
    cm2["output_dir"] = (dir / "part2").string();
    run_from_checkpoint(parse_run_config(cm2), mid);

    auto full_ts = lines_of(slurp(dir / "full" / "timeseries.csv"));
    auto part_ts = lines_of(slurp(dir / "part2" / "timeseries.csv"));
    REQUIRE(part_ts.size() == 1);
    CHECK(part_ts[0] == full_ts[3]);
    auto full_audit = lines_of(slurp(dir / "full" / "audit.csv"));
    auto part_audit = lines_of(slurp(dir / "part2" / "audit.csv"));
    CHECK(part_audit[0] == full_audit[3]);
}

TEST_CASE("self comparison certifies the whole horizon") {
    fs::path dir = fresh_dir("tcself");
    ConfigMap cm = tiny_config((dir / "a").string());
    cm["ic_kind"] = "psi1";
    run(parse_run_config(cm));

    PrecisionConfig p24 = make_precision(24);
    TcReport rep = critical_predictable_time((dir / "a").string(), (dir / "a").string(),
                                             parse_decimal("1e-2", p24));
    CHECK(!rep.departed);
    REQUIRE(rep.history.size() == 3);
    for (const auto& pt : rep.history) CHECK(pt.deviation.is_zero());
    CHECK(abs(rep.t_c - parse_decimal("0.1", p24)) < parse_decimal("1e-20", p24));

    fs::path report = dir / "tc.csv";
    write_tc_report(report.string(), rep);
    auto lines = lines_of(slurp(report));
    REQUIRE(lines.size() == 8);
    CHECK(lines[0].substr(0, 7) == "# t_c =");
    CHECK(lines[4] == "step,t,deviation");

    // Physically mismatched runs are not comparable.
    ConfigMap other = tiny_config((dir / "b").string());
    other["ic_kind"] = "psi1";
    other["reynolds"] = "50";
    run(parse_run_config(other));
    CHECK_THROWS_AS(critical_predictable_time((dir / "a").string(), (dir / "b").string(),
                                              parse_decimal("1e-2", p24)),
                    config_error);
}

TEST_CASE("resolution verdicts") {
    PrecisionConfig p = make_precision(40);
    GridSpec g(16);
    FlowParams params = make_flow_params("40", 4, p);
    StepConfig step = make_step("1e-2", 4, p);

    InitialConditionSpec lam;
    lam.kind = IcKind::laminar;
    SpectralField w0 = initialize(lam, g, p, params);
    SpectralField psi = inverse_laplacian(w0);
    DiagnosticsRecord rec = compute_record(BigReal::zero(p), psi, params, step.dt);
    ResolutionVerdict v = resolution_check(w0, params, step, rec);
    CHECK(v.cfl_ok);
    CHECK(!v.eta_ok);  // eta = 80000^(-1/4) = 0.0595 < dx = 2 pi/16
    CHECK(!v.pass());

    DiagnosticsRecord still =
        compute_record(BigReal::zero(p), SpectralField::zeros(g, p), params, step.dt);
    ResolutionVerdict vs = resolution_check(SpectralField::zeros(g, p), params, step, still);
    CHECK(vs.cfl_ok);
    CHECK(vs.eta_ok);
    CHECK(vs.eta_omega_ok);
    CHECK(vs.pass());
}

TEST_CASE("presets parse and carry the documented scales") {
    for (const std::string& name : preset_names()) {
        ConfigMap cfg = preset_config(name);
        RunConfig rc = parse_run_config(cfg);
        if (name == "production") {
            CHECK(!preset_runnable(name));
            CHECK(rc.grid.n == 1024);
            CHECK(rc.precision.decimal_digits == 260);
            CHECK(rc.step.order == 140);
            CHECK(rc.scale_guard == GuardMode::hard);
        } else {
            CHECK(preset_runnable(name));
            CHECK(rc.grid.n == 64);
            CHECK(rc.precision.decimal_digits == 40);
            CHECK(rc.step.order == 10);
        }
    }
    CHECK(preset_config("desk-chaotic").at("reynolds") == "100");
    CHECK(preset_config("desk-laminar").at("ic_kind") == "laminar");
    CHECK_THROWS_AS(preset_config("desk"), config_error);
}
