#include "kolflow/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "kolflow/cns.hpp"

namespace fs = std::filesystem;

namespace kolflow {

namespace {

std::string d17(const BigReal& x) { return to_decimal_string(x, 17); }

ConfigMap merged_config(const std::string& config_path, const std::vector<std::string>& sets) {
    ConfigMap cfg = default_config();
    if (!config_path.empty())
        for (const auto& [k, v] : load_config_file(config_path)) cfg[k] = v;
    for (const auto& s : sets) apply_override(cfg, s);
    return cfg;
}

void report_run(const RunOutputs& out) {
    if (out.scale_warning)
        std::cerr << "warning: grid spacing does not resolve the finest dissipation scale; "
                     "see audit.csv\n";
    std::cout << "run complete: " << out.steps << " steps, " << out.samples
              << " samples -> " << out.dir << '\n';
}

struct LoadedRun {
    RunConfig cfg;
    // (step, omega_hat) pairs restricted to the requested window, ascending.
    std::vector<std::pair<long, SpectralField>> states;
};

LoadedRun load_run_window(const std::string& run_dir, const std::string& window) {
    LoadedRun lr;
    lr.cfg = parse_run_config(load_config_file((fs::path(run_dir) / "config.txt").string()));
    BigReal lo = BigReal::zero(lr.cfg.precision);
    BigReal hi = lr.cfg.t_max;
    if (!window.empty()) {
        auto colon = window.find(':');
        if (colon == std::string::npos)
            throw config_error("window must be of the form t0:t1, got '" + window + "'");
        lo = parse_decimal(window.substr(0, colon), lr.cfg.precision);
        hi = parse_decimal(window.substr(colon + 1), lr.cfg.precision);
        if (!(lo <= hi)) throw config_error("window start must not exceed its end");
    }
    for (const auto& [step, path] : list_sample_snapshots(run_dir)) {
        BigReal t(lr.cfg.precision.binary_precision);
        mpfr_mul_si(t.raw(), lr.cfg.step.dt.raw(), step, MPFR_RNDN);
        if (t < lo || t > hi) continue;
        std::ifstream is(path);
        if (!is) throw config_error("cannot open snapshot '" + path + "'");
        LoadedSnapshot snap = load_spectral_snapshot(is, lr.cfg.grid, lr.cfg.precision);
        lr.states.emplace_back(step, std::move(snap.field));
    }
    if (lr.states.empty()) throw config_error("no samples inside the requested window");
    return lr;
}

std::vector<PhysicalField> dissipation_samples(const LoadedRun& lr) {
    std::vector<PhysicalField> out;
    out.reserve(lr.states.size());
    for (const auto& [step, w] : lr.states)
        out.push_back(dissipation_field(inverse_laplacian(w), lr.cfg.params));
    return out;
}

void write_pdf_csv(const std::string& path, const PdfEstimate& pdf) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw config_error("cannot write '" + path + "'");
    os << "bin_left,bin_right,probability\n";
    for (size_t i = 0; i < pdf.probability.size(); ++i)
        os << d17(pdf.bin_left[i]) << ',' << d17(pdf.bin_right[i]) << ','
           << d17(pdf.probability[i]) << '\n';
    if (!os.flush()) throw config_error("short write on '" + path + "'");
}

void write_profile_csv(const std::string& path, const ProfileY& prof) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw config_error("cannot write '" + path + "'");
    os << "y,mean_D\n";
    for (size_t i = 0; i < prof.y.size(); ++i)
        os << d17(prof.y[i]) << ',' << d17(prof.mean_dissipation[i]) << '\n';
    if (!os.flush()) throw config_error("short write on '" + path + "'");
}

void write_vorticity_csv(const std::string& path, const PhysicalField& w, const BigReal& t) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw config_error("cannot write '" + path + "'");
    const int n = w.grid.n;
    const PrecisionConfig p = w.prec;
    BigReal twopi = constant_pi(p);
    mul_pow2(twopi, twopi, 1);
    BigReal coord(p.binary_precision);
    os << "# t = " << d17(t) << "\nx,y,omega\n";
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            mpfr_mul_si(coord.raw(), twopi.raw(), i, MPFR_RNDN);
            div_long(coord, coord, n);
            os << d17(coord) << ',';
            mpfr_mul_si(coord.raw(), twopi.raw(), j, MPFR_RNDN);
            div_long(coord, coord, n);
            os << d17(coord) << ',' << d17(w.at(i, j)) << '\n';
        }
    }
    if (!os.flush()) throw config_error("short write on '" + path + "'");
}

BigReal step_time(const RunConfig& cfg, long step) {
    BigReal t(cfg.precision.binary_precision);
    mpfr_mul_si(t.raw(), cfg.step.dt.raw(), step, MPFR_RNDN);
    return t;
}

void print_tc_summary(const TcReport& rep) {
    std::cout << "t_c = " << d17(rep.t_c) << '\n';
    std::cout << "departed = " << (rep.departed ? "yes" : "no") << '\n';
    if (rep.departed) std::cout << "departure_time = " << d17(rep.departure_time) << '\n';
}

int half_again(int x) { return (3 * x + 1) / 2; }

int do_diagnose(const std::string& run_dir, const std::string& what, int bins, bool linear,
                const std::string& window, std::string out_dir) {
    if (out_dir.empty()) out_dir = run_dir;
    fs::create_directories(out_dir);
    LoadedRun lr = load_run_window(run_dir, window);

    if (what == "pdf") {
        PdfEstimate pdf = pdf_of_dissipation(dissipation_samples(lr), bins, !linear);
        const std::string path = (fs::path(out_dir) / "pdf.csv").string();
        write_pdf_csv(path, pdf);
        std::cout << "wrote " << path << " (" << pdf.sample_count << " points, "
                  << pdf.probability.size() << " bins)\n";
        return 0;
    }
    if (what == "profile") {
        std::string label = window.empty() ? "full run" : window;
        ProfileY prof = profile_y(dissipation_samples(lr), lr.cfg.precision, label);
        const std::string path = (fs::path(out_dir) / "profile.csv").string();
        write_profile_csv(path, prof);
        std::cout << "wrote " << path << '\n';
        return 0;
    }
    if (what == "vorticity") {
        const auto& [step, w] = lr.states.back();
        PhysicalField field = fft_inverse(w);
        const std::string path = (fs::path(out_dir) / "vorticity.csv").string();
        write_vorticity_csv(path, field, step_time(lr.cfg, step));
        std::cout << "wrote " << path << '\n';
        return 0;
    }
    if (what == "resolution") {
        const auto& [step, w] = lr.states.back();
        SpectralField psi = inverse_laplacian(w);
        DiagnosticsRecord rec =
            compute_record(step_time(lr.cfg, step), psi, lr.cfg.params, lr.cfg.step.dt);
        ResolutionVerdict v = resolution_check(w, lr.cfg.params, lr.cfg.step, rec);
        std::cout << "t = " << d17(rec.t) << '\n';
        std::cout << "dx = " << d17(v.dx) << '\n';
        std::cout << "courant = " << d17(v.courant) << (v.cfl_ok ? " ok" : " VIOLATED") << '\n';
        std::cout << "eta = " << d17(v.eta) << (v.eta_ok ? " ok" : " UNRESOLVED") << '\n';
        std::cout << "eta_omega = " << d17(v.eta_omega)
                  << (v.eta_omega_ok ? " ok" : " UNRESOLVED") << '\n';
        std::cout << (v.pass() ? "resolution ok" : "resolution check failed") << '\n';
        return 0;
    }
    throw config_error("unknown diagnostic '" + what + "'");
}

int do_reproduce(const std::string& fig, const std::string& preset,
                 const std::vector<std::string>& sets, const std::string& out_dir,
                 const std::string& tolerance, int bins) {
    ConfigMap base = preset_config(preset);
    for (const auto& s : sets) apply_override(base, s);
    fs::create_directories(out_dir);

    ConfigMap high = base;  // companion run at half again the fidelity
    high["order"] = std::to_string(half_again(static_cast<int>(std::stol(base.at("order")))));
    high["digits"] = std::to_string(half_again(static_cast<int>(std::stol(base.at("digits")))));

    if (!preset_runnable(preset)) {
        std::ofstream cf(fs::path(out_dir) / "config.txt", std::ios::binary);
        cf << serialize_config(base);
        if (fig == "tc") {
            std::ofstream hf(fs::path(out_dir) / "config_high.txt", std::ios::binary);
            hf << serialize_config(high);
        }
        std::cout << "preset '" << preset
                  << "' is sized for production hardware; wrote its configuration to "
                  << out_dir << " instead of running it here\n";
        return 0;
    }

    if (fig == "tc") {
        base["output_dir"] = (fs::path(out_dir) / "base").string();
        high["output_dir"] = (fs::path(out_dir) / "high").string();
        RunConfig rc_base = parse_run_config(base);
        RunConfig rc_high = parse_run_config(high);
        report_run(run(rc_base));
        report_run(run(rc_high));
        BigReal tol = parse_decimal(tolerance, rc_base.precision);
        TcReport rep = critical_predictable_time(base.at("output_dir"),
                                                 high.at("output_dir"), tol);
        const std::string path = (fs::path(out_dir) / "tc_report.csv").string();
        write_tc_report(path, rep);
        print_tc_summary(rep);
        std::cout << "wrote " << path << '\n';
        return 0;
    }

    base["output_dir"] = (fs::path(out_dir) / "run").string();
    RunConfig rc = parse_run_config(base);
    report_run(run(rc));
    if (fig == "series") {
        std::cout << "series at " << base.at("output_dir") << "/timeseries.csv\n";
        return 0;
    }
    if (fig == "pdf")
        return do_diagnose(base.at("output_dir"), "pdf", bins, false, "", out_dir);
    if (fig == "profile")
        return do_diagnose(base.at("output_dir"), "profile", bins, false, "", out_dir);
    if (fig == "vorticity")
        return do_diagnose(base.at("output_dir"), "vorticity", bins, false, "", out_dir);
    throw config_error("unknown figure '" + fig +
                       "' (expected series, pdf, profile, vorticity or tc)");
}

int do_inspect(const std::string& path) {
    Checkpoint ck = load_checkpoint(path);
    std::cout << "checkpoint " << path << '\n';
    std::cout << "step " << ck.step_index << '\n';
    std::cout << "t " << ck.t_label << '\n';
    std::cout << "order " << ck.current_order << '\n';
    std::cout << "samples " << ck.samples_emitted << '\n';
    std::cout << "checkpoints " << ck.checkpoints_emitted << '\n';
    std::cout << "grid_n " << ck.omega.grid.n << '\n';
    std::cout << "l2_omega " << d17(l2_norm(ck.omega)) << '\n';
    std::cout << "config:\n";
    for (const auto& [k, v] : ck.settings) std::cout << "  " << k << " = " << v << '\n';
    return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Clean numerical simulation of 2D Kolmogorov flow"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "kolflow 1.0.0");

    std::string config_path, restart_path;
    std::vector<std::string> sets;
    auto* cmd_run = app.add_subcommand("run", "Integrate a configured flow");
    cmd_run->add_option("--config", config_path, "Configuration file");
    cmd_run->add_option("--set", sets, "Override key=value")->take_all();
    cmd_run->add_option("--restart", restart_path, "Continue from a checkpoint file");

    std::string dir_a, dir_b, tolerance = "1e-2", report_out;
    auto* cmd_cmp = app.add_subcommand("compare", "Certify the predictable horizon of a pair");
    cmd_cmp->add_option("dirA", dir_a, "Run directory under test")->required();
    cmd_cmp->add_option("dirB", dir_b, "Reference run directory")->required();
    cmd_cmp->add_option("--tolerance", tolerance, "Relative deviation bound");
    cmd_cmp->add_option("--out", report_out, "Write the deviation history CSV here");

    std::string diag_dir, diag_what, diag_window, diag_out;
    int diag_bins = 64;
    bool diag_linear = false;
    auto* cmd_diag = app.add_subcommand("diagnose", "Derive fields and statistics from a run");
    cmd_diag->add_option("run_dir", diag_dir, "Finished run directory")->required();
    cmd_diag->add_option("--what", diag_what, "pdf, profile, vorticity or resolution")
        ->required();
    cmd_diag->add_option("--bins", diag_bins, "Histogram bin count");
    cmd_diag->add_flag("--linear", diag_linear, "Linear instead of logarithmic bins");
    cmd_diag->add_option("--window", diag_window, "Time window t0:t1");
    cmd_diag->add_option("--out", diag_out, "Output directory (defaults to the run directory)");

    std::string fig, preset, rep_out, rep_tol = "1e-2";
    std::vector<std::string> rep_sets;
    int rep_bins = 64;
    auto* cmd_rep = app.add_subcommand("reproduce", "Run a preset and derive one artifact");
    cmd_rep->add_option("fig", fig, "series, pdf, profile, vorticity or tc")->required();
    cmd_rep->add_option("--preset", preset, "Preset name")->required();
    cmd_rep->add_option("--out", rep_out, "Output directory")->required();
    cmd_rep->add_option("--set", rep_sets, "Override key=value")->take_all();
    cmd_rep->add_option("--tolerance", rep_tol, "Deviation bound for tc");
    cmd_rep->add_option("--bins", rep_bins, "Histogram bin count for pdf");

    std::string ck_path;
    auto* cmd_ins = app.add_subcommand("inspect", "Validate and summarize a checkpoint");
    cmd_ins->add_option("checkpoint", ck_path, "Checkpoint file")->required();

    int rc = 0;
    cmd_run->callback([&] {
        if (!restart_path.empty()) {
            Checkpoint ck = load_checkpoint(restart_path);
            ConfigMap cfg = ck.settings;
            for (const auto& s : sets) apply_override(cfg, s);
            RunOutputs out = run_from_checkpoint(parse_run_config(cfg), ck);
            report_run(out);
            return;
        }
        if (config_path.empty()) throw config_error("run needs --config or --restart");
        report_run(run(parse_run_config(merged_config(config_path, sets))));
    });
    cmd_cmp->callback([&] {
        TcReport rep =
            critical_predictable_time(dir_a, dir_b, parse_decimal(tolerance, make_precision(24)));
        print_tc_summary(rep);
        if (!report_out.empty()) {
            write_tc_report(report_out, rep);
            std::cout << "wrote " << report_out << '\n';
        }
    });
    cmd_diag->callback([&] {
        rc = do_diagnose(diag_dir, diag_what, diag_bins, diag_linear, diag_window, diag_out);
    });
    cmd_rep->callback(
        [&] { rc = do_reproduce(fig, preset, rep_sets, rep_out, rep_tol, rep_bins); });
    cmd_ins->callback([&] { rc = do_inspect(ck_path); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const guard_error& e) {
        std::cerr << "guard: " << e.what() << '\n';
        return 3;
    } catch (const numeric_error& e) {
        std::cerr << "numeric: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return rc;
}

}  // namespace kolflow
