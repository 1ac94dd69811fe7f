#include "kolflow/cns.hpp"

#include <gmp.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace fs = std::filesystem;

namespace kolflow {

namespace {

const char* const kConfigKeys[] = {
    "adaptive",       "adaptive_target",     "checkpoint_interval", "dealias_fraction",
    "digits",         "dt",                  "forcing_k",           "grid_n",
    "ic_delta",       "ic_kind",             "order",               "output_dir",
    "reynolds",       "sample_interval",     "scale_guard",         "t_max",
};

bool known_key(const std::string& k) {
    for (const char* c : kConfigKeys)
        if (k == c) return true;
    return false;
}

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

long parse_long(const std::string& s, const char* what) {
    long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw config_error(std::string(what) + " must be an integer, got '" + s + "'");
    return v;
}

/// Exact decimal to rational; rejects anything that is not a plain or
/// scientific decimal literal.
void decimal_to_mpq(const std::string& s, mpq_t out, const char* what) {
    size_t i = 0;
    bool negative = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) negative = s[i++] == '-';
    std::string digits;
    long frac = 0, expo = 0;
    bool any = false;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        digits.push_back(s[i++]);
        any = true;
    }
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            digits.push_back(s[i++]);
            ++frac;
            any = true;
        }
    }
    if (any && i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::string es = s.substr(i + 1);
        expo = parse_long(es.empty() ? "x" : es, what);
        i = s.size();
    }
    if (!any || i != s.size())
        throw config_error(std::string(what) + " must be a decimal number, got '" + s + "'");

    mpz_t m, scale;
    mpz_init(m);
    mpz_init(scale);
    if (digits.empty()) digits = "0";
    mpz_set_str(m, digits.c_str(), 10);
    if (negative) mpz_neg(m, m);
    const long e10 = expo - frac;
    mpz_ui_pow_ui(scale, 10, static_cast<unsigned long>(e10 < 0 ? -e10 : e10));
    if (e10 >= 0) {
        mpz_mul(mpq_numref(out), m, scale);
        mpz_set_ui(mpq_denref(out), 1);
    } else {
        mpz_set(mpq_numref(out), m);
        mpz_set(mpq_denref(out), scale);
    }
    mpq_canonicalize(out);
    mpz_clear(m);
    mpz_clear(scale);
}

/// a/b checked to be an exact positive integer in rational arithmetic.
long exact_stride(const std::string& a, const std::string& b, const char* what) {
    mpq_t qa, qb;
    mpq_init(qa);
    mpq_init(qb);
    decimal_to_mpq(a, qa, what);
    decimal_to_mpq(b, qb, "dt");
    if (mpq_sgn(qb) <= 0 || mpq_sgn(qa) <= 0) {
        mpq_clear(qa);
        mpq_clear(qb);
        throw config_error(std::string(what) + " and dt must be positive");
    }
    mpq_div(qa, qa, qb);
    const bool integral = mpz_cmp_ui(mpq_denref(qa), 1) == 0;
    const bool fits = integral && mpz_fits_slong_p(mpq_numref(qa));
    const long v = fits ? mpz_get_si(mpq_numref(qa)) : 0;
    mpq_clear(qa);
    mpq_clear(qb);
    if (!integral)
        throw config_error(std::string(what) + " must be an exact decimal multiple of dt");
    if (!fits) throw config_error(std::string(what) + " / dt is out of range");
    return v;
}

std::string format_value(const BigReal& x) { return to_decimal_string(x, 17); }

std::string step_file(const char* stem, long s) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%09ld.txt", stem, s);
    return buf;
}

BigReal time_at(const BigReal& dt, long s) {
    BigReal t(dt.prec());
    mpfr_mul_si(t.raw(), dt.raw(), s, MPFR_RNDN);
    return t;
}

BigReal complex_magnitude(const BigComplex& z) {
    BigReal m(z.re.prec());
    mpfr_hypot(m.raw(), z.re.raw(), z.im.raw(), MPFR_RNDN);
    return m;
}

struct RunFiles {
    std::ofstream timeseries;
    std::ofstream audit;
    fs::path dir;
};

void write_timeseries_row(std::ofstream& os, const DiagnosticsRecord& r) {
    os << format_value(r.t) << ',' << format_value(r.mean_dissipation) << ','
       << format_value(r.kinetic_energy) << ',' << format_value(r.enstrophy) << ','
       << format_value(r.sym_rot) << ',' << format_value(r.sym_trans) << ','
       << format_value(r.courant) << ',' << format_value(r.eta) << ','
       << format_value(r.eta_omega) << '\n';
}

}  // namespace

ConfigMap default_config() {
    return {
        {"grid_n", "64"},
        {"reynolds", "40"},
        {"forcing_k", "4"},
        {"dt", "1e-3"},
        {"order", "10"},
        {"digits", "40"},
        {"ic_kind", "laminar"},
        {"ic_delta", "0"},
        {"t_max", "1"},
        {"sample_interval", "0.05"},
        {"checkpoint_interval", "0.5"},
        {"dealias_fraction", "2/3"},
        {"adaptive", "false"},
        {"adaptive_target", "1e-30"},
        {"output_dir", "out"},
        {"scale_guard", "warn"},
    };
}

ConfigMap load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw config_error("cannot open config file '" + path + "'");
    ConfigMap cfg;
    std::string line;
    long lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty() || value.empty())
            throw config_error(path + ":" + std::to_string(lineno) + ": empty key or value");
        if (!known_key(key))
            throw config_error(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        cfg[key] = value;
    }
    return cfg;
}

void apply_override(ConfigMap& cfg, const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw config_error("override '" + assignment + "' is not of the form key=value");
    std::string key = trim(assignment.substr(0, eq));
    std::string value = trim(assignment.substr(eq + 1));
    if (!known_key(key)) throw config_error("unknown config key '" + key + "'");
    if (value.empty()) throw config_error("override for '" + key + "' has an empty value");
    cfg[key] = value;
}

std::string serialize_config(const ConfigMap& cfg) {
    std::ostringstream os;
    for (const auto& [k, v] : cfg) os << k << " = " << v << '\n';
    return os.str();
}

RunConfig parse_run_config(const ConfigMap& cfg) {
    for (const char* k : kConfigKeys)
        if (!cfg.count(k)) throw config_error(std::string("missing config key '") + k + "'");
    for (const auto& [k, v] : cfg)
        if (!known_key(k)) throw config_error("unknown config key '" + k + "'");

    RunConfig rc;
    rc.settings = cfg;

    const long n = parse_long(cfg.at("grid_n"), "grid_n");
    long num = 1, den = 1;
    {
        const std::string& f = cfg.at("dealias_fraction");
        auto slash = f.find('/');
        if (slash == std::string::npos) {
            num = parse_long(f, "dealias_fraction");
            den = 1;
        } else {
            num = parse_long(trim(f.substr(0, slash)), "dealias_fraction numerator");
            den = parse_long(trim(f.substr(slash + 1)), "dealias_fraction denominator");
        }
    }
    try {
        rc.grid = GridSpec(static_cast<int>(n), static_cast<int>(num), static_cast<int>(den));
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }

    rc.precision = make_precision(static_cast<int>(parse_long(cfg.at("digits"), "digits")));
    rc.params = make_flow_params(cfg.at("reynolds"),
                                 static_cast<int>(parse_long(cfg.at("forcing_k"), "forcing_k")),
                                 rc.precision);
    if (rc.params.forcing_wavenumber >= rc.grid.n / 2)
        throw config_error("forcing_k must be below the grid Nyquist wavenumber");
    rc.step = make_step(cfg.at("dt"), static_cast<int>(parse_long(cfg.at("order"), "order")),
                        rc.precision);

    const std::string& kind = cfg.at("ic_kind");
    if (kind == "psi1")
        rc.ic.kind = IcKind::psi1;
    else if (kind == "psi2")
        rc.ic.kind = IcKind::psi2;
    else if (kind == "laminar")
        rc.ic.kind = IcKind::laminar;
    else
        throw config_error("ic_kind must be psi1, psi2 or laminar, got '" + kind + "'");
    rc.ic.delta = cfg.at("ic_delta");
    if (rc.ic.kind == IcKind::psi2) {
        BigReal d = parse_decimal(rc.ic.delta, rc.precision);
        if (!d.is_finite() || d.is_zero())
            throw config_error("psi2 needs a nonzero finite ic_delta");
    }

    rc.t_max = parse_decimal(cfg.at("t_max"), rc.precision);
    if (!rc.t_max.is_finite() || rc.t_max.is_zero() || rc.t_max.is_negative())
        throw config_error("t_max must be positive");
    rc.total_steps = exact_stride(cfg.at("t_max"), cfg.at("dt"), "t_max");
    rc.sample_stride = exact_stride(cfg.at("sample_interval"), cfg.at("dt"), "sample_interval");
    rc.checkpoint_stride =
        exact_stride(cfg.at("checkpoint_interval"), cfg.at("dt"), "checkpoint_interval");

    const std::string& ad = cfg.at("adaptive");
    if (ad == "true")
        rc.adaptive = true;
    else if (ad == "false")
        rc.adaptive = false;
    else
        throw config_error("adaptive must be true or false");
    rc.adaptive_target = parse_decimal(cfg.at("adaptive_target"), rc.precision);
    if (rc.adaptive && (!rc.adaptive_target.is_finite() || rc.adaptive_target.is_zero() ||
                        rc.adaptive_target.is_negative()))
        throw config_error("adaptive_target must be positive when adaptive is enabled");

    const std::string& sg = cfg.at("scale_guard");
    if (sg == "warn")
        rc.scale_guard = GuardMode::warn;
    else if (sg == "hard")
        rc.scale_guard = GuardMode::hard;
    else
        throw config_error("scale_guard must be warn or hard");

    rc.output_dir = cfg.at("output_dir");
    if (rc.output_dir.empty()) throw config_error("output_dir must not be empty");
    return rc;
}

SpectralField initialize(const InitialConditionSpec& ic, const GridSpec& grid,
                         const PrecisionConfig& prec, const FlowParams& params) {
    SpectralField psi = SpectralField::zeros(grid, prec);
    switch (ic.kind) {
        case IcKind::psi1:
        case IcKind::psi2: {
            BigReal quarter = BigReal::of_long(-1, prec);
            mul_pow2(quarter, quarter, -2);
            set(psi.mode(1, 1).re, quarter);
            set(psi.mode(1, -1).re, quarter);
            set(psi.mode(-1, 1).re, quarter);
            set(psi.mode(-1, -1).re, quarter);
            if (ic.kind == IcKind::psi2) {
                BigReal d = parse_decimal(ic.delta, prec);
                if (!d.is_finite() || d.is_zero())
                    throw config_error("psi2 needs a nonzero finite ic_delta");
                mul_pow2(d, d, -1);  // delta/2, exact
                // delta sin(x+y): -i d/2 at (1,1), +i d/2 at (-1,-1)
                neg(psi.mode(1, 1).im, d);
                set(psi.mode(-1, -1).im, d);
            }
            break;
        }
        case IcKind::laminar: {
            const long nk = params.forcing_wavenumber;
            BigReal amp(prec.binary_precision);
            div_long(amp, params.reynolds, 2 * nk * nk * nk);
            set(psi.mode(0, static_cast<int>(nk)).re, amp);
            set(psi.mode(0, static_cast<int>(-nk)).re, amp);
            break;
        }
    }
    return laplacian(psi);
}

uint64_t fnv1a64(std::string_view bytes) {
    uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void save_checkpoint(const std::string& path, const RunConfig& cfg, const Checkpoint& ck) {
    std::ostringstream os;
    os << "kolflow-checkpoint v1\n";
    os << "step " << ck.step_index << '\n';
    os << "order " << ck.current_order << '\n';
    os << "samples " << ck.samples_emitted << '\n';
    os << "checkpoints " << ck.checkpoints_emitted << '\n';
    os << "t " << ck.t_label << '\n';
    os << "[config]\n" << serialize_config(cfg.settings);
    os << "[state]\n";
    save_spectral_snapshot(os, ck.omega, cfg.precision.storage_digits, ck.t_label);
    const std::string body = os.str();
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(body)));
    std::ofstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot write checkpoint '" + path + "'");
    f << body << "checksum fnv1a64 " << hex << '\n';
    if (!f.flush()) throw config_error("short write on checkpoint '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot open checkpoint '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    const std::string all = buf.str();

    const std::string tag = "checksum fnv1a64 ";
    auto pos = all.rfind(tag);
    if (pos == std::string::npos || (pos != 0 && all[pos - 1] != '\n'))
        throw numeric_error("checkpoint '" + path + "' has no checksum line");
    const std::string body = all.substr(0, pos);
    std::string hex = trim(all.substr(pos + tag.size()));
    char expect[17];
    std::snprintf(expect, sizeof expect, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(body)));
    if (hex != expect)
        throw numeric_error("checkpoint '" + path + "' failed its checksum");

    std::istringstream is(body);
    std::string line, key;
    if (!std::getline(is, line) || line != "kolflow-checkpoint v1")
        throw numeric_error("checkpoint '" + path + "' has a bad version line");
    Checkpoint ck;
    if (!(is >> key >> ck.step_index) || key != "step")
        throw numeric_error("checkpoint: missing step");
    if (!(is >> key >> ck.current_order) || key != "order")
        throw numeric_error("checkpoint: missing order");
    if (!(is >> key >> ck.samples_emitted) || key != "samples")
        throw numeric_error("checkpoint: missing samples");
    if (!(is >> key >> ck.checkpoints_emitted) || key != "checkpoints")
        throw numeric_error("checkpoint: missing checkpoints");
    if (!(is >> key >> ck.t_label) || key != "t") throw numeric_error("checkpoint: missing t");
    is >> std::ws;
    if (!std::getline(is, line) || line != "[config]")
        throw numeric_error("checkpoint: missing [config] block");
    while (std::getline(is, line) && line != "[state]") {
        auto eq = line.find('=');
        if (eq == std::string::npos) throw numeric_error("checkpoint: bad config line");
        ck.settings[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    if (line != "[state]") throw numeric_error("checkpoint: missing [state] block");
    RunConfig rc = parse_run_config(ck.settings);
    LoadedSnapshot snap = load_spectral_snapshot(is, rc.grid, rc.precision);
    ck.omega = std::move(snap.field);
    return ck;
}

std::string resolve_output_dir(const std::string& output_dir) {
    fs::path p(output_dir);
    if (p.is_absolute()) return p.string();
    const char* root = std::getenv("KOLFLOW_OUTPUT_ROOT");
    if (root != nullptr && root[0] != '\0') return (fs::path(root) / p).string();
    return p.string();
}

namespace {

RunOutputs run_loop(const RunConfig& cfg, SpectralField state, long start_step,
                    int start_order, long samples_done, long checkpoints_done, bool fresh) {
    const PrecisionConfig& prec = cfg.precision;
    const long S = cfg.total_steps;
    if (start_step > S) throw config_error("checkpoint lies beyond t_max");

    RunOutputs out;
    RunFiles files;
    files.dir = resolve_output_dir(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(files.dir / "samples", ec);
    fs::create_directories(files.dir / "checkpoints", ec);
    if (!fs::is_directory(files.dir / "samples") || !fs::is_directory(files.dir / "checkpoints"))
        throw config_error("cannot create output directory '" + files.dir.string() + "'");
    out.dir = files.dir.string();

    if (fresh) {
        std::ofstream cf(files.dir / "config.txt", std::ios::binary);
        cf << serialize_config(cfg.settings);
        if (!cf.flush()) throw config_error("cannot write config echo");
    }
    files.timeseries.open(files.dir / "timeseries.csv", std::ios::binary);
    files.audit.open(files.dir / "audit.csv", std::ios::binary);
    if (!files.timeseries || !files.audit) throw config_error("cannot open output files");
    if (fresh) {
        files.timeseries << "t,mean_dissipation,energy,enstrophy,sym_rot,sym_trans,courant,eta,"
                            "eta_omega\n";
        files.audit << "t,order,l2_omega,truncation_estimate,budget_residual,identity_residual,"
                       "quadrature_residual,power_input,mode00_abs\n";
    }

    Stepper stepper(cfg.grid, prec, cfg.params);
    BigReal dx = constant_pi(prec);
    mul_pow2(dx, dx, 1);
    div_long(dx, dx, cfg.grid.n);
    const BigReal one = BigReal::of_long(1, prec);

    int order_now = start_order > 0 ? start_order : cfg.step.order;
    long samples = samples_done, checkpoints = checkpoints_done;
    SpectralField scratch;

    for (long s = start_step; s <= S; ++s) {
        const bool emit = fresh ? true : s > start_step;
        const bool at_sample = (s % cfg.sample_stride == 0) || s == S;
        const bool at_checkpoint = s > 0 && ((s % cfg.checkpoint_stride == 0) || s == S);
        const bool need_series = s < S || at_sample;
        BigReal t = time_at(cfg.step.dt, s);

        if (need_series) {
            stepper.compute(state, order_now);
            if (cfg.adaptive && s < S) {
                while (stepper.truncation_estimate(cfg.step.dt) > cfg.adaptive_target) {
                    if (stepper.series().order() >= cfg.step.order)
                        throw guard_error(
                            "adaptive order exhausted: configured order " +
                            std::to_string(cfg.step.order) + " cannot meet the target at t = " +
                            format_value(t));
                    stepper.extend(stepper.series().order() + 1);
                }
                order_now = stepper.series().order();
            }
        }

        if (at_sample && emit) {
            SpectralField psi = inverse_laplacian(state);
            DiagnosticsRecord rec = compute_record(t, psi, cfg.params, cfg.step.dt);
            write_timeseries_row(files.timeseries, rec);

            BigReal budget = energy_budget_residual(stepper.series(), cfg.params);
            BigReal identity(prec.binary_precision);
            mul_pow2(identity, rec.enstrophy, 1);
            div(identity, identity, cfg.params.reynolds);
            sub(identity, rec.mean_dissipation, identity);
            identity = abs(identity);
            BigReal quad = quadrature_mean(dissipation_field(psi, cfg.params));
            sub(quad, rec.mean_dissipation, quad);
            quad = abs(quad);
            files.audit << format_value(t) << ',' << stepper.series().order() << ','
                        << format_value(l2_norm(state)) << ','
                        << format_value(stepper.truncation_estimate(cfg.step.dt)) << ','
                        << format_value(budget) << ',' << format_value(identity) << ','
                        << format_value(quad) << ','
                        << format_value(power_input(psi, cfg.params)) << ','
                        << format_value(complex_magnitude(state.mode(0, 0))) << '\n';

            {
                std::ofstream snap(files.dir / "samples" / step_file("snap", s),
                                   std::ios::binary);
                save_spectral_snapshot(snap, state, 17, format_value(t));
                if (!snap.flush()) throw config_error("cannot write sample snapshot");
            }
            ++samples;

            // Guards, evaluated on the freshly sampled state.
            files.timeseries.flush();
            files.audit.flush();
            if (!(rec.courant < one))
                throw guard_error("Courant number " + format_value(rec.courant) +
                                  " is not below 1 at t = " + format_value(t));
            const bool eta_bad = !(dx < rec.eta);
            const bool eta_w_bad = !(dx < rec.eta_omega);
            if (eta_bad || eta_w_bad) {
                if (cfg.scale_guard == GuardMode::hard)
                    throw guard_error(
                        std::string("grid spacing does not resolve ") +
                        (eta_bad ? "the Kolmogorov scale" : "the enstrophy dissipation scale") +
                        " at t = " + format_value(t));
                out.scale_warning = true;
            }
        }

        if (at_checkpoint && emit) {
            Checkpoint ck;
            ck.settings = cfg.settings;
            ck.step_index = s;
            ck.current_order = need_series ? stepper.series().order() : order_now;
            ck.samples_emitted = samples;
            ck.checkpoints_emitted = checkpoints + 1;
            ck.t_label = format_value(t);
            ck.omega = state;
            save_checkpoint((files.dir / "checkpoints" / step_file("ck", s)).string(), cfg, ck);
            ++checkpoints;
        }

        if (s == S) break;

        stepper.advance_into(scratch, cfg.step.dt);
        std::swap(state, scratch);
        if (!state.is_finite())
            throw numeric_error("state became non-finite at t = " +
                                format_value(time_at(cfg.step.dt, s + 1)));
        if (cfg.adaptive) order_now = adapt_order(stepper.series(), cfg.step, cfg.adaptive_target);
    }

    out.steps = S - start_step;
    out.samples = samples;
    return out;
}

}  // namespace

RunOutputs run(const RunConfig& cfg) {
    SpectralField w0 = initialize(cfg.ic, cfg.grid, cfg.precision, cfg.params);
    return run_loop(cfg, std::move(w0), 0, cfg.step.order, 0, 0, true);
}

RunOutputs run_from_checkpoint(const RunConfig& cfg, const Checkpoint& ck) {
    if (ck.omega.grid.n != cfg.grid.n)
        throw config_error("checkpoint grid does not match configuration");
    return run_loop(cfg, ck.omega, ck.step_index, ck.current_order, ck.samples_emitted,
                    ck.checkpoints_emitted, false);
}

namespace {

std::vector<std::pair<long, fs::path>> list_snapshots(const fs::path& dir) {
    std::vector<std::pair<long, fs::path>> out;
    const fs::path samples = dir / "samples";
    if (!fs::is_directory(samples))
        throw config_error("'" + dir.string() + "' has no samples directory");
    for (const auto& e : fs::directory_iterator(samples)) {
        const std::string name = e.path().filename().string();
        if (name.size() < 10 || name.rfind("snap_", 0) != 0) continue;
        const auto dot = name.find('.');
        long step = -1;
        const char* b = name.data() + 5;
        const char* en = name.data() + (dot == std::string::npos ? name.size() : dot);
        auto [p, ecv] = std::from_chars(b, en, step);
        if (ecv != std::errc() || p != en) continue;
        out.emplace_back(step, e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<std::pair<long, std::string>> list_sample_snapshots(const std::string& run_dir) {
    std::vector<std::pair<long, std::string>> out;
    for (auto& [step, path] : list_snapshots(run_dir)) out.emplace_back(step, path.string());
    return out;
}

TcReport critical_predictable_time(const std::string& dir_a, const std::string& dir_b,
                                   const BigReal& tolerance) {
    ConfigMap ca = load_config_file((fs::path(dir_a) / "config.txt").string());
    ConfigMap cb = load_config_file((fs::path(dir_b) / "config.txt").string());
    // Physical setup must match exactly; only the numerical fidelity knobs
    // (order, digits) and bookkeeping may differ between the pair.
    for (const char* k : {"grid_n", "reynolds", "forcing_k", "dt", "ic_kind", "ic_delta",
                          "t_max", "sample_interval", "dealias_fraction"}) {
        if (ca.at(k) != cb.at(k))
            throw config_error(std::string("runs differ in physical key '") + k + "': '" +
                               ca.at(k) + "' vs '" + cb.at(k) + "'");
    }

    auto snaps_a = list_snapshots(dir_a);
    auto snaps_b = list_snapshots(dir_b);
    if (snaps_a.size() != snaps_b.size())
        throw config_error("sample counts differ between the runs");
    for (size_t i = 0; i < snaps_a.size(); ++i)
        if (snaps_a[i].first != snaps_b[i].first)
            throw config_error("sample time grids differ between the runs");
    if (snaps_a.empty()) throw config_error("no samples to compare");

    const PrecisionConfig pc = make_precision(24);
    const BigReal dt = parse_decimal(cb.at("dt"), pc);

    TcReport rep;
    rep.tolerance = tolerance;
    rep.t_c = BigReal::zero(pc);
    rep.departure_time = BigReal::zero(pc);
    bool violated = false;
    for (size_t i = 0; i < snaps_a.size(); ++i) {
        std::ifstream fa(snaps_a[i].second), fb(snaps_b[i].second);
        if (!fa || !fb) throw config_error("cannot open sample snapshot");
        LoadedSnapshot sa = load_spectral_snapshot(fa);
        LoadedSnapshot sb = load_spectral_snapshot(fb);
        if (sa.n != sb.n) throw config_error("sample grids differ");
        DeviationPoint p;
        p.step = snaps_a[i].first;
        p.t = time_at(dt, p.step);
        BigReal diff = l2_diff(sa.field, sb.field);
        BigReal nb = l2_norm(sb.field);
        p.deviation = BigReal(diff.prec());
        div(p.deviation, diff, nb);
        if (diff.is_zero() && nb.is_zero()) set_zero(p.deviation);
        if (!violated) {
            if (p.deviation > tolerance) {
                violated = true;
                rep.departed = true;
                rep.departure_time = p.t;
            } else {
                rep.t_c = p.t;
            }
        }
        rep.history.push_back(std::move(p));
    }
    if (!rep.departed) rep.departure_time = rep.history.back().t;
    return rep;
}

void write_tc_report(const std::string& path, const TcReport& report) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw config_error("cannot write report '" + path + "'");
    os << "# t_c = " << format_value(report.t_c) << '\n';
    os << "# tolerance = " << format_value(report.tolerance) << '\n';
    os << "# departed = " << (report.departed ? "yes" : "no") << '\n';
    os << "# departure_time = " << format_value(report.departure_time) << '\n';
    os << "step,t,deviation\n";
    for (const auto& p : report.history)
        os << p.step << ',' << format_value(p.t) << ',' << format_value(p.deviation) << '\n';
    if (!os.flush()) throw config_error("short write on report '" + path + "'");
}

int adapt_order(const TaylorSeries& series, const StepConfig& step, const BigReal& target) {
    BigReal est(series.prec.binary_precision);
    BigReal power(series.prec.binary_precision);
    for (int m = 1; m <= series.order(); ++m) {
        mpfr_pow_ui(power.raw(), step.dt.raw(), static_cast<unsigned long>(m), MPFR_RNDN);
        est = l2_norm(series.omega[m]);
        mul(est, est, power);
        if (est <= target) return m;
    }
    throw guard_error("no order within the series budget meets the truncation target");
}

ResolutionVerdict resolution_check(const SpectralField& w_hat, const FlowParams& params,
                                   const StepConfig& step, const DiagnosticsRecord& diag) {
    (void)params;
    (void)step;
    ResolutionVerdict v;
    const PrecisionConfig& p = w_hat.prec;
    v.dx = constant_pi(p);
    mul_pow2(v.dx, v.dx, 1);
    div_long(v.dx, v.dx, w_hat.grid.n);
    v.courant = diag.courant;
    v.eta = diag.eta;
    v.eta_omega = diag.eta_omega;
    const BigReal one = BigReal::of_long(1, p);
    v.cfl_ok = v.courant < one;
    v.eta_ok = v.dx < v.eta;
    v.eta_omega_ok = v.dx < v.eta_omega;
    return v;
}

std::vector<std::string> preset_names() { return {"desk-laminar", "desk-chaotic", "production"}; }

ConfigMap preset_config(const std::string& name) {
    if (name == "desk-laminar") {
        ConfigMap c = default_config();
        c["output_dir"] = "out-desk-laminar";
        return c;
    }
    if (name == "desk-chaotic") {
        ConfigMap c = default_config();
        c["reynolds"] = "100";
        c["ic_kind"] = "psi1";
        c["ic_delta"] = "1e-5";
        // Long enough to cover the symmetry-break crossing of the perturbed
        // companion (near t = 11.15 at this resolution) with margin.
        c["t_max"] = "12";
        c["sample_interval"] = "0.05";
        c["checkpoint_interval"] = "2";
        c["output_dir"] = "out-desk-chaotic";
        return c;
    }
    if (name == "production") {
        return {
            {"grid_n", "1024"},
            {"reynolds", "2000"},
            {"forcing_k", "16"},
            {"dt", "1e-3"},
            {"order", "140"},
            {"digits", "260"},
            {"ic_kind", "psi1"},
            {"ic_delta", "1e-10"},
            {"t_max", "300"},
            {"sample_interval", "1"},
            {"checkpoint_interval", "10"},
            {"dealias_fraction", "2/3"},
            {"adaptive", "false"},
            {"adaptive_target", "1e-240"},
            {"output_dir", "out-production"},
            {"scale_guard", "hard"},
        };
    }
    throw config_error("unknown preset '" + name + "'");
}

bool preset_runnable(const std::string& name) { return name != "production"; }

}  // namespace kolflow
