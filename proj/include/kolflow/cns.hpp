#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kolflow/diagnostics.hpp"

namespace kolflow {

enum class IcKind { psi1, psi2, laminar };
enum class GuardMode { warn, hard };

struct InitialConditionSpec {
    IcKind kind = IcKind::psi1;
    std::string delta;  // exact decimal, used only for psi2
};

/// Flat key=value configuration text. Unknown keys are rejected.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap default_config();
ConfigMap load_config_file(const std::string& path);
/// Applies one "key=value" override string.
void apply_override(ConfigMap& cfg, const std::string& assignment);
std::string serialize_config(const ConfigMap& cfg);

struct RunConfig {
    GridSpec grid;
    FlowParams params;
    StepConfig step;
    PrecisionConfig precision;
    InitialConditionSpec ic;
    BigReal t_max;
    long total_steps = 0;
    long sample_stride = 0;      // steps between samples
    long checkpoint_stride = 0;  // steps between checkpoints
    std::string output_dir;
    bool adaptive = false;
    BigReal adaptive_target;
    GuardMode scale_guard = GuardMode::warn;
    ConfigMap settings;  // effective key/value echo

    RunConfig() : grid(8) {}
};

/// Validates and cross-checks every key. The interval keys must be exact
/// decimal multiples of dt (checked in rational arithmetic, not floating
/// point). Throws config_error.
RunConfig parse_run_config(const ConfigMap& cfg);

/// w_hat(0) = laplacian of the exact spectral initial stream function.
/// psi1: psi = -1/2 [cos(x+y) + cos(x-y)], modes (+-1,+-1) = -1/4.
/// psi2: psi1 + delta sin(x+y), adds -i delta/2 at (1,1), +i delta/2 at (-1,-1).
/// laminar: psi = (Re/n_K^3) cos(n_K y), the steady solution of the forced flow.
SpectralField initialize(const InitialConditionSpec& ic, const GridSpec& grid,
                         const PrecisionConfig& prec, const FlowParams& params);

uint64_t fnv1a64(std::string_view bytes);

struct Checkpoint {
    ConfigMap settings;
    long step_index = 0;
    int current_order = 0;  // adaptive runs resume at the recorded order
    long samples_emitted = 0;
    long checkpoints_emitted = 0;
    std::string t_label;
    SpectralField omega;
};

void save_checkpoint(const std::string& path, const RunConfig& cfg, const Checkpoint& ck);
/// Verifies the trailing content checksum; numeric_error on any corruption.
Checkpoint load_checkpoint(const std::string& path);

struct RunOutputs {
    std::string dir;
    long steps = 0;
    long samples = 0;
    bool scale_warning = false;
};

/// Full run from t=0. Emits config.txt, timeseries.csv, audit.csv,
/// samples/snap_*.txt, checkpoints/ck_*.txt under the resolved output dir.
RunOutputs run(const RunConfig& cfg);

/// Continuation from a checkpoint: emits only rows and files for steps after
/// the checkpoint (no CSV headers), so concatenating the original files with
/// the continuation files reproduces an uninterrupted run byte for byte.
RunOutputs run_from_checkpoint(const RunConfig& cfg, const Checkpoint& ck);

/// Resolved output directory: output_dir itself if absolute, otherwise
/// joined under $KOLFLOW_OUTPUT_ROOT when that is set.
std::string resolve_output_dir(const std::string& output_dir);

/// Sample snapshots of a finished run, as (step index, file path), ascending.
std::vector<std::pair<long, std::string>> list_sample_snapshots(const std::string& run_dir);

struct DeviationPoint {
    long step = 0;
    BigReal t;
    BigReal deviation;
};

struct TcReport {
    BigReal t_c;
    BigReal tolerance;
    std::vector<DeviationPoint> history;
    bool departed = false;
    BigReal departure_time;  // first sampled t with deviation > tolerance
};

/// Paired-run certification: deviation(t) = |w_a(t)-w_b(t)|_2 / |w_b(t)|_2
/// over the common snapshot grid; T_c is the largest sampled t such that all
/// deviations up to t stay within tolerance. Directory b is the reference.
/// Physical parameters must match; order and digits may differ.
TcReport critical_predictable_time(const std::string& dir_a, const std::string& dir_b,
                                   const BigReal& tolerance);

void write_tc_report(const std::string& path, const TcReport& report);

/// Smallest order m <= series.order() whose last-term magnitude
/// |w^(m)|_2 dt^m is within target; guard_error if none qualifies.
int adapt_order(const TaylorSeries& series, const StepConfig& step, const BigReal& target);

struct ResolutionVerdict {
    BigReal dx;
    BigReal courant;
    BigReal eta;
    BigReal eta_omega;
    bool cfl_ok = false;
    bool eta_ok = false;
    bool eta_omega_ok = false;
    bool pass() const { return cfl_ok && eta_ok && eta_omega_ok; }
};

ResolutionVerdict resolution_check(const SpectralField& w_hat, const FlowParams& params,
                                   const StepConfig& step, const DiagnosticsRecord& diag);

/// Built-in presets: desk-laminar, desk-chaotic, production.
std::vector<std::string> preset_names();
ConfigMap preset_config(const std::string& name);
/// Production-scale configs are emitted for external hardware, never run here.
bool preset_runnable(const std::string& name);

}  // namespace kolflow
