#pragma once

#include <vector>

#include "kolflow/dynamics.hpp"

namespace kolflow {

/// One sampled row of the run time series. All values are carried at full
/// working precision; serialization width is chosen at write time.
struct DiagnosticsRecord {
    BigReal t;
    BigReal mean_dissipation;  // <D>_A, spectral route
    BigReal kinetic_energy;
    BigReal enstrophy;
    BigReal sym_rot;
    BigReal sym_trans;
    BigReal courant;
    BigReal eta;        // Kolmogorov scale (Re^3 <D>_A)^(-1/4)
    BigReal eta_omega;  // enstrophy-dissipation scale (Re^3 <chi>_A)^(-1/6)
};

std::pair<PhysicalField, PhysicalField> velocity(const SpectralField& psi_hat);

/// Pointwise dissipation rate D = (2/Re) S_ij S_ij of the strain tensor
/// S = sym grad u; equals (4/Re)(S11^2 + S12^2) in 2D incompressible flow.
PhysicalField dissipation_field(const SpectralField& psi_hat, const FlowParams& params);

/// Area mean of D via the mode sum: sum_k (|k|^4/Re) |psi_hat(k)|^2.
BigReal mean_dissipation(const SpectralField& psi_hat, const FlowParams& params);

/// E = (1/2) <u^2+v^2>_A = (1/2) sum |k|^2 |psi_hat|^2.
BigReal kinetic_energy(const SpectralField& psi_hat);

/// Z = (1/2) <w^2>_A = (1/2) sum |k|^4 |psi_hat|^2.
BigReal enstrophy(const SpectralField& psi_hat);

/// Residual fractions of the stream function outside each symmetry class:
/// sym_rot  = |psi_hat(k) - psi_hat(-k)|_2 / (2 |psi_hat|_2)
///            (point reflection through (0,0); symmetric fields have
///             psi_hat(k) = psi_hat(-k), i.e. a real physical-space-even part),
/// sym_trans = |odd-parity part|_2 / |psi_hat|_2 where translation by (pi,pi)
///            scales mode k by (-1)^(kx+ky).
/// Both are the fraction of the L2 norm in the anti-symmetric component;
/// a single fully odd mode gives exactly 1. Zero field gives (0, 0).
std::pair<BigReal, BigReal> symmetry_residuals(const SpectralField& psi_hat);

/// |dE/dt - (P - 2Z/Re)| where dE/dt comes from the first two Taylor
/// coefficients and P = n_K Re(psi_hat(0, n_K)) is the forcing power.
BigReal energy_budget_residual(const TaylorSeries& series, const FlowParams& params);

/// Forcing power input P (zero for unforced flows).
BigReal power_input(const SpectralField& psi_hat, const FlowParams& params);

/// Histogram of pointwise dissipation pooled over sample fields.
struct PdfEstimate {
    std::vector<BigReal> bin_left;
    std::vector<BigReal> bin_right;
    std::vector<BigReal> probability;
    long sample_count = 0;
    bool log_bins = true;
};

/// bins >= 2. Log binning spans [max*1e-8, max]; linear binning spans
/// [0, max]. Out-of-range values are clamped to the boundary bins so the
/// probabilities always sum to one.
PdfEstimate pdf_of_dissipation(const std::vector<PhysicalField>& samples, int bins,
                               bool log_bins = true);

/// Per-row average of D over x and over the sampled times.
struct ProfileY {
    std::vector<BigReal> y;
    std::vector<BigReal> mean_dissipation;
    std::string window_label;
};

ProfileY profile_y(const std::vector<PhysicalField>& samples, const PrecisionConfig& prec,
                   std::string window_label);

/// Physical-space w = laplacian(psi) for plotting.
PhysicalField vorticity_snapshot(const SpectralField& psi_hat);

/// Courant number max(|u|,|v|) dt / dx on the 2 pi / n grid.
BigReal courant_number(const SpectralField& psi_hat, const BigReal& dt);

/// Plain area mean (1/n^2) sum of grid values, fixed summation order.
BigReal quadrature_mean(const PhysicalField& f);

/// Full sampled record at time t for state w_hat with its Taylor series
/// available (series supplies dE/dt for the budget audit done elsewhere).
DiagnosticsRecord compute_record(const BigReal& t, const SpectralField& psi_hat,
                                 const FlowParams& params, const BigReal& dt);

}  // namespace kolflow
