#pragma once

#include <string_view>
#include <vector>

#include "kolflow/spectral.hpp"

namespace kolflow {

/// Physical parameters of the forced flow. reynolds is carried at the working
/// precision; forcing acts on modes (0, +-forcing_wavenumber).
struct FlowParams {
    BigReal reynolds;
    int forcing_wavenumber = 0;
    bool forced = true;
};

FlowParams make_flow_params(std::string_view reynolds_decimal, int forcing_wavenumber,
                            const PrecisionConfig& prec, bool forced = true);

/// Time-marching parameters: series order M and the step dt (exact decimal).
struct StepConfig {
    BigReal dt;
    int order = 0;
};

StepConfig make_step(std::string_view dt_decimal, int order, const PrecisionConfig& prec);

/// Spectrum of the forcing term as it appears on the right-hand side of
/// d/dt w_hat = -J_hat - (|k|^2/Re) w_hat - F_hat:
/// F_hat = n_K/2 at (0, +-n_K), zero elsewhere (or everywhere if unforced).
SpectralField forcing_spectrum(const GridSpec& grid, const PrecisionConfig& prec,
                               const FlowParams& params);

/// Taylor coefficients of w_hat(t) about the current time: omega[m] is the
/// m-th coefficient, so w_hat(t+dt) = sum_m omega[m] dt^m.
struct TaylorSeries {
    GridSpec grid;
    PrecisionConfig prec;
    std::vector<SpectralField> omega;

    int order() const { return static_cast<int>(omega.size()) - 1; }
};

/// Reusable workspace for building Taylor series. Holds the viscous multiplier
/// table, the forcing spectrum, and per-order gradient fields in physical
/// space so each new order costs two inverse transforms (packed gradients of
/// the newest psi and omega coefficients), one forward transform of the
/// accumulated Jacobian sum, and one pointwise pass per retained pair.
class Stepper {
public:
    Stepper(const GridSpec& grid, const PrecisionConfig& prec, const FlowParams& params);

    const GridSpec& grid() const { return grid_; }
    const PrecisionConfig& precision() const { return prec_; }
    const FlowParams& params() const { return params_; }

    /// Build the series of the given order from scratch at state w0.
    void compute(const SpectralField& w0, int order);
    /// Grow the existing series to a higher order; coefficients already
    /// computed are reused unchanged.
    void extend(int order);

    const TaylorSeries& series() const { return series_; }

    /// Horner evaluation of the series at dt.
    SpectralField advance(const BigReal& dt) const;

    /// Same, overwriting out (resized on first use, reused afterwards).
    void advance_into(SpectralField& out, const BigReal& dt) const;

    /// |omega^(M)|_2 * dt^M, the magnitude of the last retained term.
    BigReal truncation_estimate(const BigReal& dt) const;
    BigReal truncation_estimate(const BigReal& dt, int order) const;

private:
    void grow_one_order();
    SpectralField take_slot();
    void retire(std::vector<SpectralField>& v);
    void ensure_gradient_slot(int m);

    GridSpec grid_;
    PrecisionConfig prec_;
    FlowParams params_;
    std::vector<BigReal> visc_;     // |k_eff|^2 / Re per mode
    SpectralField forcing_;
    TaylorSeries series_;
    std::vector<SpectralField> psi_;              // psi coefficients, same orders
    std::vector<PhysicalField> psi_gx_, psi_gy_;  // gradients of psi per order
    std::vector<PhysicalField> om_gx_, om_gy_;    // gradients of omega per order
    PhysicalField jsum_;
    // Scratch reused across steps; mpfr limbs are allocated once and then
    // only overwritten, which keeps the per-step heap traffic near zero.
    SpectralField jhat_;
    std::vector<BigComplex> grad_buf_;
    std::vector<SpectralField> spare_;
};

/// Right-hand side of the evolution equation at a single state; bit-identical
/// to the order-1 Taylor coefficient.
SpectralField rhs(const SpectralField& w_hat, const FlowParams& params);

TaylorSeries taylor_coefficients(const SpectralField& w_hat, const FlowParams& params, int order);

/// Horner evaluation; requires series.order() == step.order.
SpectralField advance_step(const TaylorSeries& series, const StepConfig& step);

BigReal truncation_estimate(const TaylorSeries& series, const StepConfig& step);

}  // namespace kolflow
