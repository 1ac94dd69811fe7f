#include "kolflow/dynamics.hpp"

#include <stdexcept>
#include <utility>

namespace kolflow {

FlowParams make_flow_params(std::string_view reynolds_decimal, int forcing_wavenumber,
                            const PrecisionConfig& prec, bool forced) {
    FlowParams p;
    p.reynolds = parse_decimal(reynolds_decimal, prec);
    if (!p.reynolds.is_finite() || p.reynolds.is_zero() || p.reynolds.is_negative())
        throw config_error("reynolds must be a finite positive decimal");
    // An unforced flow carries no wavenumber; every consumer checks `forced`
    // before touching it.
    if (forced && forcing_wavenumber < 1)
        throw config_error("forcing wavenumber must be >= 1");
    p.forcing_wavenumber = forcing_wavenumber;
    p.forced = forced;
    return p;
}

StepConfig make_step(std::string_view dt_decimal, int order, const PrecisionConfig& prec) {
    StepConfig s;
    s.dt = parse_decimal(dt_decimal, prec);
    if (!s.dt.is_finite() || s.dt.is_zero() || s.dt.is_negative())
        throw config_error("dt must be a finite positive decimal");
    if (order < 1) throw config_error("series order must be >= 1");
    s.order = order;
    return s;
}

SpectralField forcing_spectrum(const GridSpec& grid, const PrecisionConfig& prec,
                               const FlowParams& params) {
    SpectralField f = SpectralField::zeros(grid, prec);
    if (!params.forced) return f;
    const int nk = params.forcing_wavenumber;
    if (nk >= grid.n / 2)
        throw config_error("forcing wavenumber " + std::to_string(nk) +
                           " is not resolvable on an n=" + std::to_string(grid.n) + " grid");
    // n_K cos(n_K y) has coefficients n_K/2 at (0, +-n_K).
    BigReal half_nk = BigReal::of_long(nk, prec);
    mul_pow2(half_nk, half_nk, -1);
    set(f.mode(0, nk).re, half_nk);
    set(f.mode(0, -nk).re, half_nk);
    return f;
}

namespace {

// Horner tail: out already holds the top coefficient.
void horner_tail(SpectralField& out, const TaylorSeries& series, const BigReal& dt) {
    const int M = series.order();
    const int nn = series.grid.size();
#pragma omp parallel for schedule(static)
    for (int q = 0; q < nn; ++q) {
        BigComplex& o = out.c[q];
        for (int m = M - 1; m >= 0; --m) {
            mul(o.re, o.re, dt);
            add(o.re, o.re, series.omega[m].c[q].re);
            mul(o.im, o.im, dt);
            add(o.im, o.im, series.omega[m].c[q].im);
        }
    }
}

}  // namespace

Stepper::Stepper(const GridSpec& grid, const PrecisionConfig& prec, const FlowParams& params)
    : grid_(grid), prec_(prec), params_(params),
      forcing_(forcing_spectrum(grid, prec, params)),
      jsum_(PhysicalField::zeros(grid, prec)),
      jhat_(SpectralField::zeros(grid, prec)) {
    const int n = grid_.n;
    visc_.reserve(static_cast<size_t>(grid_.size()));
    for (int mx = 0; mx < n; ++mx) {
        const long kx = grid_.wavenumber_or_zero(mx);
        for (int my = 0; my < n; ++my) {
            const long ky = grid_.wavenumber_or_zero(my);
            BigReal v(prec_.binary_precision);
            mpfr_si_div(v.raw(), kx * kx + ky * ky, params_.reynolds.raw(), MPFR_RNDN);
            visc_.push_back(std::move(v));
        }
    }
    series_.grid = grid_;
    series_.prec = prec_;
}

SpectralField Stepper::take_slot() {
    if (!spare_.empty()) {
        SpectralField s = std::move(spare_.back());
        spare_.pop_back();
        return s;
    }
    return SpectralField::zeros(grid_, prec_);
}

void Stepper::retire(std::vector<SpectralField>& v) {
    while (!v.empty()) {
        spare_.push_back(std::move(v.back()));
        v.pop_back();
    }
}

void Stepper::ensure_gradient_slot(int m) {
    while (static_cast<int>(psi_gx_.size()) <= m) {
        psi_gx_.push_back(PhysicalField::zeros(grid_, prec_));
        psi_gy_.push_back(PhysicalField::zeros(grid_, prec_));
        om_gx_.push_back(PhysicalField::zeros(grid_, prec_));
        om_gy_.push_back(PhysicalField::zeros(grid_, prec_));
    }
}

void Stepper::compute(const SpectralField& w0, int order) {
    if (order < 1) throw std::invalid_argument("series order must be >= 1");
    if (!(w0.grid == grid_)) throw std::invalid_argument("state grid does not match stepper grid");
    if (!(w0.prec == prec_)) throw std::invalid_argument("state precision does not match stepper");
    // Gradient slots are rewritten in place order by order; omega/psi slots
    // cycle through the spare pool so their limbs survive across steps.
    retire(series_.omega);
    retire(psi_);
    SpectralField head = take_slot();
    const int nn = grid_.size();
#pragma omp parallel for schedule(static)
    for (int q = 0; q < nn; ++q) cset(head.c[q], w0.c[q]);
    SpectralField ph = take_slot();
    inverse_laplacian_into(ph, head);
    series_.omega.push_back(std::move(head));
    psi_.push_back(std::move(ph));
    extend(order);
}

void Stepper::extend(int order) {
    if (series_.omega.empty()) throw std::logic_error("extend called before compute");
    if (order < 1) throw std::invalid_argument("series order must be >= 1");
    while (series_.order() < order) grow_one_order();
}

void Stepper::grow_one_order() {
    const int m = series_.order();  // building coefficient m+1
    const int nn = grid_.size();

    // Gradients of the newest coefficients, one packed inverse transform each.
    ensure_gradient_slot(m);
    if (grad_buf_.empty()) grad_buf_ = detail::make_buffer(grid_, prec_);
    detail::fill_gradient_combined(grad_buf_, psi_[m]);
    detail::ifft_split_into(grad_buf_, grid_, prec_, psi_gx_[m], psi_gy_[m]);
    detail::fill_gradient_combined(grad_buf_, series_.omega[m]);
    detail::ifft_split_into(grad_buf_, grid_, prec_, om_gx_[m], om_gy_[m]);

    // Cauchy sum of Jacobians in physical space. Each grid point accumulates
    // its pairs in fixed j order, so the result is thread-count independent.
#pragma omp parallel
    {
        BigReal t1(prec_.binary_precision), t2(prec_.binary_precision);
#pragma omp for schedule(static)
        for (int q = 0; q < nn; ++q) {
            BigReal& acc = jsum_.v[q];
            set_zero(acc);
            for (int j = 0; j <= m; ++j) {
                const int r = m - j;
                mul(t1, psi_gx_[j].v[q], om_gy_[r].v[q]);
                mul(t2, psi_gy_[j].v[q], om_gx_[r].v[q]);
                sub(t1, t1, t2);
                add(acc, acc, t1);
            }
        }
    }
    detail::forward_real_into(jhat_, jsum_);
    detail::dealias_inplace(jhat_);

    // (m+1) w^(m+1) = -J_sum - (|k|^2/Re) w^(m) - F [m=0]
    const SpectralField& wm = series_.omega[m];
    SpectralField next = take_slot();
#pragma omp parallel
    {
        BigReal t(prec_.binary_precision);
#pragma omp for schedule(static)
        for (int q = 0; q < nn; ++q) {
            BigComplex& o = next.c[q];
            mul(t, visc_[q], wm.c[q].re);
            add(t, t, jhat_.c[q].re);
            if (m == 0) add(t, t, forcing_.c[q].re);
            neg(t, t);
            div_long(o.re, t, m + 1);
            mul(t, visc_[q], wm.c[q].im);
            add(t, t, jhat_.c[q].im);
            if (m == 0) add(t, t, forcing_.c[q].im);
            neg(t, t);
            div_long(o.im, t, m + 1);
        }
    }
    SpectralField ph = take_slot();
    inverse_laplacian_into(ph, next);
    psi_.push_back(std::move(ph));
    series_.omega.push_back(std::move(next));
}

SpectralField Stepper::advance(const BigReal& dt) const {
    SpectralField out = series_.omega[series_.order()];
    horner_tail(out, series_, dt);
    return out;
}

void Stepper::advance_into(SpectralField& out, const BigReal& dt) const {
    out = series_.omega[series_.order()];
    horner_tail(out, series_, dt);
}

BigReal Stepper::truncation_estimate(const BigReal& dt) const {
    return truncation_estimate(dt, series_.order());
}

BigReal Stepper::truncation_estimate(const BigReal& dt, int order) const {
    if (order < 0 || order > series_.order()) throw std::invalid_argument("order out of range");
    BigReal nrm = l2_norm(series_.omega[order]);
    BigReal p(prec_.binary_precision);
    mpfr_pow_ui(p.raw(), dt.raw(), static_cast<unsigned long>(order), MPFR_RNDN);
    mul(nrm, nrm, p);
    return nrm;
}

SpectralField rhs(const SpectralField& w_hat, const FlowParams& params) {
    Stepper st(w_hat.grid, w_hat.prec, params);
    st.compute(w_hat, 1);
    return st.series().omega[1];
}

TaylorSeries taylor_coefficients(const SpectralField& w_hat, const FlowParams& params, int order) {
    Stepper st(w_hat.grid, w_hat.prec, params);
    st.compute(w_hat, order);
    return st.series();
}

SpectralField advance_step(const TaylorSeries& series, const StepConfig& step) {
    if (series.order() != step.order)
        throw std::invalid_argument("series order " + std::to_string(series.order()) +
                                    " does not match step order " + std::to_string(step.order));
    const int M = series.order();
    const int nn = series.grid.size();
    SpectralField out = series.omega[M];
#pragma omp parallel for schedule(static)
    for (int q = 0; q < nn; ++q) {
        BigComplex& o = out.c[q];
        for (int m = M - 1; m >= 0; --m) {
            mul(o.re, o.re, step.dt);
            add(o.re, o.re, series.omega[m].c[q].re);
            mul(o.im, o.im, step.dt);
            add(o.im, o.im, series.omega[m].c[q].im);
        }
    }
    return out;
}

BigReal truncation_estimate(const TaylorSeries& series, const StepConfig& step) {
    BigReal nrm = l2_norm(series.omega[series.order()]);
    BigReal p(series.prec.binary_precision);
    mpfr_pow_ui(p.raw(), step.dt.raw(), static_cast<unsigned long>(series.order()), MPFR_RNDN);
    mul(nrm, nrm, p);
    return nrm;
}

}  // namespace kolflow
