#include "kolflow/diagnostics.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace kolflow {

namespace {

// acc += factor * |z|^2 with integer factor, scratch t.
void weighted_norm2_acc(BigReal& acc, const BigComplex& z, long factor, BigReal& t) {
    mul(t, z.re, z.re);
    fma_acc(t, z.im, z.im);
    mul_long(t, t, factor);
    add(acc, acc, t);
}

BigReal spectral_moment(const SpectralField& psi, int k_power) {
    const int n = psi.grid.n;
    BigReal acc = BigReal::zero(psi.prec);
    BigReal t(psi.prec.binary_precision);
    for (int mx = 0; mx < n; ++mx) {
        const long kx = psi.grid.wavenumber_or_zero(mx);
        for (int my = 0; my < n; ++my) {
            const long ky = psi.grid.wavenumber_or_zero(my);
            const long k2 = kx * kx + ky * ky;
            if (k2 == 0) continue;
            long f = 1;
            for (int p = 0; p < k_power; ++p) f *= k2;
            weighted_norm2_acc(acc, psi.at(mx, my), f, t);
        }
    }
    return acc;
}

BigReal two_pi(const PrecisionConfig& p) {
    BigReal x = constant_pi(p);
    mul_pow2(x, x, 1);
    return x;
}

}  // namespace

std::pair<PhysicalField, PhysicalField> velocity(const SpectralField& psi_hat) {
    auto buf = detail::make_buffer(psi_hat.grid, psi_hat.prec);
    detail::fill_velocity_combined(buf, psi_hat);
    return detail::ifft_split(std::move(buf), psi_hat.grid, psi_hat.prec);
}

PhysicalField dissipation_field(const SpectralField& psi_hat, const FlowParams& params) {
    const GridSpec& g = psi_hat.grid;
    const PrecisionConfig& p = psi_hat.prec;
    const int n = g.n;
    // Pack S11 + i S12: S11 = psi_xy -> -kx ky psi_hat,
    // S12 = (psi_yy - psi_xx)/2 -> (kx^2 - ky^2)/2 psi_hat. Both multipliers
    // are real, so the packed inverse transform recovers the two strain
    // components as the real and imaginary parts.
    auto buf = detail::make_buffer(g, p);
#pragma omp parallel
    {
        BigReal t(p.binary_precision);
#pragma omp for schedule(static)
        for (int mx = 0; mx < n; ++mx) {
            const long kx = g.wavenumber_or_zero(mx);
            for (int my = 0; my < n; ++my) {
                const long ky = g.wavenumber_or_zero(my);
                const BigComplex& z = psi_hat.at(mx, my);
                BigComplex& o = buf[static_cast<size_t>(mx) * n + my];
                const long s11 = -kx * ky;
                const long d2 = kx * kx - ky * ky;  // 2*S12 multiplier
                mul_long(o.re, z.re, s11);
                mul_long(t, z.im, d2);
                mul_pow2(t, t, -1);
                sub(o.re, o.re, t);
                mul_long(o.im, z.im, s11);
                mul_long(t, z.re, d2);
                mul_pow2(t, t, -1);
                add(o.im, o.im, t);
            }
        }
    }
    auto [s11, s12] = detail::ifft_split(std::move(buf), g, p);
    PhysicalField d = PhysicalField::zeros(g, p);
    const int nn = g.size();
#pragma omp parallel
    {
        BigReal t(p.binary_precision);
#pragma omp for schedule(static)
        for (int q = 0; q < nn; ++q) {
            mul(t, s11.v[q], s11.v[q]);
            fma_acc(t, s12.v[q], s12.v[q]);
            div(t, t, params.reynolds);
            mul_pow2(d.v[q], t, 2);
        }
    }
    return d;
}

BigReal mean_dissipation(const SpectralField& psi_hat, const FlowParams& params) {
    BigReal acc = spectral_moment(psi_hat, 2);
    div(acc, acc, params.reynolds);
    return acc;
}

BigReal kinetic_energy(const SpectralField& psi_hat) {
    BigReal acc = spectral_moment(psi_hat, 1);
    mul_pow2(acc, acc, -1);
    return acc;
}

BigReal enstrophy(const SpectralField& psi_hat) {
    BigReal acc = spectral_moment(psi_hat, 2);
    mul_pow2(acc, acc, -1);
    return acc;
}

std::pair<BigReal, BigReal> symmetry_residuals(const SpectralField& psi_hat) {
    const int n = psi_hat.grid.n;
    const PrecisionConfig& p = psi_hat.prec;
    BigReal total = BigReal::zero(p), rot = BigReal::zero(p), odd = BigReal::zero(p);
    BigReal dr(p.binary_precision), di(p.binary_precision), t(p.binary_precision);
    for (int mx = 0; mx < n; ++mx) {
        const int px = (n - mx) % n;
        for (int my = 0; my < n; ++my) {
            const int py = (n - my) % n;
            const BigComplex& z = psi_hat.at(mx, my);
            cnorm2_acc(total, z, t);
            if ((mx + my) & 1) cnorm2_acc(odd, z, t);
            const BigComplex& w = psi_hat.at(px, py);
            sub(dr, z.re, w.re);
            sub(di, z.im, w.im);
            fma_acc(rot, dr, dr);
            fma_acc(rot, di, di);
        }
    }
    if (total.is_zero()) return {BigReal::zero(p), BigReal::zero(p)};
    BigReal nrm = sqrt(total);
    BigReal sym_rot = sqrt(rot);
    mul_pow2(sym_rot, sym_rot, -1);
    div(sym_rot, sym_rot, nrm);
    BigReal sym_trans = sqrt(odd);
    div(sym_trans, sym_trans, nrm);
    return {std::move(sym_rot), std::move(sym_trans)};
}

BigReal power_input(const SpectralField& psi_hat, const FlowParams& params) {
    BigReal p = BigReal::zero(psi_hat.prec);
    if (!params.forced) return p;
    mul_long(p, psi_hat.mode(0, params.forcing_wavenumber).re, params.forcing_wavenumber);
    return p;
}

BigReal energy_budget_residual(const TaylorSeries& series, const FlowParams& params) {
    if (series.order() < 1) throw std::invalid_argument("budget audit needs at least order 1");
    const SpectralField& w0 = series.omega[0];
    const SpectralField& w1 = series.omega[1];
    const int n = series.grid.n;
    const PrecisionConfig& p = series.prec;

    // dE/dt = sum_k Re(conj(w0) w1)/|k|^2; 2Z = sum |w0|^2.
    BigReal dedt = BigReal::zero(p), z2 = BigReal::zero(p);
    BigReal t(p.binary_precision), s(p.binary_precision);
    for (int mx = 0; mx < n; ++mx) {
        const long kx = series.grid.wavenumber_or_zero(mx);
        for (int my = 0; my < n; ++my) {
            const long ky = series.grid.wavenumber_or_zero(my);
            const long k2 = kx * kx + ky * ky;
            const BigComplex& a = w0.at(mx, my);
            if (k2 == 0) continue;
            const BigComplex& b = w1.at(mx, my);
            mul(t, a.re, b.re);
            fma_acc(t, a.im, b.im);
            div_long(t, t, k2);
            add(dedt, dedt, t);
            cnorm2_acc(z2, a, s);
        }
    }
    // P = n_K Re(psi_hat(0,n_K)) = -Re(w0(0,n_K))/n_K.
    BigReal power = BigReal::zero(p);
    if (params.forced) {
        div_long(power, w0.mode(0, params.forcing_wavenumber).re, -params.forcing_wavenumber);
    }
    // residual = |dE/dt - P + 2Z/Re| with 2Z = sum |w0|^2 = z2.
    div(t, z2, params.reynolds);
    sub(s, dedt, power);
    add(s, s, t);
    return abs(s);
}

PdfEstimate pdf_of_dissipation(const std::vector<PhysicalField>& samples, int bins, bool log_bins) {
    if (samples.empty()) throw std::invalid_argument("pdf needs at least one sample field");
    if (bins < 2) throw std::invalid_argument("pdf needs at least two bins");
    const PrecisionConfig& p = samples.front().prec;

    BigReal vmax = BigReal::zero(p);
    for (const auto& f : samples)
        for (const auto& x : f.v)
            if (x > vmax) set(vmax, x);

    PdfEstimate out;
    out.log_bins = log_bins;
    out.bin_left.reserve(bins);
    out.bin_right.reserve(bins);

    std::vector<BigReal> edges;
    edges.reserve(bins + 1);
    if (vmax.is_zero()) {
        for (int i = 0; i <= bins; ++i) edges.push_back(BigReal::zero(p));
    } else if (log_bins) {
        // edges_i = vmax * 10^(-8 (1 - i/bins))
        BigReal e(p.binary_precision), x(p.binary_precision);
        for (int i = 0; i <= bins; ++i) {
            mpfr_set_si(x.raw(), -8L * (bins - i), MPFR_RNDN);
            mpfr_div_si(x.raw(), x.raw(), bins, MPFR_RNDN);
            mpfr_exp10(e.raw(), x.raw(), MPFR_RNDN);
            mul(e, e, vmax);
            edges.push_back(e);
        }
    } else {
        BigReal e(p.binary_precision);
        for (int i = 0; i <= bins; ++i) {
            mul_long(e, vmax, i);
            div_long(e, e, bins);
            edges.push_back(e);
        }
    }

    std::vector<long> counts(static_cast<size_t>(bins), 0);
    long total = 0;
    for (const auto& f : samples) {
        for (const auto& x : f.v) {
            // First bin whose right edge is >= x; clamps below-range values
            // into bin 0 and the maximum into the last bin.
            int lo = 0, hi = bins - 1;
            while (lo < hi) {
                int mid = (lo + hi) / 2;
                if (edges[static_cast<size_t>(mid) + 1] < x)
                    lo = mid + 1;
                else
                    hi = mid;
            }
            ++counts[static_cast<size_t>(lo)];
            ++total;
        }
    }

    for (int i = 0; i < bins; ++i) {
        out.bin_left.push_back(edges[static_cast<size_t>(i)]);
        out.bin_right.push_back(edges[static_cast<size_t>(i) + 1]);
        BigReal prob = BigReal::of_long(counts[static_cast<size_t>(i)], p);
        div_long(prob, prob, total);
        out.probability.push_back(std::move(prob));
    }
    out.sample_count = total;
    return out;
}

ProfileY profile_y(const std::vector<PhysicalField>& samples, const PrecisionConfig& prec,
                   std::string window_label) {
    if (samples.empty()) throw std::invalid_argument("profile needs at least one sample field");
    const int n = samples.front().grid.n;
    ProfileY out;
    out.window_label = std::move(window_label);
    out.y.reserve(n);
    out.mean_dissipation.reserve(n);
    BigReal tp = two_pi(prec);
    const long row_points = static_cast<long>(n) * static_cast<long>(samples.size());
    for (int iy = 0; iy < n; ++iy) {
        BigReal y(prec.binary_precision);
        mul_long(y, tp, iy);
        div_long(y, y, n);
        out.y.push_back(std::move(y));
        BigReal acc = BigReal::zero(prec);
        for (const auto& f : samples) {
            if (f.grid.n != n) throw std::invalid_argument("profile samples must share one grid");
            for (int ix = 0; ix < n; ++ix) add(acc, acc, f.at(ix, iy));
        }
        div_long(acc, acc, row_points);
        out.mean_dissipation.push_back(std::move(acc));
    }
    return out;
}

PhysicalField vorticity_snapshot(const SpectralField& psi_hat) {
    return fft_inverse(laplacian(psi_hat));
}

BigReal courant_number(const SpectralField& psi_hat, const BigReal& dt) {
    auto [u, v] = velocity(psi_hat);
    BigReal m = max_abs(u);
    BigReal mv = max_abs(v);
    if (mv > m) set(m, mv);
    // C = m dt n / (2 pi)
    mul(m, m, dt);
    mul_long(m, m, psi_hat.grid.n);
    BigReal tp = two_pi(psi_hat.prec);
    div(m, m, tp);
    return m;
}

BigReal quadrature_mean(const PhysicalField& f) {
    BigReal acc = BigReal::zero(f.prec);
    for (const auto& x : f.v) add(acc, acc, x);
    const long n = f.grid.n;
    div_long(acc, acc, n * n);
    return acc;
}

DiagnosticsRecord compute_record(const BigReal& t, const SpectralField& psi_hat,
                                 const FlowParams& params, const BigReal& dt) {
    const PrecisionConfig& p = psi_hat.prec;
    DiagnosticsRecord r;
    r.t = t;
    r.mean_dissipation = mean_dissipation(psi_hat, params);
    r.kinetic_energy = kinetic_energy(psi_hat);
    r.enstrophy = enstrophy(psi_hat);
    auto [sr, st] = symmetry_residuals(psi_hat);
    r.sym_rot = std::move(sr);
    r.sym_trans = std::move(st);
    r.courant = courant_number(psi_hat, dt);

    // eta = (Re^3 <D>)^{-1/4}, eta_omega = (Re^3 <chi>)^{-1/6},
    // <chi> = (2/Re) sum |k|^6 |psi_hat|^2. Zero dissipation gives +inf.
    BigReal re3 = pow_ui(params.reynolds, 3);
    BigReal x(p.binary_precision);
    BigReal inv(p.binary_precision);
    mul(x, re3, r.mean_dissipation);
    mpfr_rootn_ui(x.raw(), x.raw(), 4, MPFR_RNDN);
    mpfr_si_div(inv.raw(), 1, x.raw(), MPFR_RNDN);
    r.eta = inv;

    BigReal chi = spectral_moment(psi_hat, 3);
    div(chi, chi, params.reynolds);
    mul_pow2(chi, chi, 1);
    mul(x, re3, chi);
    mpfr_rootn_ui(x.raw(), x.raw(), 6, MPFR_RNDN);
    mpfr_si_div(inv.raw(), 1, x.raw(), MPFR_RNDN);
    r.eta_omega = std::move(inv);
    return r;
}

}  // namespace kolflow
