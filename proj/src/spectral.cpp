#include "kolflow/spectral.hpp"

#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace kolflow {

GridSpec::GridSpec(int n_, int num, int den) : n(n_), dealias_num(num), dealias_den(den) {
    if (n < 8 || (n & (n - 1)) != 0)
        throw std::invalid_argument("grid size must be a power of two >= 8, got " + std::to_string(n));
    if (den <= 0 || num <= 0 || num > den)
        throw std::invalid_argument("dealias fraction must be a rational in (0,1]");
}

int GridSpec::log2n() const {
    int l = 0;
    while ((1 << l) < n) ++l;
    return l;
}

SpectralField SpectralField::zeros(const GridSpec& g, const PrecisionConfig& p) {
    SpectralField s;
    s.grid = g;
    s.prec = p;
    s.c.assign(static_cast<size_t>(g.size()), BigComplex::zero(p));
    return s;
}

bool SpectralField::is_finite() const {
    for (const auto& z : c)
        if (!z.is_finite()) return false;
    return true;
}

PhysicalField PhysicalField::zeros(const GridSpec& g, const PrecisionConfig& p) {
    PhysicalField f;
    f.grid = g;
    f.prec = p;
    f.v.assign(static_cast<size_t>(g.size()), BigReal::zero(p));
    return f;
}

bool PhysicalField::is_finite() const {
    for (const auto& x : v)
        if (!x.is_finite()) return false;
    return true;
}

namespace {

struct FftTables {
    std::vector<BigComplex> tw;  // e^{-+ 2 pi i j / n}, j < n/2
    std::vector<int> bitrev;
    int quarter = -1;   // index of the exact -+i twiddle (n/4), if present
    bool qneg = false;  // true when tw[quarter] == -i
};

std::shared_ptr<const FftTables> fft_tables(int n, long prec_bits, int dir) {
    static std::mutex mu;
    static std::map<std::tuple<int, long, int>, std::shared_ptr<const FftTables>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(n, prec_bits, dir);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    auto tb = std::make_shared<FftTables>();
    tb->bitrev.resize(n);
    int lg = 0;
    while ((1 << lg) < n) ++lg;
    for (int i = 0; i < n; ++i) {
        int r = 0;
        for (int b = 0; b < lg; ++b)
            if (i & (1 << b)) r |= 1 << (lg - 1 - b);
        tb->bitrev[i] = r;
    }

    tb->tw.reserve(n / 2);
    BigReal theta(prec_bits + 32), two_pi(prec_bits + 32);
    mpfr_const_pi(two_pi.raw(), MPFR_RNDN);
    mpfr_mul_2si(two_pi.raw(), two_pi.raw(), 1, MPFR_RNDN);
    for (int j = 0; j < n / 2; ++j) {
        mpfr_mul_si(theta.raw(), two_pi.raw(), j, MPFR_RNDN);
        mpfr_div_si(theta.raw(), theta.raw(), n, MPFR_RNDN);
        BigComplex w(prec_bits);
        mpfr_sin_cos(w.im.raw(), w.re.raw(), theta.raw(), MPFR_RNDN);
        if (dir < 0) mpfr_neg(w.im.raw(), w.im.raw(), MPFR_RNDN);
        tb->tw.push_back(std::move(w));
    }
    if (n >= 4) {
        // The quarter-turn twiddle is +-i exactly; sin_cos of the rounded
        // pi/2 leaves a residual in the real part, so pin it.
        tb->quarter = n / 4;
        tb->qneg = dir < 0;
        mpfr_set_zero(tb->tw[static_cast<size_t>(n / 4)].re.raw(), +1);
        mpfr_set_si(tb->tw[static_cast<size_t>(n / 4)].im.raw(), dir < 0 ? -1 : 1, MPFR_RNDN);
    }
    cache[key] = tb;
    return tb;
}

bool line_is_zero(const std::vector<BigComplex>& a, size_t off, size_t stride, int n) {
    for (int i = 0; i < n; ++i) {
        const BigComplex& z = a[off + stride * static_cast<size_t>(i)];
        if (!mpfr_zero_p(z.re.raw()) || !mpfr_zero_p(z.im.raw())) return false;
    }
    return true;
}

void fft1d(std::vector<BigComplex>& a, size_t off, size_t stride, int n, const FftTables& tb,
           BigComplex& t, BigReal& s1, BigReal& s2) {
    // A zero line transforms to itself; dealiased spectra hit this on every
    // truncated row, which is a fifth of the work at the 2/3 rule.
    if (line_is_zero(a, off, stride, n)) return;
    auto at = [&](int i) -> BigComplex& { return a[off + stride * static_cast<size_t>(i)]; };
    for (int i = 0; i < n; ++i) {
        int j = tb.bitrev[i];
        if (i < j) {
            mpfr_swap(at(i).re.raw(), at(j).re.raw());
            mpfr_swap(at(i).im.raw(), at(j).im.raw());
        }
    }
    for (int len = 2; len <= n; len <<= 1) {
        int half = len >> 1;
        int step = n / len;
        for (int start = 0; start < n; start += len) {
            for (int k = 0; k < half; ++k) {
                BigComplex& u = at(start + k);
                BigComplex& v = at(start + k + half);
                const int j = k * step;
                if (k == 0) {
                    cset(t, v);
                } else if (j == tb.quarter) {
                    // t = v * (-+i), exact lane swap instead of four products
                    if (tb.qneg) {
                        set(t.re, v.im);
                        neg(t.im, v.re);
                    } else {
                        neg(t.re, v.im);
                        set(t.im, v.re);
                    }
                } else {
                    cmul(t, tb.tw[static_cast<size_t>(j)], v, s1, s2);
                }
                csub(v, u, t);
                cadd(u, u, t);
            }
        }
    }
}

BigReal tolerance_scale(const PrecisionConfig& p, const BigReal& scale) {
    BigReal tol = noise_floor(p);
    mul(tol, tol, scale);
    return tol;
}

}  // namespace

namespace detail {

std::vector<BigComplex> make_buffer(const GridSpec& g, const PrecisionConfig& p) {
    return std::vector<BigComplex>(static_cast<size_t>(g.size()), BigComplex::zero(p));
}

void fft2d(std::vector<BigComplex>& buf, const GridSpec& g, const PrecisionConfig& p, int dir) {
    const int n = g.n;
    auto tb = fft_tables(n, p.binary_precision, dir);
    const long scale_shift = -2L * g.log2n();
#pragma omp parallel
    {
        BigComplex t(p.binary_precision);
        BigReal s1(p.binary_precision), s2(p.binary_precision);
#pragma omp for schedule(static)
        for (int i = 0; i < n; ++i) fft1d(buf, static_cast<size_t>(i) * n, 1, n, *tb, t, s1, s2);
#pragma omp for schedule(static)
        for (int j = 0; j < n; ++j) fft1d(buf, static_cast<size_t>(j), n, n, *tb, t, s1, s2);
        if (dir < 0) {
#pragma omp for schedule(static)
            for (int q = 0; q < n * n; ++q) cmul_pow2(buf[q], buf[q], scale_shift);
        }
    }
}

SpectralField forward_real(const PhysicalField& f) {
    SpectralField s = SpectralField::zeros(f.grid, f.prec);
    forward_real_into(s, f);
    return s;
}

void forward_real_into(SpectralField& out, const PhysicalField& f) {
    const int nn = f.grid.size();
#pragma omp parallel for schedule(static)
    for (int q = 0; q < nn; ++q) {
        set(out.c[q].re, f.v[q]);
        set_zero(out.c[q].im);
    }
    fft2d(out.c, f.grid, f.prec, -1);
}

std::pair<PhysicalField, PhysicalField> ifft_split(std::vector<BigComplex>&& buf,
                                                   const GridSpec& g, const PrecisionConfig& p) {
    PhysicalField a = PhysicalField::zeros(g, p);
    PhysicalField b = PhysicalField::zeros(g, p);
    ifft_split_into(buf, g, p, a, b);
    return {std::move(a), std::move(b)};
}

void ifft_split_into(std::vector<BigComplex>& buf, const GridSpec& g, const PrecisionConfig& p,
                     PhysicalField& a, PhysicalField& b) {
    fft2d(buf, g, p, +1);
    const int nn = g.size();
#pragma omp parallel for schedule(static)
    for (int q = 0; q < nn; ++q) {
        mpfr_swap(a.v[q].raw(), buf[q].re.raw());
        mpfr_swap(b.v[q].raw(), buf[q].im.raw());
    }
}

void fill_gradient_combined(std::vector<BigComplex>& buf, const SpectralField& f) {
    const int n = f.grid.n;
#pragma omp parallel
    {
        BigReal t1(f.prec.binary_precision), t2(f.prec.binary_precision);
#pragma omp for schedule(static)
        for (int mx = 0; mx < n; ++mx) {
            const long kx = f.grid.wavenumber_or_zero(mx);
            for (int my = 0; my < n; ++my) {
                const long ky = f.grid.wavenumber_or_zero(my);
                const BigComplex& z = f.at(mx, my);
                BigComplex& o = buf[static_cast<size_t>(mx) * n + my];
                // dx(f) + i dy(f): re = -kx Im - ky Re, im = kx Re - ky Im
                mul_long(t1, z.im, -kx);
                mul_long(t2, z.re, ky);
                sub(o.re, t1, t2);
                mul_long(t1, z.re, kx);
                mul_long(t2, z.im, ky);
                sub(o.im, t1, t2);
            }
        }
    }
}

void fill_velocity_combined(std::vector<BigComplex>& buf, const SpectralField& psi) {
    const int n = psi.grid.n;
#pragma omp parallel
    {
        BigReal t1(psi.prec.binary_precision), t2(psi.prec.binary_precision);
#pragma omp for schedule(static)
        for (int mx = 0; mx < n; ++mx) {
            const long kx = psi.grid.wavenumber_or_zero(mx);
            for (int my = 0; my < n; ++my) {
                const long ky = psi.grid.wavenumber_or_zero(my);
                const BigComplex& z = psi.at(mx, my);
                BigComplex& o = buf[static_cast<size_t>(mx) * n + my];
                // u + i v with u = dy(psi), v = -dx(psi):
                // re = -ky Im + kx Im*0 ... -> re = -ky Im - (-kx Re)*0; see below
                // u  = (-ky Im, ky Re), v = (kx Im, -kx Re)
                // re = u.re - v.im = -ky Im + kx Re
                // im = u.im + v.re = ky Re + kx Im
                mul_long(t1, z.im, -ky);
                mul_long(t2, z.re, kx);
                add(o.re, t1, t2);
                mul_long(t1, z.re, ky);
                mul_long(t2, z.im, kx);
                add(o.im, t1, t2);
            }
        }
    }
}

void dealias_inplace(SpectralField& s) {
    const int n = s.grid.n;
#pragma omp parallel for schedule(static)
    for (int mx = 0; mx < n; ++mx) {
        const int kx = s.grid.wavenumber(mx);
        for (int my = 0; my < n; ++my) {
            const int ky = s.grid.wavenumber(my);
            if (!s.grid.mode_kept(kx, ky)) cset_zero(s.at(mx, my));
        }
    }
}

}  // namespace detail

SpectralField fft_forward(const PhysicalField& f) { return detail::forward_real(f); }

PhysicalField fft_inverse(const SpectralField& s) {
    BigReal scale = max_component(s);
    if (!scale.is_zero()) {
        BigReal res = hermitian_residual(s);
        if (res > tolerance_scale(s.prec, scale))
            throw numeric_error("fft_inverse: spectrum is not Hermitian within the noise floor");
    }
    auto buf = s.c;  // copy
    detail::fft2d(buf, s.grid, s.prec, +1);
    PhysicalField out = PhysicalField::zeros(s.grid, s.prec);
    const int nn = s.grid.size();
    BigReal imax = BigReal::zero(s.prec), rmax = BigReal::zero(s.prec);
    for (int q = 0; q < nn; ++q) {
        if (mpfr_cmpabs(buf[q].im.raw(), imax.raw()) > 0) mpfr_abs(imax.raw(), buf[q].im.raw(), MPFR_RNDN);
        if (mpfr_cmpabs(buf[q].re.raw(), rmax.raw()) > 0) mpfr_abs(rmax.raw(), buf[q].re.raw(), MPFR_RNDN);
    }
    if (!rmax.is_zero() && imax > tolerance_scale(s.prec, rmax))
        throw numeric_error("fft_inverse: imaginary residue above the noise floor");
#pragma omp parallel for schedule(static)
    for (int q = 0; q < nn; ++q) mpfr_swap(out.v[q].raw(), buf[q].re.raw());
    return out;
}

SpectralField dft_reference(const PhysicalField& f) {
    const int n = f.grid.n;
    if (n > 64) throw std::invalid_argument("dft_reference is limited to n <= 64");
    const PrecisionConfig& p = f.prec;

    // Independent twiddle table: w[t] = e^{-2 pi i t/n}, t in [0, n).
    std::vector<BigComplex> w;
    w.reserve(n);
    BigReal theta(p.binary_precision + 32), two_pi(p.binary_precision + 32);
    mpfr_const_pi(two_pi.raw(), MPFR_RNDN);
    mpfr_mul_2si(two_pi.raw(), two_pi.raw(), 1, MPFR_RNDN);
    for (int t = 0; t < n; ++t) {
        mpfr_mul_si(theta.raw(), two_pi.raw(), t, MPFR_RNDN);
        mpfr_div_si(theta.raw(), theta.raw(), n, MPFR_RNDN);
        BigComplex z(p.binary_precision);
        mpfr_sin_cos(z.im.raw(), z.re.raw(), theta.raw(), MPFR_RNDN);
        mpfr_neg(z.im.raw(), z.im.raw(), MPFR_RNDN);
        w.push_back(std::move(z));
    }

    SpectralField s = SpectralField::zeros(f.grid, p);
    const long shift = -2L * f.grid.log2n();
#pragma omp parallel for schedule(static)
    for (int mx = 0; mx < n; ++mx) {
        for (int my = 0; my < n; ++my) {
            BigComplex& acc = s.at(mx, my);
            for (int i = 0; i < n; ++i) {
                const long xi = static_cast<long>(mx) * i;
                for (int j = 0; j < n; ++j) {
                    const BigComplex& ww = w[(xi + static_cast<long>(my) * j) % n];
                    const BigReal& fv = f.at(i, j);
                    fma_acc(acc.re, fv, ww.re);
                    fma_acc(acc.im, fv, ww.im);
                }
            }
            cmul_pow2(acc, acc, shift);
        }
    }
    return s;
}

SpectralField derivative(const SpectralField& s, int ax, int ay) {
    if (ax < 0 || ay < 0 || ax + ay == 0)
        throw std::invalid_argument("derivative orders must be nonnegative, not both zero");
    const int n = s.grid.n;
    SpectralField out = SpectralField::zeros(s.grid, s.prec);
    const int ipow = (ax + ay) & 3;
#pragma omp parallel for schedule(static)
    for (int mx = 0; mx < n; ++mx) {
        const long kx = s.grid.wavenumber_or_zero(mx);
        for (int my = 0; my < n; ++my) {
            const long ky = s.grid.wavenumber_or_zero(my);
            long factor = 1;
            for (int q = 0; q < ax; ++q) factor *= kx;
            for (int q = 0; q < ay; ++q) factor *= ky;
            if (factor == 0) continue;  // output stays zero
            const BigComplex& z = s.at(mx, my);
            BigComplex& o = out.at(mx, my);
            switch (ipow) {  // multiply by i^ipow * factor
                case 0: mul_long(o.re, z.re, factor); mul_long(o.im, z.im, factor); break;
                case 1: mul_long(o.re, z.im, -factor); mul_long(o.im, z.re, factor); break;
                case 2: mul_long(o.re, z.re, -factor); mul_long(o.im, z.im, -factor); break;
                default: mul_long(o.re, z.im, factor); mul_long(o.im, z.re, -factor); break;
            }
        }
    }
    return out;
}

SpectralField laplacian(const SpectralField& s) {
    const int n = s.grid.n;
    SpectralField out = SpectralField::zeros(s.grid, s.prec);
#pragma omp parallel for schedule(static)
    for (int mx = 0; mx < n; ++mx) {
        const long kx = s.grid.wavenumber_or_zero(mx);
        for (int my = 0; my < n; ++my) {
            const long ky = s.grid.wavenumber_or_zero(my);
            const long k2 = kx * kx + ky * ky;
            if (k2 == 0) continue;
            cmul_long(out.at(mx, my), s.at(mx, my), -k2);
        }
    }
    return out;
}

SpectralField inverse_laplacian(const SpectralField& s) {
    SpectralField out = SpectralField::zeros(s.grid, s.prec);
    inverse_laplacian_into(out, s);
    return out;
}

void inverse_laplacian_into(SpectralField& out, const SpectralField& s) {
    BigReal scale = max_component(s);
    if (!scale.is_zero()) {
        const BigComplex& z0 = s.at(0, 0);
        BigReal tol = tolerance_scale(s.prec, scale);
        BigReal a(s.prec.binary_precision);
        mpfr_abs(a.raw(), z0.re.raw(), MPFR_RNDN);
        BigReal b(s.prec.binary_precision);
        mpfr_abs(b.raw(), z0.im.raw(), MPFR_RNDN);
        if (a > tol || b > tol)
            throw numeric_error("inverse_laplacian: k=0 mode above the noise floor (gauge violation)");
    }
    const int n = s.grid.n;
#pragma omp parallel for schedule(static)
    for (int mx = 0; mx < n; ++mx) {
        const long kx = s.grid.wavenumber_or_zero(mx);
        for (int my = 0; my < n; ++my) {
            const long ky = s.grid.wavenumber_or_zero(my);
            const long k2 = kx * kx + ky * ky;
            BigComplex& o = out.at(mx, my);
            if (k2 == 0) {
                cset_zero(o);  // gauge: k=0 (and pure-Nyquist) exactly zero
                continue;
            }
            const BigComplex& z = s.at(mx, my);
            mpfr_div_si(o.re.raw(), z.re.raw(), -k2, MPFR_RNDN);
            mpfr_div_si(o.im.raw(), z.im.raw(), -k2, MPFR_RNDN);
        }
    }
}

SpectralField jacobian(const SpectralField& a, const SpectralField& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("jacobian: mismatched grids");
    if (!(a.prec == b.prec)) throw std::invalid_argument("jacobian: mismatched precisions");
    auto buf = detail::make_buffer(a.grid, a.prec);
    detail::fill_gradient_combined(buf, a);
    auto [ax, ay] = detail::ifft_split(std::move(buf), a.grid, a.prec);
    buf = detail::make_buffer(a.grid, a.prec);
    detail::fill_gradient_combined(buf, b);
    auto [bx, by] = detail::ifft_split(std::move(buf), a.grid, a.prec);

    PhysicalField prod = PhysicalField::zeros(a.grid, a.prec);
    const int nn = a.grid.size();
#pragma omp parallel
    {
        BigReal t1(a.prec.binary_precision), t2(a.prec.binary_precision);
#pragma omp for schedule(static)
        for (int q = 0; q < nn; ++q) {
            mul(t1, ax.v[q], by.v[q]);
            mul(t2, bx.v[q], ay.v[q]);
            sub(prod.v[q], t1, t2);
        }
    }
    SpectralField j = detail::forward_real(prod);
    detail::dealias_inplace(j);
    return j;
}

SpectralField dealias_truncate(const SpectralField& s) {
    SpectralField out = s;
    detail::dealias_inplace(out);
    return out;
}

BigReal l2_norm(const SpectralField& s) {
    BigReal acc = BigReal::zero(s.prec);
    BigReal t(s.prec.binary_precision);
    for (const auto& z : s.c) cnorm2_acc(acc, z, t);
    return sqrt(acc);
}

BigReal max_component(const SpectralField& s) {
    BigReal m = BigReal::zero(s.prec);
    for (const auto& z : s.c) {
        if (mpfr_cmpabs(z.re.raw(), m.raw()) > 0) mpfr_abs(m.raw(), z.re.raw(), MPFR_RNDN);
        if (mpfr_cmpabs(z.im.raw(), m.raw()) > 0) mpfr_abs(m.raw(), z.im.raw(), MPFR_RNDN);
    }
    return m;
}

BigReal max_abs(const PhysicalField& f) {
    BigReal m = BigReal::zero(f.prec);
    for (const auto& x : f.v)
        if (mpfr_cmpabs(x.raw(), m.raw()) > 0) mpfr_abs(m.raw(), x.raw(), MPFR_RNDN);
    return m;
}

BigReal hermitian_residual(const SpectralField& s) {
    const int n = s.grid.n;
    BigReal worst = BigReal::zero(s.prec);
    BigReal d(s.prec.binary_precision);
    for (int mx = 0; mx < n; ++mx) {
        const int px = (n - mx) % n;
        for (int my = 0; my < n; ++my) {
            const int py = (n - my) % n;
            const BigComplex& z = s.at(mx, my);
            const BigComplex& w = s.at(px, py);
            sub(d, w.re, z.re);
            if (mpfr_cmpabs(d.raw(), worst.raw()) > 0) mpfr_abs(worst.raw(), d.raw(), MPFR_RNDN);
            add(d, w.im, z.im);
            if (mpfr_cmpabs(d.raw(), worst.raw()) > 0) mpfr_abs(worst.raw(), d.raw(), MPFR_RNDN);
        }
    }
    return worst;
}

BigReal l2_diff(const SpectralField& a, const SpectralField& b) {
    if (!(a.grid.n == b.grid.n)) throw std::invalid_argument("l2_diff: mismatched grids");
    const long prec = std::max(a.prec.binary_precision, b.prec.binary_precision);
    BigReal acc(prec), dr(prec), di(prec);
    mpfr_set_zero(acc.raw(), 1);
    const size_t nn = a.c.size();
    for (size_t q = 0; q < nn; ++q) {
        sub(dr, a.c[q].re, b.c[q].re);
        sub(di, a.c[q].im, b.c[q].im);
        fma_acc(acc, dr, dr);
        fma_acc(acc, di, di);
    }
    return sqrt(acc);
}

void save_spectral_snapshot(std::ostream& os, const SpectralField& s, int digits,
                            std::string_view t_label) {
    const int n = s.grid.n;
    os << "kolflow-snapshot v1\n";
    os << "n " << n << "\n";
    os << "digits " << digits << "\n";
    os << "t " << t_label << "\n";
    for (int kx = -n / 2; kx < n / 2; ++kx)
        for (int ky = -n / 2; ky < n / 2; ++ky) {
            const BigComplex& z = s.mode(kx, ky);
            os << kx << ' ' << ky << ' ' << to_decimal_string(z.re, digits) << ' '
               << to_decimal_string(z.im, digits) << '\n';
        }
}

static LoadedSnapshot load_snapshot_impl(std::istream& is, const GridSpec* expect,
                                         const PrecisionConfig* prec_opt) {
    std::string line;
    if (!std::getline(is, line) || line != "kolflow-snapshot v1")
        throw config_error("snapshot: bad magic line");
    LoadedSnapshot out;
    std::string key;
    if (!(is >> key >> out.n) || key != "n") throw config_error("snapshot: missing grid size");
    if (!(is >> key >> out.digits) || key != "digits") throw config_error("snapshot: missing digits");
    if (!(is >> key >> out.t_label) || key != "t") throw config_error("snapshot: missing time");
    if (expect && expect->n != 0 && expect->n != out.n)
        throw config_error("snapshot: grid size " + std::to_string(out.n) + " does not match expected " +
                           std::to_string(expect->n));
    GridSpec g = expect && expect->n != 0 ? *expect : GridSpec(out.n);
    PrecisionConfig p = prec_opt ? *prec_opt : make_precision(std::max(out.digits, 16));
    out.field = SpectralField::zeros(g, p);
    const int n = out.n;
    std::string re_s, im_s;
    for (long q = 0; q < static_cast<long>(n) * n; ++q) {
        int kx, ky;
        if (!(is >> kx >> ky >> re_s >> im_s)) throw config_error("snapshot: truncated mode table");
        if (kx < -n / 2 || kx >= n / 2 || ky < -n / 2 || ky >= n / 2)
            throw config_error("snapshot: wavenumber out of range");
        BigComplex& z = out.field.mode(kx, ky);
        z.re = parse_decimal(re_s, p);
        z.im = parse_decimal(im_s, p);
    }
    return out;
}

LoadedSnapshot load_spectral_snapshot(std::istream& is, const GridSpec& grid,
                                      const PrecisionConfig& prec) {
    return load_snapshot_impl(is, &grid, &prec);
}

LoadedSnapshot load_spectral_snapshot(std::istream& is) { return load_snapshot_impl(is, nullptr, nullptr); }

}  // namespace kolflow
