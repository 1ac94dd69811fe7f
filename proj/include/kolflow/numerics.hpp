#pragma once

#include <mpfr.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace kolflow {

/// Configuration rejected, file unreadable, parameters inconsistent. CLI exit 2.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A run violated one of its own admissibility guards (CFL, order budget). CLI exit 3.
class guard_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numeric contract broken: lost Hermitian symmetry, gauge residue, non-finite
/// value, checksum mismatch. CLI exit 4.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Working precision for one run. decimal_digits is the number of significant
/// decimal digits the run is trusted to; binary_precision is the MPFR precision
/// actually used; storage_digits is the decimal width that round-trips the full
/// binary value (used by checkpoints).
struct PrecisionConfig {
    int decimal_digits = 0;
    int guard_bits = 0;
    long binary_precision = 0;
    int storage_digits = 0;

    bool operator==(const PrecisionConfig&) const = default;
};

/// binary_precision = ceil(decimal_digits * log2(10)) + guard_bits.
/// Throws config_error for decimal_digits < 16 (round-off control would be
/// weaker than plain double) or non-positive guard bits.
PrecisionConfig make_precision(int decimal_digits, int guard_bits = 16);

/// Arbitrary-precision real, correctly rounded (round-to-nearest) at a fixed
/// precision carried by the value. Thin RAII wrapper over mpfr_t.
class BigReal {
public:
    BigReal() { mpfr_init2(v_, MPFR_PREC_MIN); }
    explicit BigReal(long prec_bits) { mpfr_init2(v_, prec_bits); }
    BigReal(const BigReal& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    BigReal(BigReal&& o) noexcept {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, o.v_);
    }
    BigReal& operator=(const BigReal& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    BigReal& operator=(BigReal&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigReal() { mpfr_clear(v_); }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }
    long prec() const { return mpfr_get_prec(v_); }

    static BigReal zero(const PrecisionConfig& p) {
        BigReal r(p.binary_precision);
        mpfr_set_zero(r.v_, 1);
        return r;
    }
    static BigReal of_long(long x, const PrecisionConfig& p) {
        BigReal r(p.binary_precision);
        mpfr_set_si(r.v_, x, MPFR_RNDN);
        return r;
    }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    bool is_negative() const { return mpfr_sgn(v_) < 0; }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    /// Bitwise identity: same value, same precision (both zeros match any sign).
    bool identical(const BigReal& o) const {
        if (prec() != o.prec()) return false;
        if (mpfr_nan_p(v_) || mpfr_nan_p(o.v_)) return false;
        if (mpfr_zero_p(v_) && mpfr_zero_p(o.v_)) return true;
        return mpfr_cmp(v_, o.v_) == 0;
    }

    bool operator<(const BigReal& o) const { return mpfr_less_p(v_, o.v_) != 0; }
    bool operator<=(const BigReal& o) const { return mpfr_lessequal_p(v_, o.v_) != 0; }
    bool operator>(const BigReal& o) const { return mpfr_greater_p(v_, o.v_) != 0; }
    bool operator>=(const BigReal& o) const { return mpfr_greaterequal_p(v_, o.v_) != 0; }
    bool operator==(const BigReal& o) const { return mpfr_equal_p(v_, o.v_) != 0; }

private:
    mpfr_t v_;
};

// Three-address kernel ops: dst carries the result precision. These are the
// hot-path primitives; operators below are conveniences for cold paths.
inline void add(BigReal& dst, const BigReal& a, const BigReal& b) { mpfr_add(dst.raw(), a.raw(), b.raw(), MPFR_RNDN); }
inline void sub(BigReal& dst, const BigReal& a, const BigReal& b) { mpfr_sub(dst.raw(), a.raw(), b.raw(), MPFR_RNDN); }
inline void mul(BigReal& dst, const BigReal& a, const BigReal& b) { mpfr_mul(dst.raw(), a.raw(), b.raw(), MPFR_RNDN); }
inline void div(BigReal& dst, const BigReal& a, const BigReal& b) { mpfr_div(dst.raw(), a.raw(), b.raw(), MPFR_RNDN); }
inline void mul_long(BigReal& dst, const BigReal& a, long k) { mpfr_mul_si(dst.raw(), a.raw(), k, MPFR_RNDN); }
inline void div_long(BigReal& dst, const BigReal& a, long k) { mpfr_div_si(dst.raw(), a.raw(), k, MPFR_RNDN); }
/// dst += a*b, one intermediate rounding (mpfr_fma).
inline void fma_acc(BigReal& dst, const BigReal& a, const BigReal& b) { mpfr_fma(dst.raw(), a.raw(), b.raw(), dst.raw(), MPFR_RNDN); }
inline void neg(BigReal& dst, const BigReal& a) { mpfr_neg(dst.raw(), a.raw(), MPFR_RNDN); }
inline void set(BigReal& dst, const BigReal& a) { mpfr_set(dst.raw(), a.raw(), MPFR_RNDN); }
inline void set_zero(BigReal& dst) { mpfr_set_zero(dst.raw(), 1); }
/// Exact scaling by 2^e (exponent shift, no rounding).
inline void mul_pow2(BigReal& dst, const BigReal& a, long e) { mpfr_mul_2si(dst.raw(), a.raw(), e, MPFR_RNDN); }

BigReal operator+(const BigReal& a, const BigReal& b);
BigReal operator-(const BigReal& a, const BigReal& b);
BigReal operator*(const BigReal& a, const BigReal& b);
BigReal operator/(const BigReal& a, const BigReal& b);
BigReal operator-(const BigReal& a);

BigReal abs(const BigReal& a);
BigReal sqrt(const BigReal& a);
BigReal exp(const BigReal& a);
BigReal pow_ui(const BigReal& a, unsigned long k);

/// pi at the working precision, correctly rounded.
BigReal constant_pi(const PrecisionConfig& p);

/// Smallest trusted magnitude: 10^-(decimal_digits - margin) at the working
/// precision. Relative deviations below this are round-off, not signal.
BigReal noise_floor(const PrecisionConfig& p, int margin = 6);

/// Exact decimal-string parse at the working precision (round-to-nearest).
/// Accepts scientific or plain decimals, "inf"/"-inf"; rejects anything else.
BigReal parse_decimal(std::string_view text, const PrecisionConfig& p);
BigReal parse_decimal(std::string_view text, long prec_bits);

/// Scientific notation with exactly `digits` significant digits and a signed,
/// zero-padded 3-digit exponent: "1.2340e-005". digits <= 0 selects the
/// storage width of the value's own precision (bit-exact round-trip).
std::string to_decimal_string(const BigReal& x, int digits);

/// Complex value as a pair of BigReal, same precision in both components.
struct BigComplex {
    BigReal re, im;

    BigComplex() = default;
    explicit BigComplex(long prec_bits) : re(prec_bits), im(prec_bits) {}
    static BigComplex zero(const PrecisionConfig& p) {
        BigComplex c(p.binary_precision);
        set_zero(c.re);
        set_zero(c.im);
        return c;
    }
    bool is_finite() const { return re.is_finite() && im.is_finite(); }
    bool identical(const BigComplex& o) const { return re.identical(o.re) && im.identical(o.im); }
};

inline void cset(BigComplex& d, const BigComplex& a) { set(d.re, a.re); set(d.im, a.im); }
inline void cset_zero(BigComplex& d) { set_zero(d.re); set_zero(d.im); }
inline void cadd(BigComplex& d, const BigComplex& a, const BigComplex& b) { add(d.re, a.re, b.re); add(d.im, a.im, b.im); }
inline void csub(BigComplex& d, const BigComplex& a, const BigComplex& b) { sub(d.re, a.re, b.re); sub(d.im, a.im, b.im); }
inline void cneg(BigComplex& d, const BigComplex& a) { neg(d.re, a.re); neg(d.im, a.im); }
inline void conj(BigComplex& d, const BigComplex& a) { set(d.re, a.re); neg(d.im, a.im); }
inline void cmul_real(BigComplex& d, const BigComplex& a, const BigReal& s) { mul(d.re, a.re, s); mul(d.im, a.im, s); }
inline void cmul_long(BigComplex& d, const BigComplex& a, long k) { mul_long(d.re, a.re, k); mul_long(d.im, a.im, k); }
inline void cmul_pow2(BigComplex& d, const BigComplex& a, long e) { mul_pow2(d.re, a.re, e); mul_pow2(d.im, a.im, e); }

/// d = a*b. d must not alias a or b; t1/t2 are scratch at the same precision.
inline void cmul(BigComplex& d, const BigComplex& a, const BigComplex& b, BigReal& t1, BigReal& t2) {
    mul(t1, a.re, b.re);
    mul(t2, a.im, b.im);
    sub(d.re, t1, t2);
    mul(t1, a.re, b.im);
    mul(t2, a.im, b.re);
    add(d.im, t1, t2);
}

/// acc += |a|^2 with scratch t.
inline void cnorm2_acc(BigReal& acc, const BigComplex& a, BigReal& t) {
    fma_acc(acc, a.re, a.re);
    fma_acc(acc, a.im, a.im);
    (void)t;
}

}  // namespace kolflow
