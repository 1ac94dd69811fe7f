#include "kolflow/numerics.hpp"

#include <cstring>
#include <vector>

namespace kolflow {

namespace {

// ceil(d * log2(10)) and 1 + ceil(bits * log10(2)), evaluated in MPFR at a
// precision far beyond any straddling risk (the products are irrational).
long ceil_mul_log(long factor, bool log2_of_10) {
    mpfr_t t, l;
    mpfr_init2(t, 256);
    mpfr_init2(l, 256);
    mpfr_set_ui(l, log2_of_10 ? 10 : 2, MPFR_RNDN);
    if (log2_of_10)
        mpfr_log2(l, l, MPFR_RNDN);
    else
        mpfr_log10(l, l, MPFR_RNDN);
    mpfr_mul_si(t, l, factor, MPFR_RNDN);
    mpfr_ceil(t, t);
    long r = mpfr_get_si(t, MPFR_RNDN);
    mpfr_clear(t);
    mpfr_clear(l);
    return r;
}

}  // namespace

PrecisionConfig make_precision(int decimal_digits, int guard_bits) {
    if (decimal_digits < 16)
        throw config_error("precision too low: need at least 16 significant decimal digits, got " +
                           std::to_string(decimal_digits));
    if (guard_bits <= 0) throw config_error("guard_bits must be positive");
    PrecisionConfig p;
    p.decimal_digits = decimal_digits;
    p.guard_bits = guard_bits;
    p.binary_precision = ceil_mul_log(decimal_digits, true) + guard_bits;
    p.storage_digits = static_cast<int>(1 + ceil_mul_log(p.binary_precision, false));
    return p;
}

BigReal operator+(const BigReal& a, const BigReal& b) {
    BigReal r(std::max(a.prec(), b.prec()));
    add(r, a, b);
    return r;
}
BigReal operator-(const BigReal& a, const BigReal& b) {
    BigReal r(std::max(a.prec(), b.prec()));
    sub(r, a, b);
    return r;
}
BigReal operator*(const BigReal& a, const BigReal& b) {
    BigReal r(std::max(a.prec(), b.prec()));
    mul(r, a, b);
    return r;
}
BigReal operator/(const BigReal& a, const BigReal& b) {
    BigReal r(std::max(a.prec(), b.prec()));
    div(r, a, b);
    return r;
}
BigReal operator-(const BigReal& a) {
    BigReal r(a.prec());
    neg(r, a);
    return r;
}

BigReal abs(const BigReal& a) {
    BigReal r(a.prec());
    mpfr_abs(r.raw(), a.raw(), MPFR_RNDN);
    return r;
}
BigReal sqrt(const BigReal& a) {
    BigReal r(a.prec());
    mpfr_sqrt(r.raw(), a.raw(), MPFR_RNDN);
    return r;
}
BigReal exp(const BigReal& a) {
    BigReal r(a.prec());
    mpfr_exp(r.raw(), a.raw(), MPFR_RNDN);
    return r;
}
BigReal pow_ui(const BigReal& a, unsigned long k) {
    BigReal r(a.prec());
    mpfr_pow_ui(r.raw(), a.raw(), k, MPFR_RNDN);
    return r;
}

BigReal constant_pi(const PrecisionConfig& p) {
    BigReal r(p.binary_precision);
    mpfr_const_pi(r.raw(), MPFR_RNDN);
    return r;
}

BigReal noise_floor(const PrecisionConfig& p, int margin) {
    BigReal r(p.binary_precision);
    long e = p.decimal_digits - margin;
    mpfr_set_ui(r.raw(), 10, MPFR_RNDN);
    mpfr_pow_si(r.raw(), r.raw(), -e, MPFR_RNDN);
    return r;
}

BigReal parse_decimal(std::string_view text, long prec_bits) {
    BigReal r(prec_bits);
    if (text.empty()) throw numeric_error("empty decimal literal");
    std::string buf(text);
    if (buf == "inf" || buf == "+inf") {
        mpfr_set_inf(r.raw(), 1);
        return r;
    }
    if (buf == "-inf") {
        mpfr_set_inf(r.raw(), -1);
        return r;
    }
    char* end = nullptr;
    int rc = mpfr_strtofr(r.raw(), buf.c_str(), &end, 10, MPFR_RNDN);
    (void)rc;
    if (end == buf.c_str() || *end != '\0')
        throw numeric_error("malformed decimal literal: '" + buf + "'");
    return r;
}

BigReal parse_decimal(std::string_view text, const PrecisionConfig& p) {
    return parse_decimal(text, p.binary_precision);
}

std::string to_decimal_string(const BigReal& x, int digits) {
    if (digits <= 0) digits = static_cast<int>(1 + ceil_mul_log(x.prec(), false));
    if (digits < 2) digits = 2;
    if (mpfr_nan_p(x.raw())) return "nan";
    if (mpfr_inf_p(x.raw())) return mpfr_sgn(x.raw()) < 0 ? "-inf" : "inf";

    std::string mant;
    long dec_exp = 0;
    if (mpfr_zero_p(x.raw())) {
        mant.assign(static_cast<size_t>(digits), '0');
        dec_exp = 1;  // formats as 0.00...0e+000
    } else {
        mpfr_exp_t e = 0;
        char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), x.raw(), MPFR_RNDN);
        if (!s) throw numeric_error("decimal conversion failed");
        mant = s;
        mpfr_free_str(s);
        dec_exp = static_cast<long>(e);
    }

    std::string out;
    size_t i = 0;
    if (!mant.empty() && mant[0] == '-') {
        out.push_back('-');
        i = 1;
    }
    out.push_back(mant[i]);
    out.push_back('.');
    out.append(mant, i + 1, std::string::npos);

    long E = dec_exp - 1;  // mpfr exponent is of 0.d1d2... ; ours of d1.d2...
    out.push_back('e');
    out.push_back(E < 0 ? '-' : '+');
    std::string ed = std::to_string(E < 0 ? -E : E);
    while (ed.size() < 3) ed.insert(ed.begin(), '0');
    out += ed;
    return out;
}

}  // namespace kolflow
