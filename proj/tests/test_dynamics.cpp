#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "kolflow/cns.hpp"
#include "kolflow/dynamics.hpp"

using namespace kolflow;
using testing::dense_state;
using testing::show;

TEST_CASE("parameter validation") {
    PrecisionConfig p = make_precision(40);
    CHECK_THROWS_AS(make_flow_params("0", 4, p), config_error);
    CHECK_THROWS_AS(make_flow_params("-40", 4, p), config_error);
    CHECK_THROWS_AS(make_flow_params("inf", 4, p), config_error);
    CHECK_THROWS_AS(make_flow_params("40", 0, p), config_error);
    CHECK_NOTHROW(make_flow_params("40", 0, p, false));
    CHECK_THROWS_AS(make_step("0", 10, p), config_error);
    CHECK_THROWS_AS(make_step("-1e-3", 10, p), config_error);
    CHECK_THROWS_AS(make_step("1e-3", 0, p), config_error);
}

TEST_CASE("forcing spectrum is n_K/2 on the two forced modes") {
    PrecisionConfig p = make_precision(40);
    GridSpec g(16);
    FlowParams params = make_flow_params("40", 4, p);
    SpectralField f = forcing_spectrum(g, p, params);
    CHECK(f.mode(0, 4).re.identical(BigReal::of_long(2, p)));
    CHECK(f.mode(0, -4).re.identical(BigReal::of_long(2, p)));
    CHECK(f.mode(0, 4).im.is_zero());
    BigReal rest = BigReal::zero(p);
    for (int q = 0; q < g.size(); ++q) {
        if (q == g.storage_index(0, 4) || q == g.storage_index(0, -4)) continue;
        CHECK(f.c[q].re.is_zero());
        CHECK(f.c[q].im.is_zero());
    }
    (void)rest;

    FlowParams off = make_flow_params("40", 4, p, false);
    SpectralField zf = forcing_spectrum(g, p, off);
    CHECK(max_component(zf).is_zero());

    FlowParams big = make_flow_params("40", 8, p);
    CHECK_THROWS_AS(forcing_spectrum(g, p, big), config_error);
}

TEST_CASE("rhs of the zero state is exactly minus the forcing") {
    PrecisionConfig p = make_precision(40);
    GridSpec g(16);
    FlowParams params = make_flow_params("40", 4, p);
    SpectralField w = SpectralField::zeros(g, p);
    SpectralField r = rhs(w, params);
    CHECK(r.mode(0, 4).re.identical(BigReal::of_long(-2, p)));
    CHECK(r.mode(0, -4).re.identical(BigReal::of_long(-2, p)));
    for (int q = 0; q < g.size(); ++q) {
        if (q == g.storage_index(0, 4) || q == g.storage_index(0, -4)) continue;
        REQUIRE(r.c[q].re.is_zero());
        REQUIRE(r.c[q].im.is_zero());
    }
}

TEST_CASE("the laminar profile is a fixed point to roundoff") {
    PrecisionConfig p = make_precision(40);
    GridSpec g(64);
    FlowParams params = make_flow_params("40", 4, p);
    InitialConditionSpec ic;
    ic.kind = IcKind::laminar;
    SpectralField w0 = initialize(ic, g, p, params);

    // Re/(2 n_K) = 5 and Re/(2 n_K^3) = 0.3125 are exact dyadics, so the
    // constructed state is the textbook fixed point bit for bit.
    CHECK(w0.mode(0, 4).re.identical(BigReal::of_long(-5, p)));
    CHECK(w0.mode(0, -4).re.identical(BigReal::of_long(-5, p)));

    SpectralField r = rhs(w0, params);
    BigReal resid = l2_norm(r);
    INFO("laminar rhs norm ", show(resid));
    CHECK(resid < noise_floor(p));
}

TEST_CASE("single mode decay without forcing follows the closed form") {
    PrecisionConfig p = make_precision(40);
    PrecisionConfig hi = make_precision(100);
    GridSpec g(16);
    FlowParams params = make_flow_params("10", 4, p, false);

    // |k|^2 = 2, so psi = -w/2 is exact and the nonlinear term cancels
    // bitwise; the series must reduce to w^(m) = (-1/5)^m / m! * w^(0).
    SpectralField w = SpectralField::zeros(g, p);
    set(w.mode(1, 1).re, BigReal::of_long(1, p));
    set(w.mode(1, 1).im, parse_decimal("0.5", p));
    set(w.mode(-1, -1).re, BigReal::of_long(1, p));
    neg(w.mode(-1, -1).im, parse_decimal("0.5", p));

    const int M = 8;
    TaylorSeries series = taylor_coefficients(w, params, M);
    REQUIRE(series.order() == M);

    BigReal lam = parse_decimal("-0.2", hi);  // -|k|^2 / Re
    BigReal coef = BigReal::of_long(1, hi);
    for (int m = 1; m <= M; ++m) {
        mul(coef, coef, lam);
        div_long(coef, coef, m);
        BigReal expect_re(hi.binary_precision), expect_im(hi.binary_precision);
        set(expect_re, coef);
        mul_pow2(expect_im, coef, -1);
        BigReal dre = abs(series.omega[m].mode(1, 1).re - expect_re);
        BigReal dim = abs(series.omega[m].mode(1, 1).im - expect_im);
        BigReal tol = noise_floor(p) * abs(expect_re);
        INFO("order ", m, " dre=", show(dre), " dim=", show(dim));
        CHECK(dre < tol);
        CHECK(dim < tol);
        // Other modes pick up at most the roundoff residue of the cancelling
        // Jacobian pairs, far below the carrier's own noise floor.
        for (int q = 0; q < g.size(); ++q) {
            if (q == g.storage_index(1, 1) || q == g.storage_index(-1, -1)) continue;
            REQUIRE(abs(series.omega[m].c[q].re) < tol);
            REQUIRE(abs(series.omega[m].c[q].im) < tol);
        }
    }

    // advance approximates exp(lam dt) to the truncation remainder.
    StepConfig step = make_step("0.5", M, p);
    SpectralField w1 = advance_step(series, step);
    BigReal x(hi.binary_precision);
    mul(x, lam, parse_decimal("0.5", hi));
    BigReal decay = exp(x);
    BigReal err = abs(w1.mode(1, 1).re - decay);
    // remainder <= |lam dt|^(M+1)/(M+1)! = 0.1^9/9! ~ 2.8e-15
    CHECK(err < parse_decimal("1e-14", p));
    CHECK(err > parse_decimal("1e-18", p));  // and the bound is tight, not fake
}

TEST_CASE("free rhs equals the first Taylor coefficient bitwise") {
    PrecisionConfig p = make_precision(40);
    GridSpec g(32);
    FlowParams params = make_flow_params("100", 4, p);
    SpectralField w = dense_state(g, p, 17);
    SpectralField r = rhs(w, params);
    TaylorSeries series = taylor_coefficients(w, params, 3);
    for (int q = 0; q < g.size(); ++q) {
        REQUIRE(r.c[q].re.identical(series.omega[1].c[q].re));
        REQUIRE(r.c[q].im.identical(series.omega[1].c[q].im));
    }
}

TEST_CASE("advance with dt = 0 returns the state bitwise") {
    PrecisionConfig p = make_precision(40);
    GridSpec g(16);
    FlowParams params = make_flow_params("40", 4, p);
    SpectralField w = dense_state(g, p, 19);
    TaylorSeries series = taylor_coefficients(w, params, 4);
    StepConfig step = make_step("1", 4, p);
    set_zero(step.dt);
    SpectralField w1 = advance_step(series, step);
    for (int q = 0; q < g.size(); ++q) {
        REQUIRE(w1.c[q].re.identical(w.c[q].re));
        REQUIRE(w1.c[q].im.identical(w.c[q].im));
    }
}

TEST_CASE("halving dt scales the truncation estimate by exactly 2^-M") {
    PrecisionConfig p = make_precision(40);
    GridSpec g(16);
    FlowParams params = make_flow_params("40", 4, p);
    SpectralField w = dense_state(g, p, 23);
    Stepper stepper(g, p, params);
    const int M = 6;
    stepper.compute(w, M);
    BigReal dt = parse_decimal("1e-3", p);
    BigReal half(p.binary_precision);
    mul_pow2(half, dt, -1);
    BigReal e_full = stepper.truncation_estimate(dt);
    BigReal e_half = stepper.truncation_estimate(half);
    mul_pow2(e_half, e_half, M);
    CHECK(e_half.identical(e_full));
}

TEST_CASE("extend reproduces the directly computed series") {
    PrecisionConfig p = make_precision(40);
    GridSpec g(16);
    FlowParams params = make_flow_params("40", 4, p);
    SpectralField w = dense_state(g, p, 29);
    Stepper a(g, p, params);
    Stepper b(g, p, params);
    a.compute(w, 3);
    a.extend(6);
    b.compute(w, 6);
    REQUIRE(a.series().order() == 6);
    for (int m = 0; m <= 6; ++m)
        for (int q = 0; q < g.size(); ++q) {
            REQUIRE(a.series().omega[m].c[q].re.identical(b.series().omega[m].c[q].re));
            REQUIRE(a.series().omega[m].c[q].im.identical(b.series().omega[m].c[q].im));
        }
}

TEST_CASE("stepper reuse has no state leakage") {
    PrecisionConfig p = make_precision(40);
    GridSpec g(16);
    FlowParams params = make_flow_params("100", 4, p);
    SpectralField w = dense_state(g, p, 31);
    BigReal dt = parse_decimal("1e-2", p);
    Stepper stepper(g, p, params);
    stepper.compute(w, 5);
    SpectralField r1 = stepper.advance(dt);
    stepper.compute(dense_state(g, p, 37), 7);  // poison the caches
    stepper.compute(w, 5);
    SpectralField r2 = stepper.advance(dt);
    for (int q = 0; q < g.size(); ++q) {
        REQUIRE(r1.c[q].re.identical(r2.c[q].re));
        REQUIRE(r1.c[q].im.identical(r2.c[q].im));
    }
}

TEST_CASE("one step error scales with the order as dt^(M+1)") {
    PrecisionConfig p = make_precision(40);
    GridSpec g(32);
    FlowParams params = make_flow_params("10", 4, p);
    InitialConditionSpec ic;
    ic.kind = IcKind::psi1;
    SpectralField w0 = initialize(ic, g, p, params);

    for (int M : {4, 8}) {
        // Reference: same dt, much higher order; its own truncation error is
        // orders of magnitude below the signal being measured.
        Stepper ref(g, p, params);
        ref.compute(w0, M + 8);
        Stepper low(g, p, params);
        low.compute(w0, M);

        double err[2];
        const char* dts[2] = {"0.25", "0.125"};  // exact dyadics
        for (int i = 0; i < 2; ++i) {
            BigReal dt = parse_decimal(dts[i], p);
            SpectralField a = low.advance(dt);
            SpectralField b = ref.advance(dt);
            err[i] = l2_diff(a, b).to_double();
        }
        double slope = std::log2(err[0] / err[1]);
        INFO("M=", M, " err=", err[0], "/", err[1], " slope=", slope);
        CHECK(slope > M + 0.4);
        CHECK(slope < M + 1.6);
    }
}

TEST_CASE("a time step preserves parity and realness to roundoff") {
    PrecisionConfig p = make_precision(40);
    GridSpec g(32);
    FlowParams params = make_flow_params("100", 4, p);
    InitialConditionSpec ic;
    ic.kind = IcKind::psi1;
    SpectralField w0 = initialize(ic, g, p, params);
    Stepper stepper(g, p, params);
    stepper.compute(w0, 8);
    SpectralField w1 = stepper.advance(parse_decimal("1e-2", p));

    CHECK(hermitian_residual(w1) < noise_floor(p) * max_component(w1));
    auto [rot, trans] = symmetry_residuals(inverse_laplacian(w1));
    BigReal tol = noise_floor(p);
    mul_long(tol, tol, 10);
    INFO("rot=", show(rot), " trans=", show(trans));
    CHECK(rot < tol);
    CHECK(trans < tol);
}
