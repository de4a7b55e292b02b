#include "rdlab/phi_functions.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace rdlab::detail;

TEST_CASE("phi1/psi kernels match their defining integrals") {
    // phi1(x) = int_0^1 e^{-x(1-s)} ds, psi2(x) = int_0^1 e^{-x(1-s)} s ds,
    // psi1 = phi1 - psi2.
    for (double x : {0.0, 1e-9, 1e-4, 0.05, 0.3, 0.49, 0.51, 1.0, 4.0, 20.0}) {
        const double p1 = oracle::simpson([&](double s) { return std::exp(-x * (1 - s)); },
                                          0.0, 1.0, 16384);
        const double p2 = oracle::simpson(
            [&](double s) { return std::exp(-x * (1 - s)) * s; }, 0.0, 1.0, 16384);
        CHECK(phi1(x) == doctest::Approx(p1).epsilon(1e-12));
        CHECK(psi2(x) == doctest::Approx(p2).epsilon(1e-12));
        CHECK(psi1(x) == doctest::Approx(p1 - p2).epsilon(1e-12));
    }
    CHECK(phi1(0.0) == 1.0);
    CHECK(psi2(0.0) == 0.5);
    CHECK(psi1(0.0) == 0.5);
    // Large arguments: phi1 ~ 1/x, psi2 ~ (x-1)/x^2.
    CHECK(phi1(1e8) == doctest::Approx(1e-8).epsilon(1e-12));
    CHECK(psi2(1e8) == doctest::Approx((1e8 - 1.0) / 1e16).epsilon(1e-12));
}

TEST_CASE("moment integrals m_p across the series/recurrence switch") {
    for (int p : {0, 1, 2, 3, 5, 8, 12}) {
        for (double z : {0.0, 1e-6, 0.3, 2.0, 7.9, 8.1, 15.0, 60.0}) {
            const double ref = oracle::simpson(
                [&](double s) { return std::exp(-z * (1 - s)) * std::pow(s, p); }, 0.0,
                1.0, 4096);
            CHECK(moment_mp(p, z) == doctest::Approx(ref).epsilon(2e-11));
        }
    }
}

TEST_CASE("exp_step solves c' = -r c + linear g exactly") {
    // Against the closed form for constant g and against layered quadrature
    // for sloped g.
    for (double r : {0.0, 1e-7, 0.5, 30.0, 2e4}) {
        const double dt = 0.03, c0 = 0.7, gc = 1.3;
        const double got = exp_step(c0, r, dt, gc, gc);
        const double expect =
            r == 0.0 ? c0 + gc * dt
                     : std::exp(-r * dt) * c0 + gc * -std::expm1(-r * dt) / r;
        CHECK(got == doctest::Approx(expect).epsilon(1e-12));
    }
    for (double r : {0.0, 1e-3, 2.0, 300.0}) {
        const double dt = 0.05, c0 = -0.4, g0 = 0.8, g1 = -1.1;
        const double integral = oracle::layered_quadrature(
            [&](double t) {
                const double g = g0 + (g1 - g0) * t / dt;
                return std::exp(-r * (dt - t)) * g;
            },
            0.0, dt);
        const double expect = std::exp(-r * dt) * c0 + integral;
        CHECK(exp_step(c0, r, dt, g0, g1) == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("shifted kernels J1/J2 match their defining integrals") {
    for (double r : {0.0, 1e-4, 0.04, 0.06, 1.0, 40.0, 900.0}) {
        for (double k : {0.0, 0.3, 5.0, 120.0}) {
            const double dt = 0.04;
            const double j1 = oracle::layered_quadrature(
                [&](double t) {
                    return std::exp(-(r + k) * (dt - t)) * t * phi1(r * t);
                },
                0.0, dt);
            const double j2 = oracle::layered_quadrature(
                [&](double t) {
                    return std::exp(-(r + k) * (dt - t)) * t * t * psi2(r * t);
                },
                0.0, dt);
            CHECK(shifted_j1(r, k, dt) == doctest::Approx(j1).epsilon(1e-9));
            CHECK(shifted_j2(r, k, dt) == doctest::Approx(j2).epsilon(1e-9));
        }
    }
}

TEST_CASE("shift-augmented step is an identity in the shift") {
    // The augmented route must reproduce the plain route for every shift,
    // across the full stiffness range.
    const double dt = 1.0 / 64.0;
    for (double r : {0.0, 1e-8, 1e-3, 0.9, 47.0, 1e4, 3e8}) {
        for (double k : {0.0, 1e-6, 0.25, 1.0, 4.0, 800.0}) {
            const double c0 = 0.83, g0 = -0.37, g1 = 1.21;
            const double plain = exp_step(c0, r, dt, g0, g1);
            const double shifted = exp_step_shifted(c0, r, k, dt, g0, g1);
            CHECK(shifted ==
                  doctest::Approx(plain).epsilon(5e-13).scale(std::abs(plain) + 1.0));
        }
    }
}
