#pragma once

// Independent numerical oracles for the test suites. Deliberately built
// from different machinery than the library paths they check: fixed-rule
// adaptive quadrature and an embedded Runge-Kutta integrator.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace oracle {

/// Composite Simpson on [a,b] with panel count n (even).
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int n = 2048) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// Simpson with geometric refinement toward both endpoints, for integrands
/// with boundary layers (e.g. exp(-large*(b-t)) factors).
inline double layered_quadrature(const std::function<double(double)>& f, double a,
                                 double b) {
    std::vector<double> knots{a};
    const double len = b - a;
    for (int i = 28; i >= 1; --i) knots.push_back(a + len * std::pow(0.5, i + 1));
    for (int i = 1; i <= 28; ++i) knots.push_back(b - len * std::pow(0.5, i + 1));
    knots.push_back(b);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        if (knots[i + 1] > knots[i]) total += simpson(f, knots[i], knots[i + 1], 256);
    return total;
}

/// Adaptive Cash-Karp RK45 for small ODE systems, absolute tolerance tol.
inline std::vector<double> integrate_ode(
    const std::function<void(std::span<const double>, std::span<double>)>& rhs,
    std::vector<double> y, double t0, double t1, double tol = 1e-12) {
    static const double b21 = 1.0 / 5.0;
    static const double b31 = 3.0 / 40.0, b32 = 9.0 / 40.0;
    static const double b41 = 3.0 / 10.0, b42 = -9.0 / 10.0, b43 = 6.0 / 5.0;
    static const double b51 = -11.0 / 54.0, b52 = 5.0 / 2.0, b53 = -70.0 / 27.0,
                        b54 = 35.0 / 27.0;
    static const double b61 = 1631.0 / 55296.0, b62 = 175.0 / 512.0,
                        b63 = 575.0 / 13824.0, b64 = 44275.0 / 110592.0,
                        b65 = 253.0 / 4096.0;
    static const double c1 = 37.0 / 378.0, c3 = 250.0 / 621.0, c4 = 125.0 / 594.0,
                        c6 = 512.0 / 1771.0;
    static const double d1 = 2825.0 / 27648.0, d3 = 18575.0 / 48384.0,
                        d4 = 13525.0 / 55296.0, d5 = 277.0 / 14336.0, d6 = 1.0 / 4.0;

    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), tmp(n), y5(n), y4(n);
    double t = t0;
    double h = (t1 - t0) / 128.0;
    int guard = 0;
    while (t < t1 && ++guard < 2000000) {
        if (t + h > t1) h = t1 - t;
        rhs(y, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * b21 * k1[i];
        rhs(tmp, k2);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (b31 * k1[i] + b32 * k2[i]);
        rhs(tmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (b41 * k1[i] + b42 * k2[i] + b43 * k3[i]);
        rhs(tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (b51 * k1[i] + b52 * k2[i] + b53 * k3[i] + b54 * k4[i]);
        rhs(tmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (b61 * k1[i] + b62 * k2[i] + b63 * k3[i] +
                                 b64 * k4[i] + b65 * k5[i]);
        rhs(tmp, k6);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            y5[i] = y[i] + h * (c1 * k1[i] + c3 * k3[i] + c4 * k4[i] + c6 * k6[i]);
            y4[i] = y[i] + h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                d6 * k6[i]);
            err = std::max(err, std::abs(y5[i] - y4[i]));
        }
        if (err <= tol || h <= 1e-14 * (t1 - t0)) {
            t += h;
            y = y5;
            if (err < 0.1 * tol) h *= 2.0;
        } else {
            h *= 0.5;
        }
    }
    if (t < t1) throw std::runtime_error("integrate_ode: step limit exceeded");
    return y;
}

} // namespace oracle
