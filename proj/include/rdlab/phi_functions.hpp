#pragma once

// Scalar kernels for exact exponential integration of
//   c'(t) = -r c(t) + g(t),   r >= 0,  g piecewise linear,
// and for the shift-augmented variant where the source additionally
// carries k * c(t) with the decay rate raised to r + k.
//
// All kernels are evaluated with small-argument series so they stay
// accurate over the full range of mode rates (r*dt from 0 to ~1e9).

#include <cmath>

namespace rdlab::detail {

/// phi1(x) = (1 - e^{-x}) / x,  phi1(0) = 1.
inline double phi1(double x) {
    if (x == 0.0) return 1.0;
    return -std::expm1(-x) / x;
}

/// psi2(x) = (x - 1 + e^{-x}) / x^2,  psi2(0) = 1/2.
/// Weight of the right-endpoint source value over one step.
inline double psi2(double x) {
    if (x < 0.5) {
        // sum_{n>=0} (-x)^n / (n+2)!
        double term = 0.5;
        double sum = term;
        for (int n = 1; n < 24; ++n) {
            term *= -x / static_cast<double>(n + 2);
            sum += term;
            if (std::abs(term) < 1e-20 * std::abs(sum)) break;
        }
        return sum;
    }
    return (x - 1.0 + std::exp(-x)) / (x * x);
}

/// psi1(x) = (1 - e^{-x} - x e^{-x}) / x^2 = phi1(x) - psi2(x),  psi1(0) = 1/2.
/// Weight of the left-endpoint source value over one step.
inline double psi1(double x) {
    return phi1(x) - psi2(x);
}

/// m_p(z) = int_0^1 e^{-z(1-s)} s^p ds.
/// m_0 = phi1; upward recurrence m_p = (1 - p m_{p-1}) / z holds for z > 0.
/// The recurrence loses accuracy for z < p, so small z uses the series
/// m_p(z) = p! sum_{j>=0} (-z)^j / (j+p+1)!.
inline double moment_mp(int p, double z) {
    if (p == 0) return phi1(z);
    if (z > 8.0) {
        double m = phi1(z);
        for (int q = 1; q <= p; ++q) m = (1.0 - q * m) / z;
        return m;
    }
    double term = 1.0 / static_cast<double>(p + 1); // j = 0
    double sum = term;
    for (int j = 1; j < 120; ++j) {
        term *= -z / static_cast<double>(j + p + 1);
        sum += term;
        if (std::abs(term) < 1e-20 * std::abs(sum)) break;
    }
    return sum;
}

/// One exact step of c' = -r c + g with g linear between g0 and g1:
///   c(dt) = e^{-r dt} c0 + dt [psi1(r dt) g0 + psi2(r dt) g1].
inline double exp_step(double c0, double r, double dt, double g0, double g1) {
    const double x = r * dt;
    return std::exp(-x) * c0 + dt * (psi1(x) * g0 + psi2(x) * g1);
}

/// J1 = int_0^dt e^{-(r+k)(dt-t)} t phi1(r t) dt.
/// Closed form (dt^2/x)[phi1(z) - e^{-x} phi1(y)] cancels for small x,
/// where the series dt^2 sum_n (-x)^n m_{n+1}(z)/(n+1)! takes over.
inline double shifted_j1(double r, double k, double dt) {
    const double x = r * dt, y = k * dt, z = x + y;
    if (x >= 0.05) {
        return dt * dt / x * (phi1(z) - std::exp(-x) * phi1(y));
    }
    double sum = 0.0, fac = 1.0; // fac = (-x)^n / (n+1)!
    for (int n = 0; n <= 10; ++n) {
        if (n > 0) fac *= -x / static_cast<double>(n + 1);
        sum += fac * moment_mp(n + 1, z);
    }
    return dt * dt * sum;
}

/// J2 = int_0^dt e^{-(r+k)(dt-t)} t^2 psi2(r t) dt.
/// Closed form (dt^3/x^2)[x psi2(z) - phi1(z) + e^{-x} phi1(y)] with the
/// matching small-x series dt^3 sum_n (-x)^n m_{n+2}(z)/(n+2)!.
inline double shifted_j2(double r, double k, double dt) {
    const double x = r * dt, y = k * dt, z = x + y;
    if (x >= 0.05) {
        return dt * dt * dt / (x * x) * (x * psi2(z) - phi1(z) + std::exp(-x) * phi1(y));
    }
    double sum = 0.0, fac = 0.5; // fac = (-x)^n / (n+2)!
    for (int n = 0; n <= 10; ++n) {
        if (n > 0) fac *= -x / static_cast<double>(n + 2);
        sum += fac * moment_mp(n + 2, z);
    }
    return dt * dt * dt * sum;
}

/// One step of the shift-augmented representation
///   c(dt) = e^{-(r+k)dt} c0 + int_0^dt e^{-(r+k)(dt-t)} [g(t) + k c(t)] dt,
/// where c(t) inside the integral is the exact in-step solution
///   c(t) = e^{-r t} c0 + g0 t phi1(r t) + s t^2 psi2(r t),  s = (g1-g0)/dt.
/// Algebraically identical to exp_step for every k >= 0; computed through an
/// independent kernel combination so agreement is a genuine cross-check.
inline double exp_step_shifted(double c0, double r, double k, double dt,
                               double g0, double g1) {
    const double x = r * dt, y = k * dt, z = x + y;
    const double s = (g1 - g0) / dt;
    const double source = dt * (psi1(z) * g0 + psi2(z) * g1);
    const double ic = c0 * dt * std::exp(-x) * phi1(y)
                    + g0 * shifted_j1(r, k, dt)
                    + s * shifted_j2(r, k, dt);
    return std::exp(-z) * c0 + source + k * ic;
}

} // namespace rdlab::detail
