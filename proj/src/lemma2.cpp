#include "rdlab/lemma2.hpp"

#include "rdlab/duhamel.hpp"
#include "rdlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace rdlab {

TimeSupNorms time_sup_norms(const std::vector<Field>& series) {
    TimeSupNorms out;
    for (const Field& f : series) {
        const NormTriple n = norms(f);
        out.c0 = std::max(out.c0, n.c0);
        out.c1 = std::max(out.c1, n.c1);
        out.c2 = std::max(out.c2, n.c2);
    }
    return out;
}

InterpBoundReport verify_interpolation_bounds(const Field& u0,
                                              const std::vector<Field>& g,
                                              double d, double t_end,
                                              double shift_choice) {
    InterpBoundReport rep;
    const NormTriple n0 = norms(u0);
    rep.u0_c1 = n0.c1;
    rep.u0_c2 = n0.c2;
    rep.g_norms = time_sup_norms(g);
    if (n0.c0 == 0.0 && rep.g_norms.c0 == 0.0)
        throw std::invalid_argument("verify_interpolation_bounds: zero data and zero source");

    const std::vector<Field> u = duhamel_solve(u0, g, d, 0.0, t_end);
    rep.u_norms = time_sup_norms(u);

    const double den1 = rep.u0_c1 + std::sqrt(rep.u_norms.c0 * rep.g_norms.c0);
    const double den2 = rep.u0_c2 + std::sqrt(rep.u_norms.c1 * rep.g_norms.c1);
    const double den2c = rep.u0_c2 + std::sqrt(rep.g_norms.c1) * std::sqrt(den1);
    rep.c1_constant = rep.u_norms.c1 / den1;
    rep.c2_constant = rep.u_norms.c2 / den2;
    rep.c2_composed_constant = rep.u_norms.c2 / den2c;

    if (shift_choice >= 0.0)
        rep.optimal_shift = shift_choice;
    else
        rep.optimal_shift = (rep.u_norms.c0 > 0.0 && rep.g_norms.c0 > 0.0)
                                ? rep.g_norms.c0 / rep.u_norms.c0
                                : 1.0;
    const std::vector<Field> shifted = duhamel_solve(u0, g, d, rep.optimal_shift, t_end);
    for (std::size_t j = 0; j < u.size(); ++j)
        rep.shift_agreement = std::max(rep.shift_agreement, (u[j] - shifted[j]).max_abs());
    return rep;
}

// --- family v1 -----------------------------------------------------------

namespace {
constexpr int kFamilyBand = 12;

std::vector<double> random_band(std::mt19937_64& rng, bool zero_mean) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> modes(kFamilyBand + 1, 0.0);
    for (int k = zero_mean ? 1 : 0; k <= kFamilyBand; ++k)
        modes[k] = unit(rng) / ((1.0 + k) * (1.0 + k));
    return modes;
}
} // namespace

std::vector<FamilyMember> standard_family(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<FamilyMember> fam;
    for (int i = 0; i < 20; ++i) {
        FamilyMember m;
        m.u0_modes = random_band(rng, false);
        m.g_modes = random_band(rng, false);
        m.time_offset = 1.0 + 0.5 * unit(rng);
        m.time_swing = 0.75 * unit(rng);
        m.omega = 2.0 + 3.0 * std::abs(unit(rng));
        if (i < 2) std::fill(m.u0_modes.begin(), m.u0_modes.end(), 0.0);
        fam.push_back(std::move(m));
    }
    return fam;
}

Field synthesize_member_field(const Grid& g, const std::vector<double>& modes) {
    if (g.dim() != 1)
        throw std::invalid_argument("synthesize_member_field: family is one-dimensional");
    if (g.points(0) <= static_cast<int>(modes.size()))
        throw std::invalid_argument("synthesize_member_field: grid does not resolve the band");
    std::vector<double> coeffs(g.node_count(), 0.0);
    std::copy(modes.begin(), modes.end(), coeffs.begin());
    return from_cosine_coefficients(g, coeffs);
}

std::vector<Field> synthesize_member_source(const Grid& g, const FamilyMember& m,
                                            double t_end, std::size_t samples,
                                            double amplitude) {
    const Field shape = synthesize_member_field(g, m.g_modes);
    std::vector<Field> out;
    out.reserve(samples);
    for (std::size_t j = 0; j < samples; ++j) {
        const double t = t_end * static_cast<double>(j) / (samples - 1);
        const double mod = m.time_offset + m.time_swing * std::cos(m.omega * t);
        Field f = shape;
        f *= amplitude * mod;
        out.push_back(std::move(f));
    }
    return out;
}

FamilySweepResult run_family_verification(const Grid& grid,
                                          const std::vector<double>& amplitudes,
                                          const std::vector<double>& diffusivities,
                                          const std::vector<double>& horizons,
                                          std::uint64_t seed) {
    const std::vector<FamilyMember> fam = standard_family(seed);
    FamilySweepResult res;
    for (const FamilyMember& m : fam)
        for (double amp : amplitudes)
            for (double d : diffusivities)
                for (double t_end : horizons) {
                    const std::size_t samples =
                        std::max<std::size_t>(33, static_cast<std::size_t>(
                            std::ceil(64.0 * t_end)) + 1);
                    Field u0 = synthesize_member_field(grid, m.u0_modes);
                    u0 *= amp;
                    const std::vector<Field> g =
                        synthesize_member_source(grid, m, t_end, samples, amp);
                    const InterpBoundReport rep =
                        verify_interpolation_bounds(u0, g, d, t_end);
                    res.max_c1_constant = std::max(res.max_c1_constant, rep.c1_constant);
                    res.max_c2_constant = std::max(res.max_c2_constant, rep.c2_constant);
                    res.max_c2_composed_constant =
                        std::max(res.max_c2_composed_constant, rep.c2_composed_constant);
                    res.max_shift_disagreement =
                        std::max(res.max_shift_disagreement, rep.shift_agreement);
                    res.all_finite = res.all_finite && std::isfinite(rep.c1_constant) &&
                                     std::isfinite(rep.c2_constant) &&
                                     std::isfinite(rep.c2_composed_constant);
                    ++res.cases;
                }
    return res;
}

// --- smoothing -------------------------------------------------------------

std::vector<Field> smoothing_family(const Grid& g, std::uint64_t seed) {
    std::vector<Field> fam;
    fam.push_back(Field::constant(g, 1.0));

    // Flat index of a single-axis mode k along axis a.
    const auto axis_mode_index = [&](int a, int k) {
        std::size_t stride = 1;
        for (int b = g.dim() - 1; b > a; --b) stride *= g.points(b);
        return static_cast<std::size_t>(k) * stride;
    };

    // Dyadic single modes along each axis pin the smoothing envelope at
    // every scale the grid resolves.
    for (int a = 0; a < g.dim(); ++a)
        for (int k = 1; k < g.points(a); k *= 2) {
            std::vector<double> coeffs(g.node_count(), 0.0);
            coeffs[axis_mode_index(a, k)] = 1.0;
            fam.push_back(from_cosine_coefficients(g, coeffs));
        }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int r = 0; r < 8; ++r) {
        std::vector<double> coeffs(g.node_count(), 0.0);
        for (int a = 0; a < g.dim(); ++a)
            for (int k = 0; k < g.points(a) / 2; ++k)
                coeffs[axis_mode_index(a, k)] += unit(rng) / (1.0 + std::sqrt(k));
        fam.push_back(from_cosine_coefficients(g, coeffs));
    }

    for (Field& f : fam) {
        const double c0 = f.max_abs();
        if (c0 > 0.0) f *= 1.0 / c0;
    }
    return fam;
}

double SmoothingTable::max_ratio() const {
    return *std::max_element(smoothing_ratio.begin(), smoothing_ratio.end());
}
double SmoothingTable::min_ratio() const {
    return *std::min_element(smoothing_ratio.begin(), smoothing_ratio.end());
}

SmoothingTable estimate_smoothing_constants(const Grid& g, double d,
                                            const std::vector<double>& times,
                                            const std::vector<Field>& family) {
    SmoothingTable table;
    table.times = times;
    table.smoothing_ratio.assign(times.size(), 0.0);
    for (const Field& psi : family) {
        if (psi.grid() != g)
            throw std::invalid_argument("estimate_smoothing_constants: family grid mismatch");
        const double c0 = psi.max_abs();
        const double c1 = norms(psi).c1;
        for (std::size_t j = 0; j < times.size(); ++j) {
            const double t = times[j];
            const Field evolved = apply_heat_semigroup(psi, d, t);
            const double ec1 = norms(evolved).c1;
            table.smoothing_ratio[j] =
                std::max(table.smoothing_ratio[j], std::sqrt(t) * ec1 / c0);
            if (c1 > 0.0)
                table.c1_preservation = std::max(table.c1_preservation, ec1 / c1);
        }
    }
    return table;
}

// --- shift identities --------------------------------------------------------

namespace {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on the
// Legendre recurrence.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        double xi = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 60; ++it) {
            double p0 = 1.0, p1 = xi;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
            const double step = p1 / dp;
            xi -= step;
            if (std::abs(step) < 1e-15) break;
        }
        double p0 = 1.0, p1 = xi;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
        x[i] = xi;
        w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
    }
}

} // namespace

double kernel_integral(double k) {
    if (!(k > 0.0)) throw std::invalid_argument("kernel_integral: k must be > 0");
    // s = q^2 removes the s^{-1/2} singularity:
    //   int_0^inf s^{-1/2} e^{-ks} ds = 2 int_0^inf e^{-k q^2} dq.
    const double q_max = std::sqrt(38.0 / k);
    const int panels = 64;
    static const auto rule = [] {
        std::pair<std::vector<double>, std::vector<double>> r;
        gauss_legendre(12, r.first, r.second);
        return r;
    }();

    double total = 0.0;
    const double hq = q_max / panels;
    for (int p = 0; p < panels; ++p) {
        const double a = p * hq, b = a + hq;
        for (std::size_t i = 0; i < rule.first.size(); ++i) {
            const double q = 0.5 * (a + b) + 0.5 * (b - a) * rule.first[i];
            total += 0.5 * (b - a) * rule.second[i] * std::exp(-k * q * q);
        }
    }
    return 2.0 * total;
}

ShiftIdentityReport shift_invariance_check(const Field& u0, const std::vector<Field>& g,
                                           double d, double t_end,
                                           const std::vector<double>& shifts) {
    ShiftIdentityReport rep;
    rep.shifts = shifts;
    const std::vector<Field> base = duhamel_solve(u0, g, d, 0.0, t_end);
    for (double k : shifts) {
        const std::vector<Field> shifted = duhamel_solve(u0, g, d, k, t_end);
        double diff = 0.0;
        for (std::size_t j = 0; j < base.size(); ++j)
            diff = std::max(diff, (base[j] - shifted[j]).max_abs());
        rep.disagreement.push_back(diff);
        rep.max_disagreement = std::max(rep.max_disagreement, diff);

        if (k > 0.0) {
            const double got = kernel_integral(k);
            const double expect = std::sqrt(std::numbers::pi / k);
            rep.kernel_values.push_back(got);
            rep.kernel_expected.push_back(expect);
            rep.max_kernel_error = std::max(rep.max_kernel_error, std::abs(got - expect));
        } else {
            rep.kernel_values.push_back(std::numeric_limits<double>::infinity());
            rep.kernel_expected.push_back(std::numeric_limits<double>::infinity());
        }
    }
    return rep;
}

} // namespace rdlab
