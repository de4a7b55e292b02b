#include "rdlab/duhamel.hpp"

#include "rdlab/spectral.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace rdlab;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Field> constant_source(const Grid& g, const Field& shape, std::size_t n) {
    return std::vector<Field>(n, shape);
    (void)g;
}

Field band_limited(const Grid& g, std::uint64_t seed, int band) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> c(g.node_count(), 0.0);
    for (int k = 0; k <= band; ++k) c[static_cast<std::size_t>(k)] = dist(rng);
    return from_cosine_coefficients(g, c);
}

} // namespace

TEST_CASE("constant unit source integrates to a ramp") {
    const Grid g = Grid::line(32, 1.0);
    const auto u = duhamel_solve(Field(g), constant_source(g, Field::constant(g, 1.0), 65),
                                 1.0, 0.0, 1.0);
    REQUIRE(u.size() == 65);
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double t = static_cast<double>(j) / 64.0;
        CHECK((u[j] - Field::constant(g, t)).max_abs() < 1e-13);
    }
}

TEST_CASE("homogeneous case reduces to the semigroup") {
    const Grid g = Grid::line(48, 1.0);
    const Field u0 = Field::sample(g, [&](std::span<const double> x) {
        return std::cos(kPi * x[0]);
    });
    const double d = 0.7, T = 0.5;
    const auto u = duhamel_solve(u0, constant_source(g, Field(g), 33), d, 0.0, T);
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double t = T * static_cast<double>(j) / 32.0;
        CHECK((u[j] - apply_heat_semigroup(u0, d, t)).max_abs() < 1e-12);
    }
}

TEST_CASE("single-mode constant-in-time source has the closed-form response") {
    const Grid g = Grid::line(64, 1.0);
    const Field shape = Field::sample(g, [&](std::span<const double> x) {
        return std::cos(kPi * x[0]);
    });
    const double d = 1.3, T = 1.0;
    const double lambda1 = laplacian_eigenvalues(g, 0)[1];
    const auto u = duhamel_solve(Field(g), constant_source(g, shape, 65), d, 0.0, T);
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double t = T * static_cast<double>(j) / 64.0;
        Field expect = shape;
        expect *= -std::expm1(-d * lambda1 * t) / (d * lambda1);
        CHECK((u[j] - expect).max_abs() < 1e-12);
    }
    // Cross-check the closed form itself against fine-step quadrature.
    const double a = d * lambda1;
    const double quad = oracle::layered_quadrature(
        [&](double s) { return std::exp(-a * (T - s)); }, 0.0, T);
    CHECK(quad == doctest::Approx(-std::expm1(-a * T) / a).epsilon(1e-9));
}

TEST_CASE("solution map is linear") {
    const Grid g = Grid::line(32, 1.0);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const double d = 0.5, T = 0.4;
    const std::size_t n = 33;

    const auto make_source = [&](std::uint64_t seed) {
        std::vector<Field> src;
        for (std::size_t j = 0; j < n; ++j) src.push_back(band_limited(g, seed + j, 6));
        return src;
    };
    const Field u0a = band_limited(g, 100, 5);
    const Field u0b = band_limited(g, 200, 5);
    const auto ga = make_source(300);
    const auto gb = make_source(400);
    const double alpha = dist(rng), beta = dist(rng);

    Field u0c = u0a;
    u0c *= alpha;
    Field tmp = u0b;
    tmp *= beta;
    u0c += tmp;
    std::vector<Field> gc;
    for (std::size_t j = 0; j < n; ++j) {
        Field s = ga[j];
        s *= alpha;
        Field s2 = gb[j];
        s2 *= beta;
        s += s2;
        gc.push_back(std::move(s));
    }

    const auto ua = duhamel_solve(u0a, ga, d, 0.0, T);
    const auto ub = duhamel_solve(u0b, gb, d, 0.0, T);
    const auto uc = duhamel_solve(u0c, gc, d, 0.0, T);
    for (std::size_t j = 0; j < n; ++j) {
        Field combo = ua[j];
        combo *= alpha;
        Field t2 = ub[j];
        t2 *= beta;
        combo += t2;
        CHECK((uc[j] - combo).max_abs() < 1e-10);
    }
}

TEST_CASE("shift-augmented route reproduces the plain solution") {
    const Grid g = Grid::line(64, 1.0);
    const Field u0 = band_limited(g, 500, 10);
    std::vector<Field> src;
    for (std::size_t j = 0; j < 65; ++j) {
        Field s = band_limited(g, 600, 10);
        s *= 1.0 + 0.5 * std::cos(3.0 * static_cast<double>(j) / 64.0);
        src.push_back(std::move(s));
    }
    const auto base = duhamel_solve(u0, src, 2.0, 0.0, 1.0);
    for (double k : {1e-3, 0.25, 1.0, 4.0, 50.0}) {
        const auto shifted = duhamel_solve(u0, src, 2.0, k, 1.0);
        double diff = 0.0;
        for (std::size_t j = 0; j < base.size(); ++j)
            diff = std::max(diff, (base[j] - shifted[j]).max_abs());
        CHECK(diff < 1e-10);
    }
}

TEST_CASE("two-dimensional solve: ramp and tensor-mode decay") {
    const Grid g = Grid::box(16, 12, 1.0, 2.0);
    const auto ramp = duhamel_solve(Field(g), std::vector<Field>(33, Field::constant(g, 1.0)),
                                    0.7, 0.0, 1.0);
    CHECK((ramp.back() - Field::constant(g, 1.0)).max_abs() < 1e-12);

    const Field mode = Field::sample(g, [&](std::span<const double> x) {
        return std::cos(kPi * x[0]) * std::cos(kPi * x[1] / 2.0);
    });
    const double d = 1.3, T = 0.5;
    const auto u = duhamel_solve(mode, std::vector<Field>(17, Field(g)), d, 0.0, T);
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double t = T * static_cast<double>(j) / 16.0;
        CHECK((u[j] - apply_heat_semigroup(mode, d, t)).max_abs() < 1e-12);
    }
}

TEST_CASE("input validation") {
    const Grid g = Grid::line(16, 1.0);
    const std::vector<Field> empty;
    const std::vector<Field> one(1, Field(g));
    const std::vector<Field> two(2, Field(g));
    CHECK_THROWS_AS((void)duhamel_solve(Field(g), empty, 1.0, 0.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)duhamel_solve(Field(g), one, 1.0, 0.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)duhamel_solve(Field(g), two, 1.0, -1.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)duhamel_solve(Field(g), two, 1.0, 0.0, 0.0),
                    std::invalid_argument);
}
