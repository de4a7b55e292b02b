#include "rdlab/spectral.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace rdlab {
namespace {

// Per-axis transform tables. Synthesis/analysis depend only on N; the
// derivative evaluators and eigenvalues also carry the axis length.
struct AxisTables {
    Eigen::MatrixXd synth;   // [j][k] cos(k pi (j+1/2)/N)
    Eigen::MatrixXd analyze; // inverse of synth (orthogonality weights)
    Eigen::MatrixXd d1;      // [j][k] -(k pi/L) sin(k pi (j+1/2)/N)
    Eigen::MatrixXd d2;      // [j][k] -(k pi/L)^2 cos(k pi (j+1/2)/N)
    std::vector<double> lambda;
};

std::shared_ptr<const AxisTables> axis_tables(int n, double length) {
    static std::mutex mtx;
    static std::map<std::pair<int, std::uint64_t>, std::shared_ptr<const AxisTables>> cache;

    std::uint64_t lbits;
    static_assert(sizeof(lbits) == sizeof(length));
    std::memcpy(&lbits, &length, sizeof(lbits));

    std::scoped_lock lock(mtx);
    auto key = std::make_pair(n, lbits);
    if (auto it = cache.find(key); it != cache.end()) return it->second;

    auto t = std::make_shared<AxisTables>();
    const double pi = std::numbers::pi;
    const double h = length / n;
    t->synth.resize(n, n);
    t->analyze.resize(n, n);
    t->d1.resize(n, n);
    t->d2.resize(n, n);
    t->lambda.resize(n);
    for (int k = 0; k < n; ++k) {
        const double freq = k * pi / length;
        t->lambda[k] = 2.0 / (h * h) * (1.0 - std::cos(k * pi / n));
        const double w = (k == 0) ? 1.0 / n : 2.0 / n;
        for (int j = 0; j < n; ++j) {
            const double arg = k * pi * (j + 0.5) / n;
            const double c = std::cos(arg);
            t->synth(j, k) = c;
            t->analyze(k, j) = w * c;
            t->d1(j, k) = -freq * std::sin(arg);
            t->d2(j, k) = -freq * freq * c;
        }
    }
    cache.emplace(key, t);
    return t;
}

// Apply matrix M (n x n) along `axis` of the row-major tensor `data`.
void apply_along_axis(const Grid& g, int axis, const Eigen::MatrixXd& m,
                      std::vector<double>& data) {
    const int d = g.dim();
    const int n = g.points(axis);
    std::size_t inner = 1, outer = 1;
    for (int a = axis + 1; a < d; ++a) inner *= g.points(a);
    for (int a = 0; a < axis; ++a) outer *= g.points(a);

    Eigen::VectorXd line(n), out(n);
    for (std::size_t o = 0; o < outer; ++o) {
        const std::size_t base_o = o * n * inner;
        for (std::size_t i = 0; i < inner; ++i) {
            const std::size_t base = base_o + i;
            for (int j = 0; j < n; ++j) line[j] = data[base + j * inner];
            out.noalias() = m * line;
            for (int j = 0; j < n; ++j) data[base + j * inner] = out[j];
        }
    }
}

enum class DiffOrder { none, first, second };

Field synthesize_derivative(const Field& f, const std::vector<DiffOrder>& orders) {
    const Grid& g = f.grid();
    std::vector<double> work = cosine_coefficients(f);
    for (int a = 0; a < g.dim(); ++a) {
        auto t = axis_tables(g.points(a), g.length(a));
        switch (orders[a]) {
            case DiffOrder::none: apply_along_axis(g, a, t->synth, work); break;
            case DiffOrder::first: apply_along_axis(g, a, t->d1, work); break;
            case DiffOrder::second: apply_along_axis(g, a, t->d2, work); break;
        }
    }
    return Field(g, std::move(work));
}

// Per-node multiplier fn(lambda_total) applied in coefficient space.
template <class Fn>
Field apply_mode_multiplier(const Field& f, Fn&& fn) {
    const Grid& g = f.grid();
    std::vector<double> coeffs = cosine_coefficients(f);
    const int d = g.dim();
    std::vector<const std::vector<double>*> lam(d);
    std::vector<std::shared_ptr<const AxisTables>> keep(d);
    for (int a = 0; a < d; ++a) {
        keep[a] = axis_tables(g.points(a), g.length(a));
        lam[a] = &keep[a]->lambda;
    }
    std::vector<int> idx(d, 0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        double total = 0.0;
        for (int a = 0; a < d; ++a) total += (*lam[a])[idx[a]];
        coeffs[i] *= fn(total);
        for (int a = d - 1; a >= 0; --a) {
            if (++idx[a] < g.points(a)) break;
            idx[a] = 0;
        }
    }
    return from_cosine_coefficients(g, coeffs);
}

} // namespace

std::vector<double> cosine_coefficients(const Field& f) {
    const Grid& g = f.grid();
    std::vector<double> work(f.data());
    for (int a = 0; a < g.dim(); ++a) {
        auto t = axis_tables(g.points(a), g.length(a));
        apply_along_axis(g, a, t->analyze, work);
    }
    return work;
}

Field from_cosine_coefficients(const Grid& g, const std::vector<double>& coeffs) {
    if (coeffs.size() != g.node_count())
        throw std::invalid_argument("from_cosine_coefficients: size mismatch");
    std::vector<double> work(coeffs);
    for (int a = 0; a < g.dim(); ++a) {
        auto t = axis_tables(g.points(a), g.length(a));
        apply_along_axis(g, a, t->synth, work);
    }
    return Field(g, std::move(work));
}

std::vector<double> laplacian_eigenvalues(const Grid& g, int axis) {
    return axis_tables(g.points(axis), g.length(axis))->lambda;
}

Field apply_heat_semigroup(const Field& f, double d, double t) {
    if (t < 0.0) throw std::invalid_argument("apply_heat_semigroup: t must be >= 0");
    if (!(d > 0.0)) throw std::invalid_argument("apply_heat_semigroup: d must be > 0");
    if (t == 0.0) return f;
    return apply_mode_multiplier(f, [=](double lam) { return std::exp(-t * d * lam); });
}

Field laplacian(const Field& f, double d) {
    return apply_mode_multiplier(f, [=](double lam) { return -d * lam; });
}

Field derivative(const Field& f, int axis) {
    std::vector<DiffOrder> orders(f.grid().dim(), DiffOrder::none);
    orders.at(axis) = DiffOrder::first;
    return synthesize_derivative(f, orders);
}

Field second_derivative(const Field& f, int axis_a, int axis_b) {
    std::vector<DiffOrder> orders(f.grid().dim(), DiffOrder::none);
    if (axis_a == axis_b) {
        orders.at(axis_a) = DiffOrder::second;
    } else {
        orders.at(axis_a) = DiffOrder::first;
        orders.at(axis_b) = DiffOrder::first;
    }
    return synthesize_derivative(f, orders);
}

NormTriple norms(const Field& f) {
    NormTriple n;
    n.c0 = f.max_abs();

    const int d = f.grid().dim();
    double grad = 0.0;
    for (int a = 0; a < d; ++a)
        grad = std::max(grad, derivative(f, a).max_abs());
    n.c1 = n.c0 + grad;

    double hess = 0.0;
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b)
            hess = std::max(hess, second_derivative(f, a, b).max_abs());
    n.c2 = n.c1 + hess;
    return n;
}

NormTriple norms(std::span<const Field> fields) {
    NormTriple n;
    for (const Field& f : fields) {
        NormTriple s = norms(f);
        n.c0 = std::max(n.c0, s.c0);
        n.c1 = std::max(n.c1, s.c1);
        n.c2 = std::max(n.c2, s.c2);
    }
    return n;
}

} // namespace rdlab
