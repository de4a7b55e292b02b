#include "rdlab/duhamel.hpp"

#include "rdlab/phi_functions.hpp"
#include "rdlab/spectral.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace rdlab {

std::vector<Field> duhamel_solve(const Field& u0, const std::vector<Field>& source,
                                 double d, double shift, double t_end) {
    if (source.size() < 2)
        throw std::invalid_argument("duhamel_solve: need at least two source samples");
    if (shift < 0.0)
        throw std::invalid_argument("duhamel_solve: shift must be >= 0");
    if (!(t_end > 0.0))
        throw std::invalid_argument("duhamel_solve: t_end must be > 0");
    if (!(d > 0.0))
        throw std::invalid_argument("duhamel_solve: d must be > 0");

    const Grid& g = u0.grid();
    for (const Field& s : source) require_same_grid(u0, s, "duhamel_solve");

    const std::size_t steps = source.size() - 1;
    const double dt = t_end / static_cast<double>(steps);
    const std::size_t nodes = g.node_count();

    // Total eigenvalue per mode, assembled across axes.
    std::vector<double> lambda(nodes, 0.0);
    {
        const int dim = g.dim();
        std::vector<std::vector<double>> lam(dim);
        for (int a = 0; a < dim; ++a) lam[a] = laplacian_eigenvalues(g, a);
        std::vector<int> idx(dim, 0);
        for (std::size_t i = 0; i < nodes; ++i) {
            for (int a = 0; a < dim; ++a) lambda[i] += lam[a][idx[a]];
            for (int a = dim - 1; a >= 0; --a) {
                if (++idx[a] < g.points(a)) break;
                idx[a] = 0;
            }
        }
    }

    std::vector<std::vector<double>> ghat(source.size());
    for (std::size_t i = 0; i < source.size(); ++i)
        ghat[i] = cosine_coefficients(source[i]);

    std::vector<double> c = cosine_coefficients(u0);
    std::vector<Field> out;
    out.reserve(source.size());
    out.push_back(u0);

    std::vector<double> next(nodes);
    for (std::size_t step = 0; step < steps; ++step) {
        const auto& g0 = ghat[step];
        const auto& g1 = ghat[step + 1];
        if (shift == 0.0) {
            for (std::size_t m = 0; m < nodes; ++m)
                next[m] = detail::exp_step(c[m], d * lambda[m], dt, g0[m], g1[m]);
        } else {
            for (std::size_t m = 0; m < nodes; ++m)
                next[m] = detail::exp_step_shifted(c[m], d * lambda[m], shift, dt,
                                                   g0[m], g1[m]);
        }
        c = next;
        out.push_back(from_cosine_coefficients(g, c));
    }
    return out;
}

} // namespace rdlab
