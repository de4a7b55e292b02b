#pragma once

// Inhomogeneous heat solves by variation of constants, carried out per
// cosine mode with exact exponential quadrature of a piecewise-linear
// source. With shift == 0 this is the standard representation
//   U(t) = e^{t d Lap} U0 + int_0^t e^{(t-s) d Lap} g(s) ds.
// With shift k > 0 the equivalent representation
//   U(t) = e^{-kt} e^{t d Lap} U0
//        + int_0^t e^{-k(t-s)} e^{(t-s) d Lap} (g + k U)(s) ds
// is evaluated instead, with the in-step U reconstructed exactly; the two
// routes agree up to roundoff, which downstream checks rely on.

#include "rdlab/grid.hpp"

#include <vector>

namespace rdlab {

/// Solve U_t = d Lap U + g on [0, t_end]. `source` holds g sampled on the
/// uniform mesh t_i = i * t_end / (source.size() - 1) and the returned
/// trajectory holds U on the same mesh (U[0] == u0).
std::vector<Field> duhamel_solve(const Field& u0, const std::vector<Field>& source,
                                 double d, double shift, double t_end);

} // namespace rdlab
