#pragma once

// Spectral operators on cell-centered grids with no-flux walls.
//
// The basis along an axis with N cells is cos(k pi (j+1/2)/N), k = 0..N-1,
// the exact eigenvectors of the 3-point reflection Laplacian on cell
// centers with eigenvalues -lambda_k, lambda_k = (2/h^2)(1 - cos(k pi/N)).
// Diffusion applied as a per-mode multiplier exp(-t d lambda_k) is
// therefore the exact matrix exponential of the discrete operator: it
// preserves the spatial mean, satisfies the discrete maximum principle,
// and never amplifies the derivative sups.
//
// First and second derivatives for the C^1/C^2 sups differentiate the
// cosine interpolant itself (multipliers k pi / L), which is the single
// derivative definition used across all norm computations.

#include "rdlab/grid.hpp"

#include <vector>

namespace rdlab {

/// Coefficients of the tensor cosine expansion, stored in the same
/// row-major layout as field values (mode index per axis).
std::vector<double> cosine_coefficients(const Field& f);
Field from_cosine_coefficients(const Grid& g, const std::vector<double>& coeffs);

/// Eigenvalues lambda of the discrete Laplacian along one axis.
std::vector<double> laplacian_eigenvalues(const Grid& g, int axis);

/// Exact solution operator of u_t = d * Lap u over time t (t >= 0).
Field apply_heat_semigroup(const Field& f, double d, double t);

/// d times the discrete Laplacian (spectral multiplier -lambda).
Field laplacian(const Field& f, double d = 1.0);

/// First derivative of the cosine interpolant along one axis.
Field derivative(const Field& f, int axis);
/// Second (or mixed) derivative; axis_a == axis_b gives the pure second
/// derivative -(k pi/L)^2 per mode.
Field second_derivative(const Field& f, int axis_a, int axis_b);

/// c0 = sup |f|; c1 adds the sup over nodes and axes of |d_a f|;
/// c2 additionally adds the sup over all second-derivative components.
NormTriple norms(const Field& f);

/// max over species of norms(), the vector-valued norm used throughout.
NormTriple norms(std::span<const Field> fields);

} // namespace rdlab
