#pragma once

#include "minkray/field.hpp"

namespace minkray {

enum class DerivativeScheme { Spectral, CentralDifference };

// (d^s w)_ij = (d_i w_j + d_j w_i) / 2 on the flat background. Spectral
// differentiation treats the box as periodic; central differences fall back to
// second-order one-sided stencils on the two edge planes of each axis.
Sym2Field d_sym(const OneFormField& w, DerivativeScheme scheme);

// c g + d^s w. Sets meta["warning"] when the result is nonzero within two
// cells of the grid boundary.
Sym2Field gauge_field(const ScalarField& c, const OneFormField& w,
                      DerivativeScheme scheme = DerivativeScheme::Spectral);

// Partial derivative along `axis` of a scalar array laid out on `grid`.
std::vector<double> partial(const Grid4& grid, const std::vector<double>& f, int axis, DerivativeScheme scheme);

// True if any |value| > tol * max|value| sits within `margin` cells of the boundary.
bool touches_boundary(const Sym2Field& f, int margin = 2, double tol = 1e-12);

}  // namespace minkray
