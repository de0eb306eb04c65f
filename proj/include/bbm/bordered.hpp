#pragma once

#include <vector>

namespace bbm {

enum class BorderedScheme {
    numerov, // fourth-order compact three-point stencil (default)
    order2,  // plain second-order central differences
};

struct BorderedResult {
    std::vector<double> v; // solution at every grid node (boundaries included)
    double mu = 0.0;       // Lagrange multiplier of the constraint
};

// Solve the bordered two-point boundary value problem
//
//   speed * v''(tau) + pot(tau) * v(tau) + mu * w(tau) = rhs(tau),
//   v(tau_first) = vL,  v(tau_last) = vR,
//   <w, v>_h = r        (trapezoid inner product over the whole grid)
//
// on a uniform grid.  The multiplier mu restores solvability when pot makes
// the differential operator (numerically) singular: if rhs is orthogonal to
// the operator kernel, mu comes out at the discretization level of zero, and
// its size is a useful diagnostic.
//
// The linear system is an arrow matrix (tridiagonal plus a dense bordering
// row/column); it is factored in one pass with partial pivoting restricted
// to the banded rows, which keeps the factorization O(n) and stable because
// the off-diagonal entries never degenerate for these stencils.
BorderedResult solve_bordered(const std::vector<double>& tau, double speed,
                              const std::vector<double>& pot, const std::vector<double>& w,
                              const std::vector<double>& rhs, double vL, double vR, double r,
                              BorderedScheme scheme = BorderedScheme::numerov);

} // namespace bbm
