#pragma once

#include <cstddef>
#include <vector>

namespace bbm {

// Not-a-knot cubic spline through (xs[i], ys[i]).  Needs >= 4 strictly
// increasing knots.  Evaluation outside the knot span extrapolates the edge
// cubic (callers that care should range-check).
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> xs, const std::vector<double>& ys);

    double operator()(double x) const { return deriv(x, 0); }
    // k-th derivative, k in 0..3 (k == 3 is cellwise constant)
    double deriv(double x, int k) const;

    const std::vector<double>& knots() const { return xs_; }
    bool empty() const { return xs_.empty(); }

    // Per-cell power-basis coefficients about the left knot:
    // y = c[0] + c[1]*d + c[2]*d^2 + c[3]*d^3, d = x - xs[cell].
    std::size_t cells() const { return xs_.empty() ? 0 : xs_.size() - 1; }
    const double* cell_coeffs(std::size_t cell) const { return &coef_[4 * cell]; }

private:
    std::vector<double> xs_;
    std::vector<double> coef_; // 4 per cell
};

// Tensor-product bicubic spline (not-a-knot in both directions) over a value
// grid v[i][j] = f(xs[i], ts[j]).  Exactly the two-pass construction: per-t
// x-splines, then per-x-cell splines of the power-basis coefficients in t.
// The result is C^2 jointly in (x, t); mixed partials up to (3, 3) are
// available, accurate to the spline order.
class Grid2Spline {
public:
    Grid2Spline() = default;
    // values indexed v[i * ts.size() + j]
    Grid2Spline(std::vector<double> xs, std::vector<double> ts, const std::vector<double>& values);

    // d^(ox+ot) f / dx^ox dt^ot at (x, t); ox, ot in 0..3
    double eval(double x, double t, int ox = 0, int ot = 0) const;

    const std::vector<double>& x_knots() const { return xs_; }
    const std::vector<double>& t_knots() const { return ts_; }
    bool empty() const { return xs_.empty(); }

private:
    std::vector<double> xs_, ts_;
    // B[((xcell*4 + k)*tcells + tcell)*4 + m]: coefficient of d_t^m for the
    // t-spline of x-power coefficient k on (xcell, tcell).
    std::vector<double> b_;
    std::size_t tcells_ = 0;
};

// Solve a tridiagonal system in place (Thomas algorithm, no pivoting —
// intended for spline systems which are well conditioned).  diag/rhs have n
// entries, sub/sup have n-1 (sub[i] couples row i+1 to column i).
void solve_tridiagonal(std::vector<double>& sub, std::vector<double>& diag,
                       std::vector<double>& sup, std::vector<double>& rhs);

} // namespace bbm
