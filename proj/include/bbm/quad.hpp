#pragma once

#include <functional>
#include <vector>

namespace bbm {

struct QuadResult {
    double value = 0.0;
    double error = 0.0; // estimated absolute error
    int cells = 0;      // panels used
};

// Adaptive Gauss–Kronrod 7(15) integration of f over [a, b] to absolute
// tolerance abs_tol.  Splits the worst panel until the summed error estimate
// meets the tolerance; throws QuadratureFailure if max_cells panels are not
// enough.
QuadResult gk_integrate(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_cells = 4000);

// Cumulative integral along sorted breakpoints: out[k] = integral from
// pts[0] to pts[k] (out[0] = 0).  Each cell is integrated adaptively to
// abs_tol_per_cell; adjacent-cell results are exactly telescoping.
std::vector<double> gk_cumulative(const std::function<double(double)>& f,
                                  const std::vector<double>& pts, double abs_tol_per_cell);

} // namespace bbm
