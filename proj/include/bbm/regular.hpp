#pragma once

#include "bbm/scenario.hpp"
#include "bbm/spline.hpp"

namespace bbm {

// Smooth background part of the solution: the leading profile u0 solves the
// quasilinear conservation law  a0 u_t + b0 u_x + c0 u u_x = 0  (method of
// characteristics), and the first correction u1 solves the linear transport
// equation  a0 u1_t + (b0 + c0 u0) u1_x + c0 u0_x u1 = f1  with
// f1 = -(a1 u0_t + b1 u0_x + c1 u0 u0_x), integrated along the same
// characteristic fan.  Both fields are resampled onto a padded tensor grid
// and exposed as bicubic splines with mixed partial derivatives.
struct RegularSolution {
    double x_lo = 0.0, x_hi = 0.0; // padded evaluation box
    double t_end = 0.0;
    // Uniform initial data keeps the field spatially uniform forever; those
    // cases are represented exactly by a constant instead of a spline.
    bool u0_const = false, u1_const = false;
    double u0_cv = 0.0, u1_cv = 0.0;
    bool u0_zero = false, u1_zero = false;
    Grid2Spline u0g, u1g;

    // d^(ox+ot) u / dx^ox dt^ot; x is clamped into the padded box.
    double u0(double x, double t, int ox = 0, int ot = 0) const;
    double u1(double x, double t, int ox = 0, int ot = 0) const;
};

// Solve both background fields.  `resolution` scales the fan/grid density
// (2.0 = twice as fine; used by convergence self-checks).  Throws
// GradientCatastrophe (with the bisected crossing time) if characteristics
// cross before s.T.
RegularSolution solve_regular(const Scenario& s, double resolution = 1.0, unsigned jobs = 1);

// Transport speed of the leading conservation law: (b0 + c0*u0)/a0.
double transport_speed(const Scenario& s, const RegularSolution& reg, double x, double t);

} // namespace bbm
