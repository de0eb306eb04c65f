#pragma once

#include "bbm/ode.hpp"
#include "bbm/regular.hpp"
#include "bbm/scenario.hpp"
#include "bbm/spline.hpp"

namespace bbm {

// Coefficients of the wavefront evolution law
//     I(p) p' + F(p) = 0,   p = dphi/dt,
// with inertia I(p) = i2 p^2 + i1 p + i0 and forcing
// F(p) = f4 p^4 + f3 p^3 + f2 p^2 + f1 p, everything evaluated at a point
// (x, t) on the curve.  The law is the solvability condition that keeps the
// first corrector orthogonal to the translation mode of the core profile.
struct FrontCoeffs {
    double i2 = 0, i1 = 0, i0 = 0;
    double f4 = 0, f3 = 0, f2 = 0, f1 = 0;

    double inertia(double p) const { return (i2 * p + i1) * p + i0; }
    double forcing(double p) const { return (((f4 * p + f3) * p + f2) * p + f1) * p; }
};

FrontCoeffs front_coeffs(const Scenario& s, const RegularSolution& reg, double x, double t);

// Admissibility margin p * (p*a0 - b0 - c0*u0): positive iff the core profile
// has a real width and positive amplitude factor at speed p.
double admissibility_margin(const Scenario& s, const RegularSolution& reg, double x, double t,
                            double p);

struct PhaseCurve {
    OdeSolution traj;     // component 0: position, component 1: speed
    CubicSpline accel;    // p'(t) re-evaluated from the ODE right-hand side
    double t_end = 0.0;
    double min_margin = 0.0;

    double phi(double t) const { return traj.eval_component(t, 0); }
    double dphi(double t) const { return traj.eval_component(t, 1); }
    double ddphi(double t) const { return accel.deriv(t, 0); }
};

// Integrate the wavefront from (phi0, dphi0) to t = T.  Throws
// InadmissibleStart if the margin is non-positive at t = 0, TransversalityLoss
// if it degenerates along the way, and PhaseBlowup if the inertia factor
// vanishes or the speed leaves [-cap, cap].
PhaseCurve solve_phase(const Scenario& s, const RegularSolution& reg);

} // namespace bbm
