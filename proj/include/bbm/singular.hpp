#pragma once

#include "bbm/bordered.hpp"
#include "bbm/phase.hpp"
#include "bbm/regular.hpp"
#include "bbm/scenario.hpp"
#include "bbm/spline.hpp"

#include <vector>

namespace bbm {

// Snapshot of everything the core-profile layer needs at one instant on the
// wavefront: coefficient jets at (phi(t), t), background jets, the amplitude
// factor A = p*a0 - (b0 + c0*u0), width kappa = sqrt(A/p)/2, peak height
// m = 3A/c0, and their time rates along the curve.
struct CoreState {
    double t = 0, x = 0;
    double p = 0, pdot = 0;
    double a0 = 0, b0 = 0, c0 = 0;
    double a0x = 0, b0x = 0, c0x = 0;
    double a0t = 0, b0t = 0, c0t = 0;
    double a1 = 0, b1 = 0, c1 = 0;
    double u0 = 0, u0x = 0, u0t = 0, u1 = 0;
    double al = 0, alx = 0, alt = 0; // al = b0 + c0*u0
    double A = 0, kappa = 0, m = 0;
    double Adot = 0, c0dot = 0, mdot = 0, kapdot = 0;
    double margin = 0; // p * A
};

// Closed-form jets of the moving core profile m sech^2(kappa (tau + C0)).
struct ProfileJet {
    double v = 0;            // value
    double d1 = 0, d2 = 0, d3 = 0; // tau derivatives
    double dt = 0;           // time derivative at fixed tau
    double d2t = 0;          // time derivative of d2
};

class SolitonCore {
  public:
    SolitonCore() = default;
    SolitonCore(const Scenario& s, const RegularSolution& reg, const PhaseCurve& pc,
                double inflate = 1.0);

    // State along the solved curve (speed scaled by the diagnostic inflation
    // factor), or with an explicitly overridden speed pair.
    CoreState state(double t) const;
    CoreState state_with(double t, double p, double pdot) const;

    ProfileJet profile(const CoreState& cs, double tau) const;

    // First-corrector forcing F1(tau) in the moving frame.
    double forcing1(const CoreState& cs, double tau) const;

    // Tail-decay functional: zero iff the mass shed by the core into the
    // trailing shelf vanishes.  The line integral of forcing1 equals
    // -12 * decay_functional.
    double decay_functional(const CoreState& cs) const;

    const Scenario& scenario() const { return *s_; }
    const RegularSolution& regular() const { return *reg_; }
    const PhaseCurve& phase() const { return *pc_; }
    double inflation() const { return inflate_; }

  private:
    const Scenario* s_ = nullptr;
    const RegularSolution* reg_ = nullptr;
    const PhaseCurve* pc_ = nullptr;
    double inflate_ = 1.0;
};

// One time slice of the interior corrector problem: the integrated forcing
// Phi1 (vanishing as tau -> +inf), the corrector v1 solving
// p v1'' + (c0 v0 - A) v1 + mu v0' = Phi1 with v1(-tau_b) = nu1, v1(+tau_b) = 0,
// and the slice diagnostics.
struct Slice {
    double t = 0;
    CoreState cs;
    std::vector<double> tau;
    CubicSpline v1;          // includes the kernel admixture C3 * v0'
    CubicSpline Phi1;
    double E1 = 0;           // -(line integral of F1)
    double nu1 = 0;          // shelf height behind the core
    double F1_total = 0;     // line integral of F1  ( = -E1 )
    double D = 0;            // decay functional
    double orth = 0;         // normalized |<Phi1, v0'>|
    double mu = 0;           // kernel multiplier from the bordered solve
};

struct SingularOptions {
    double h_tau = 0.008;        // target interior step of the slice grids
    std::size_t n_slices = 65;   // Chebyshev-Lobatto time slices
    double inflate = 1.0;        // diagnostic speed desynchronization
    BorderedScheme scheme = BorderedScheme::numerov;
};

struct SliceSet {
    SolitonCore core;
    std::vector<Slice> slices;   // ascending in t
    std::vector<double> times;
    CubicSpline nu1_t;           // nu1 as a function of time
    double tau_b = 0;            // half-width of the slice grids
    bool decaying = false;       // exponential tail class
    double sup_nu1 = 0, sup_D = 0;

    std::size_t cell_of(double t) const;
    double nu1(double t, int dt = 0) const;
};

SliceSet build_slices(const Scenario& s, const RegularSolution& reg, const PhaseCurve& pc,
                      const SingularOptions& opts = {}, unsigned jobs = 1);

// Jet of the interior corrector at arbitrary (t, tau): values and tau
// derivatives interpolate linearly in t between the bracketing slices; the
// second and third tau derivatives come from the slice ODE identities
//     p v1'' = Phi1 - (c0 v0 - A) v1 - mu v0'
//     p v1''' = F1 - (c0 v0 - A) v1' - c0 v0' v1 - mu v0''
// so the leading cancellations downstream hold to machine precision.
struct CorrectorJet {
    double v1 = 0, d1 = 0, d2 = 0, d3 = 0;
    double dt = 0;   // time derivative at fixed tau
    double d2t = 0;  // time derivative of the second tau derivative
    double Phi1 = 0;
};

CorrectorJet corrector_jet(const SliceSet& set, double t, double tau);

} // namespace bbm
