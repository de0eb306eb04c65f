#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace bbm {

// Right-hand side of y' = f(t, y); writes into dy (pre-sized to y.size()).
using OdeRhs = std::function<void(double t, const std::vector<double>& y, std::vector<double>& dy)>;

struct OdeOpts {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    double h_init = 0.0;          // 0: automatic
    double h_max = 0.0;           // 0: whole interval
    std::size_t max_steps = 2000000;
};

// One accepted step with a locally quartic interpolant (classic embedded
// fifth-order pair continuous extension).  Covers [t0, t0+h] (h may be
// negative for backward integration).
struct DenseSegment {
    double t0 = 0.0, h = 0.0;
    std::vector<double> rcont1, rcont2, rcont3, rcont4, rcont5;

    void eval(double t, std::vector<double>& y) const;
    double eval_component(double t, std::size_t i) const;
    // time derivative of the interpolant (used for curve-speed queries)
    double eval_derivative(double t, std::size_t i) const;
};

struct OdeSolution {
    double t_begin = 0.0, t_end = 0.0;
    std::vector<double> y_end;
    std::vector<DenseSegment> segments; // sorted by left edge ascending
    std::vector<double> left_edges;     // search index
    std::size_t n_accepted = 0, n_rejected = 0;
    bool stopped_early = false;         // observer requested stop
    double t_stop = 0.0;                // where integration actually ended

    void eval(double t, std::vector<double>& y) const;
    double eval_component(double t, std::size_t i) const;
    double eval_derivative(double t, std::size_t i) const;
};

// Explicit Runge–Kutta 5(4) (Dormand–Prince coefficients, FSAL, PI step
// control) with continuous dense output.  Integrates from t0 to t1 in either
// direction.  Throws LinearSolveFailure-free errors only: Error on step-count
// exhaustion or underflowing step size.
OdeSolution dopri5(const OdeRhs& f, double t0, std::vector<double> y0, double t1,
                   const OdeOpts& opts = {});

// Observer variant: called after every accepted step with the new segment;
// returning false stops the integration (solution reports stopped_early and
// t_stop).  Useful for event-ish monitoring without root polishing.
using StepObserver = std::function<bool(const DenseSegment& seg, const std::vector<double>& y)>;
OdeSolution dopri5_observed(const OdeRhs& f, double t0, std::vector<double> y0, double t1,
                            const OdeOpts& opts, const StepObserver& observer);

} // namespace bbm
