#include "bbm/phase.hpp"

#include "bbm/errors.hpp"
#include "bbm/util.hpp"

#include <cmath>
#include <string>

namespace bbm {

FrontCoeffs front_coeffs(const Scenario& s, const RegularSolution& reg, double x, double t) {
    const double a0 = s.a0.v(x, t), a0x = s.a0.dx(x, t), a0t = s.a0.dt(x, t);
    const double b0 = s.b0.v(x, t), b0x = s.b0.dx(x, t), b0t = s.b0.dt(x, t);
    const double c0 = s.c0.v(x, t), c0x = s.c0.dx(x, t), c0t = s.c0.dt(x, t);
    const double u0 = reg.u0(x, t);
    const double u0x = reg.u0(x, t, 1, 0);
    const double u0t = reg.u0(x, t, 0, 1);

    const double al = b0 + c0 * u0;
    const double alx = b0x + c0x * u0 + c0 * u0x;
    const double alt = b0t + c0t * u0 + c0 * u0t;

    FrontCoeffs k;
    k.i2 = 24.0 * a0 * a0 * c0;
    k.i1 = -8.0 * a0 * c0 * al;
    k.i0 = -c0 * al * al;
    k.f4 = -40.0 * c0x * a0 * a0 + 30.0 * a0 * a0x * c0;
    k.f3 = 60.0 * a0 * c0x * al + 20.0 * a0 * a0t * c0 - 24.0 * a0 * a0 * c0t -
           30.0 * a0 * c0 * alx - 15.0 * a0x * c0 * al + 20.0 * a0 * c0 * c0 * u0x;
    k.f2 = -20.0 * a0 * c0 * alt - 5.0 * a0t * c0 * al + 15.0 * c0 * al * alx +
           28.0 * a0 * c0t * al - 20.0 * c0 * c0 * u0x * al - 20.0 * c0x * al * al;
    k.f1 = 5.0 * c0 * al * alt - 4.0 * c0t * al * al;
    return k;
}

double admissibility_margin(const Scenario& s, const RegularSolution& reg, double x, double t,
                            double p) {
    const double al = s.b0.v(x, t) + s.c0.v(x, t) * reg.u0(x, t);
    return p * (p * s.a0.v(x, t) - al);
}

PhaseCurve solve_phase(const Scenario& s, const RegularSolution& reg) {
    const double m0 = admissibility_margin(s, reg, s.phi0, 0.0, s.dphi0);
    if (!(m0 > 0.0))
        throw InadmissibleStart("initial wavefront speed " + fmt17(s.dphi0) +
                                    " is not admissible: margin = " + fmt17(m0),
                                m0);

    const double speed_cap = 100.0 * (std::abs(s.dphi0) + 1.0);

    auto rhs = [&](double t, const std::vector<double>& y, std::vector<double>& dy) {
        FrontCoeffs k = front_coeffs(s, reg, y[0], t);
        double inertia = k.inertia(y[1]);
        if (inertia == 0.0)
            throw PhaseBlowup("wavefront inertia factor vanished at t = " + fmt17(t), t);
        dy[0] = y[1];
        dy[1] = -k.forcing(y[1]) / inertia;
    };

    PhaseCurve pc;
    pc.t_end = s.T;
    pc.min_margin = m0;

    OdeOpts opts;
    opts.abs_tol = 1e-12;
    opts.rel_tol = 1e-12;

    const double inertia0 = front_coeffs(s, reg, s.phi0, 0.0).inertia(s.dphi0);

    auto observer = [&](const DenseSegment& seg, const std::vector<double>& y_end) {
        (void)y_end;
        const int probes = 8;
        std::vector<double> y(2);
        for (int i = 1; i <= probes; ++i) {
            double t = seg.t0 + seg.h * double(i) / double(probes);
            seg.eval(t, y);
            if (std::abs(y[1]) > speed_cap)
                throw PhaseBlowup("wavefront speed exceeded " + fmt17(speed_cap) +
                                      " at t = " + fmt17(t),
                                  t);
            double margin = admissibility_margin(s, reg, y[0], t, y[1]);
            pc.min_margin = std::min(pc.min_margin, margin);
            if (!(margin > 0.0))
                throw TransversalityLoss("wavefront speed degenerated to the background "
                                         "transport speed near t = " +
                                         fmt17(t));
            double inertia = front_coeffs(s, reg, y[0], t).inertia(y[1]);
            if (inertia * inertia0 <= 0.0)
                throw PhaseBlowup("wavefront inertia factor changed sign at t = " + fmt17(t),
                                  t);
        }
        return true;
    };

    pc.traj = dopri5_observed(rhs, 0.0, {s.phi0, s.dphi0}, s.T, opts, observer);

    // Re-evaluate the acceleration from the right-hand side on a dense grid so
    // downstream consumers see values exactly consistent with the law.
    const std::size_t n = 513;
    std::vector<double> tq = chebyshev_lobatto(0.0, s.T, n);
    std::vector<double> acc(n);
    std::vector<double> y(2), dy(2);
    for (std::size_t i = 0; i < n; ++i) {
        pc.traj.eval(tq[i], y);
        rhs(tq[i], y, dy);
        acc[i] = dy[1];
    }
    pc.accel = CubicSpline(tq, acc);
    return pc;
}

} // namespace bbm
