#include "bbm/singular.hpp"

#include "bbm/errors.hpp"
#include "bbm/ode.hpp"
#include "bbm/quad.hpp"
#include "bbm/util.hpp"

#include <algorithm>
#include <cmath>

namespace bbm {

namespace {

double trap(const std::vector<double>& tau, const std::vector<double>& f) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < tau.size(); ++i)
        s += 0.5 * (tau[i + 1] - tau[i]) * (f[i] + f[i + 1]);
    return s;
}

} // namespace

SolitonCore::SolitonCore(const Scenario& s, const RegularSolution& reg, const PhaseCurve& pc,
                         double inflate)
    : s_(&s), reg_(&reg), pc_(&pc), inflate_(inflate) {}

CoreState SolitonCore::state(double t) const {
    return state_with(t, inflate_ * pc_->dphi(t), inflate_ * pc_->ddphi(t));
}

CoreState SolitonCore::state_with(double t, double p, double pdot) const {
    CoreState cs;
    cs.t = t;
    cs.x = pc_->phi(t);
    cs.p = p;
    cs.pdot = pdot;

    const double x = cs.x;
    cs.a0 = s_->a0.v(x, t); cs.a0x = s_->a0.dx(x, t); cs.a0t = s_->a0.dt(x, t);
    cs.b0 = s_->b0.v(x, t); cs.b0x = s_->b0.dx(x, t); cs.b0t = s_->b0.dt(x, t);
    cs.c0 = s_->c0.v(x, t); cs.c0x = s_->c0.dx(x, t); cs.c0t = s_->c0.dt(x, t);
    cs.a1 = s_->a1.v(x, t);
    cs.b1 = s_->b1.v(x, t);
    cs.c1 = s_->c1.v(x, t);
    cs.u0 = reg_->u0(x, t);
    cs.u0x = reg_->u0(x, t, 1, 0);
    cs.u0t = reg_->u0(x, t, 0, 1);
    cs.u1 = reg_->u1(x, t);

    cs.al = cs.b0 + cs.c0 * cs.u0;
    cs.alx = cs.b0x + cs.c0x * cs.u0 + cs.c0 * cs.u0x;
    cs.alt = cs.b0t + cs.c0t * cs.u0 + cs.c0 * cs.u0t;

    cs.A = p * cs.a0 - cs.al;
    cs.margin = p * cs.A;
    if (!(cs.margin > 0.0))
        throw TransversalityLoss("core profile is degenerate at t = " + fmt17(t) +
                                 " (margin = " + fmt17(cs.margin) + ")");
    cs.kappa = 0.5 * std::sqrt(cs.A / p);
    cs.m = 3.0 * cs.A / cs.c0;

    cs.Adot = pdot * cs.a0 + p * p * cs.a0x + p * cs.a0t - p * cs.alx - cs.alt;
    cs.c0dot = cs.c0x * p + cs.c0t;
    cs.mdot = 3.0 * (cs.Adot * cs.c0 - cs.A * cs.c0dot) / (cs.c0 * cs.c0);
    cs.kapdot = (cs.Adot * p - cs.A * pdot) / (8.0 * cs.kappa * p * p);
    return cs;
}

ProfileJet SolitonCore::profile(const CoreState& cs, double tau) const {
    const double arg = cs.kappa * (tau + s_->C0);
    const double S = 1.0 / std::cosh(arg);
    const double T = std::tanh(arg);
    const double S2 = S * S;
    const double k = cs.kappa;

    ProfileJet j;
    j.v = cs.m * S2;
    j.d1 = -2.0 * cs.m * k * S2 * T;
    j.d2 = -2.0 * cs.m * k * k * (S2 * S2 - 2.0 * S2 * T * T);
    j.d3 = -2.0 * cs.m * k * k * k * (-8.0 * S2 * S2 * T + 4.0 * S2 * T * T * T);
    const double argdot = cs.kapdot * (tau + s_->C0);
    j.dt = cs.mdot * S2 - 2.0 * cs.m * S2 * T * argdot;
    j.d2t = -2.0 * (cs.mdot * k * k + 2.0 * cs.m * k * cs.kapdot) *
                (S2 * S2 - 2.0 * S2 * T * T) -
            2.0 * cs.m * k * k * (-8.0 * S2 * S2 * T + 4.0 * S2 * T * T * T) * argdot;
    return j;
}

double SolitonCore::forcing1(const CoreState& cs, double tau) const {
    const ProfileJet j = profile(cs, tau);
    return -cs.a0 * j.dt - cs.c0 * cs.u0x * j.v -
           (cs.c0x * cs.u0 + cs.c0 * cs.u0x - cs.p * cs.a0x + cs.b0x) * tau * j.d1 -
           (cs.c0x * tau + cs.c1) * j.v * j.d1 -
           (cs.c0 * cs.u1 + cs.c1 * cs.u0 - cs.p * cs.a1 + cs.b1) * j.d1 + j.d2t;
}

double SolitonCore::decay_functional(const CoreState& cs) const {
    const double root = std::sqrt(cs.A * cs.p);
    const double S = root / cs.c0;
    const double Sdot =
        ((cs.Adot * cs.p + cs.A * cs.pdot) / (2.0 * root) - root * cs.c0dot / cs.c0) / cs.c0;
    return cs.a0 * Sdot +
           S * (cs.p * cs.a0x - cs.b0x - cs.c0x * cs.u0 - (cs.A / cs.c0) * cs.c0x);
}

std::size_t SliceSet::cell_of(double t) const {
    return find_cell(times, t);
}

double SliceSet::nu1(double t, int dt) const {
    return nu1_t.deriv(std::min(std::max(t, times.front()), times.back()), dt);
}

SliceSet build_slices(const Scenario& s, const RegularSolution& reg, const PhaseCurve& pc,
                      const SingularOptions& opts, unsigned jobs) {
    if (opts.n_slices < 4) throw ConfigError("need at least 4 time slices");
    SliceSet set;
    set.core = SolitonCore(s, reg, pc, opts.inflate);
    set.times = chebyshev_lobatto(0.0, s.T, opts.n_slices);

    double tau_b = s.tau_max;
    if (!s.tau_max_set) {
        double kap_min = std::numeric_limits<double>::infinity();
        for (double t : set.times) kap_min = std::min(kap_min, set.core.state(t).kappa);
        tau_b = std::max(40.0, 60.0 / kap_min);
    }
    set.tau_b = tau_b;

    const std::size_t half = std::max<std::size_t>(8, std::size_t(std::ceil(tau_b / opts.h_tau)));
    const std::size_t n_nodes = 2 * half + 1;
    const std::vector<double> nodes = linspace(-tau_b, tau_b, n_nodes);

    set.slices.resize(set.times.size());
    parallel_for(set.times.size(), jobs, [&](std::size_t k) {
        Slice& sl = set.slices[k];
        sl.t = set.times[k];
        sl.cs = set.core.state(sl.t);
        sl.tau = nodes;

        auto F1 = [&](double tau) { return set.core.forcing1(sl.cs, tau); };
        std::vector<double> cum = gk_cumulative(F1, nodes, 1e-13);
        const double total = cum.back();

        std::vector<double> phi(n_nodes);
        for (std::size_t i = 0; i < n_nodes; ++i) phi[i] = cum[i] - total;

        sl.F1_total = total;
        sl.E1 = -total;
        sl.nu1 = total / sl.cs.A;
        sl.D = set.core.decay_functional(sl.cs);

        std::vector<double> pot(n_nodes), w(n_nodes);
        for (std::size_t i = 0; i < n_nodes; ++i) {
            ProfileJet j = set.core.profile(sl.cs, nodes[i]);
            pot[i] = sl.cs.c0 * j.v - sl.cs.A;
            w[i] = j.d1;
        }

        BorderedResult br = solve_bordered(nodes, sl.cs.p, pot, w, phi, sl.nu1, 0.0, 0.0,
                                           opts.scheme);
        sl.mu = br.mu;

        std::vector<double> v1 = br.v;
        if (s.C3 != 0.0)
            for (std::size_t i = 0; i < n_nodes; ++i) v1[i] += s.C3 * w[i];
        if (s.C4 != 0.0) {
            // Diagnostic admixture of the even homogeneous solution, grown
            // outward from tau = 0 with y(0) = 1, y'(0) = 0.
            OdeOpts oo;
            oo.abs_tol = 1e-12;
            oo.rel_tol = 1e-12;
            auto hom = [&](double tau, const std::vector<double>& y, std::vector<double>& dy) {
                ProfileJet j = set.core.profile(sl.cs, tau);
                dy[0] = y[1];
                dy[1] = (sl.cs.A - sl.cs.c0 * j.v) / sl.cs.p * y[0];
            };
            OdeSolution right = dopri5(hom, 0.0, {1.0, 0.0}, tau_b, oo);
            OdeSolution left = dopri5(hom, 0.0, {1.0, 0.0}, -tau_b, oo);
            for (std::size_t i = 0; i < n_nodes; ++i) {
                double tau = nodes[i];
                double y = tau >= 0.0 ? right.eval_component(tau, 0)
                                      : left.eval_component(tau, 0);
                v1[i] += s.C4 * y;
            }
        }

        // Discrete diagnostics share the trapezoid inner product used by the
        // constraint row of the bordered solve.
        std::vector<double> pw(n_nodes), p2(n_nodes), w2(n_nodes);
        for (std::size_t i = 0; i < n_nodes; ++i) {
            pw[i] = phi[i] * w[i];
            p2[i] = phi[i] * phi[i];
            w2[i] = w[i] * w[i];
        }
        const double n1 = std::sqrt(trap(nodes, p2));
        const double n2 = std::sqrt(trap(nodes, w2));
        sl.orth = std::abs(trap(nodes, pw)) / std::max(1e-300, n1 * n2);

        sl.v1 = CubicSpline(nodes, v1);
        sl.Phi1 = CubicSpline(nodes, phi);
    });

    std::vector<double> nu(set.times.size());
    double sup_nu = 0.0, sup_d = 0.0, sup_v1 = 0.0, sup_phi = 0.0;
    for (std::size_t k = 0; k < set.slices.size(); ++k) {
        const Slice& sl = set.slices[k];
        nu[k] = sl.nu1;
        sup_nu = std::max(sup_nu, std::abs(sl.nu1));
        sup_d = std::max(sup_d, std::abs(sl.D));
        for (std::size_t i = 0; i < n_nodes; ++i) {
            sup_v1 = std::max(sup_v1, std::abs(sl.v1.deriv(nodes[i], 0)));
            sup_phi = std::max(sup_phi, std::abs(sl.Phi1.deriv(nodes[i], 0)));
        }
    }
    set.nu1_t = CubicSpline(set.times, nu);
    set.sup_nu1 = sup_nu;
    set.sup_D = sup_d;
    set.decaying = sup_nu <= 1e-7 * std::max(1.0, sup_v1) &&
                   12.0 * sup_d <= 1e-7 * std::max(1.0, sup_phi);
    return set;
}

CorrectorJet corrector_jet(const SliceSet& set, double t, double tau) {
    const std::size_t cell = set.cell_of(t);
    const Slice& s0 = set.slices[cell];
    const Slice& s1 = set.slices[cell + 1];
    const double dt_cell = s1.t - s0.t;
    double w = (t - s0.t) / dt_cell;
    w = std::min(std::max(w, 0.0), 1.0);

    const SolitonCore& core = set.core;
    const CoreState cs = core.state(t);
    const ProfileJet pj = core.profile(cs, tau);

    const double v1_0 = s0.v1.deriv(tau, 0), v1_1 = s1.v1.deriv(tau, 0);
    const double d1_0 = s0.v1.deriv(tau, 1), d1_1 = s1.v1.deriv(tau, 1);
    const double phi_0 = s0.Phi1.deriv(tau, 0), phi_1 = s1.Phi1.deriv(tau, 0);

    CorrectorJet j;
    j.v1 = (1.0 - w) * v1_0 + w * v1_1;
    j.d1 = (1.0 - w) * d1_0 + w * d1_1;
    j.Phi1 = (1.0 - w) * phi_0 + w * phi_1;
    j.dt = (v1_1 - v1_0) / dt_cell;

    const double mu = (1.0 - w) * s0.mu + w * s1.mu;
    const double pot = cs.c0 * pj.v - cs.A;
    j.d2 = (j.Phi1 - pot * j.v1 - mu * pj.d1) / cs.p;

    const double F1 = core.forcing1(cs, tau);
    j.d3 = (F1 - pot * j.d1 - cs.c0 * pj.d1 * j.v1 - mu * pj.d2) / cs.p;

    // time slope of the second tau derivative, from the per-slice identities
    auto d2_at = [&](const Slice& sl, double v1v) {
        ProfileJet pjk = core.profile(sl.cs, tau);
        double potk = sl.cs.c0 * pjk.v - sl.cs.A;
        double phik = (&sl == &s0) ? phi_0 : phi_1;
        return (phik - potk * v1v - sl.mu * pjk.d1) / sl.cs.p;
    };
    j.d2t = (d2_at(s1, v1_1) - d2_at(s0, v1_0)) / dt_cell;
    return j;
}

} // namespace bbm
