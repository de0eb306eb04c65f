#include "bbm/ode.hpp"

#include "bbm/errors.hpp"
#include "bbm/util.hpp"

#include <algorithm>
#include <cmath>

namespace bbm {

namespace {

// Dormand–Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
// error weights (5th-order minus embedded 4th-order)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output weights
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

double dense_theta(const DenseSegment& s, double t) { return (t - s.t0) / s.h; }

OdeSolution run(const OdeRhs& f, double t0, std::vector<double> y0, double t1,
                const OdeOpts& opts, const StepObserver* observer) {
    const std::size_t n = y0.size();
    OdeSolution sol;
    sol.t_begin = t0;
    sol.t_end = t1;
    if (t1 == t0 || n == 0) {
        sol.y_end = y0;
        sol.t_stop = t1;
        return sol;
    }
    const double posneg = t1 > t0 ? 1.0 : -1.0;
    const double hmax = opts.h_max > 0 ? opts.h_max : std::abs(t1 - t0);

    std::vector<double> y = std::move(y0);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);

    auto scaled_norm = [&](const std::vector<double>& v, const std::vector<double>& ya,
                           const std::vector<double>& yb) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double sk = opts.abs_tol + opts.rel_tol * std::max(std::abs(ya[i]), std::abs(yb[i]));
            double q = v[i] / sk;
            s += q * q;
        }
        return std::sqrt(s / static_cast<double>(n));
    };

    double t = t0;
    f(t, y, k1);

    // --- initial step size (standard two-derivative heuristic) ---
    double h = opts.h_init;
    if (h == 0.0) {
        double dnf = 0, dny = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double sk = opts.abs_tol + opts.rel_tol * std::abs(y[i]);
            dnf += (k1[i] / sk) * (k1[i] / sk);
            dny += (y[i] / sk) * (y[i] / sk);
        }
        double h0 = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
        h0 = std::min(h0, hmax);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + posneg * h0 * k1[i];
        f(t + posneg * h0, ytmp, k2);
        double der2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double sk = opts.abs_tol + opts.rel_tol * std::abs(y[i]);
            double q = (k2[i] - k1[i]) / sk;
            der2 += q * q;
        }
        der2 = std::sqrt(der2 / static_cast<double>(n)) / h0;
        double der12 = std::max(der2, std::sqrt(dnf));
        double h1 = der12 <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                   : std::pow(0.01 / der12, 0.2);
        h = std::min({100.0 * h0, h1, hmax});
    }
    h = posneg * std::min(std::abs(h), hmax);

    // PI controller state
    const double beta = 0.04, safe = 0.9, fac1 = 0.2, fac2 = 10.0;
    const double expo1 = 0.2 - beta * 0.75;
    double facold = 1e-4;
    bool last_rejected = false;
    bool finished = false;

    while (!finished) {
        if (sol.n_accepted + sol.n_rejected > opts.max_steps)
            throw Error("time stepper exceeded the step budget");
        if (std::abs(h) <= std::abs(t) * 1e-16 + 1e-300)
            throw Error("time step underflow at t = " + fmt17(t));
        if ((t + 1.01 * h - t1) * posneg > 0.0) {
            h = t1 - t;
            finished = true; // tentatively the last step
        }

        // stages (k1 already holds f(t, y) by FSAL)
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        f(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        f(t + h, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                                  a76 * k6[i]);
        f(t + h, ynew, k7);

        // embedded error estimate
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                           e7 * k7[i]);
        double err = scaled_norm(ytmp, y, ynew);

        double fac11 = std::pow(std::max(err, 1e-30), expo1);
        if (err <= 1.0) {
            // accept
            facold = std::max(err, 1e-4);
            DenseSegment seg;
            seg.t0 = t;
            seg.h = h;
            seg.rcont1.resize(n);
            seg.rcont2.resize(n);
            seg.rcont3.resize(n);
            seg.rcont4.resize(n);
            seg.rcont5.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                double ydiff = ynew[i] - y[i];
                double bspl = h * k1[i] - ydiff;
                seg.rcont1[i] = y[i];
                seg.rcont2[i] = ydiff;
                seg.rcont3[i] = bspl;
                seg.rcont4[i] = ydiff - h * k7[i] - bspl;
                seg.rcont5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                     d6 * k6[i] + d7 * k7[i]);
            }
            t += h;
            y = ynew;
            k1 = k7; // FSAL
            ++sol.n_accepted;
            sol.segments.push_back(std::move(seg));
            if (observer && !(*observer)(sol.segments.back(), y)) {
                sol.stopped_early = true;
                finished = true;
            }
            if (!finished || sol.stopped_early) {
                double fac = fac11 / std::pow(facold, beta);
                fac = std::max(1.0 / fac2, std::min(1.0 / fac1, fac / safe));
                double hnew = h / fac;
                if (last_rejected) hnew = posneg * std::min(std::abs(hnew), std::abs(h));
                h = posneg * std::min(std::abs(hnew), hmax);
                last_rejected = false;
            }
        } else {
            // reject
            double hnew = h / std::min(1.0 / fac1, fac11 / safe);
            h = hnew;
            last_rejected = true;
            ++sol.n_rejected;
            finished = false;
        }
    }

    sol.y_end = y;
    sol.t_stop = t;
    if (posneg < 0) std::reverse(sol.segments.begin(), sol.segments.end());
    sol.left_edges.reserve(sol.segments.size());
    for (const auto& s : sol.segments) sol.left_edges.push_back(std::min(s.t0, s.t0 + s.h));
    return sol;
}

} // namespace

void DenseSegment::eval(double t, std::vector<double>& y) const {
    double th = dense_theta(*this, t);
    double th1 = 1.0 - th;
    y.resize(rcont1.size());
    for (std::size_t i = 0; i < rcont1.size(); ++i)
        y[i] = rcont1[i] +
               th * (rcont2[i] + th1 * (rcont3[i] + th * (rcont4[i] + th1 * rcont5[i])));
}

double DenseSegment::eval_component(double t, std::size_t i) const {
    double th = dense_theta(*this, t);
    double th1 = 1.0 - th;
    return rcont1[i] + th * (rcont2[i] + th1 * (rcont3[i] + th * (rcont4[i] + th1 * rcont5[i])));
}

double DenseSegment::eval_derivative(double t, std::size_t i) const {
    // d/dtheta of rcont1 + th*(rcont2 + (1-th)*(rcont3 + th*(rcont4 + (1-th)*rcont5)))
    // y(th) = a + b*th + c*th*(1-th) + d*th^2*(1-th) + e*th^2*(1-th)^2
    double th = dense_theta(*this, t);
    double b = rcont2[i], c = rcont3[i], d = rcont4[i], e = rcont5[i];
    double dth = b + c * (1 - 2 * th) + d * (2 * th - 3 * th * th) +
                 e * (2 * th * (1 - th) * (1 - 2 * th));
    return dth / h;
}

namespace {

// Index of the segment whose span contains t (last segment owns everything
// from its left edge onward, since left_edges only lists left endpoints).
std::size_t segment_index(const std::vector<double>& left_edges, double t) {
    if (left_edges.size() < 2) return 0;
    std::size_t i = find_cell(left_edges, t);
    if (i + 2 == left_edges.size() && t >= left_edges.back()) i = left_edges.size() - 1;
    return i;
}

} // namespace

void OdeSolution::eval(double t, std::vector<double>& y) const {
    if (segments.empty()) {
        y = y_end;
        return;
    }
    segments[segment_index(left_edges, t)].eval(t, y);
}

double OdeSolution::eval_component(double t, std::size_t i) const {
    if (segments.empty()) return y_end.at(i);
    return segments[segment_index(left_edges, t)].eval_component(t, i);
}

double OdeSolution::eval_derivative(double t, std::size_t i) const {
    if (segments.empty()) throw OutOfDomain("no stored segments to differentiate");
    return segments[segment_index(left_edges, t)].eval_derivative(t, i);
}

OdeSolution dopri5(const OdeRhs& f, double t0, std::vector<double> y0, double t1,
                   const OdeOpts& opts) {
    return run(f, t0, std::move(y0), t1, opts, nullptr);
}

OdeSolution dopri5_observed(const OdeRhs& f, double t0, std::vector<double> y0, double t1,
                            const OdeOpts& opts, const StepObserver& observer) {
    return run(f, t0, std::move(y0), t1, opts, &observer);
}

} // namespace bbm
