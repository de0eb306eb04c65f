#include "bbm/spline.hpp"

#include "bbm/errors.hpp"
#include "bbm/util.hpp"

#include <cmath>

namespace bbm {

void solve_tridiagonal(std::vector<double>& sub, std::vector<double>& diag,
                       std::vector<double>& sup, std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    if (n == 0) return;
    for (std::size_t i = 1; i < n; ++i) {
        if (diag[i - 1] == 0.0) throw LinearSolveFailure("tridiagonal solve hit a zero pivot");
        double w = sub[i - 1] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    if (diag[n - 1] == 0.0) throw LinearSolveFailure("tridiagonal solve hit a zero pivot");
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

namespace {

// Second derivatives m_i of the not-a-knot cubic spline.
std::vector<double> second_derivatives(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        if (!(h[i] > 0.0)) throw DegenerateFit("spline knots must strictly increase");
    }
    // interior unknowns m_1..m_{n-2}
    const std::size_t m = n - 2;
    std::vector<double> sub(m - 1), diag(m), sup(m - 1), rhs(m);
    for (std::size_t i = 1; i <= m; ++i) {
        double r = (y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1];
        rhs[i - 1] = r;
        if (i > 1) sub[i - 2] = h[i - 1] / 6.0;
        diag[i - 1] = (h[i - 1] + h[i]) / 3.0;
        if (i < m) sup[i - 1] = h[i] / 6.0;
    }
    // not-a-knot at the left end: m0 = m1 (1 + h0/h1) - m2 (h0/h1)
    {
        double r01 = h[0] / h[1];
        diag[0] += (h[0] / 6.0) * (1.0 + r01);
        if (m >= 2) sup[0] -= (h[0] / 6.0) * r01;
        else
            throw DegenerateFit("not-a-knot spline needs at least 4 knots");
    }
    // not-a-knot at the right end: m_{n-1} = m_{n-2} (1 + h_{n-2}/h_{n-3}) - m_{n-3} (h_{n-2}/h_{n-3})
    {
        double rr = h[n - 2] / h[n - 3];
        diag[m - 1] += (h[n - 2] / 6.0) * (1.0 + rr);
        sub[m - 2] -= (h[n - 2] / 6.0) * rr;
    }
    solve_tridiagonal(sub, diag, sup, rhs);
    std::vector<double> mm(n);
    for (std::size_t i = 0; i < m; ++i) mm[i + 1] = rhs[i];
    double r01 = h[0] / h[1];
    mm[0] = mm[1] * (1.0 + r01) - mm[2] * r01;
    double rr = h[n - 2] / h[n - 3];
    mm[n - 1] = mm[n - 2] * (1.0 + rr) - mm[n - 3] * rr;
    return mm;
}

} // namespace

CubicSpline::CubicSpline(std::vector<double> xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw GridMismatch("spline knot/value count mismatch");
    if (xs.size() < 4) throw DegenerateFit("not-a-knot spline needs at least 4 knots");
    std::vector<double> mm = second_derivatives(xs, ys);
    const std::size_t nc = xs.size() - 1;
    coef_.resize(4 * nc);
    for (std::size_t i = 0; i < nc; ++i) {
        double h = xs[i + 1] - xs[i];
        double* c = &coef_[4 * i];
        c[0] = ys[i];
        c[1] = (ys[i + 1] - ys[i]) / h - h * (2.0 * mm[i] + mm[i + 1]) / 6.0;
        c[2] = mm[i] / 2.0;
        c[3] = (mm[i + 1] - mm[i]) / (6.0 * h);
    }
    xs_ = std::move(xs);
}

double CubicSpline::deriv(double x, int k) const {
    if (empty()) throw OutOfDomain("evaluating an empty spline");
    std::size_t i = find_cell(xs_, x);
    double d = x - xs_[i];
    const double* c = &coef_[4 * i];
    switch (k) {
        case 0: return c[0] + d * (c[1] + d * (c[2] + d * c[3]));
        case 1: return c[1] + d * (2.0 * c[2] + d * 3.0 * c[3]);
        case 2: return 2.0 * c[2] + 6.0 * c[3] * d;
        case 3: return 6.0 * c[3];
        default: throw Error("spline derivative order must be 0..3");
    }
}

Grid2Spline::Grid2Spline(std::vector<double> xs, std::vector<double> ts,
                         const std::vector<double>& values) {
    const std::size_t nx = xs.size(), nt = ts.size();
    if (nx < 4 || nt < 4) throw DegenerateFit("grid spline needs at least 4 knots per axis");
    if (values.size() != nx * nt) throw GridMismatch("grid spline value count mismatch");

    const std::size_t xcells = nx - 1, tcells = nt - 1;
    // pass 1: per-t x-splines; collect power coefficients A[k][xcell][j]
    std::vector<double> A(4 * xcells * nt);
    {
        std::vector<double> col(nx);
        for (std::size_t j = 0; j < nt; ++j) {
            for (std::size_t i = 0; i < nx; ++i) col[i] = values[i * nt + j];
            CubicSpline sx(xs, col);
            for (std::size_t cell = 0; cell < xcells; ++cell) {
                const double* c = sx.cell_coeffs(cell);
                for (int k = 0; k < 4; ++k) A[(cell * 4 + k) * nt + j] = c[k];
            }
        }
    }
    // pass 2: per (xcell, k) t-splines of the coefficient arrays
    b_.resize(xcells * 4 * tcells * 4);
    {
        std::vector<double> row(nt);
        for (std::size_t cell = 0; cell < xcells; ++cell) {
            for (int k = 0; k < 4; ++k) {
                for (std::size_t j = 0; j < nt; ++j) row[j] = A[(cell * 4 + k) * nt + j];
                CubicSpline st(ts, row);
                for (std::size_t tc = 0; tc < tcells; ++tc) {
                    const double* c = st.cell_coeffs(tc);
                    for (int mI = 0; mI < 4; ++mI)
                        b_[((cell * 4 + static_cast<std::size_t>(k)) * tcells + tc) * 4 +
                           static_cast<std::size_t>(mI)] = c[mI];
                }
            }
        }
    }
    xs_ = std::move(xs);
    ts_ = std::move(ts);
    tcells_ = tcells;
}

double Grid2Spline::eval(double x, double t, int ox, int ot) const {
    if (empty()) throw OutOfDomain("evaluating an empty grid spline");
    if (ox < 0 || ox > 3 || ot < 0 || ot > 3)
        throw Error("grid spline derivative orders must be 0..3");
    std::size_t xc = find_cell(xs_, x);
    std::size_t tc = find_cell(ts_, t);
    double dx = x - xs_[xc];
    double dt = t - ts_[tc];

    // factorial-style weights for d^o/ds^o s^k
    auto poly_deriv = [](const double c[4], double d, int o) {
        switch (o) {
            case 0: return c[0] + d * (c[1] + d * (c[2] + d * c[3]));
            case 1: return c[1] + d * (2.0 * c[2] + d * 3.0 * c[3]);
            case 2: return 2.0 * c[2] + 6.0 * c[3] * d;
            default: return 6.0 * c[3];
        }
    };

    double ck[4]; // t-derivative of each x-power coefficient
    for (int k = 0; k < 4; ++k) {
        const double* c = &b_[((xc * 4 + static_cast<std::size_t>(k)) * tcells_ + tc) * 4];
        ck[k] = poly_deriv(c, dt, ot);
    }
    return poly_deriv(ck, dx, ox);
}

} // namespace bbm
