#include "bbm/bordered.hpp"

#include "bbm/errors.hpp"
#include "bbm/util.hpp"

#include <cmath>
#include <cstddef>

namespace bbm {

BorderedResult solve_bordered(const std::vector<double>& tau, double speed,
                              const std::vector<double>& pot, const std::vector<double>& w,
                              const std::vector<double>& rhs, double vL, double vR, double r,
                              BorderedScheme scheme) {
    const std::size_t N = tau.size();
    if (N < 8) throw GridMismatch("bordered solve needs at least 8 grid nodes");
    if (pot.size() != N || w.size() != N || rhs.size() != N)
        throw GridMismatch("bordered solve: array sizes disagree with the grid");
    if (speed == 0.0) throw LinearSolveFailure("bordered solve: zero wave speed");
    const double h = tau[1] - tau[0];
    for (std::size_t i = 0; i + 1 < N; ++i)
        if (std::abs((tau[i + 1] - tau[i]) - h) > 1e-9 * std::abs(h))
            throw GridMismatch("bordered solve requires a uniform grid");

    const std::size_t M = N - 2; // interior unknowns v_1..v_{N-2}
    // original band rows (boundary values absorbed into the right side)
    std::vector<double> sub(M, 0.0), dia(M, 0.0), sup(M, 0.0), mu_col(M, 0.0), bb(M, 0.0);
    const double h2 = h * h;
    if (scheme == BorderedScheme::numerov) {
        auto p = [&](std::size_t i) { return -pot[i] / speed; };
        for (std::size_t j = 0; j < M; ++j) {
            std::size_t i = j + 1;
            double cl = 1.0 - (h2 / 12.0) * p(i - 1);
            double cc = -2.0 - (10.0 * h2 / 12.0) * p(i);
            double cr = 1.0 - (h2 / 12.0) * p(i + 1);
            sub[j] = cl;
            dia[j] = cc;
            sup[j] = cr;
            mu_col[j] = (h2 / 12.0) * (w[i - 1] + 10.0 * w[i] + w[i + 1]) / speed;
            bb[j] = (h2 / 12.0) * (rhs[i - 1] + 10.0 * rhs[i] + rhs[i + 1]) / speed;
            if (j == 0) {
                bb[j] -= cl * vL;
                sub[j] = 0.0;
            }
            if (j == M - 1) {
                bb[j] -= cr * vR;
                sup[j] = 0.0;
            }
        }
    } else {
        auto p = [&](std::size_t i) { return -pot[i] / speed; };
        for (std::size_t j = 0; j < M; ++j) {
            std::size_t i = j + 1;
            sub[j] = 1.0;
            dia[j] = -2.0 - h2 * p(i);
            sup[j] = 1.0;
            mu_col[j] = h2 * w[i] / speed;
            bb[j] = h2 * rhs[i] / speed;
            if (j == 0) {
                bb[j] -= vL;
                sub[j] = 0.0;
            }
            if (j == M - 1) {
                bb[j] -= vR;
                sup[j] = 0.0;
            }
        }
    }

    // constraint row: trapezoid weights over the full grid, boundaries absorbed
    std::vector<double> con(M);
    for (std::size_t j = 0; j < M; ++j) con[j] = h * w[j + 1];
    double con_mu = 0.0;
    double con_b = r - h * (0.5 * w[0] * vL + 0.5 * w[N - 1] * vR);

    // arrow-LU sweep; rows carry (d at col j, u1 at col j+1, u2 at col j+2, m, b)
    std::vector<double> d(M), u1(M, 0.0), u2(M, 0.0), m(M), b(M);
    double cur_d = dia[0], cur_u1 = sup[0], cur_u2 = 0.0, cur_m = mu_col[0], cur_b = bb[0];
    for (std::size_t j = 0; j < M; ++j) {
        if (j + 1 < M) {
            // below row (original, untouched so far)
            double s = sub[j + 1], bd = dia[j + 1], bs = sup[j + 1], bm = mu_col[j + 1],
                   brhs = bb[j + 1];
            double p_d = cur_d, p_u1 = cur_u1, p_u2 = cur_u2, p_m = cur_m, p_b = cur_b;
            double e_j = s, e_u1 = bd, e_u2 = bs, e_m = bm, e_b = brhs;
            if (std::abs(s) > std::abs(cur_d)) {
                // pivot: the below row leads
                std::swap(p_d, e_j);
                std::swap(p_u1, e_u1);
                std::swap(p_u2, e_u2);
                std::swap(p_m, e_m);
                std::swap(p_b, e_b);
            }
            if (p_d == 0.0) throw LinearSolveFailure("bordered solve: zero pivot in band");
            double f = e_j / p_d;
            d[j] = p_d;
            u1[j] = p_u1;
            u2[j] = p_u2;
            m[j] = p_m;
            b[j] = p_b;
            cur_d = e_u1 - f * p_u1;
            cur_u1 = e_u2 - f * p_u2;
            cur_u2 = 0.0;
            cur_m = e_m - f * p_m;
            cur_b = e_b - f * p_b;
        } else {
            if (cur_d == 0.0) throw LinearSolveFailure("bordered solve: zero pivot in band");
            d[j] = cur_d;
            u1[j] = cur_u1;
            u2[j] = cur_u2;
            m[j] = cur_m;
            b[j] = cur_b;
        }
        // eliminate column j from the dense constraint row
        double fc = con[j] / d[j];
        if (j + 1 < M) con[j + 1] -= fc * u1[j];
        if (j + 2 < M) con[j + 2] -= fc * u2[j];
        con_mu -= fc * m[j];
        con_b -= fc * b[j];
    }

    if (std::abs(con_mu) < 1e-300)
        throw LinearSolveFailure("bordered solve: constraint is blind to the multiplier");
    double mu = con_b / con_mu;

    BorderedResult out;
    out.mu = mu;
    out.v.assign(N, 0.0);
    out.v[0] = vL;
    out.v[N - 1] = vR;
    for (std::size_t j = M; j-- > 0;) {
        double acc = b[j] - m[j] * mu;
        if (j + 1 < M) acc -= u1[j] * out.v[j + 2];     // col j+1 -> grid j+2
        if (j + 2 < M) acc -= u2[j] * out.v[j + 3];     // col j+2 -> grid j+3
        out.v[j + 1] = acc / d[j];
    }
    return out;
}

} // namespace bbm
