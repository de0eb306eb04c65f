#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bbm/errors.hpp"
#include "bbm/ode.hpp"
#include "bbm/phase.hpp"
#include "bbm/regular.hpp"
#include "bbm/scenario.hpp"

#include <cmath>
#include <string>

using namespace bbm;

namespace {

Scenario make(const std::string& a0, const std::string& b0, const std::string& c0,
              double dphi0, double T, double x_min, double x_max) {
    std::string text;
    text += "a0 = \"" + a0 + "\"\nb0 = \"" + b0 + "\"\nc0 = \"" + c0 + "\"\n";
    text += "a1 = \"0\"\nb1 = \"0\"\nc1 = \"0\"\nu0_init = \"0\"\nu1_init = \"0\"\n";
    text += "T = " + std::to_string(T) + "\n";
    text += "x_min = " + std::to_string(x_min) + "\nx_max = " + std::to_string(x_max) + "\n";
    text += "n_x = 128\nn_t = 64\nphi0 = 0\n";
    text += "dphi0 = " + std::to_string(dphi0) + "\neps = [0.1]\nn = 2\n";
    Scenario s = load_scenario_text(text, "inline");
    validate(s);
    return s;
}

} // namespace

TEST_CASE("constant coefficients give an exactly straight wavefront") {
    Scenario s = make("1", "1", "1", 2.0, 1.0, -5.0, 7.0);
    RegularSolution reg = solve_regular(s);
    PhaseCurve pc = solve_phase(s, reg);
    for (int i = 0; i <= 10; ++i) {
        double t = i / 10.0;
        CHECK(std::abs(pc.phi(t) - 2.0 * t) <= 1e-12);
        CHECK(std::abs(pc.dphi(t) - 2.0) <= 1e-12);
        CHECK(std::abs(pc.ddphi(t)) <= 1e-11);
    }
    CHECK(pc.min_margin == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("left-moving front is admissible and straight for constant coefficients") {
    Scenario s = make("1", "1", "1", -0.5, 1.0, -5.0, 7.0);
    RegularSolution reg = solve_regular(s);
    PhaseCurve pc = solve_phase(s, reg);
    CHECK(std::abs(pc.phi(1.0) + 0.5) <= 1e-12);
    CHECK(pc.min_margin == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("spatially varying nonlinearity matches the reduced front law") {
    // With a0 = b0 = 1, zero background, and c0 = c0(x), the front law
    // reduces to p' = 20 (c0'/c0) p^2 (2p-1)(p-1) / (24 p^2 - 8 p - 1).
    Scenario s = make("1", "1", "1 + 0.1*sin(0.2*x)", 2.0, 1.0, -8.0, 8.0);
    RegularSolution reg = solve_regular(s);
    PhaseCurve pc = solve_phase(s, reg);

    auto rhs = [](double t, const std::vector<double>& y, std::vector<double>& dy) {
        (void)t;
        double x = y[0], p = y[1];
        double c0 = 1.0 + 0.1 * std::sin(0.2 * x);
        double c0x = 0.02 * std::cos(0.2 * x);
        dy[0] = p;
        dy[1] = 20.0 * (c0x / c0) * p * p * (2.0 * p - 1.0) * (p - 1.0) /
                (24.0 * p * p - 8.0 * p - 1.0);
    };
    OdeOpts opts;
    opts.abs_tol = 1e-13;
    opts.rel_tol = 1e-13;
    OdeSolution ref = dopri5(rhs, 0.0, {0.0, 2.0}, 1.0, opts);

    for (int i = 0; i <= 10; ++i) {
        double t = i / 10.0;
        CHECK(std::abs(pc.phi(t) - ref.eval_component(t, 0)) <= 1e-9);
        CHECK(std::abs(pc.dphi(t) - ref.eval_component(t, 1)) <= 1e-9);
    }
    // the front genuinely accelerates here
    CHECK(std::abs(pc.ddphi(0.0)) > 0.01);
}

TEST_CASE("time-decaying a0 matches the reduced contraction law") {
    // With a0 = a0(t), b0 = c0 = 1, zero background, the quantity q = a0 p
    // obeys q' = a0' p (4q+1)(q-1) / (24q^2 - 8q - 1): q contracts toward 1
    // (the admissibility boundary) but never crosses it.
    Scenario s = make("1 - 0.48*t", "1", "1", 2.0, 2.0, -8.0, 16.0);
    RegularSolution reg = solve_regular(s);
    PhaseCurve pc = solve_phase(s, reg);

    auto rhs = [](double t, const std::vector<double>& y, std::vector<double>& dy) {
        double a0 = 1.0 - 0.48 * t, a0t = -0.48;
        double q = y[1];
        double p = q / a0;
        dy[0] = p;
        dy[1] = a0t * p * (4.0 * q + 1.0) * (q - 1.0) /
                (24.0 * q * q - 8.0 * q - 1.0);
    };
    OdeOpts opts;
    opts.abs_tol = 1e-13;
    opts.rel_tol = 1e-13;
    OdeSolution ref = dopri5(rhs, 0.0, {0.0, 2.0}, 2.0, opts);

    for (int i = 0; i <= 10; ++i) {
        double t = 2.0 * i / 10.0;
        double a0 = 1.0 - 0.48 * t;
        CHECK(std::abs(pc.phi(t) - ref.eval_component(t, 0)) <= 1e-8);
        CHECK(std::abs(pc.dphi(t) - ref.eval_component(t, 1) / a0) <= 1e-8);
    }
    double qT = pc.dphi(2.0) * (1.0 - 0.48 * 2.0);
    CHECK(qT > 1.0);
    CHECK(qT < 1.6);
    CHECK(pc.min_margin > 0.0);
}

TEST_CASE("uniform rescaling of all leading coefficients leaves the front unchanged") {
    Scenario s1 = make("1 + 0.05*cos(0.3*x)", "1", "1 + 0.1*sin(0.2*x)", 2.0, 1.0, -8.0, 8.0);
    Scenario s2 = make("2.7*(1 + 0.05*cos(0.3*x))", "2.7", "2.7*(1 + 0.1*sin(0.2*x))", 2.0,
                       1.0, -8.0, 8.0);
    RegularSolution r1 = solve_regular(s1);
    RegularSolution r2 = solve_regular(s2);

    FrontCoeffs k1 = front_coeffs(s1, r1, 0.37, 0.21);
    FrontCoeffs k2 = front_coeffs(s2, r2, 0.37, 0.21);
    const double lam3 = 2.7 * 2.7 * 2.7;
    CHECK(k2.i2 == doctest::Approx(lam3 * k1.i2).epsilon(1e-12));
    CHECK(k2.i1 == doctest::Approx(lam3 * k1.i1).epsilon(1e-12));
    CHECK(k2.i0 == doctest::Approx(lam3 * k1.i0).epsilon(1e-12));
    CHECK(k2.f4 == doctest::Approx(lam3 * k1.f4).epsilon(1e-12));
    CHECK(k2.f3 == doctest::Approx(lam3 * k1.f3).epsilon(1e-12));
    CHECK(k2.f2 == doctest::Approx(lam3 * k1.f2).epsilon(1e-10));

    PhaseCurve p1 = solve_phase(s1, r1);
    PhaseCurve p2 = solve_phase(s2, r2);
    for (int i = 0; i <= 10; ++i) {
        double t = i / 10.0;
        CHECK(std::abs(p1.phi(t) - p2.phi(t)) <= 1e-10);
    }
}

TEST_CASE("non-positive starting margin is rejected") {
    Scenario slow = make("1", "1", "1", 0.3, 1.0, -5.0, 7.0);
    RegularSolution reg = solve_regular(slow);
    bool threw = false;
    try {
        solve_phase(slow, reg);
    } catch (const InadmissibleStart& e) {
        threw = true;
        CHECK(e.margin == doctest::Approx(0.3 * (0.3 - 1.0)).epsilon(1e-12));
    }
    CHECK(threw);

    Scenario tangent = make("1", "1", "1", 1.0, 1.0, -5.0, 7.0);
    CHECK_THROWS_AS(solve_phase(tangent, solve_regular(tangent)), InadmissibleStart);
}

TEST_CASE("runaway front speed is reported as a blow-up") {
    Scenario s = make("1 - 0.499*t", "1", "1", 2.0, 2.0, -4.0, 20.0);
    RegularSolution reg = solve_regular(s);
    bool threw = false;
    try {
        solve_phase(s, reg);
    } catch (const PhaseBlowup& e) {
        threw = true;
        CHECK(e.t_stop > 1.5);
        CHECK(e.t_stop <= 2.0);
    }
    CHECK(threw);
}
