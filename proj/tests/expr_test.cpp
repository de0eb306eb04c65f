#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bbm/errors.hpp"
#include "bbm/expr.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

using namespace bbm;

namespace {

// Central finite difference in one variable.
double fd_partial(const ExprAst& e, char var, double x, double t) {
    double h = 6e-6 * std::max(1.0, std::abs(var == 'x' ? x : t));
    double xp = x, xm = x, tp = t, tm = t;
    if (var == 'x') {
        xp += h;
        xm -= h;
    } else {
        tp += h;
        tm -= h;
    }
    return (eval(e, xp, tp) - eval(e, xm, tm)) / (2.0 * h);
}

const std::vector<std::string> kSmoothEverywhere = {
    "sin(x)*cos(t)",
    "tanh(x*t)",
    "cosh(x/2)",
    "sech(x - t^2)",
    "exp(x*0.3 - t*0.2)",
    "log(2 + x^2)",
    "sqrt(1 + x^2 + t^2)",
    "pow(1 + x^2, 0.5*t)",
    "x^3 - 2*x*t + t^2",
    "(1 + x)/(2 + t^2)",
    "-x^2 + t",
    "2^x",
    "sech(sqrt(1 + x^2))^2",
    "x^t^2 / (4 + x^2)^3",
    "1 + 0.1*sin(0.2*x)",
    "tanh(x)*sech(t)*cosh(x*0.1)",
};

} // namespace

TEST_CASE("symbolic partial derivatives match finite differences") {
    std::mt19937 rng(20240817u);
    std::uniform_real_distribution<double> pt(0.1, 1.9); // keep x^t^2 off x<=0
    for (const auto& src : kSmoothEverywhere) {
        ExprAst e = parse_expr(src);
        for (char var : {'x', 't'}) {
            ExprAst de = diff(e, var);
            ExprAst def = fold(de);
            for (int k = 0; k < 200; ++k) {
                double x = pt(rng), t = pt(rng);
                double exact = eval(de, x, t);
                double folded = eval(def, x, t);
                double approx = fd_partial(e, var, x, t);
                CAPTURE(src);
                CAPTURE(var);
                CAPTURE(x);
                CAPTURE(t);
                CHECK(std::abs(exact - approx) <= 2e-6 * (1.0 + std::abs(exact)));
                CHECK(std::abs(exact - folded) <= 1e-13 * (1.0 + std::abs(exact)));
            }
        }
    }
}

TEST_CASE("print/parse round trip preserves values") {
    std::mt19937 rng(7u);
    std::uniform_real_distribution<double> pt(0.1, 1.9);
    std::vector<std::string> exprs = kSmoothEverywhere;
    exprs.insert(exprs.end(), {
        "-x^2",
        "2^-x",
        "x - -t",
        "x^t^2",
        "(x^t)^2",
        "-(x^2)",
        "x/(t + 3)/2",
        "--x",
        "1.25e-3*x + 7.5E2",
        ".5*x",
    });
    for (const auto& src : exprs) {
        ExprAst e = parse_expr(src);
        std::string printed = to_string(e);
        ExprAst e2 = parse_expr(printed);
        std::string printed2 = to_string(e2);
        CAPTURE(src);
        CAPTURE(printed);
        CHECK(printed == printed2); // printer is a fixed point of parse∘print
        for (int k = 0; k < 100; ++k) {
            double x = pt(rng), t = pt(rng);
            double v1 = eval(e, x, t);
            double v2 = eval(e2, x, t);
            CHECK(std::abs(v1 - v2) <= 1e-15 * (1.0 + std::abs(v1)));
        }
        // derivatives of the reparsed tree agree too
        ExprAst dx1 = fold(diff(e, 'x'));
        ExprAst dx2 = fold(diff(e2, 'x'));
        for (int k = 0; k < 20; ++k) {
            double x = pt(rng), t = pt(rng);
            double v1 = eval(dx1, x, t);
            double v2 = eval(dx2, x, t);
            CHECK(std::abs(v1 - v2) <= 1e-13 * (1.0 + std::abs(v1)));
        }
    }
}

TEST_CASE("grammar fixes precedence and associativity") {
    // unary minus binds tighter than '^'
    CHECK(eval(parse_expr("-x^2"), 3.0, 0.0) == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(eval(parse_expr("-2^2"), 0.0, 0.0) == doctest::Approx(4.0).epsilon(1e-15));
    // exponent may itself be negated
    CHECK(eval(parse_expr("2^-2"), 0.0, 0.0) == doctest::Approx(0.25).epsilon(1e-15));
    // '^' is right-associative
    CHECK(eval(parse_expr("x^t^2"), 2.0, 3.0) == doctest::Approx(512.0).epsilon(1e-15));
    CHECK(eval(parse_expr("(x^t)^2"), 2.0, 3.0) == doctest::Approx(64.0).epsilon(1e-15));
    // left associativity of -, /
    CHECK(eval(parse_expr("6 - 2 - 1"), 0.0, 0.0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(eval(parse_expr("6/3/2"), 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    // '^' binds tighter than '*'
    CHECK(eval(parse_expr("2*3^2"), 0.0, 0.0) == doctest::Approx(18.0).epsilon(1e-15));
    // pow() call form equals '^' form
    CHECK(eval(parse_expr("pow(2, 10)"), 0.0, 0.0) == doctest::Approx(1024.0).epsilon(1e-15));
    // whitespace insensitivity
    CHECK(eval(parse_expr("  1+ 2 *x "), 4.0, 0.0) == doctest::Approx(9.0).epsilon(1e-15));
}

TEST_CASE("syntax errors carry byte offsets") {
    try {
        parse_expr("x + * t");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& se) {
        CHECK(se.offset == 4);
    }
    try {
        parse_expr("sin(x");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& se) {
        CHECK(se.offset == 5);
    }
    CHECK_THROWS_AS(parse_expr(""), SyntaxError);
    CHECK_THROWS_AS(parse_expr("()"), SyntaxError);
    CHECK_THROWS_AS(parse_expr("x t"), SyntaxError);
    CHECK_THROWS_AS(parse_expr("sin(x, t)"), SyntaxError);
    CHECK_THROWS_AS(parse_expr("pow(x)"), SyntaxError);
    CHECK_THROWS_AS(parse_expr("1..5"), SyntaxError);
}

TEST_CASE("unknown identifiers are reported by name") {
    try {
        parse_expr("foo(x)");
        FAIL("expected UnknownIdentifier");
    } catch (const UnknownIdentifier& ue) {
        CHECK(ue.name == "foo");
    }
    try {
        parse_expr("x + y");
        FAIL("expected UnknownIdentifier");
    } catch (const UnknownIdentifier& ue) {
        CHECK(ue.name == "y");
    }
    CHECK_THROWS_AS(parse_expr("pow + 1"), UnknownIdentifier);
}

TEST_CASE("evaluation domain errors") {
    CHECK_THROWS_AS(eval(parse_expr("log(x)"), -1.0, 0.0), EvalDomainError);
    CHECK_THROWS_AS(eval(parse_expr("sqrt(x)"), -4.0, 0.0), EvalDomainError);
    CHECK_THROWS_AS(eval(parse_expr("1/x"), 0.0, 0.0), EvalDomainError);
    CHECK_THROWS_AS(eval(parse_expr("exp(x)"), 1000.0, 0.0), EvalDomainError);
    CHECK_THROWS_AS(eval(parse_expr("pow(x, 0.5)"), -1.0, 0.0), EvalDomainError);
    CHECK_THROWS_AS(eval(parse_expr("cosh(x)"), 1000.0, 0.0), EvalDomainError);
    // sech underflows gracefully instead of faulting
    CHECK(eval(parse_expr("sech(x)"), 1000.0, 0.0) == 0.0);
    // error records the evaluation point
    try {
        eval(parse_expr("log(x - t)"), 1.0, 2.5);
        FAIL("expected EvalDomainError");
    } catch (const EvalDomainError& de) {
        CHECK(de.x == doctest::Approx(1.0));
        CHECK(de.t == doctest::Approx(2.5));
    }
}

TEST_CASE("folding applies the documented identity list") {
    auto f = [](const char* s) { return fold(parse_expr(s)); };
    CHECK(f("0 + x*1")->kind == NodeKind::variable);
    CHECK(f("x - 0")->kind == NodeKind::variable);
    double c = -1;
    CHECK(is_const(f("x^0"), &c));
    CHECK(c == 1.0);
    CHECK(is_const(f("0*log(x)"), &c));
    CHECK(c == 0.0);
    CHECK(is_const(f("sin(0)"), &c));
    CHECK(c == 0.0);
    CHECK(is_const(f("2^10"), &c));
    CHECK(c == 1024.0);
    CHECK(f("0 - x")->kind == NodeKind::negate);
    CHECK(f("--x")->kind == NodeKind::variable);
    CHECK(f("x/1")->kind == NodeKind::variable);
    CHECK(f("x^1")->kind == NodeKind::variable);
    // 0/e is kept: the fault at e == 0 must survive folding
    CHECK(f("0/x")->kind == NodeKind::div);
    CHECK_THROWS_AS(eval(f("0/x"), 0.0, 0.0), EvalDomainError);
    // constant subtree with a domain fault stays symbolic and faults at eval
    CHECK(f("log(0 - 1)")->kind != NodeKind::constant);
    CHECK_THROWS_AS(eval(f("log(0 - 1)"), 0.0, 0.0), EvalDomainError);
}

TEST_CASE("folding never changes values") {
    std::mt19937 rng(99u);
    std::uniform_real_distribution<double> pt(0.1, 1.9);
    for (const auto& src : kSmoothEverywhere) {
        ExprAst e = parse_expr(src);
        ExprAst ef = fold(e);
        for (int k = 0; k < 50; ++k) {
            double x = pt(rng), t = pt(rng);
            double v1 = eval(e, x, t);
            double v2 = eval(ef, x, t);
            CAPTURE(src);
            CHECK(std::abs(v1 - v2) <= 1e-14 * (1.0 + std::abs(v1)));
        }
    }
}

TEST_CASE("differentiation is linear") {
    ExprAst a = parse_expr("sin(x)*t");
    ExprAst b = parse_expr("sech(x - t)");
    ExprAst sum = parse_expr("sin(x)*t + sech(x - t)");
    ExprAst da = diff(a, 'x'), db = diff(b, 'x'), ds = diff(sum, 'x');
    std::mt19937 rng(3u);
    std::uniform_real_distribution<double> pt(-2.0, 2.0);
    for (int k = 0; k < 100; ++k) {
        double x = pt(rng), t = pt(rng);
        double lhs = eval(ds, x, t);
        double rhs = eval(da, x, t) + eval(db, x, t);
        CHECK(std::abs(lhs - rhs) <= 1e-13 * (1.0 + std::abs(lhs)));
    }
}

TEST_CASE("polynomial derivatives are exact") {
    ExprAst e = parse_expr("x^3");
    ExprAst de = fold(diff(e, 'x'));
    for (double x : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
        CHECK(eval(de, x, 0.0) == doctest::Approx(3.0 * x * x).epsilon(1e-15));
    }
    // d/dt of an x-only expression folds to literal zero
    double c = -1;
    CHECK(is_const(fold(diff(e, 't')), &c));
    CHECK(c == 0.0);
}

TEST_CASE("coefficient fields expose folded partials") {
    Field f = Field::make(parse_expr("x^2*t"));
    std::mt19937 rng(11u);
    std::uniform_real_distribution<double> pt(-2.0, 2.0);
    for (int k = 0; k < 50; ++k) {
        double x = pt(rng), t = pt(rng);
        CHECK(f.v(x, t) == doctest::Approx(x * x * t).epsilon(1e-14));
        CHECK(f.dx(x, t) == doctest::Approx(2 * x * t).epsilon(1e-14));
        CHECK(f.dt(x, t) == doctest::Approx(x * x).epsilon(1e-14));
    }
}
