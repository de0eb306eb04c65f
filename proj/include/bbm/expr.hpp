#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace bbm {

// Small closed-form expression language over the two variables x and t.
//
// Grammar (whitespace between tokens ignored):
//   expr   := term   (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := unbase ('^' factor)?            -- '^' is right-associative
//   unbase := '-' unbase | atom
//   atom   := number | 'x' | 't'
//           | fname '(' expr ')' | 'pow' '(' expr ',' expr ')'
//           | '(' expr ')'
//   fname  := sin | cos | tanh | cosh | sech | exp | log | sqrt
//
// Note the precedence choice: unary minus binds TIGHTER than '^', so
// "-x^2" parses as "(-x)^2", not "-(x^2)".

enum class NodeKind { constant, variable, negate, add, sub, mul, div, pow, call };

enum class Fn { sin, cos, tanh, cosh, sech, exp, log, sqrt };

struct ExprNode;
using ExprAst = std::shared_ptr<const ExprNode>;

struct ExprNode {
    NodeKind kind;
    double value = 0.0; // constant
    char var = 'x';     // variable: 'x' or 't'
    Fn fn = Fn::sin;    // call
    ExprAst a, b;       // operands (a only for negate/call-1; a,b otherwise)
};

// Throws SyntaxError (0-based byte offsets) or UnknownIdentifier.
ExprAst parse_expr(std::string_view text);

// Throws EvalDomainError on log/sqrt/pow domain violations, division by
// zero, or any non-finite result (overflow).
double eval(const ExprAst& e, double x, double t);

// Exact symbolic partial derivative with respect to `var` ('x' or 't').
ExprAst diff(const ExprAst& e, char var);

// Constant folding plus arithmetic identity cleanup: 0+e, e+0, e-0,
// 0-e -> -e, 0*e, e*0, 1*e, e*1, e/1, e^1, e^0 -> 1, -(-e), and literal
// constant subtrees.  0/e is deliberately NOT folded so that e == 0 still
// faults at evaluation time.
ExprAst fold(const ExprAst& e);

// Parseable text form; parse_expr(to_string(e)) evaluates identically to e.
std::string to_string(const ExprAst& e);

ExprAst expr_const(double v);
ExprAst expr_var(char var);

// True if e is a literal constant; if so write its value to *out when given.
bool is_const(const ExprAst& e, double* out = nullptr);

// True if the tree mentions the given variable anywhere.
bool expr_uses_var(const ExprAst& e, char var);

// A scalar coefficient field with precomputed, folded first partials.
struct Field {
    ExprAst f, fx, ft;

    static Field make(const ExprAst& e);

    double v(double x, double t) const { return eval(f, x, t); }
    double dx(double x, double t) const { return eval(fx, x, t); }
    double dt(double x, double t) const { return eval(ft, x, t); }
};

} // namespace bbm
