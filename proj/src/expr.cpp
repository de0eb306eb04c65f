#include "bbm/expr.hpp"

#include "bbm/errors.hpp"
#include "bbm/util.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>

namespace bbm {

namespace {

ExprAst node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

ExprAst make_bin(NodeKind k, ExprAst a, ExprAst b) {
    ExprNode n;
    n.kind = k;
    n.a = std::move(a);
    n.b = std::move(b);
    return node(std::move(n));
}

ExprAst make_neg(ExprAst a) {
    ExprNode n;
    n.kind = NodeKind::negate;
    n.a = std::move(a);
    return node(std::move(n));
}

ExprAst make_call(Fn f, ExprAst a) {
    ExprNode n;
    n.kind = NodeKind::call;
    n.fn = f;
    n.a = std::move(a);
    return node(std::move(n));
}

const std::map<std::string, Fn, std::less<>> kFnTable = {
    {"sin", Fn::sin}, {"cos", Fn::cos},   {"tanh", Fn::tanh}, {"cosh", Fn::cosh},
    {"sech", Fn::sech}, {"exp", Fn::exp}, {"log", Fn::log},   {"sqrt", Fn::sqrt},
};

const char* fn_name(Fn f) {
    switch (f) {
        case Fn::sin: return "sin";
        case Fn::cos: return "cos";
        case Fn::tanh: return "tanh";
        case Fn::cosh: return "cosh";
        case Fn::sech: return "sech";
        case Fn::exp: return "exp";
        case Fn::log: return "log";
        case Fn::sqrt: return "sqrt";
    }
    return "?";
}

struct Parser {
    std::string_view s;
    std::size_t i = 0;

    void skip_ws() {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r' || s[i] == '\n')) ++i;
    }

    bool at_end() {
        skip_ws();
        return i >= s.size();
    }

    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }

    bool consume(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) {
        skip_ws();
        throw SyntaxError(what, i);
    }

    ExprAst parse() {
        ExprAst e = expr();
        if (!at_end()) fail("trailing input after expression");
        return e;
    }

    ExprAst expr() {
        ExprAst lhs = term();
        for (;;) {
            if (consume('+')) {
                lhs = make_bin(NodeKind::add, lhs, term());
            } else if (consume('-')) {
                lhs = make_bin(NodeKind::sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    ExprAst term() {
        ExprAst lhs = factor();
        for (;;) {
            if (consume('*')) {
                lhs = make_bin(NodeKind::mul, lhs, factor());
            } else if (consume('/')) {
                lhs = make_bin(NodeKind::div, lhs, factor());
            } else {
                return lhs;
            }
        }
    }

    ExprAst factor() {
        ExprAst base = unbase();
        if (consume('^')) return make_bin(NodeKind::pow, base, factor());
        return base;
    }

    ExprAst unbase() {
        if (consume('-')) return make_neg(unbase());
        return atom();
    }

    ExprAst atom() {
        skip_ws();
        if (i >= s.size()) fail("expected expression");
        char c = s[i];
        if (c == '(') {
            ++i;
            ExprAst e = expr();
            if (!consume(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident();
        fail("unexpected character");
    }

    ExprAst number() {
        std::size_t start = i;
        std::size_t j = i;
        auto digits = [&](std::size_t k) {
            std::size_t n = 0;
            while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
                ++k;
                ++n;
            }
            return n;
        };
        std::size_t nint = digits(j);
        j += nint;
        std::size_t nfrac = 0;
        if (j < s.size() && s[j] == '.') {
            ++j;
            nfrac = digits(j);
            j += nfrac;
        }
        if (nint + nfrac == 0) fail("malformed number");
        if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
            std::size_t k = j + 1;
            if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
            std::size_t nexp = digits(k);
            // Only absorb the exponent when it actually has digits.
            if (nexp > 0) j = k + nexp;
        }
        std::string tok(s.substr(start, j - start));
        double v = std::strtod(tok.c_str(), nullptr);
        i = j;
        return expr_const(v);
    }

    ExprAst ident() {
        std::size_t start = i;
        while (i < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
            ++i;
        std::string name(s.substr(start, i - start));
        if (peek() == '(') {
            ++i; // '('
            if (name == "pow") {
                ExprAst a = expr();
                if (!consume(',')) fail("pow expects two arguments separated by ','");
                ExprAst b = expr();
                if (!consume(')')) fail("expected ')'");
                return make_bin(NodeKind::pow, a, b);
            }
            auto it = kFnTable.find(name);
            if (it == kFnTable.end()) throw UnknownIdentifier(name);
            ExprAst a = expr();
            if (consume(',')) throw SyntaxError("function '" + name + "' expects one argument", start);
            if (!consume(')')) fail("expected ')'");
            return make_call(it->second, a);
        }
        if (name == "x" || name == "t") return expr_var(name[0]);
        throw UnknownIdentifier(name);
    }
};

[[noreturn]] void domain_fail(const char* what, double x, double t) {
    throw EvalDomainError(std::string(what), x, t);
}

double eval_node(const ExprNode& n, double x, double t) {
    switch (n.kind) {
        case NodeKind::constant: return n.value;
        case NodeKind::variable: return n.var == 'x' ? x : t;
        case NodeKind::negate: return -eval_node(*n.a, x, t);
        case NodeKind::add: return eval_node(*n.a, x, t) + eval_node(*n.b, x, t);
        case NodeKind::sub: return eval_node(*n.a, x, t) - eval_node(*n.b, x, t);
        case NodeKind::mul: return eval_node(*n.a, x, t) * eval_node(*n.b, x, t);
        case NodeKind::div: {
            double num = eval_node(*n.a, x, t);
            double den = eval_node(*n.b, x, t);
            if (den == 0.0) domain_fail("division by zero", x, t);
            return num / den;
        }
        case NodeKind::pow: {
            double base = eval_node(*n.a, x, t);
            double ex = eval_node(*n.b, x, t);
            double r = std::pow(base, ex);
            if (std::isnan(r)) domain_fail("pow outside real domain", x, t);
            return r;
        }
        case NodeKind::call: {
            double u = eval_node(*n.a, x, t);
            switch (n.fn) {
                case Fn::sin: return std::sin(u);
                case Fn::cos: return std::cos(u);
                case Fn::tanh: return std::tanh(u);
                case Fn::cosh: return std::cosh(u);
                case Fn::sech: {
                    // 1/cosh overflowing to inf correctly underflows to 0.
                    double c = std::cosh(u);
                    return 1.0 / c;
                }
                case Fn::exp: return std::exp(u);
                case Fn::log:
                    if (u <= 0.0) domain_fail("log of non-positive value", x, t);
                    return std::log(u);
                case Fn::sqrt:
                    if (u < 0.0) domain_fail("sqrt of negative value", x, t);
                    return std::sqrt(u);
            }
            domain_fail("unknown function", x, t);
        }
    }
    domain_fail("corrupt expression node", x, t);
}

} // namespace

ExprAst expr_const(double v) {
    ExprNode n;
    n.kind = NodeKind::constant;
    n.value = v;
    return node(std::move(n));
}

ExprAst expr_var(char var) {
    ExprNode n;
    n.kind = NodeKind::variable;
    n.var = var;
    return node(std::move(n));
}

bool is_const(const ExprAst& e, double* out) {
    if (e->kind != NodeKind::constant) return false;
    if (out) *out = e->value;
    return true;
}

bool expr_uses_var(const ExprAst& e, char var) {
    switch (e->kind) {
        case NodeKind::constant: return false;
        case NodeKind::variable: return e->var == var;
        case NodeKind::negate:
        case NodeKind::call: return expr_uses_var(e->a, var);
        default: return expr_uses_var(e->a, var) || expr_uses_var(e->b, var);
    }
}

ExprAst parse_expr(std::string_view text) {
    Parser p{text};
    return p.parse();
}

double eval(const ExprAst& e, double x, double t) {
    double r = eval_node(*e, x, t);
    if (!std::isfinite(r)) domain_fail("non-finite result", x, t);
    return r;
}

ExprAst diff(const ExprAst& e, char var) {
    const ExprNode& n = *e;
    switch (n.kind) {
        case NodeKind::constant: return expr_const(0.0);
        case NodeKind::variable: return expr_const(n.var == var ? 1.0 : 0.0);
        case NodeKind::negate: return make_neg(diff(n.a, var));
        case NodeKind::add: return make_bin(NodeKind::add, diff(n.a, var), diff(n.b, var));
        case NodeKind::sub: return make_bin(NodeKind::sub, diff(n.a, var), diff(n.b, var));
        case NodeKind::mul:
            return make_bin(NodeKind::add,
                            make_bin(NodeKind::mul, diff(n.a, var), n.b),
                            make_bin(NodeKind::mul, n.a, diff(n.b, var)));
        case NodeKind::div:
            // (u/v)' = (u'v - uv') / v^2
            return make_bin(
                NodeKind::div,
                make_bin(NodeKind::sub,
                         make_bin(NodeKind::mul, diff(n.a, var), n.b),
                         make_bin(NodeKind::mul, n.a, diff(n.b, var))),
                make_bin(NodeKind::pow, n.b, expr_const(2.0)));
        case NodeKind::pow: {
            double c;
            if (is_const(n.b, &c)) {
                // (u^c)' = c * u^(c-1) * u'
                return make_bin(
                    NodeKind::mul,
                    make_bin(NodeKind::mul, expr_const(c),
                             make_bin(NodeKind::pow, n.a, expr_const(c - 1.0))),
                    diff(n.a, var));
            }
            if (is_const(n.a, &c)) {
                // (c^v)' = c^v * log(c) * v'
                return make_bin(NodeKind::mul,
                                make_bin(NodeKind::mul, e, make_call(Fn::log, n.a)),
                                diff(n.b, var));
            }
            // (u^v)' = u^v * (v' * log(u) + v * u' / u)
            return make_bin(
                NodeKind::mul, e,
                make_bin(NodeKind::add,
                         make_bin(NodeKind::mul, diff(n.b, var), make_call(Fn::log, n.a)),
                         make_bin(NodeKind::mul, n.b,
                                  make_bin(NodeKind::div, diff(n.a, var), n.a))));
        }
        case NodeKind::call: {
            ExprAst du = diff(n.a, var);
            ExprAst outer;
            switch (n.fn) {
                case Fn::sin: outer = make_call(Fn::cos, n.a); break;
                case Fn::cos: outer = make_neg(make_call(Fn::sin, n.a)); break;
                case Fn::tanh:
                    outer = make_bin(NodeKind::pow, make_call(Fn::sech, n.a), expr_const(2.0));
                    break;
                case Fn::cosh:
                    // cosh' = sinh = tanh * cosh (sinh is not in the language)
                    outer = make_bin(NodeKind::mul, make_call(Fn::tanh, n.a),
                                     make_call(Fn::cosh, n.a));
                    break;
                case Fn::sech:
                    outer = make_neg(make_bin(NodeKind::mul, make_call(Fn::sech, n.a),
                                              make_call(Fn::tanh, n.a)));
                    break;
                case Fn::exp: outer = e; break;
                case Fn::log: return make_bin(NodeKind::div, du, n.a);
                case Fn::sqrt:
                    return make_bin(NodeKind::div, du,
                                    make_bin(NodeKind::mul, expr_const(2.0), e));
            }
            return make_bin(NodeKind::mul, outer, du);
        }
    }
    throw Error("diff: corrupt expression node");
}

ExprAst fold(const ExprAst& e) {
    const ExprNode& n = *e;
    switch (n.kind) {
        case NodeKind::constant:
        case NodeKind::variable: return e;
        case NodeKind::negate: {
            ExprAst a = fold(n.a);
            double c;
            if (is_const(a, &c)) return expr_const(-c);
            if (a->kind == NodeKind::negate) return a->a;
            if (a == n.a) return e;
            return make_neg(a);
        }
        default: break;
    }
    if (n.kind == NodeKind::call) {
        ExprAst a = fold(n.a);
        double c;
        if (is_const(a, &c)) {
            ExprAst folded = make_call(n.fn, a);
            try {
                return expr_const(eval(folded, 0.0, 0.0));
            } catch (const EvalDomainError&) {
                // keep symbolic; the error surfaces at eval time
            }
        }
        if (a == n.a) return e;
        return make_call(n.fn, a);
    }

    ExprAst a = fold(n.a);
    ExprAst b = fold(n.b);
    double ca = 0.0, cb = 0.0;
    bool ka = is_const(a, &ca), kb = is_const(b, &cb);

    if (ka && kb) {
        ExprAst folded = make_bin(n.kind, a, b);
        try {
            return expr_const(eval(folded, 0.0, 0.0));
        } catch (const EvalDomainError&) {
            return folded;
        }
    }

    switch (n.kind) {
        case NodeKind::add:
            if (ka && ca == 0.0) return b;
            if (kb && cb == 0.0) return a;
            break;
        case NodeKind::sub:
            if (kb && cb == 0.0) return a;
            if (ka && ca == 0.0) return fold(make_neg(b));
            break;
        case NodeKind::mul:
            if ((ka && ca == 0.0) || (kb && cb == 0.0)) return expr_const(0.0);
            if (ka && ca == 1.0) return b;
            if (kb && cb == 1.0) return a;
            break;
        case NodeKind::div:
            // note: 0/e is NOT folded away, so e==0 still faults at eval
            if (kb && cb == 1.0) return a;
            break;
        case NodeKind::pow:
            if (kb && cb == 1.0) return a;
            if (kb && cb == 0.0) return expr_const(1.0);
            break;
        default: break;
    }
    if (a == n.a && b == n.b) return e;
    return make_bin(n.kind, a, b);
}

namespace {

int prec_of(const ExprNode& n) {
    switch (n.kind) {
        case NodeKind::add:
        case NodeKind::sub: return 1;
        case NodeKind::mul:
        case NodeKind::div: return 2;
        case NodeKind::pow: return 3;
        case NodeKind::negate: return 4;
        default: return 5;
    }
}

void print(const ExprNode& n, int min_prec, std::string& out) {
    int p = prec_of(n);
    bool wrap = p < min_prec;
    if (wrap) out += '(';
    switch (n.kind) {
        case NodeKind::constant: {
            if (n.value < 0.0 || (n.value == 0.0 && std::signbit(n.value))) {
                // print as unary minus so the token itself stays unsigned
                out += '-';
                out += fmt17(-n.value);
            } else {
                out += fmt17(n.value);
            }
            break;
        }
        case NodeKind::variable: out += n.var; break;
        case NodeKind::negate:
            out += '-';
            print(*n.a, 4, out);
            break;
        case NodeKind::add:
            print(*n.a, 1, out);
            out += " + ";
            print(*n.b, 2, out);
            break;
        case NodeKind::sub:
            print(*n.a, 1, out);
            out += " - ";
            print(*n.b, 2, out);
            break;
        case NodeKind::mul:
            print(*n.a, 2, out);
            out += "*";
            print(*n.b, 3, out);
            break;
        case NodeKind::div:
            print(*n.a, 2, out);
            out += "/";
            print(*n.b, 3, out);
            break;
        case NodeKind::pow:
            print(*n.a, 4, out);
            out += "^";
            print(*n.b, 3, out);
            break;
        case NodeKind::call:
            out += fn_name(n.fn);
            out += '(';
            print(*n.a, 1, out);
            out += ')';
            break;
    }
    if (wrap) out += ')';
}

} // namespace

std::string to_string(const ExprAst& e) {
    std::string out;
    print(*e, 0, out);
    return out;
}

Field Field::make(const ExprAst& e) {
    Field f;
    f.f = fold(e);
    f.fx = fold(diff(f.f, 'x'));
    f.ft = fold(diff(f.f, 't'));
    return f;
}

} // namespace bbm
