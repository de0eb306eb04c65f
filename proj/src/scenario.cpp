#include "bbm/scenario.hpp"

#include "bbm/errors.hpp"
#include "bbm/util.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <variant>

namespace bbm {

Form parse_form(std::string_view name) {
    if (name == "auto") return Form::auto_form;
    if (name == "theorem1") return Form::theorem1;
    if (name == "theorem2") return Form::theorem2;
    throw ConfigError("form must be one of 'auto', 'theorem1', 'theorem2' (got '" +
                      std::string(name) + "')");
}

const char* form_name(Form f) {
    switch (f) {
        case Form::auto_form: return "auto";
        case Form::theorem1: return "theorem1";
        case Form::theorem2: return "theorem2";
    }
    return "?";
}

namespace {

struct RawValue {
    std::variant<std::string, double, std::vector<double>> v;
    bool is_integer = false; // numeric token had no '.' or exponent
    int line = 0;
};

using RawMap = std::map<std::string, RawValue>;

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool valid_number_token(std::string_view s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t digits = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) { ++i; ++digits; }
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) { ++i; ++digits; }
    }
    if (digits == 0) return false;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
        std::size_t ed = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) { ++i; ++ed; }
        if (ed == 0) return false;
    }
    return i == s.size();
}

bool integer_token(std::string_view s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

[[noreturn]] void bad_line(const std::string& name, int line, const std::string& what) {
    throw ConfigError(name + ":" + std::to_string(line) + ": " + what);
}

// Strip a trailing comment that starts outside any string literal.
std::string_view strip_comment(std::string_view line) {
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_str) {
            if (c == '\\') { ++i; continue; }
            if (c == '"') in_str = false;
        } else if (c == '"') {
            in_str = true;
        } else if (c == '#') {
            return line.substr(0, i);
        }
    }
    return line;
}

RawValue parse_value(std::string_view text, const std::string& name, int line) {
    RawValue rv;
    rv.line = line;
    text = trim(text);
    if (text.empty()) bad_line(name, line, "missing value");
    if (text.front() == '"') {
        std::string out;
        std::size_t i = 1;
        bool closed = false;
        for (; i < text.size(); ++i) {
            char c = text[i];
            if (c == '\\') {
                if (i + 1 >= text.size()) bad_line(name, line, "dangling escape in string");
                char n = text[i + 1];
                if (n == '"' || n == '\\') {
                    out += n;
                    ++i;
                } else {
                    bad_line(name, line, "unsupported escape in string");
                }
            } else if (c == '"') {
                closed = true;
                ++i;
                break;
            } else {
                out += c;
            }
        }
        if (!closed) bad_line(name, line, "unterminated string");
        if (!trim(text.substr(i)).empty()) bad_line(name, line, "trailing content after string");
        rv.v = out;
        return rv;
    }
    if (text.front() == '[') {
        if (text.back() != ']') bad_line(name, line, "unterminated array");
        std::string_view inner = trim(text.substr(1, text.size() - 2));
        std::vector<double> vals;
        if (!inner.empty()) {
            std::size_t pos = 0;
            while (pos <= inner.size()) {
                std::size_t comma = inner.find(',', pos);
                std::string_view item =
                    trim(comma == std::string_view::npos ? inner.substr(pos)
                                                         : inner.substr(pos, comma - pos));
                if (item.empty()) bad_line(name, line, "empty array element");
                if (!valid_number_token(item)) bad_line(name, line, "array elements must be numbers");
                vals.push_back(std::strtod(std::string(item).c_str(), nullptr));
                if (comma == std::string_view::npos) break;
                pos = comma + 1;
            }
        }
        rv.v = vals;
        return rv;
    }
    if (!valid_number_token(text)) bad_line(name, line, "malformed value (expected string, number, or array)");
    rv.is_integer = integer_token(text);
    rv.v = std::strtod(std::string(text).c_str(), nullptr);
    return rv;
}

RawMap parse_raw(std::string_view text, const std::string& name) {
    RawMap out;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line =
            nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        std::string_view body = trim(strip_comment(line));
        if (!body.empty()) {
            std::size_t eq = body.find('=');
            if (eq == std::string_view::npos)
                bad_line(name, line_no, "expected 'key = value'");
            std::string key(trim(body.substr(0, eq)));
            if (key.empty()) bad_line(name, line_no, "empty key");
            for (char c : key)
                if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
                    bad_line(name, line_no, "invalid key '" + key + "'");
            if (out.count(key))
                bad_line(name, line_no, "duplicate key '" + key + "'");
            out.emplace(key, parse_value(body.substr(eq + 1), name, line_no));
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return out;
}

// --- typed accessors ---------------------------------------------------------

struct Reader {
    RawMap raw;
    std::string name;
    std::set<std::string> used;

    bool has(const std::string& key) const { return raw.count(key) != 0; }

    const RawValue& get(const std::string& key) {
        auto it = raw.find(key);
        if (it == raw.end())
            throw ConfigError(name + ": missing required key '" + key + "'");
        used.insert(key);
        return it->second;
    }

    std::optional<std::string> opt_string(const std::string& key) {
        if (!has(key)) return std::nullopt;
        const RawValue& rv = get(key);
        if (!std::holds_alternative<std::string>(rv.v))
            bad_line(name, rv.line, "'" + key + "' must be a string");
        return std::get<std::string>(rv.v);
    }

    std::string req_string(const std::string& key) {
        const RawValue& rv = get(key);
        if (!std::holds_alternative<std::string>(rv.v))
            bad_line(name, rv.line, "'" + key + "' must be a string");
        return std::get<std::string>(rv.v);
    }

    std::optional<double> opt_number(const std::string& key) {
        if (!has(key)) return std::nullopt;
        const RawValue& rv = get(key);
        if (!std::holds_alternative<double>(rv.v))
            bad_line(name, rv.line, "'" + key + "' must be a number");
        return std::get<double>(rv.v);
    }

    double req_number(const std::string& key) {
        const RawValue& rv = get(key);
        if (!std::holds_alternative<double>(rv.v))
            bad_line(name, rv.line, "'" + key + "' must be a number");
        return std::get<double>(rv.v);
    }

    long req_integer(const std::string& key) {
        const RawValue& rv = get(key);
        if (!std::holds_alternative<double>(rv.v) || !rv.is_integer)
            bad_line(name, rv.line, "'" + key + "' must be an integer");
        return static_cast<long>(std::get<double>(rv.v));
    }

    std::vector<double> req_array(const std::string& key) {
        const RawValue& rv = get(key);
        if (!std::holds_alternative<std::vector<double>>(rv.v))
            bad_line(name, rv.line, "'" + key + "' must be an array of numbers");
        return std::get<std::vector<double>>(rv.v);
    }

    int line_of(const std::string& key) const {
        auto it = raw.find(key);
        return it == raw.end() ? 0 : it->second.line;
    }
};

Field field_from(const std::string& src, const std::string& ctx, const std::string& name, int line) {
    try {
        return Field::make(parse_expr(src));
    } catch (const Error& e) {
        bad_line(name, line, "in expression for " + ctx + ": " + e.what());
    }
}

// Keys of the form a<k>, b<k>, c<k>; returns k or -1.
int coeff_order(const std::string& key) {
    if (key.size() < 2) return -1;
    char f = key[0];
    if (f != 'a' && f != 'b' && f != 'c') return -1;
    for (std::size_t i = 1; i < key.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(key[i]))) return -1;
    if (key.size() > 3) return -1; // cap parsing at two digits
    return std::atoi(key.c_str() + 1);
}

} // namespace

Scenario load_scenario_text(std::string_view text, const std::string& name) {
    Reader r{parse_raw(text, name), name, {}};
    Scenario s;
    s.name = name;

    auto coeff = [&](const std::string& key, const char* dflt) {
        std::string src = r.has(key) ? r.req_string(key) : std::string(dflt);
        return field_from(src, "coefficient '" + key + "'", name, r.line_of(key));
    };
    for (const char* k : {"a0", "b0", "c0"})
        if (!r.has(k)) throw ConfigError(name + ": missing required key '" + std::string(k) + "'");
    s.a0 = coeff("a0", "1");
    s.b0 = coeff("b0", "1");
    s.c0 = coeff("c0", "1");
    s.a1 = coeff("a1", "0");
    s.b1 = coeff("b1", "0");
    s.c1 = coeff("c1", "0");

    std::string u0src = r.req_string("u0_init");
    s.u0_init = field_from(u0src, "'u0_init'", name, r.line_of("u0_init"));
    std::string u1src = r.has("u1_init") ? r.req_string("u1_init") : std::string("0");
    s.u1_init = field_from(u1src, "'u1_init'", name, r.line_of("u1_init"));
    if (expr_uses_var(s.u0_init.f, 't'))
        s.warnings.push_back("u0_init mentions t; it is evaluated at t = 0");
    if (expr_uses_var(s.u1_init.f, 't'))
        s.warnings.push_back("u1_init mentions t; it is evaluated at t = 0");

    s.phi0 = r.req_number("phi0");
    s.dphi0 = r.req_number("dphi0");
    s.C0 = r.opt_number("C0").value_or(0.0);
    s.C3 = r.opt_number("C3").value_or(0.0);
    s.C4 = r.opt_number("C4").value_or(0.0);
    s.T = r.req_number("T");
    if (!(s.T > 0.0)) bad_line(name, r.line_of("T"), "'T' must be positive");

    s.x_min = r.req_number("x_min");
    s.x_max = r.req_number("x_max");
    if (!(s.x_min < s.x_max))
        bad_line(name, r.line_of("x_max"), "'x_min' must be smaller than 'x_max'");

    s.n_x = r.req_integer("n_x");
    s.n_t = r.req_integer("n_t");
    if (s.n_x < 16) bad_line(name, r.line_of("n_x"), "'n_x' must be at least 16");
    if (s.n_t < 16) bad_line(name, r.line_of("n_t"), "'n_t' must be at least 16");

    if (r.has("tau_max")) {
        s.tau_max = r.req_number("tau_max");
        s.tau_max_set = true;
        if (!(s.tau_max >= 20.0))
            bad_line(name, r.line_of("tau_max"), "'tau_max' must be at least 20");
    }

    s.eps = r.req_array("eps");
    if (s.eps.empty()) bad_line(name, r.line_of("eps"), "'eps' must be non-empty");
    for (double e : s.eps)
        if (!(e > 0.0 && e < 1.0))
            bad_line(name, r.line_of("eps"), "'eps' entries must lie in (0, 1)");
    for (std::size_t i = 1; i < s.eps.size(); ++i)
        if (!(s.eps[i] < s.eps[i - 1]))
            bad_line(name, r.line_of("eps"), "'eps' must be strictly decreasing");

    if (auto fs = r.opt_string("form")) {
        try {
            s.form = parse_form(*fs);
        } catch (const ConfigError& e) {
            bad_line(name, r.line_of("form"), e.what());
        }
    }

    if (r.has("n")) {
        long nval = r.req_integer("n");
        if (nval != 2) bad_line(name, r.line_of("n"), "n must equal 2");
    }

    // Higher-order coefficient keys are tolerated but unused at this order.
    for (const auto& [key, rv] : r.raw) {
        if (r.used.count(key)) continue;
        int k = coeff_order(key);
        if (k >= 2) {
            if (!std::holds_alternative<std::string>(rv.v))
                bad_line(name, rv.line, "'" + key + "' must be a string");
            field_from(std::get<std::string>(rv.v), "coefficient '" + key + "'", name, rv.line);
            s.warnings.push_back("coefficient '" + key +
                                 "' is beyond first order; accepted but unused");
            continue;
        }
        bad_line(name, rv.line, "unknown key '" + key + "'");
    }

    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_scenario_text(ss.str(), path);
}

namespace {

// Bisect a sign change of f on [lo, hi] (refining 4x per round) to report a
// tight location in the error message.
double locate_flip(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int round = 0; round < 12; ++round) {
        double step = (hi - lo) / 4.0;
        double a = lo, fa = flo;
        for (int i = 1; i <= 4; ++i) {
            double b = (i == 4) ? hi : lo + step * static_cast<double>(i);
            double fb = f(b);
            if (fa == 0.0 || fa * fb <= 0.0) {
                hi = b;
                lo = a;
                flo = fa;
                break;
            }
            a = b;
            fa = fb;
        }
    }
    return 0.5 * (lo + hi);
}

void check_nonvanishing(const Scenario& s, const Field& fld, const char* label,
                        const std::vector<double>& xs, const std::vector<double>& ts) {
    for (double t : ts) {
        double prev_x = xs.front();
        double prev_v = fld.v(prev_x, t);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double x = xs[i];
            double v = fld.v(x, t);
            if (v == 0.0)
                throw ConfigError(s.name + ": coefficient " + label + " vanishes at (x=" +
                                  fmt17(x) + ", t=" + fmt17(t) + ")");
            if (i > 0 && prev_v * v < 0.0) {
                double xz = locate_flip([&](double xx) { return fld.v(xx, t); }, prev_x, x);
                throw ConfigError(s.name + ": coefficient " + label +
                                  " changes sign near (x=" + fmt17(xz) + ", t=" + fmt17(t) +
                                  "); the leading coefficients must never vanish");
            }
            prev_x = x;
            prev_v = v;
        }
    }
    // time direction along each grid line
    for (double x : xs) {
        double prev_t = ts.front();
        double prev_v = fld.v(x, prev_t);
        for (std::size_t j = 1; j < ts.size(); ++j) {
            double t = ts[j];
            double v = fld.v(x, t);
            if (prev_v * v < 0.0) {
                double tz = locate_flip([&](double tt) { return fld.v(x, tt); }, prev_t, t);
                throw ConfigError(s.name + ": coefficient " + label +
                                  " changes sign near (x=" + fmt17(x) + ", t=" + fmt17(tz) +
                                  "); the leading coefficients must never vanish");
            }
            prev_t = t;
            prev_v = v;
        }
    }
}

} // namespace

void validate(const Scenario& s) {
    // Sample a little beyond the output resolution so thin features between
    // output nodes still get seen.
    std::size_t nx = static_cast<std::size_t>(s.n_x) + 1;
    std::size_t nt = static_cast<std::size_t>(s.n_t) + 1;
    std::vector<double> xs = linspace(s.x_min, s.x_max, nx);
    std::vector<double> ts = linspace(0.0, s.T, nt);

    struct Item {
        const Field* f;
        const char* label;
        bool x_only;
    };
    const Item items[] = {
        {&s.a0, "a0", false}, {&s.a1, "a1", false}, {&s.b0, "b0", false},
        {&s.b1, "b1", false}, {&s.c0, "c0", false}, {&s.c1, "c1", false},
        {&s.u0_init, "u0_init", true}, {&s.u1_init, "u1_init", true},
    };
    for (const Item& it : items) {
        try {
            for (double x : xs) {
                if (it.x_only) {
                    it.f->v(x, 0.0);
                    it.f->dx(x, 0.0);
                } else {
                    for (double t : ts) {
                        it.f->v(x, t);
                        it.f->dx(x, t);
                        it.f->dt(x, t);
                    }
                }
            }
        } catch (const EvalDomainError& e) {
            throw ConfigError(s.name + ": " + it.label +
                              " fails to evaluate on the grid: " + e.what());
        }
    }

    check_nonvanishing(s, s.a0, "a0", xs, ts);
    check_nonvanishing(s, s.b0, "b0", xs, ts);
    check_nonvanishing(s, s.c0, "c0", xs, ts);
}

} // namespace bbm
