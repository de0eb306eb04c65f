#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bbm/errors.hpp"
#include "bbm/scenario.hpp"

#include <string>

using namespace bbm;

namespace {

// A minimal valid scenario; tests mutate copies of this text.
const char* kBase = R"toml(a0 = "1"
b0 = "1"
c0 = "1 + 0.1*sin(0.2*x)"
u0_init = "0"
phi0 = 0.0
dphi0 = 2.0
T = 1.0
x_min = -8
x_max = 8
n_x = 128
n_t = 64
eps = [0.1, 0.05, 0.025, 0.0125]
)toml";

Scenario load(const std::string& text) { return load_scenario_text(text, "test.toml"); }

} // namespace

TEST_CASE("minimal scenario loads with documented defaults") {
    Scenario s = load(kBase);
    CHECK(s.phi0 == 0.0);
    CHECK(s.dphi0 == 2.0);
    CHECK(s.T == 1.0);
    CHECK(s.n_x == 128);
    CHECK(s.n_t == 64);
    CHECK(s.eps.size() == 4);
    CHECK(s.eps.front() == 0.1);
    CHECK(s.form == Form::auto_form);
    CHECK(s.C0 == 0.0);
    CHECK(s.C3 == 0.0);
    CHECK(s.C4 == 0.0);
    CHECK_FALSE(s.tau_max_set);
    // defaulted first-order coefficients evaluate to zero
    CHECK(s.a1.v(0.3, 0.7) == 0.0);
    CHECK(s.b1.v(0.3, 0.7) == 0.0);
    CHECK(s.c1.v(0.3, 0.7) == 0.0);
    CHECK(s.u1_init.v(0.3, 0.0) == 0.0);
    // coefficient partials are exposed
    CHECK(s.c0.dx(0.0, 0.0) == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(s.warnings.empty());
    validate(s); // must not throw
}

TEST_CASE("every required key is enforced by name") {
    for (const char* key : {"a0", "b0", "c0", "u0_init", "phi0", "dphi0", "T",
                            "x_min", "x_max", "n_x", "n_t", "eps"}) {
        std::string text;
        std::string prefix = std::string(key) + " ";
        for (const char* p = kBase; *p;) {
            const char* nl = p;
            while (*nl && *nl != '\n') ++nl;
            std::string line(p, nl - p);
            if (line.rfind(prefix, 0) != 0) text += line + "\n";
            p = *nl ? nl + 1 : nl;
        }
        CAPTURE(key);
        try {
            load(text);
            FAIL_CHECK("expected ConfigError for missing " << key);
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find(key) != std::string::npos);
        }
    }
}

TEST_CASE("nonlinearity degree is pinned") {
    CHECK_NOTHROW(load(std::string(kBase) + "n = 2\n"));
    try {
        load(std::string(kBase) + "n = 3\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("n must equal 2") != std::string::npos);
    }
}

TEST_CASE("unknown keys are rejected, higher-order coefficients warned") {
    CHECK_THROWS_AS(load(std::string(kBase) + "frobnicate = 1\n"), ConfigError);
    CHECK_THROWS_AS(load(std::string(kBase) + "a01 = \"1\"\n"), ConfigError);
    Scenario s = load(std::string(kBase) + "a2 = \"sin(x)\"\nc5 = \"1\"\n");
    REQUIRE(s.warnings.size() == 2);
    CHECK(s.warnings[0].find("a2") != std::string::npos);
    CHECK(s.warnings[1].find("c5") != std::string::npos);
    // still malformed expressions in unused coefficients are reported
    CHECK_THROWS_AS(load(std::string(kBase) + "a2 = \"sin(\"\n"), ConfigError);
    CHECK_THROWS_AS(load(std::string(kBase) + "a2 = 5\n"), ConfigError);
}

TEST_CASE("eps array is validated") {
    auto swap_eps = [&](const char* eps_line) {
        std::string text;
        for (const char* p = kBase; *p;) {
            const char* nl = p;
            while (*nl && *nl != '\n') ++nl;
            std::string line(p, nl - p);
            if (line.rfind("eps ", 0) != 0) text += line + "\n";
            p = *nl ? nl + 1 : nl;
        }
        return text + eps_line + "\n";
    };
    CHECK_THROWS_AS(load(swap_eps("eps = []")), ConfigError);
    CHECK_THROWS_AS(load(swap_eps("eps = [0.05, 0.1]")), ConfigError);
    CHECK_THROWS_AS(load(swap_eps("eps = [0.1, 0.1]")), ConfigError);
    CHECK_THROWS_AS(load(swap_eps("eps = [1.0, 0.5]")), ConfigError);
    CHECK_THROWS_AS(load(swap_eps("eps = [0.5, 0.0]")), ConfigError);
    CHECK_THROWS_AS(load(swap_eps("eps = [0.5, -0.1]")), ConfigError);
    CHECK_NOTHROW(load(swap_eps("eps = [0.1]")));
}

TEST_CASE("grid and window bounds are validated") {
    CHECK_THROWS_AS(load(std::string(kBase) + "tau_max = 10\n"), ConfigError);
    CHECK_NOTHROW(load(std::string(kBase) + "tau_max = 20\n"));
    Scenario s = load(std::string(kBase) + "tau_max = 45\n");
    CHECK(s.tau_max_set);
    CHECK(s.tau_max == 45.0);

    auto replace_line = [&](const char* prefix, const char* repl) {
        std::string text;
        for (const char* p = kBase; *p;) {
            const char* nl = p;
            while (*nl && *nl != '\n') ++nl;
            std::string line(p, nl - p);
            if (line.rfind(prefix, 0) == 0)
                text += std::string(repl) + "\n";
            else
                text += line + "\n";
            p = *nl ? nl + 1 : nl;
        }
        return text;
    };
    CHECK_THROWS_AS(load(replace_line("n_x", "n_x = 8")), ConfigError);
    CHECK_THROWS_AS(load(replace_line("n_t", "n_t = 15")), ConfigError);
    CHECK_THROWS_AS(load(replace_line("n_x", "n_x = 128.5")), ConfigError);
    CHECK_THROWS_AS(load(replace_line("T", "T = 0")), ConfigError);
    CHECK_THROWS_AS(load(replace_line("T", "T = -1")), ConfigError);
    CHECK_THROWS_AS(load(replace_line("x_max", "x_max = -9")), ConfigError);
    CHECK_THROWS_AS(load(replace_line("phi0", "phi0 = \"zero\"")), ConfigError);
    CHECK_THROWS_AS(load(replace_line("a0", "a0 = 1")), ConfigError);
}

TEST_CASE("form key") {
    Scenario s = load(std::string(kBase) + "form = \"theorem2\"\n");
    CHECK(s.form == Form::theorem2);
    s = load(std::string(kBase) + "form = \"theorem1\"\n");
    CHECK(s.form == Form::theorem1);
    s = load(std::string(kBase) + "form = \"auto\"\n");
    CHECK(s.form == Form::auto_form);
    CHECK_THROWS_AS(load(std::string(kBase) + "form = \"bogus\"\n"), ConfigError);
    CHECK_THROWS_AS(load(std::string(kBase) + "form = 1\n"), ConfigError);
}

TEST_CASE("toml subset syntax") {
    // comments, blank lines, inline comments, CRLF endings
    Scenario s = load("# header comment\r\n\r\n" + std::string(kBase) +
                      "u1_init = \"0*x\" # trailing comment\n");
    CHECK(s.u1_init.v(1.0, 0.0) == 0.0);
}

TEST_CASE("string containing hash parses as expression error not comment") {
    // the '#' stays inside the string, so the expression parser sees it
    CHECK_THROWS_AS(load(std::string(kBase) + "u1_init = \"1 # 2\"\n"), ConfigError);
}

TEST_CASE("duplicate keys rejected") {
    CHECK_THROWS_AS(load(std::string(kBase) + "T = 2.0\n"), ConfigError);
}

TEST_CASE("parse errors carry file and line") {
    try {
        load(std::string(kBase) + "T 2.0\n"); // duplicate T but malformed first
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        std::string w = e.what();
        CHECK(w.find("test.toml:13") != std::string::npos);
    }
    CHECK_THROWS_AS(load("a0 = \"1\"\nb0 =\n"), ConfigError);
    CHECK_THROWS_AS(load("a0 = [1, ]\n"), ConfigError);
    CHECK_THROWS_AS(load("a0 = \"unterminated\n"), ConfigError);
}

TEST_CASE("expression errors are wrapped with context") {
    try {
        load(std::string(kBase) + "u1_init = \"sin(\"\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        std::string w = e.what();
        CHECK(w.find("u1_init") != std::string::npos);
    }
    try {
        load(std::string(kBase) + "u1_init = \"sinn(x)\"\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("sinn") != std::string::npos);
    }
}

TEST_CASE("time-dependent initial profiles warn") {
    Scenario s = load(std::string(kBase) + "u1_init = \"x*t\"\n");
    REQUIRE(s.warnings.size() == 1);
    CHECK(s.warnings[0].find("u1_init") != std::string::npos);
}

TEST_CASE("validate rejects vanishing leading coefficients") {
    auto with_c0 = [&](const char* c0) {
        std::string text;
        for (const char* p = kBase; *p;) {
            const char* nl = p;
            while (*nl && *nl != '\n') ++nl;
            std::string line(p, nl - p);
            if (line.rfind("c0 ", 0) == 0)
                text += std::string("c0 = \"") + c0 + "\"\n";
            else
                text += line + "\n";
            p = *nl ? nl + 1 : nl;
        }
        return text;
    };
    // x crosses zero inside [-8, 8]
    try {
        validate(load(with_c0("x")));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        std::string w = e.what();
        CHECK(w.find("c0") != std::string::npos);
        CHECK(w.find("vanish") != std::string::npos);
    }
    // negative but never zero is fine
    CHECK_NOTHROW(validate(load(with_c0("-1 - 0.1*cos(x)"))));
    // time-direction sign change is caught too
    CHECK_THROWS_AS(validate(load(with_c0("1 - 2*t"))), ConfigError);
    // a positive dip that stays positive is fine
    CHECK_NOTHROW(validate(load(with_c0("0.005 + x^2"))));
    // sign-change location is reported near the actual root
    try {
        validate(load(with_c0("x - 1.23")));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        std::string w = e.what();
        CHECK(w.find("1.23") != std::string::npos);
    }
}

TEST_CASE("validate rejects expressions that fail on the grid") {
    // log(x) is undefined on half the window
    std::string text;
    for (const char* p = kBase; *p;) {
        const char* nl = p;
        while (*nl && *nl != '\n') ++nl;
        std::string line(p, nl - p);
        if (line.rfind("u0_init", 0) == 0)
            text += "u0_init = \"log(x)\"\n";
        else
            text += line + "\n";
        p = *nl ? nl + 1 : nl;
    }
    Scenario s = load(text);
    try {
        validate(s);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("u0_init") != std::string::npos);
    }
}
