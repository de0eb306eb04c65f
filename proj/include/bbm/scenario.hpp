#pragma once

#include "bbm/expr.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace bbm {

// Which assembled solution form the run should produce.
enum class Form { auto_form, theorem1, theorem2 };

Form parse_form(std::string_view name); // throws ConfigError
const char* form_name(Form f);

// A fully loaded problem description: coefficient fields of the perturbed
// wave equation, background initial profiles, wave-curve seed data, domain,
// grids, and the perturbation-size sweep.
struct Scenario {
    std::string name; // file path or label, used in messages

    // Coefficient fields: zeroth and first order in the small parameter.
    Field a0, a1, b0, b1, c0, c1;

    // Background initial profiles (functions of x; evaluated at t = 0).
    Field u0_init, u1_init;

    // Wave-curve seed: position and speed at t = 0, plus free constants of
    // the corrector construction (C0 shifts the core profile; C3 and C4 are
    // the homogeneous-solution weights of the first corrector).
    double phi0 = 0.0, dphi0 = 0.0;
    double C0 = 0.0, C3 = 0.0, C4 = 0.0;

    double T = 0.0;             // final time
    double x_min = 0.0, x_max = 0.0;
    long n_x = 0, n_t = 0;      // output grid resolution

    double tau_max = 0.0;       // inner-window half-width in the fast variable
    bool tau_max_set = false;   // false: choose automatically after the curve solve

    std::vector<double> eps;    // strictly decreasing, all in (0, 1)
    Form form = Form::auto_form;

    std::vector<std::string> warnings; // non-fatal notes from loading
};

// Parse a scenario from file / from text.  Both throw ConfigError on
// malformed input, unknown keys, or out-of-range values.
Scenario load_scenario_file(const std::string& path);
Scenario load_scenario_text(std::string_view text, const std::string& name);

// Semantic validation beyond parsing: every expression (and its first
// partials) must evaluate on the closed space-time grid, and none of the
// leading coefficients a0, b0, c0 may vanish anywhere on it.  Sign changes
// are located by bisection refinement for the error message.  Throws
// ConfigError.
void validate(const Scenario& s);

} // namespace bbm
