#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bbm {

// Base class for every failure the library raises on purpose.  Each subclass
// corresponds to one externally meaningful failure mode; the CLI maps them to
// process exit codes.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// --- input-language failures -------------------------------------------------

// Malformed expression text.  `offset` is the 0-based byte offset of the first
// character that could not be consumed.
struct SyntaxError : Error {
    std::size_t offset;
    SyntaxError(const std::string& msg, std::size_t off)
        : Error(msg + " (at byte " + std::to_string(off) + ")"), offset(off) {}
};

// An identifier that is neither a variable nor a known function.
struct UnknownIdentifier : Error {
    std::string name;
    explicit UnknownIdentifier(const std::string& ident)
        : Error("unknown identifier '" + ident + "'"), name(ident) {}
};

// Expression evaluation left the domain of a function (log of a negative
// number, division by zero, overflow to non-finite, ...).
struct EvalDomainError : Error {
    double x, t;
    EvalDomainError(const std::string& msg, double x_, double t_)
        : Error(msg + " at (x=" + std::to_string(x_) + ", t=" + std::to_string(t_) + ")"),
          x(x_), t(t_) {}
};

// Scenario file malformed or semantically invalid.
struct ConfigError : Error {
    using Error::Error;
};

// --- solver failures ----------------------------------------------------------

// Evaluation requested outside the region where a solution component exists.
struct OutOfDomain : Error {
    using Error::Error;
};

// Characteristics of the leading-order conservation law cross before the
// requested final time: the smooth background ceases to exist.
struct GradientCatastrophe : Error {
    double t_break;
    explicit GradientCatastrophe(double tb)
        : Error("characteristics cross at t = " + std::to_string(tb) +
                "; smooth background solution stops there"),
          t_break(tb) {}
};

// The curve-speed/background transversality factor degenerated, so the
// corrector transport problem loses its characteristic direction.
struct TransversalityLoss : Error {
    using Error::Error;
};

// The phase ODE left the admissible region (inertia polynomial hit zero or
// the speed blew up) before the final time.
struct PhaseBlowup : Error {
    double t_stop;
    explicit PhaseBlowup(const std::string& msg, double ts)
        : Error(msg), t_stop(ts) {}
};

// Initial data violates the wave-admissibility inequality.
struct InadmissibleStart : Error {
    double margin;
    InadmissibleStart(const std::string& msg, double m) : Error(msg), margin(m) {}
};

// Adaptive quadrature could not reach the requested tolerance.
struct QuadratureFailure : Error {
    using Error::Error;
};

// The solvability bookkeeping produced inconsistent data (e.g. the forced
// zero-limit of the integrated forcing failed to materialize).
struct SolvabilityError : Error {
    using Error::Error;
};

// A linear system inside a solver was singular beyond recovery.
struct LinearSolveFailure : Error {
    using Error::Error;
};

// The requested solution form cannot be built for this scenario (e.g. a
// plateau-class corrector was requested in the pure-decay form).
struct FormUnavailable : Error {
    using Error::Error;
};

// Time step violates the advective stability bound of the reference
// finite-difference scheme.
struct CFLViolation : Error {
    using Error::Error;
};

// Two grids expected to be compatible were not.
struct GridMismatch : Error {
    using Error::Error;
};

// A fit (spline, least squares) received degenerate data.
struct DegenerateFit : Error {
    using Error::Error;
};

} // namespace bbm
