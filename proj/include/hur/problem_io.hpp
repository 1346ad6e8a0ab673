#pragma once

// Problem files (JSON) and report serialization.
//
// {
//   "problem":   {"g": "1", "h": "v", "f1": "v", "f2": "v", "K": "0.5*v", "F": "0"},
//   "lipschitz": {"l_g": 0, "l_h": 1, "N": 1, "l_f1": 1, "l_f2": 1, "l_K": "0.5", "l_F": "0",
//                 "l_1": 0.5, "l_2": 0, "alpha": 1, "m": 0.5},
//   "domain":    {"L": 1, "n": 33, "R": 1, "m_nodes": 3, "tau": 1},
//   "solver":    {"tol": 1e-10, "max_iter": 200},                          optional
//   "stability": {"shape": "1", "epsilon": 0.1, "phi": "...", "tol_disc": 1e-6},  optional
//   "certify":   {"samples": 1000, "v_range": [-10, 10]}                  optional
// }
//
// h, f1, f2 default to "v". Unknown keys are rejected.

#include <optional>
#include <string>

#include "json.hpp"

#include "hur/certify.hpp"
#include "hur/hammerstein.hpp"
#include "hur/picard.hpp"
#include "hur/stability.hpp"

namespace hur {

using Json = nlohmann::ordered_json;

/// Base for problem-file failures; path() is the JSON path of the offending
/// entry ("problem.K", "domain.n", ...), empty for whole-file errors.
class ProblemFileError : public Error {
public:
    ProblemFileError(const std::string& path, const std::string& message)
        : Error(path.empty() ? message : path + ": " + message), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class ParseError : public ProblemFileError {
public:
    using ProblemFileError::ProblemFileError;
};

class SchemaError : public ProblemFileError {
public:
    using ProblemFileError::ProblemFileError;
};

class ExpressionFieldError : public ProblemFileError {
public:
    using ProblemFileError::ProblemFileError;
};

struct StabilitySettings {
    Expression shape = Expression::constant(1.0);
    double epsilon = 0.1;
    std::optional<Expression> phi;
    /// When absent, 2 * (solver tol + quadrature error estimate at u*).
    std::optional<double> tol_disc;
};

/// Everything a problem file carries.
struct ProblemSetup {
    ProblemInstance instance;
    SolverSettings solver;
    StabilitySettings stability;
    CertifySettings certify;
};

ProblemSetup parse_problem(const Json& doc);
ProblemSetup parse_problem_text(const std::string& text);
ProblemSetup load_problem(const std::string& path);

/// Inverse of parse_problem; expressions are written in canonical form.
Json problem_to_json(const ProblemSetup& setup);
void save_problem(const std::string& path, const ProblemSetup& setup);

Json to_json(const SolveReport& report);
Json to_json(const ContractionCertificate& cert);
Json to_json(const StabilityReport& report);

/// Pretty-printed with a trailing newline; identical input gives identical bytes.
void write_json(const std::string& path, const Json& doc);

} // namespace hur
