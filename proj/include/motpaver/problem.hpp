#pragma once

#include "motpaver/measures.hpp"
#include "motpaver/transport.hpp"

#include <json.hpp>

#include <string>
#include <variant>

namespace motpaver {

/// Malformed problem files and reports; surfaces as exit code 4.
struct ProblemError : std::runtime_error {
    explicit ProblemError(const std::string& what) : std::runtime_error(what) {}
};

template <class T>
struct Problem {
    DiscreteMeasure<T> mu, nu;
    CostMatrix<T> cost;  // zero matrix when the file names none
    bool has_cost = false;
    Numerics<T> num;
};

struct AnyProblem {
    std::variant<Problem<Rational>, Problem<double>> v;
    double tolerance = 0;

    bool exact() const { return std::holds_alternative<Problem<Rational>>(v); }
    const char* mode() const { return exact() ? "exact" : "float"; }
};

/// Parses the problem-file schema:
///   { "dimension": d,
///     "mu": {"atoms": [[q,..],..], "weights": [q,..]},
///     "nu": {...},
///     "cost": {"type":"matrix","values":[[..]]} | {"type":"expr","formula":"..."},
///     "mode": "exact" | "float", "tolerance": t }
/// Scalars q are integers, decimal strings, or "p/q" strings; "p/q" is only
/// accepted in exact mode. Throws ProblemError with field diagnostics.
AnyProblem parse_problem(const nlohmann::json& file);
AnyProblem load_problem(const std::string& path);

/// Problem echo embedded in every report; parse_problem(problem_json(p))
/// round-trips.
nlohmann::json problem_json(const AnyProblem& problem);

/// Scalar parsing shared with report verification (mode-checked like problem
/// fields). Instantiated for Rational and double.
template <class T>
T scalar_from_json(const nlohmann::json& v, const std::string& where);

}  // namespace motpaver
