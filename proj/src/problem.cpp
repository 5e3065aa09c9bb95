#include "motpaver/problem.hpp"

#include "motpaver/expr.hpp"

#include <fstream>

namespace motpaver {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw ProblemError("problem file, field '" + where + "': " + what);
}

Rational scalar_exact(const json& v, const std::string& where) {
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number()) {
        double d = v.get<double>();
        if (d == static_cast<long long>(d)) return Rational(static_cast<long long>(d));
        bad(where, "non-integer numeric literal in exact mode; quote it as a string "
                   "(e.g. \"0.1\" or \"1/10\") to keep it exact");
    }
    if (v.is_string()) {
        try {
            return parse_rational(v.get<std::string>());
        } catch (const std::exception& e) {
            bad(where, e.what());
        }
    }
    bad(where, "expected a number or a numeric string");
}

double scalar_float(const json& v, const std::string& where) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s.find('/') != std::string::npos)
            bad(where, "rational strings are only accepted in exact mode");
        try {
            return to_double(parse_rational(s));
        } catch (const std::exception& e) {
            bad(where, e.what());
        }
    }
    bad(where, "expected a number or a numeric string");
}

template <class T>
T scalar(const json& v, const std::string& where) {
    if constexpr (is_exact_v<T>) return scalar_exact(v, where);
    else return scalar_float(v, where);
}

template <class T>
DiscreteMeasure<T> measure(const json& file, const std::string& name, int dim,
                           const Numerics<T>& num) {
    if (!file.contains(name)) bad(name, "missing");
    const json& m = file[name];
    if (!m.is_object() || !m.contains("atoms") || !m.contains("weights"))
        bad(name, "expected an object with 'atoms' and 'weights'");
    std::vector<Vec<T>> atoms;
    std::vector<T> weights;
    const json& ja = m["atoms"];
    if (!ja.is_array() || ja.empty()) bad(name + ".atoms", "expected a nonempty array");
    for (std::size_t i = 0; i < ja.size(); ++i) {
        const json& a = ja[i];
        const std::string where = name + ".atoms[" + std::to_string(i) + "]";
        if (!a.is_array() || static_cast<int>(a.size()) != dim)
            bad(where, "expected an array of length " + std::to_string(dim));
        Vec<T> p;
        for (const auto& c : a) p.push_back(scalar<T>(c, where));
        atoms.push_back(std::move(p));
    }
    const json& jw = m["weights"];
    if (!jw.is_array() || jw.size() != ja.size())
        bad(name + ".weights", "expected an array matching 'atoms'");
    for (std::size_t i = 0; i < jw.size(); ++i)
        weights.push_back(scalar<T>(jw[i], name + ".weights[" + std::to_string(i) + "]"));
    try {
        return make_measure(dim, std::move(atoms), std::move(weights), num);
    } catch (const std::invalid_argument& e) {
        bad(name, e.what());
    }
}

template <class T>
Problem<T> build(const json& file, int dim, const Numerics<T>& num) {
    Problem<T> p;
    p.num = num;
    p.mu = measure<T>(file, "mu", dim, num);
    p.nu = measure<T>(file, "nu", dim, num);
    if (!file.contains("cost")) {
        p.cost.values.assign(p.mu.size(), std::vector<T>(p.nu.size(), T(0)));
        p.cost.nonneg = true;
        return p;
    }
    p.has_cost = true;
    const json& c = file["cost"];
    if (!c.is_object() || !c.contains("type")) bad("cost", "expected an object with 'type'");
    const std::string type = c["type"].get<std::string>();
    std::vector<std::vector<T>> values;
    if (type == "matrix") {
        if (!c.contains("values")) bad("cost.values", "missing");
        const json& rows = c["values"];
        if (!rows.is_array() || static_cast<int>(rows.size()) != p.mu.size())
            bad("cost.values", "expected one row per mu atom (after duplicate merging)");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const json& row = rows[i];
            const std::string where = "cost.values[" + std::to_string(i) + "]";
            if (!row.is_array() || static_cast<int>(row.size()) != p.nu.size())
                bad(where, "expected one entry per nu atom");
            std::vector<T> out;
            for (const auto& v : row) out.push_back(scalar<T>(v, where));
            values.push_back(std::move(out));
        }
    } else if (type == "expr") {
        if (!c.contains("formula") || !c["formula"].is_string()) bad("cost.formula", "missing");
        Expr expr = [&] {
            try {
                return Expr::parse(c["formula"].get<std::string>());
            } catch (const ExprError& e) {
                bad("cost.formula", e.what());
            }
        }();
        for (int i = 0; i < p.mu.size(); ++i) {
            std::vector<T> row;
            for (int j = 0; j < p.nu.size(); ++j) {
                try {
                    row.push_back(expr.eval(p.mu.atoms[i], p.nu.atoms[j]));
                } catch (const ExprError& e) {
                    bad("cost.formula", e.what());
                }
            }
            values.push_back(std::move(row));
        }
    } else {
        bad("cost.type", "expected 'matrix' or 'expr'");
    }
    try {
        p.cost = make_cost(std::move(values), false, num);
    } catch (const std::invalid_argument& e) {
        bad("cost", e.what());
    }
    return p;
}

}  // namespace

AnyProblem parse_problem(const json& file) {
    if (!file.is_object()) throw ProblemError("problem file: expected a JSON object");
    if (!file.contains("dimension") || !file["dimension"].is_number_integer())
        bad("dimension", "expected an integer");
    const int dim = file["dimension"].get<int>();
    if (dim < 1) bad("dimension", "must be positive");
    std::string mode = "exact";
    if (file.contains("mode")) {
        mode = file["mode"].get<std::string>();
        if (mode != "exact" && mode != "float") bad("mode", "expected 'exact' or 'float'");
    }
    AnyProblem out;
    if (mode == "exact") {
        out.tolerance = 0;
        if (file.contains("tolerance") && scalar_float(file["tolerance"], "tolerance") != 0)
            bad("tolerance", "exact mode admits no tolerance");
        out.v = build<Rational>(file, dim, Numerics<Rational>::exact());
    } else {
        out.tolerance = 1e-9;
        if (file.contains("tolerance")) {
            out.tolerance = scalar_float(file["tolerance"], "tolerance");
            if (!(out.tolerance > 0)) bad("tolerance", "must be positive");
        }
        out.v = build<double>(file, dim, Numerics<double>::with_tol(out.tolerance));
    }
    return out;
}

AnyProblem load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ProblemError("cannot open problem file '" + path + "'");
    json file;
    try {
        in >> file;
    } catch (const json::parse_error& e) {
        throw ProblemError("problem file '" + path + "': " + e.what());
    }
    return parse_problem(file);
}

namespace {

json rational_str(const Rational& v) { return v.str(); }

template <class T>
json scalar_echo(const T& v) {
    if constexpr (is_exact_v<T>) return rational_str(v);
    else return v;
}

template <class T>
json measure_echo(const DiscreteMeasure<T>& m) {
    json atoms = json::array(), weights = json::array();
    for (const auto& a : m.atoms) {
        json pt = json::array();
        for (const auto& c : a) pt.push_back(scalar_echo(c));
        atoms.push_back(pt);
    }
    for (const auto& w : m.weights) weights.push_back(scalar_echo(w));
    return {{"atoms", atoms}, {"weights", weights}};
}

}  // namespace

template <class T>
T scalar_from_json(const json& v, const std::string& where) {
    return scalar<T>(v, where);
}

template Rational scalar_from_json<Rational>(const json&, const std::string&);
template double scalar_from_json<double>(const json&, const std::string&);

json problem_json(const AnyProblem& problem) {
    return std::visit(
        [&](const auto& p) -> json {
            json out;
            out["dimension"] = p.mu.dim;
            out["mode"] = problem.mode();
            if (!problem.exact()) out["tolerance"] = problem.tolerance;
            out["mu"] = measure_echo(p.mu);
            out["nu"] = measure_echo(p.nu);
            if (p.has_cost) {
                json rows = json::array();
                for (const auto& row : p.cost.values) {
                    json r = json::array();
                    for (const auto& v : row) r.push_back(scalar_echo(v));
                    rows.push_back(r);
                }
                out["cost"] = {{"type", "matrix"}, {"values", rows}};
            }
            return out;
        },
        problem.v);
}

}  // namespace motpaver
