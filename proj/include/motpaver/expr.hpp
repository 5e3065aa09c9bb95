#pragma once

#include "motpaver/measures.hpp"

#include <memory>
#include <stdexcept>
#include <string>

namespace motpaver {

struct ExprError : std::runtime_error {
    explicit ExprError(const std::string& what) : std::runtime_error(what) {}
};

/// Arithmetic expression over the coordinates x[k], y[k]: literals, + - * /,
/// integer ^, unary minus, parentheses, abs/min/max. Parsed once at problem
/// ingestion and evaluated per atom pair.
class Expr {
public:
    static Expr parse(const std::string& text);
    ~Expr();
    Expr(Expr&&) noexcept;
    Expr& operator=(Expr&&) noexcept;
    Expr(const Expr&) = delete;
    Expr& operator=(const Expr&) = delete;

    Rational eval(const Vec<Rational>& x, const Vec<Rational>& y) const;
    double eval(const Vec<double>& x, const Vec<double>& y) const;

    struct Node;

private:
    Expr();
    std::unique_ptr<Node> root_;
};

}  // namespace motpaver
