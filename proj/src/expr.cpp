#include "motpaver/expr.hpp"

#include <cctype>
#include <vector>

namespace motpaver {

struct Expr::Node {
    enum class Kind { Literal, Coord, Add, Sub, Mul, Div, Neg, Pow, Abs, Min, Max };
    Kind kind;
    Rational literal;
    bool is_y = false;  // Coord: x[k] or y[k]
    int index = 0;
    long exponent = 0;  // Pow
    std::unique_ptr<Node> a, b;
};

namespace {

using Node = Expr::Node;
using Kind = Node::Kind;

struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw ExprError(what + " at position " + std::to_string(pos) + " in cost formula");
    }

    std::unique_ptr<Node> expr() {
        auto lhs = term();
        for (;;) {
            if (eat('+')) {
                auto n = std::make_unique<Node>();
                n->kind = Kind::Add;
                n->a = std::move(lhs);
                n->b = term();
                lhs = std::move(n);
            } else if (eat('-')) {
                auto n = std::make_unique<Node>();
                n->kind = Kind::Sub;
                n->a = std::move(lhs);
                n->b = term();
                lhs = std::move(n);
            } else {
                return lhs;
            }
        }
    }

    std::unique_ptr<Node> term() {
        auto lhs = factor();
        for (;;) {
            if (eat('*')) {
                auto n = std::make_unique<Node>();
                n->kind = Kind::Mul;
                n->a = std::move(lhs);
                n->b = factor();
                lhs = std::move(n);
            } else if (eat('/')) {
                auto n = std::make_unique<Node>();
                n->kind = Kind::Div;
                n->a = std::move(lhs);
                n->b = factor();
                lhs = std::move(n);
            } else {
                return lhs;
            }
        }
    }

    std::unique_ptr<Node> factor() {
        skip();
        if (eat('-')) {
            auto n = std::make_unique<Node>();
            n->kind = Kind::Neg;
            n->a = factor();
            return n;
        }
        auto base = atom();
        skip();
        if (eat('^')) {
            skip();
            bool neg = eat('-');
            std::size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos == start) fail("expected integer exponent");
            long e = std::stol(s.substr(start, pos - start));
            auto n = std::make_unique<Node>();
            n->kind = Kind::Pow;
            n->exponent = neg ? -e : e;
            n->a = std::move(base);
            return n;
        }
        return base;
    }

    std::unique_ptr<Node> atom() {
        skip();
        if (pos >= s.size()) fail("unexpected end of formula");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            auto n = expr();
            if (!eat(')')) fail("expected ')'");
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return name();
        fail("unexpected character");
    }

    std::unique_ptr<Node> number() {
        std::size_t start = pos;
        while (pos < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.'))
            ++pos;
        auto n = std::make_unique<Node>();
        n->kind = Kind::Literal;
        try {
            n->literal = parse_rational(s.substr(start, pos - start));
        } catch (const std::exception& e) {
            fail(e.what());
        }
        return n;
    }

    std::unique_ptr<Node> name() {
        std::size_t start = pos;
        while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) ++pos;
        std::string id = s.substr(start, pos - start);
        if (id == "x" || id == "y") {
            auto n = std::make_unique<Node>();
            n->kind = Kind::Coord;
            n->is_y = id == "y";
            n->index = 0;
            skip();
            if (eat('[')) {
                skip();
                std::size_t d0 = pos;
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
                if (pos == d0) fail("expected coordinate index");
                n->index = std::stoi(s.substr(d0, pos - d0));
                if (!eat(']')) fail("expected ']'");
            }
            return n;
        }
        Kind k;
        if (id == "abs") k = Kind::Abs;
        else if (id == "min") k = Kind::Min;
        else if (id == "max") k = Kind::Max;
        else fail("unknown identifier '" + id + "'");
        if (!eat('(')) fail("expected '(' after " + id);
        auto n = std::make_unique<Node>();
        n->kind = k;
        n->a = expr();
        if (k != Kind::Abs) {
            if (!eat(',')) fail("expected ',' in " + id);
            n->b = expr();
        }
        if (!eat(')')) fail("expected ')'");
        return n;
    }
};

template <class T>
T eval_node(const Node& n, const Vec<T>& x, const Vec<T>& y) {
    switch (n.kind) {
        case Kind::Literal:
            if constexpr (is_exact_v<T>) return n.literal;
            else return to_double(n.literal);
        case Kind::Coord: {
            const Vec<T>& v = n.is_y ? y : x;
            if (n.index < 0 || n.index >= static_cast<int>(v.size()))
                throw ExprError("coordinate index " + std::to_string(n.index) +
                                " out of range for dimension " + std::to_string(v.size()));
            return v[n.index];
        }
        case Kind::Add: return eval_node(*n.a, x, y) + eval_node(*n.b, x, y);
        case Kind::Sub: return eval_node(*n.a, x, y) - eval_node(*n.b, x, y);
        case Kind::Mul: return eval_node(*n.a, x, y) * eval_node(*n.b, x, y);
        case Kind::Div: {
            T d = eval_node(*n.b, x, y);
            if (d == 0) throw ExprError("division by zero in cost formula");
            return eval_node(*n.a, x, y) / d;
        }
        case Kind::Neg: return -eval_node(*n.a, x, y);
        case Kind::Pow: {
            T base = eval_node(*n.a, x, y);
            long e = n.exponent;
            if (e < 0) {
                if (base == 0) throw ExprError("zero to a negative power in cost formula");
                base = T(1) / base;
                e = -e;
            }
            T out(1);
            for (long i = 0; i < e; ++i) out *= base;
            return out;
        }
        case Kind::Abs: {
            T v = eval_node(*n.a, x, y);
            return v < 0 ? T(-v) : v;
        }
        case Kind::Min: {
            T a = eval_node(*n.a, x, y), b = eval_node(*n.b, x, y);
            return a < b ? a : b;
        }
        case Kind::Max: {
            T a = eval_node(*n.a, x, y), b = eval_node(*n.b, x, y);
            return a > b ? a : b;
        }
    }
    throw ExprError("corrupt expression tree");
}

}  // namespace

Expr::Expr() = default;
Expr::~Expr() = default;
Expr::Expr(Expr&&) noexcept = default;
Expr& Expr::operator=(Expr&&) noexcept = default;

Expr Expr::parse(const std::string& text) {
    Parser p(text);
    Expr e;
    e.root_ = p.expr();
    p.skip();
    if (p.pos != text.size()) p.fail("trailing characters");
    return e;
}

Rational Expr::eval(const Vec<Rational>& x, const Vec<Rational>& y) const {
    return eval_node(*root_, x, y);
}

double Expr::eval(const Vec<double>& x, const Vec<double>& y) const {
    return eval_node(*root_, x, y);
}

}  // namespace motpaver
