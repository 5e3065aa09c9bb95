#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace motpaver {

// Exact arithmetic backend. et_off keeps the type value-like so the same
// generic code instantiates for Rational and double.
using Rational =
    boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                  boost::multiprecision::et_off>;

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

/// Per-instance comparison policy: exact for Rational, tolerance tau for double.
template <class T>
struct Numerics {
    T tol{};

    static Numerics exact() { return Numerics{T(0)}; }
    static Numerics with_tol(const T& t) { return Numerics{t}; }

    bool is_zero(const T& a) const {
        if constexpr (is_exact_v<T>) return a == 0;
        else return std::abs(a) <= tol;
    }
    bool is_pos(const T& a) const {
        if constexpr (is_exact_v<T>) return a > 0;
        else return a > tol;
    }
    bool is_neg(const T& a) const {
        if constexpr (is_exact_v<T>) return a < 0;
        else return a < -tol;
    }
    bool eq(const T& a, const T& b) const { return is_zero(a - b); }
    bool le(const T& a, const T& b) const { return !is_pos(a - b); }
    bool lt(const T& a, const T& b) const { return is_neg(a - b); }
};

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(double x) { return x; }

inline std::string to_string(const Rational& q) { return q.str(); }
inline std::string to_string(double x) { return std::to_string(x); }

/// Parses "p/q", "-3", "0.125", "1e-3" into an exact rational.
inline Rational parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rational num(s.substr(0, slash));
        Rational den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator: " + s);
        return num / den;
    }
    // decimal or scientific notation, converted exactly
    std::size_t pos = 0;
    bool neg = false;
    if (s[pos] == '+' || s[pos] == '-') {
        neg = (s[pos] == '-');
        ++pos;
    }
    std::string digits;
    long frac_digits = 0;
    bool seen_digit = false, seen_dot = false;
    long exponent = 0;
    for (; pos < s.size(); ++pos) {
        char c = s[pos];
        if (c >= '0' && c <= '9') {
            digits.push_back(c);
            seen_digit = true;
            if (seen_dot) ++frac_digits;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else if ((c == 'e' || c == 'E') && seen_digit) {
            exponent = std::stol(s.substr(pos + 1));
            break;
        } else {
            throw std::invalid_argument("bad numeric literal: " + s);
        }
    }
    if (!seen_digit) throw std::invalid_argument("bad numeric literal: " + s);
    Rational value(digits.empty() ? "0" : digits);
    long shift = exponent - frac_digits;
    Rational ten(10);
    for (long i = 0; i < shift; ++i) value *= ten;
    for (long i = 0; i < -shift; ++i) value /= ten;
    return neg ? -value : value;
}

template <class T>
T parse_scalar(const std::string& s) {
    if constexpr (is_exact_v<T>) return parse_rational(s);
    else return to_double(parse_rational(s));
}

}  // namespace motpaver
