#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "mksum/errors.hpp"

namespace mksum {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// A point or vector with exact rational coordinates.
using Point = std::vector<Rational>;

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline BigInt floor_of(const Rational& r) {
    BigInt n = numerator_of(r);
    BigInt d = denominator_of(r);
    BigInt q = n / d;
    if (n % d != 0 && n < 0) q -= 1;
    return q;
}

inline BigInt ceil_of(const Rational& r) {
    BigInt n = numerator_of(r);
    BigInt d = denominator_of(r);
    BigInt q = n / d;
    if (n % d != 0 && n > 0) q += 1;
    return q;
}

inline std::int64_t to_int64(const BigInt& z) {
    if (z > std::numeric_limits<std::int64_t>::max() ||
        z < std::numeric_limits<std::int64_t>::min())
        throw InvalidArgument("integer " + z.str() + " does not fit in 64 bits");
    return z.convert_to<std::int64_t>();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
    if (den == 0) throw InvalidArgument("zero denominator");
    return Rational(BigInt(num), BigInt(den));
}

/// Exact conversion of a finite double.
inline Rational from_double(double x) { return Rational(x); }

/// Accepts "p", "-p", "p/q".
inline Rational parse_rational(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
        return s;
    };
    auto parse_int = [&](std::string_view s) {
        s = trim(s);
        if (s.empty()) throw InvalidArgument("empty integer in rational literal");
        std::size_t start = (s.front() == '-' || s.front() == '+') ? 1 : 0;
        if (start == s.size()) throw InvalidArgument("malformed integer '" + std::string(s) + "'");
        for (std::size_t i = start; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9')
                throw InvalidArgument("malformed rational '" + std::string(text) + "'");
        std::string str(s);
        if (str.front() == '+') str.erase(0, 1);
        return BigInt(str);
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    BigInt num = parse_int(text.substr(0, slash));
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) throw InvalidArgument("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
}

inline std::string to_string(const Rational& r) {
    if (denominator_of(r) == 1) return numerator_of(r).str();
    return numerator_of(r).str() + "/" + denominator_of(r).str();
}

inline Rational pow_int(const Rational& base, unsigned exponent) {
    Rational result = 1;
    for (unsigned i = 0; i < exponent; ++i) result *= base;
    return result;
}

inline Rational abs_of(const Rational& r) { return r < 0 ? Rational(-r) : r; }

// ---- small vector helpers ----

inline Point zero_point(std::size_t d) { return Point(d, Rational(0)); }

inline Point operator+(const Point& a, const Point& b) {
    Point out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

inline Point operator-(const Point& a, const Point& b) {
    Point out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

inline Point operator*(const Rational& s, const Point& a) {
    Point out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
    return out;
}

inline Rational dot(const Point& a, const Point& b) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline bool is_zero(const Point& a) {
    for (const auto& x : a)
        if (x != 0) return false;
    return true;
}

inline std::vector<double> to_doubles(const Point& p) {
    std::vector<double> out;
    out.reserve(p.size());
    for (const auto& x : p) out.push_back(to_double(x));
    return out;
}

inline Point point_from_ints(std::initializer_list<std::int64_t> xs) {
    Point p;
    for (auto x : xs) p.emplace_back(x);
    return p;
}

/// Integer multiple of `v` with coprime integer entries and the same direction.
inline std::vector<BigInt> primitive_integer_direction(const Point& v) {
    BigInt lcm = 1;
    for (const auto& x : v) {
        BigInt den = denominator_of(x);
        lcm = lcm / boost::multiprecision::gcd(lcm, den) * den;
    }
    std::vector<BigInt> out;
    out.reserve(v.size());
    BigInt g = 0;
    for (const auto& x : v) {
        BigInt n = numerator_of(x) * (lcm / denominator_of(x));
        out.push_back(n);
        g = boost::multiprecision::gcd(g, n < 0 ? BigInt(-n) : n);
    }
    if (g > 1)
        for (auto& n : out) n /= g;
    return out;
}

}  // namespace mksum
