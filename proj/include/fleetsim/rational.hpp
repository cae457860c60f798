#pragma once

#include <numeric>
#include <string>

#include "fleetsim/core.hpp"

namespace fleetsim {

/// Exact nonnegative rational; all ratio and bound comparisons go through
/// cross-multiplication, never floating point.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw Error(ErrorCode::BadParams, "rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return a < b || a == b; }

    Rational operator*(const Rational& o) const { return {num * o.num, den * o.den}; }

    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

} // namespace fleetsim
