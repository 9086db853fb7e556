#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace kaclab {

// Exact rational arithmetic on int64 numerator/denominator.
// Every operation reduces; intermediates run through __int128 and throw
// std::overflow_error instead of wrapping. Denominator is always positive.
class Rational {
public:
    constexpr Rational() : num_(0), den_(1) {}
    Rational(int64_t n) : num_(n), den_(1) {}
    Rational(int64_t n, int64_t d) { assign(n, d); }

    int64_t num() const { return num_; }
    int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        __int128 n = i128(a.num_) * b.den_ + i128(b.num_) * a.den_;
        __int128 d = i128(a.den_) * b.den_;
        return from_i128(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        __int128 n = i128(a.num_) * b.den_ - i128(b.num_) * a.den_;
        __int128 d = i128(a.den_) * b.den_;
        return from_i128(n, d);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_i128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("rational division by zero");
        return from_i128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rational operator-() const { return Rational(-num_, den_); }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        __int128 lhs = i128(a.num_) * b.den_;
        __int128 rhs = i128(b.num_) * a.den_;
        return lhs < rhs ? std::strong_ordering::less
             : lhs > rhs ? std::strong_ordering::greater
                         : std::strong_ordering::equal;
    }

    double to_double() const { return double(num_) / double(den_); }

    // Rendered as "num/den", denominator always shown ("1/1", "-3/4").
    std::string str() const {
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    // Accepts "p", "p/q" and plain decimals like "0.25" (exact binary-free parse).
    static Rational parse(const std::string& s);

private:
    static __int128 i128(int64_t x) { return static_cast<__int128>(x); }

    static int64_t narrow(__int128 x) {
        if (x > INT64_MAX || x < INT64_MIN) throw std::overflow_error("rational overflow");
        return static_cast<int64_t>(x);
    }

    static Rational from_i128(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        Rational r;
        r.num_ = narrow(n);
        r.den_ = narrow(d);
        return r;
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a == 0 ? 1 : a;
    }

    void assign(int64_t n, int64_t d) {
        Rational r = from_i128(i128(n), i128(d));
        num_ = r.num_;
        den_ = r.den_;
    }

    int64_t num_;
    int64_t den_;
};

inline Rational Rational::parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        int64_t n = std::stoll(s.substr(0, slash));
        int64_t d = std::stoll(s.substr(slash + 1));
        return Rational(n, d);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(std::stoll(s));
    bool neg = s[0] == '-';
    std::string digits = s;
    digits.erase(dot, 1);
    if (neg) digits.erase(0, 1);
    size_t frac_len = s.size() - dot - 1;
    if (frac_len > 18) throw std::invalid_argument("decimal literal too long for exact parse: " + s);
    int64_t n = digits.empty() ? 0 : std::stoll(digits);
    int64_t d = 1;
    for (size_t i = 0; i < frac_len; ++i) d *= 10;
    return Rational(neg ? -n : n, d);
}

} // namespace kaclab
