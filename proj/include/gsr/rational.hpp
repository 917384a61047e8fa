#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gsr {

// Exact rational on 64-bit words, eagerly reduced. Orbifold Euler
// characteristics have to compare exactly; floats are not acceptable here.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(long long n) : num_(n) {}
    Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

    long long num() const { return num_; }
    long long den() const { return den_; }

    Rational operator-() const { return raw(-num_, den_); }

    friend Rational operator+(const Rational& x, const Rational& y) {
        __int128 n = (__int128)x.num_ * y.den_ + (__int128)y.num_ * x.den_;
        __int128 d = (__int128)x.den_ * y.den_;
        return from128(n, d);
    }
    friend Rational operator-(const Rational& x, const Rational& y) { return x + (-y); }
    friend Rational operator*(const Rational& x, const Rational& y) {
        return from128((__int128)x.num_ * y.num_, (__int128)x.den_ * y.den_);
    }
    Rational& operator+=(const Rational& y) { *this = *this + y; return *this; }
    Rational& operator-=(const Rational& y) { *this = *this - y; return *this; }

    friend bool operator==(const Rational& x, const Rational& y) {
        return x.num_ == y.num_ && x.den_ == y.den_;
    }
    friend bool operator!=(const Rational& x, const Rational& y) { return !(x == y); }
    friend bool operator<(const Rational& x, const Rational& y) {
        return (__int128)x.num_ * y.den_ < (__int128)y.num_ * x.den_;
    }
    friend bool operator<=(const Rational& x, const Rational& y) { return !(y < x); }
    friend bool operator>(const Rational& x, const Rational& y) { return y < x; }
    friend bool operator>=(const Rational& x, const Rational& y) { return !(x < y); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    static Rational raw(long long n, long long d) {
        Rational r;
        r.num_ = n;
        r.den_ = d;
        return r;
    }
    static Rational from128(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 a = n < 0 ? -n : n;
        __int128 g = gcd128(a, d);
        if (g > 1) { n /= g; d /= g; }
        constexpr __int128 lim = 0x7fffffffffffffffLL;
        if (n > lim || n < -lim || d > lim)
            throw std::overflow_error("rational: value exceeds 64-bit range");
        return raw((long long)n, (long long)d);
    }
    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a;
    }
    void normalize() { *this = from128(num_, den_); }

    long long num_ = 0;
    long long den_ = 1;
};

} // namespace gsr
