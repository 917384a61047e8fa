#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gsr {

// Column vector on a boundary torus, coordinates (section, fiber).
struct Vec2 {
    long long s = 0;
    long long f = 0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
    Vec2 operator-() const { return {-s, -f}; }
};

inline long long checked_mul(long long x, long long y) {
    __int128 p = (__int128)x * y;
    if (p > INT64_MAX || p < INT64_MIN)
        throw std::overflow_error("gluing arithmetic exceeds 64-bit range");
    return (long long)p;
}

inline long long checked_add(long long x, long long y) {
    __int128 p = (__int128)x + y;
    if (p > INT64_MAX || p < INT64_MIN)
        throw std::overflow_error("gluing arithmetic exceeds 64-bit range");
    return (long long)p;
}

// a ∧ b, the algebraic intersection number of two classes on the torus.
inline long long wedge(const Vec2& a, const Vec2& b) {
    return checked_add(checked_mul(a.s, b.f), -checked_mul(a.f, b.s));
}

inline bool primitive(const Vec2& v) {
    if (v.s == 0 && v.f == 0) return false;
    long long a = v.s < 0 ? -v.s : v.s;
    long long b = v.f < 0 ? -v.f : v.f;
    return std::gcd(a, b) == 1;
}

// Integer 2x2 matrix, rows (a,b),(c,d), acting on (section, fiber) columns.
// Gluings of oriented boundary tori always have determinant -1.
struct GluingMatrix {
    long long a = 1, b = 0, c = 0, d = -1;

    long long det() const {
        return checked_add(checked_mul(a, d), -checked_mul(b, c));
    }

    Vec2 apply(const Vec2& v) const {
        return {checked_add(checked_mul(a, v.s), checked_mul(b, v.f)),
                checked_add(checked_mul(c, v.s), checked_mul(d, v.f))};
    }

    GluingMatrix operator*(const GluingMatrix& o) const {
        return {checked_add(checked_mul(a, o.a), checked_mul(b, o.c)),
                checked_add(checked_mul(a, o.b), checked_mul(b, o.d)),
                checked_add(checked_mul(c, o.a), checked_mul(d, o.c)),
                checked_add(checked_mul(c, o.b), checked_mul(d, o.d))};
    }

    // Valid only for |det| = 1.
    GluingMatrix inverse() const {
        long long dt = det();
        if (dt == 1) return {d, -b, -c, a};
        if (dt == -1) return {-d, b, c, -a};
        throw std::domain_error("gluing matrix is not unimodular");
    }

    friend bool operator==(const GluingMatrix&, const GluingMatrix&) = default;

    std::string str() const {
        return std::to_string(a) + "," + std::to_string(b) + "," +
               std::to_string(c) + "," + std::to_string(d);
    }
};

// Crossing a T^2 x I piece: its two boundary bases share the fiber while the
// section boundary curves sum to zero, so a class rewrites by negating the
// section coordinate. Determinant -1, an involution.
inline GluingMatrix t2xi_transit() { return {-1, 0, 0, 1}; }

} // namespace gsr
