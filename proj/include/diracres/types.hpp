#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace diracres {

using Cplx = std::complex<double>;

constexpr double PI = 3.14159265358979323846;

/// 2-component complex vector (spinor value of a Dirac solution).
struct Vec2c {
    Cplx a{0.0, 0.0};
    Cplx b{0.0, 0.0};

    Vec2c() = default;
    Vec2c(Cplx a_, Cplx b_) : a(a_), b(b_) {}

    Vec2c operator+(const Vec2c& o) const { return {a + o.a, b + o.b}; }
    Vec2c operator-(const Vec2c& o) const { return {a - o.a, b - o.b}; }
    Vec2c operator*(Cplx s) const { return {a * s, b * s}; }
    Vec2c& operator+=(const Vec2c& o) {
        a += o.a;
        b += o.b;
        return *this;
    }
    double norm_inf() const { return std::max(std::abs(a), std::abs(b)); }
};

inline Vec2c operator*(Cplx s, const Vec2c& v) { return v * s; }

/// 2x2 complex matrix, row-major.
struct Mat2c {
    Cplx m11{0.0}, m12{0.0}, m21{0.0}, m22{0.0};

    Mat2c() = default;
    Mat2c(Cplx a, Cplx b, Cplx c, Cplx d) : m11(a), m12(b), m21(c), m22(d) {}

    static Mat2c identity() { return {1.0, 0.0, 0.0, 1.0}; }

    Vec2c operator*(const Vec2c& v) const {
        return {m11 * v.a + m12 * v.b, m21 * v.a + m22 * v.b};
    }
    Mat2c operator*(const Mat2c& o) const {
        return {m11 * o.m11 + m12 * o.m21, m11 * o.m12 + m12 * o.m22,
                m21 * o.m11 + m22 * o.m21, m21 * o.m12 + m22 * o.m22};
    }
    Mat2c operator+(const Mat2c& o) const {
        return {m11 + o.m11, m12 + o.m12, m21 + o.m21, m22 + o.m22};
    }
    Mat2c operator-(const Mat2c& o) const {
        return {m11 - o.m11, m12 - o.m12, m21 - o.m21, m22 - o.m22};
    }
    Mat2c operator*(Cplx s) const { return {m11 * s, m12 * s, m21 * s, m22 * s}; }
    Mat2c transpose() const { return {m11, m21, m12, m22}; }
    Cplx det() const { return m11 * m22 - m12 * m21; }
    Cplx trace() const { return m11 + m22; }
    double norm_inf() const {
        return std::max(std::max(std::abs(m11), std::abs(m12)),
                        std::max(std::abs(m21), std::abs(m22)));
    }
};

/// Wronskian det(f,g) = f1*g2 - f2*g1 of two spinors.
inline Cplx wronskian(const Vec2c& f, const Vec2c& g) { return f.a * g.b - f.b * g.a; }

}  // namespace diracres
