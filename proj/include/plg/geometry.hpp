#pragma once

#include <array>
#include <cmath>

namespace plg {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr double operator[](int i) const { return i == 0 ? x : y; }
    constexpr double& operator[](int i) { return i == 0 ? x : y; }

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// General 2x2 matrix, row-major: m[i][j].
struct Mat2 {
    std::array<std::array<double, 2>, 2> m{};

    constexpr double operator()(int i, int j) const { return m[i][j]; }
    constexpr double& operator()(int i, int j) { return m[i][j]; }
};

/// Symmetric 2x2 tensor stored by its three independent components.
/// The off-diagonal entry appears twice in the Frobenius product.
struct Sym2 {
    double c11 = 0.0;
    double c12 = 0.0;
    double c22 = 0.0;

    constexpr double trace() const { return c11 + c22; }
    constexpr double operator()(int i, int j) const
    {
        if (i != j) return c12;
        return i == 0 ? c11 : c22;
    }
    friend constexpr Sym2 operator+(Sym2 a, Sym2 b) { return {a.c11 + b.c11, a.c12 + b.c12, a.c22 + b.c22}; }
    friend constexpr Sym2 operator-(Sym2 a, Sym2 b) { return {a.c11 - b.c11, a.c12 - b.c12, a.c22 - b.c22}; }
    friend constexpr Sym2 operator*(double s, Sym2 a) { return {s * a.c11, s * a.c12, s * a.c22}; }
};

/// A:B = sum_ij A_ij B_ij with the symmetric off-diagonal counted twice.
constexpr double frobenius(Sym2 a, Sym2 b) { return a.c11 * b.c11 + 2.0 * a.c12 * b.c12 + a.c22 * b.c22; }

}  // namespace plg
