#pragma once

#include "plg/geometry.hpp"
#include "plg/manufactured.hpp"

#include <array>

namespace plg::testing {

/// Body forces recomputed from the closed-form u, p, C values only, with
/// central differences: step 1e-5 for first derivatives and a five-point
/// fourth-order stencil with step 1e-3 for second derivatives.
class FiniteDifferenceOracle {
public:
    explicit FiniteDifferenceOracle(const ManufacturedSolution& m) : m_(m) {}

    static constexpr double h1 = 1e-5;
    static constexpr double h2 = 1e-3;

    Vec2 f(Vec2 x, double t) const
    {
        const double nu = m_.nu();
        const Vec2 u = m_.velocity(x, t);
        Vec2 out;
        for (int i = 0; i < 2; ++i) {
            const auto ui = [&](Vec2 y, double s) { return m_.velocity(y, s)[i]; };
            const double dt = (ui(x, t + h1) - ui(x, t - h1)) / (2.0 * h1);
            double advect = 0.0;
            double div_2d = 0.0;
            double div_stress = 0.0;
            for (int j = 0; j < 2; ++j) {
                advect += u[j] * d1(ui, x, t, j);
                const auto uj = [&](Vec2 y, double s) { return m_.velocity(y, s)[j]; };
                div_2d += d2(ui, x, t, j, j) + d2(uj, x, t, i, j);
                const auto stress = [&](Vec2 y, double s) {
                    const Sym2 c = m_.tensor(y, s);
                    return c.trace() * c(i, j);
                };
                div_stress += d1(stress, x, t, j);
            }
            const auto p = [&](Vec2 y, double s) { return m_.pressure(y, s); };
            out[i] = dt + advect - nu * div_2d + d1(p, x, t, i) - div_stress;
        }
        return out;
    }

    Sym2 F(Vec2 x, double t) const
    {
        const double eps = m_.eps();
        const Vec2 u = m_.velocity(x, t);
        const Sym2 c = m_.tensor(x, t);
        const double tr = c.trace();
        double grad_u[2][2];
        for (int i = 0; i < 2; ++i) {
            const auto ui = [&](Vec2 y, double s) { return m_.velocity(y, s)[i]; };
            for (int j = 0; j < 2; ++j) grad_u[i][j] = d1(ui, x, t, j);
        }
        std::array<double, 3> out{};
        constexpr int idx[3][2] = {{0, 0}, {0, 1}, {1, 1}};
        for (int k = 0; k < 3; ++k) {
            const int i = idx[k][0];
            const int j = idx[k][1];
            const auto cij = [&](Vec2 y, double s) { return m_.tensor(y, s)(i, j); };
            const double dt = (cij(x, t + h1) - cij(x, t - h1)) / (2.0 * h1);
            const double advect = u.x * d1(cij, x, t, 0) + u.y * d1(cij, x, t, 1);
            const double lap = d2(cij, x, t, 0, 0) + d2(cij, x, t, 1, 1);
            double stretch = 0.0;
            for (int l = 0; l < 2; ++l) stretch += grad_u[i][l] * c(l, j) + c(i, l) * grad_u[j][l];
            out[k] = dt + advect - eps * lap - stretch + tr * tr * c(i, j) - (i == j ? tr : 0.0);
        }
        return {out[0], out[1], out[2]};
    }

private:
    static Vec2 shifted(Vec2 x, int dir, double s)
    {
        x[dir] += s;
        return x;
    }

    template <typename G>
    static double d1(const G& g, Vec2 x, double t, int dir)
    {
        return (g(shifted(x, dir, h1), t) - g(shifted(x, dir, -h1), t)) / (2.0 * h1);
    }

    template <typename G>
    static double d1_coarse(const G& g, Vec2 x, double t, int dir)
    {
        return (-g(shifted(x, dir, 2.0 * h2), t) + 8.0 * g(shifted(x, dir, h2), t) -
                8.0 * g(shifted(x, dir, -h2), t) + g(shifted(x, dir, -2.0 * h2), t)) /
               (12.0 * h2);
    }

    template <typename G>
    static double d2(const G& g, Vec2 x, double t, int a, int b)
    {
        if (a == b) {
            return (-g(shifted(x, a, 2.0 * h2), t) + 16.0 * g(shifted(x, a, h2), t) - 30.0 * g(x, t) +
                    16.0 * g(shifted(x, a, -h2), t) - g(shifted(x, a, -2.0 * h2), t)) /
                   (12.0 * h2 * h2);
        }
        const auto inner = [&](Vec2 y, double s) { return d1_coarse(g, y, s, b); };
        return d1_coarse(inner, x, t, a);
    }

    const ManufacturedSolution& m_;
};

}  // namespace plg::testing
