#pragma once

#include "plg/geometry.hpp"

#include <array>

namespace plg {

struct ExactValues {
    Vec2 u;
    double p = 0.0;
    Sym2 C;
};

/// Closed-form solution of the Oseen-type Peterlin system on the unit square:
/// a divergence-free velocity from a stream function, a travelling-wave
/// pressure and a conformation tensor equal to the identity on the boundary,
/// together with the body forces that make it an exact solution. The given
/// transport velocity is the exact velocity itself.
class ManufacturedSolution {
public:
    ManufacturedSolution(double nu, double eps) : nu_(nu), eps_(eps) {}

    double nu() const noexcept { return nu_; }
    double eps() const noexcept { return eps_; }

    double stream(Vec2 x, double t) const;

    Vec2 velocity(Vec2 x, double t) const;
    /// (grad u)(i, j) = d u_i / d x_j.
    Mat2 velocity_gradient(Vec2 x, double t) const;
    Vec2 velocity_dt(Vec2 x, double t) const;
    Vec2 velocity_laplacian(Vec2 x, double t) const;

    double pressure(Vec2 x, double t) const;
    Vec2 pressure_gradient(Vec2 x, double t) const;

    Sym2 tensor(Vec2 x, double t) const;
    /// {dC/dx_1, dC/dx_2}.
    std::array<Sym2, 2> tensor_gradient(Vec2 x, double t) const;
    Sym2 tensor_dt(Vec2 x, double t) const;
    Sym2 tensor_laplacian(Vec2 x, double t) const;

    ExactValues eval(Vec2 x, double t) const { return {velocity(x, t), pressure(x, t), tensor(x, t)}; }

    Vec2 given_velocity(Vec2 x, double t) const { return velocity(x, t); }

    /// du/dt + (w.grad)u - div(2 nu D(u)) + grad p - div[(tr C) C].
    Vec2 forcing_f(Vec2 x, double t) const;
    /// dC/dt + (w.grad)C - eps Lap C - (grad u)C - C(grad u)^T + (tr C)^2 C - (tr C) I.
    Sym2 forcing_F(Vec2 x, double t) const;

private:
    double nu_;
    double eps_;
};

inline ExactValues eval_exact(const ManufacturedSolution& m, Vec2 x, double t) { return m.eval(x, t); }

}  // namespace plg
