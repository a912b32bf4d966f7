#pragma once

#include "plg/manufactured.hpp"
#include "plg/scheme.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <vector>

namespace plg::testing {

// Dense oracle: every form evaluated from generic basis-function values at
// the same quadrature points, one global (trial, test) pair at a time.
struct Basis {
    Vec2 u;
    Mat2 gu;
    double p = 0.0;
    Vec2 gp;
    Sym2 C;
    std::array<Sym2, 2> gC{};
    double lambda = 0.0;
};

enum class Kind { u, p, C, lambda };

struct Unknown {
    Kind kind;
    int comp;
    int node;
};

inline std::vector<Unknown> unknowns(const Mesh& mesh, const DofMap& dofs)
{
    std::vector<Unknown> out(dofs.size());
    for (std::size_t i = 0; i < mesh.node_count(); ++i) {
        const int node = static_cast<int>(i);
        for (int c = 0; c < 2; ++c) {
            if (const int d = dofs.velocity(c, i); d != DofMap::dirichlet) out[d] = {Kind::u, c, node};
        }
        out[dofs.pressure(i)] = {Kind::p, 0, node};
        for (int c = 0; c < 3; ++c) out[dofs.tensor(c, i)] = {Kind::C, c, node};
    }
    out[dofs.multiplier()] = {Kind::lambda, 0, -1};
    return out;
}

inline Sym2 unit_tensor(int c, double v)
{
    Sym2 s;
    (c == 0 ? s.c11 : c == 1 ? s.c12 : s.c22) = v;
    return s;
}

inline Basis evaluate(const Unknown& w, const Mesh& mesh, std::size_t k, const std::array<double, 3>& l)
{
    Basis b;
    if (w.kind == Kind::lambda) {
        b.lambda = 1.0;
        return b;
    }
    const auto& e = mesh.element(k);
    const auto it = std::find(e.begin(), e.end(), w.node);
    if (it == e.end()) return b;
    const auto a = static_cast<std::size_t>(it - e.begin());
    const double v = l[a];
    const Vec2 g = mesh.geometry(k).grad[a];
    switch (w.kind) {
    case Kind::u:
        b.u[w.comp] = v;
        b.gu(w.comp, 0) = g.x;
        b.gu(w.comp, 1) = g.y;
        break;
    case Kind::p:
        b.p = v;
        b.gp = g;
        break;
    case Kind::C:
        b.C = unit_tensor(w.comp, v);
        b.gC = {unit_tensor(w.comp, g.x), unit_tensor(w.comp, g.y)};
        break;
    default: break;
    }
    return b;
}

inline double contract(const Mat2& a, const Mat2& b)
{
    return a(0, 0) * b(0, 0) + a(0, 1) * b(0, 1) + a(1, 0) * b(1, 0) + a(1, 1) * b(1, 1);
}

inline Mat2 sym_part(const Mat2& a)
{
    Mat2 d;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) d(i, j) = 0.5 * (a(i, j) + a(j, i));
    return d;
}

inline Mat2 times(const Mat2& a, const Sym2& c)
{
    Mat2 m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m(i, j) = a(i, 0) * c(0, j) + a(i, 1) * c(1, j);
    return m;
}

inline double contract(const Mat2& a, const Sym2& d)
{
    return a(0, 0) * d.c11 + (a(0, 1) + a(1, 0)) * d.c12 + a(1, 1) * d.c22;
}

inline Sym2 eval_sym(const SymTensorField& f, const Mesh& mesh, std::size_t k, const std::array<double, 3>& l)
{
    return as_sym2(eval_field(f, mesh, PointLocation{static_cast<int>(k), l}));
}

struct DenseSystem {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
};

inline DenseSystem dense_step_oracle(const Mesh& mesh, const QuadratureRule& quad, const Params& prm, const State& prev,
                              const UpwindTable& table, double t, const ProblemData& data)
{
    const DofMap dofs(mesh);
    const auto all = unknowns(mesh, dofs);
    const auto n = static_cast<Eigen::Index>(all.size());
    DenseSystem s{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n)};
    for (std::size_t k = 0; k < mesh.element_count(); ++k) {
        const double area = mesh.geometry(k).area;
        const double hk = mesh.diameter(k);
        // Unknowns touching this element.
        std::vector<Eigen::Index> local;
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto& w = all[i];
            const auto& e = mesh.element(k);
            if (w.kind == Kind::lambda || std::find(e.begin(), e.end(), w.node) != e.end()) local.push_back(i);
        }
        for (std::size_t q = 0; q < quad.size(); ++q) {
            const auto& l = quad.points[q];
            const double wq = area * quad.weights[q];
            const auto idx = table.index(k, q);
            const Vec2 x = table.source[idx];
            const Sym2 cp = eval_sym(prev.C, mesh, k, l);
            const double trp = cp.trace();
            const Vec2 u_foot = as_vec2(eval_field(prev.u, mesh, table.where[idx]));
            const Sym2 c_foot = as_sym2(eval_field(prev.C, mesh, table.where[idx]));
            const Vec2 f = data.f(x, t);
            const Sym2 F = data.F(x, t);
            for (Eigen::Index r : local) {
                const Basis v = evaluate(all[r], mesh, k, l);
                double rhs = dot((1.0 / prm.dt) * u_foot + f, v.u);
                Sym2 g = (1.0 / prm.dt) * c_foot + F;
                g.c11 += trp;
                g.c22 += trp;
                rhs += frobenius(g, v.C);
                s.b[r] += wq * rhs;
                for (Eigen::Index c : local) {
                    const Basis u = evaluate(all[c], mesh, k, l);
                    const double div_u = u.gu(0, 0) + u.gu(1, 1);
                    const double div_v = v.gu(0, 0) + v.gu(1, 1);
                    double a = dot(u.u, v.u) / prm.dt + 2.0 * prm.nu * contract(sym_part(u.gu), sym_part(v.gu)) -
                               div_v * u.p + u.C.trace() * contract(v.gu, cp);
                    a += -div_u * v.p - prm.delta0 * hk * hk * dot(u.gp, v.gp) + u.lambda * v.p + u.p * v.lambda;
                    a += frobenius(u.C, v.C) / prm.dt + prm.eps * (frobenius(u.gC[0], v.gC[0]) + frobenius(u.gC[1], v.gC[1])) -
                         2.0 * contract(times(u.gu, cp), v.C) + trp * trp * frobenius(u.C, v.C);
                    s.A(r, c) += wq * a;
                }
            }
        }
    }
    return s;
}

inline Eigen::MatrixXd to_dense(const SparseMatrix& a)
{
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(a.rows), static_cast<Eigen::Index>(a.cols));
    for (std::size_t r = 0; r < a.rows; ++r)
        for (auto k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) m(static_cast<Eigen::Index>(r), a.col_indices[k]) += a.values[k];
    return m;
}

inline ProblemData manufactured_data(const ManufacturedSolution& m)
{
    return {[&m](Vec2 x, double t) { return m.velocity(x, t); }, [&m](Vec2 x, double t) { return m.forcing_f(x, t); },
            [&m](Vec2 x, double t) { return m.forcing_F(x, t); }};
}

inline State interpolated_state(const ManufacturedSolution& m, const Mesh& mesh, double t)
{
    State s;
    s.time = t;
    s.u = interpolate([&](Vec2 x, double s_) { return m.velocity(x, s_); }, mesh, t);
    s.p = interpolate([&](Vec2 x, double s_) { return m.pressure(x, s_); }, mesh, t);
    s.C = interpolate([&](Vec2 x, double s_) { return m.tensor(x, s_); }, mesh, t);
    return s;
}

}  // namespace plg::testing
