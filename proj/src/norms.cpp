#include "plg/norms.hpp"

#include "plg/characteristics.hpp"
#include "plg/error.hpp"

#include <cmath>
#include <limits>

namespace plg {

namespace {

template <int K>
double l2_squared(const NodalField<K>& f, const Mesh& mesh)
{
    double total = 0.0;
    for (std::size_t k = 0; k < mesh.element_count(); ++k) {
        const auto& e = mesh.element(k);
        const double area = mesh.geometry(k).area;
        for (int c = 0; c < K; ++c) {
            const auto& v = f.comp[c];
            const double a = v[e[0]], b = v[e[1]], d = v[e[2]];
            const double s = a + b + d;
            total += component_weight<K>(c) * area / 12.0 * (a * a + b * b + d * d + s * s);
        }
    }
    return total;
}

template <int K>
double grad_squared(const NodalField<K>& f, const Mesh& mesh)
{
    double total = 0.0;
    for (std::size_t k = 0; k < mesh.element_count(); ++k) {
        const double area = mesh.geometry(k).area;
        for (int c = 0; c < K; ++c) {
            const Vec2 g = element_gradient(f, mesh, k, c);
            total += component_weight<K>(c) * area * dot(g, g);
        }
    }
    return total;
}

double safe_ratio(double num, double den)
{
    return den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
}

// sum_K area * sum_q w_q * pointwise(k, q, x)
template <typename Pointwise>
double quadrature_sum(const Mesh& mesh, const QuadratureRule& quad, Pointwise&& pointwise)
{
    double total = 0.0;
    for (std::size_t k = 0; k < mesh.element_count(); ++k) {
        const double area = mesh.geometry(k).area;
        double local = 0.0;
        for (std::size_t q = 0; q < quad.size(); ++q) {
            const auto& l = quad.points[q];
            local += quad.weights[q] * pointwise(k, l, map_to_element(mesh, k, l));
        }
        total += area * local;
    }
    return total;
}

template <int K>
std::array<double, K> value_at(const NodalField<K>& f, const Mesh& mesh, std::size_t k,
                               const std::array<double, 3>& l)
{
    return eval_field(f, mesh, PointLocation{static_cast<int>(k), l});
}

}  // namespace

template <int K>
double l2_norm(const NodalField<K>& f, const Mesh& mesh)
{
    check_size(f, mesh);
    return std::sqrt(l2_squared(f, mesh));
}

template <int K>
double h1_seminorm(const NodalField<K>& f, const Mesh& mesh)
{
    check_size(f, mesh);
    return std::sqrt(grad_squared(f, mesh));
}

template <int K>
std::pair<double, double> l2_and_h1_norms(const NodalField<K>& f, const Mesh& mesh)
{
    check_size(f, mesh);
    const double l2 = l2_squared(f, mesh);
    return {std::sqrt(l2), std::sqrt(l2 + grad_squared(f, mesh))};
}

double h_seminorm(const ScalarField& p, const Mesh& mesh)
{
    check_size(p, mesh);
    double total = 0.0;
    for (std::size_t k = 0; k < mesh.element_count(); ++k) {
        const Vec2 g = element_gradient(p, mesh, k, 0);
        const double hk = mesh.diameter(k);
        total += hk * hk * mesh.geometry(k).area * dot(g, g);
    }
    return std::sqrt(total);
}

template <int K>
NodalField<K> difference(const NodalField<K>& a, const NodalField<K>& b)
{
    if (a.node_count() != b.node_count()) throw DimensionMismatch("difference: field sizes differ");
    NodalField<K> d(a.node_count());
    for (int c = 0; c < K; ++c) {
        for (std::size_t i = 0; i < a.node_count(); ++i) d.comp[c][i] = a.comp[c][i] - b.comp[c][i];
    }
    return d;
}

template <int K>
double primed_l2_norm(const NodalField<K>& f, const Mesh& mesh, const QuadratureRule& quad)
{
    check_size(f, mesh);
    return std::sqrt(quadrature_sum(mesh, quad, [&](std::size_t k, const auto& l, Vec2) {
        const auto v = value_at(f, mesh, k, l);
        double s = 0.0;
        for (int c = 0; c < K; ++c) s += component_weight<K>(c) * v[c] * v[c];
        return s;
    }));
}

double primed_l2_error(const VectorField& uh, const std::function<Vec2(Vec2)>& u, const Mesh& mesh,
                       const QuadratureRule& quad)
{
    return std::sqrt(quadrature_sum(mesh, quad, [&](std::size_t k, const auto& l, Vec2 x) {
        const auto v = value_at(uh, mesh, k, l);
        const Vec2 d = Vec2{v[0], v[1]} - u(x);
        return dot(d, d);
    }));
}

double primed_l2_error(const ScalarField& ph, const std::function<double(Vec2)>& p, const Mesh& mesh,
                       const QuadratureRule& quad)
{
    return std::sqrt(quadrature_sum(mesh, quad, [&](std::size_t k, const auto& l, Vec2 x) {
        const double d = value_at(ph, mesh, k, l)[0] - p(x);
        return d * d;
    }));
}

double primed_l2_error(const SymTensorField& Ch, const std::function<Sym2(Vec2)>& C, const Mesh& mesh,
                       const QuadratureRule& quad)
{
    return std::sqrt(quadrature_sum(mesh, quad, [&](std::size_t k, const auto& l, Vec2 x) {
        const Sym2 d = as_sym2(value_at(Ch, mesh, k, l)) - C(x);
        return frobenius(d, d);
    }));
}

double primed_h1_error(const VectorField& uh, const std::function<Vec2(Vec2)>& u,
                       const std::function<Mat2(Vec2)>& grad_u, const Mesh& mesh, const QuadratureRule& quad)
{
    return std::sqrt(quadrature_sum(mesh, quad, [&](std::size_t k, const auto& l, Vec2 x) {
        const auto v = value_at(uh, mesh, k, l);
        const Vec2 d = Vec2{v[0], v[1]} - u(x);
        const Mat2 g = grad_u(x);
        double s = dot(d, d);
        for (int i = 0; i < 2; ++i) {
            const Vec2 gh = element_gradient(uh, mesh, k, i);
            const Vec2 dg = gh - Vec2{g(i, 0), g(i, 1)};
            s += dot(dg, dg);
        }
        return s;
    }));
}

double primed_h1_error(const SymTensorField& Ch, const std::function<Sym2(Vec2)>& C,
                       const std::function<std::array<Sym2, 2>(Vec2)>& grad_C, const Mesh& mesh,
                       const QuadratureRule& quad)
{
    return std::sqrt(quadrature_sum(mesh, quad, [&](std::size_t k, const auto& l, Vec2 x) {
        const Sym2 d = as_sym2(value_at(Ch, mesh, k, l)) - C(x);
        const auto g = grad_C(x);
        double s = frobenius(d, d);
        const std::array<Vec2, 3> exact{Vec2{g[0].c11, g[1].c11}, Vec2{g[0].c12, g[1].c12},
                                        Vec2{g[0].c22, g[1].c22}};
        for (int c = 0; c < 3; ++c) {
            const Vec2 dg = element_gradient(Ch, mesh, k, c) - exact[c];
            s += component_weight<3>(c) * dot(dg, dg);
        }
        return s;
    }));
}

double primed_h_seminorm_error(const ScalarField& ph, const std::function<Vec2(Vec2)>& grad_p, const Mesh& mesh,
                               const QuadratureRule& quad)
{
    return std::sqrt(quadrature_sum(mesh, quad, [&](std::size_t k, const auto&, Vec2 x) {
        const double hk = mesh.diameter(k);
        const Vec2 dg = element_gradient(ph, mesh, k, 0) - grad_p(x);
        return hk * hk * dot(dg, dg);
    }));
}

LevelNorms measure_level(const DiscreteLevel& discrete, const DiscreteLevel& interpolant, const Mesh& mesh,
                         const ExactSnapshot* exact, const QuadratureRule* quad)
{
    LevelNorms n;
    const auto eu = difference(discrete.u, interpolant.u);
    const auto ep = difference(discrete.p, interpolant.p);
    const auto eC = difference(discrete.C, interpolant.C);
    std::tie(n.u_l2, n.u_h1) = l2_and_h1_norms(eu, mesh);
    n.p_l2 = l2_norm(ep, mesh);
    n.p_h = h_seminorm(ep, mesh);
    std::tie(n.C_l2, n.C_h1) = l2_and_h1_norms(eC, mesh);
    std::tie(n.iu_l2, n.iu_h1) = l2_and_h1_norms(interpolant.u, mesh);
    n.ip_l2 = l2_norm(interpolant.p, mesh);
    std::tie(n.iC_l2, n.iC_h1) = l2_and_h1_norms(interpolant.C, mesh);

    if (exact != nullptr && quad != nullptr) {
        n.primed = ErrorSet{
            primed_l2_error(discrete.u, exact->u, mesh, *quad),
            primed_h1_error(discrete.u, exact->u, exact->grad_u, mesh, *quad),
            primed_l2_error(discrete.p, exact->p, mesh, *quad),
            primed_h_seminorm_error(discrete.p, exact->grad_p, mesh, *quad),
            primed_l2_error(discrete.C, exact->C, mesh, *quad),
            primed_h1_error(discrete.C, exact->C, exact->grad_C, mesh, *quad),
        };
    }
    return n;
}

void ErrorAccumulator::Channel::add(int level, double value, double dt)
{
    max = std::max(max, value);
    if (level >= 1) sum += dt * value * value;
}

double ErrorAccumulator::Channel::l2() const { return std::sqrt(sum); }

void ErrorAccumulator::add(int level, const LevelNorms& n)
{
    u_l2_.add(level, n.u_l2, dt_);
    u_h1_.add(level, n.u_h1, dt_);
    p_l2_.add(level, n.p_l2, dt_);
    p_h_.add(level, n.p_h, dt_);
    C_l2_.add(level, n.C_l2, dt_);
    C_h1_.add(level, n.C_h1, dt_);
    iu_l2_.add(level, n.iu_l2, dt_);
    iu_h1_.add(level, n.iu_h1, dt_);
    ip_l2_.add(level, n.ip_l2, dt_);
    iC_l2_.add(level, n.iC_l2, dt_);
    iC_h1_.add(level, n.iC_h1, dt_);
    if (n.primed) {
        for (int i = 0; i < 6; ++i) primed_ch_[i].add(level, (*n.primed)[i], dt_);
    } else {
        primed_ = false;
    }
    ++levels_;
}

ErrorSet ErrorAccumulator::relative_errors() const
{
    return {
        safe_ratio(u_l2_.linf(), iu_l2_.linf()),
        safe_ratio(u_h1_.l2(), iu_h1_.l2()),
        safe_ratio(p_l2_.l2(), ip_l2_.l2()),
        safe_ratio(p_h_.l2(), ip_l2_.l2()),
        safe_ratio(C_l2_.linf(), iC_l2_.linf()),
        safe_ratio(C_h1_.l2(), iC_h1_.l2()),
    };
}

std::optional<ErrorSet> ErrorAccumulator::primed_errors() const
{
    if (!primed_ || levels_ == 0) return std::nullopt;
    return ErrorSet{
        safe_ratio(primed_ch_[0].linf(), iu_l2_.linf()),
        safe_ratio(primed_ch_[1].l2(), iu_h1_.l2()),
        safe_ratio(primed_ch_[2].l2(), ip_l2_.l2()),
        safe_ratio(primed_ch_[3].l2(), ip_l2_.l2()),
        safe_ratio(primed_ch_[4].linf(), iC_l2_.linf()),
        safe_ratio(primed_ch_[5].l2(), iC_h1_.l2()),
    };
}

ErrorSet relative_errors(std::span<const LevelNorms> trajectory, double dt)
{
    ErrorAccumulator acc(dt);
    for (std::size_t n = 0; n < trajectory.size(); ++n) acc.add(static_cast<int>(n), trajectory[n]);
    return acc.relative_errors();
}

std::vector<std::optional<double>> slopes(std::span<const int> divisions, std::span<const double> errors)
{
    if (divisions.size() != errors.size()) throw DimensionMismatch("slopes: length mismatch");
    std::vector<std::optional<double>> out(errors.size());
    for (std::size_t i = 1; i < errors.size(); ++i) {
        out[i] = std::log(errors[i - 1] / errors[i]) /
                 std::log(static_cast<double>(divisions[i]) / static_cast<double>(divisions[i - 1]));
    }
    return out;
}

std::vector<std::array<std::optional<double>, 6>> ErrorReport::slope_table(bool primed) const
{
    std::vector<std::array<std::optional<double>, 6>> table(rows.size());
    std::vector<int> ns;
    for (const auto& r : rows) ns.push_back(r.N);
    for (int k = 0; k < 6; ++k) {
        std::vector<double> e;
        bool available = true;
        for (const auto& r : rows) {
            if (primed) {
                if (!r.er_primed) {
                    available = false;
                    break;
                }
                e.push_back((*r.er_primed)[k]);
            } else {
                e.push_back(r.er[k]);
            }
        }
        if (!available) continue;
        const auto s = slopes(ns, e);
        for (std::size_t i = 0; i < rows.size(); ++i) table[i][k] = s[i];
    }
    return table;
}

template double l2_norm(const NodalField<1>&, const Mesh&);
template double l2_norm(const NodalField<2>&, const Mesh&);
template double l2_norm(const NodalField<3>&, const Mesh&);
template double h1_seminorm(const NodalField<1>&, const Mesh&);
template double h1_seminorm(const NodalField<2>&, const Mesh&);
template double h1_seminorm(const NodalField<3>&, const Mesh&);
template std::pair<double, double> l2_and_h1_norms(const NodalField<1>&, const Mesh&);
template std::pair<double, double> l2_and_h1_norms(const NodalField<2>&, const Mesh&);
template std::pair<double, double> l2_and_h1_norms(const NodalField<3>&, const Mesh&);
template NodalField<1> difference(const NodalField<1>&, const NodalField<1>&);
template NodalField<2> difference(const NodalField<2>&, const NodalField<2>&);
template NodalField<3> difference(const NodalField<3>&, const NodalField<3>&);
template double primed_l2_norm(const NodalField<1>&, const Mesh&, const QuadratureRule&);
template double primed_l2_norm(const NodalField<2>&, const Mesh&, const QuadratureRule&);
template double primed_l2_norm(const NodalField<3>&, const Mesh&, const QuadratureRule&);

}  // namespace plg
