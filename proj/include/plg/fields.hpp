#pragma once

#include "plg/error.hpp"
#include "plg/geometry.hpp"
#include "plg/mesh.hpp"

#include <array>
#include <cstddef>
#include <tuple>
#include <type_traits>
#include <vector>

namespace plg {

/// P1 nodal field with K components, stored component-major.
template <int K>
struct NodalField {
    static constexpr int components = K;

    NodalField() = default;
    explicit NodalField(std::size_t nodes, double value = 0.0)
    {
        for (auto& c : comp) c.assign(nodes, value);
    }

    std::size_t node_count() const noexcept { return comp[0].size(); }
    std::vector<double>& operator[](int c) { return comp[c]; }
    const std::vector<double>& operator[](int c) const { return comp[c]; }

    friend bool operator==(const NodalField&, const NodalField&) = default;

    std::array<std::vector<double>, K> comp;
};

using ScalarField = NodalField<1>;
using VectorField = NodalField<2>;
/// Components ordered (C11, C12, C22); C21 is never stored.
using SymTensorField = NodalField<3>;

inline std::array<double, 1> to_components(double v) { return {v}; }
inline std::array<double, 2> to_components(Vec2 v) { return {v.x, v.y}; }
inline std::array<double, 3> to_components(Sym2 v) { return {v.c11, v.c12, v.c22}; }

inline Vec2 as_vec2(const std::array<double, 2>& a) { return {a[0], a[1]}; }
inline Sym2 as_sym2(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }

template <int K>
std::array<double, K> eval_field(const NodalField<K>& field, const Mesh& mesh, const PointLocation& loc)
{
    const auto& e = mesh.element(loc.element);
    std::array<double, K> out{};
    for (int c = 0; c < K; ++c) {
        const auto& v = field.comp[c];
        out[c] = loc.bary[0] * v[e[0]] + loc.bary[1] * v[e[1]] + loc.bary[2] * v[e[2]];
    }
    return out;
}

/// Constant gradient of component c on element k.
template <int K>
Vec2 element_gradient(const NodalField<K>& field, const Mesh& mesh, std::size_t k, int c)
{
    const auto& e = mesh.element(k);
    const auto& g = mesh.geometry(k).grad;
    const auto& v = field.comp[c];
    return v[e[0]] * g[0] + v[e[1]] * g[1] + v[e[2]] * g[2];
}

/// Lagrange interpolant of an analytic function f(x, t).
template <typename F>
auto interpolate(F&& f, const Mesh& mesh, double t)
{
    using Value = std::decay_t<decltype(f(Vec2{}, t))>;
    constexpr int K = std::tuple_size_v<decltype(to_components(Value{}))>;
    NodalField<K> field(mesh.node_count());
    for (std::size_t i = 0; i < mesh.node_count(); ++i) {
        const auto v = to_components(f(mesh.node(i), t));
        for (int c = 0; c < K; ++c) field.comp[c][i] = v[c];
    }
    return field;
}

template <int K>
void check_size(const NodalField<K>& field, const Mesh& mesh)
{
    for (const auto& c : field.comp) {
        if (c.size() != mesh.node_count()) {
            throw DimensionMismatch("field length does not match mesh node count");
        }
    }
}

}  // namespace plg
