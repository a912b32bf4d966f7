#pragma once

#include "plg/fields.hpp"
#include "plg/geometry.hpp"
#include "plg/mesh.hpp"
#include "plg/quadrature.hpp"

#include <functional>
#include <vector>

namespace plg {

using VelocityFunction = std::function<Vec2(Vec2, double)>;

/// Upwind point x - w(x) dt of the first-order characteristics method.
constexpr Vec2 upwind_point(Vec2 x, Vec2 w_at_x, double dt) { return {x.x - w_at_x.x * dt, x.y - w_at_x.y * dt}; }

enum class CourantStatus { ok, warn_jacobian, warn_bijective };

struct CourantCheck {
    CourantStatus status = CourantStatus::ok;
    double w_lipschitz = 0.0;  ///< estimate of |w|_{1,inf}
    double courant = 0.0;      ///< dt * |w|_{1,inf}
};

/// Classifies dt * |w|_{1,inf}: above 1/4 the Jacobian bound of the upwind map
/// is lost, at 1 or more the map may fail to be a bijection of the domain.
CourantCheck classify_courant(double w_lipschitz, double dt);

/// |w|_{1,inf} estimated from the element-wise gradients of the P1 field.
CourantCheck check_courant(const VectorField& w, const Mesh& mesh, double dt);
CourantCheck check_courant(const VelocityFunction& w, double t, const Mesh& mesh, double dt);

/// Upwind points of every (element, quadrature point) pair for one time level.
struct UpwindTable {
    static constexpr double clamp_tolerance = 1e-10;

    std::size_t points_per_element = 0;
    std::vector<Vec2> source;          ///< physical quadrature points
    std::vector<Vec2> foot;            ///< upwind points, after clamping
    std::vector<PointLocation> where;  ///< location of each foot
    std::size_t clamped = 0;
    double t = 0.0;

    std::size_t index(std::size_t element, std::size_t q) const { return element * points_per_element + q; }
};

/// Throws UpwindEscape for an upwind point outside the closed square by more
/// than clamp_tolerance.
UpwindTable build_upwind_table(const Mesh& mesh, const QuadratureRule& quad, const VelocityFunction& w,
                               double t, double dt);

/// Values of an old-level field at the stored upwind points, one per table entry.
template <int K>
std::vector<std::array<double, K>> eval_composed(const NodalField<K>& field, const Mesh& mesh,
                                                 const UpwindTable& table)
{
    std::vector<std::array<double, K>> out(table.where.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = eval_field(field, mesh, table.where[i]);
    return out;
}

/// Physical point of a barycentric quadrature node in element k.
inline Vec2 map_to_element(const Mesh& mesh, std::size_t k, const std::array<double, 3>& bary)
{
    const auto& e = mesh.element(k);
    return bary[0] * mesh.node(e[0]) + bary[1] * mesh.node(e[1]) + bary[2] * mesh.node(e[2]);
}

}  // namespace plg
