#include "plg/characteristics.hpp"

#include "plg/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace plg {

CourantCheck classify_courant(double w_lipschitz, double dt)
{
    CourantCheck check;
    check.w_lipschitz = w_lipschitz;
    check.courant = dt * w_lipschitz;
    if (check.courant >= 1.0) {
        check.status = CourantStatus::warn_bijective;
    } else if (check.courant > 0.25) {
        check.status = CourantStatus::warn_jacobian;
    }
    return check;
}

CourantCheck check_courant(const VectorField& w, const Mesh& mesh, double dt)
{
    check_size(w, mesh);
    double lip = 0.0;
    for (std::size_t k = 0; k < mesh.element_count(); ++k) {
        for (int c = 0; c < 2; ++c) {
            const Vec2 g = element_gradient(w, mesh, k, c);
            lip = std::max({lip, std::abs(g.x), std::abs(g.y)});
        }
    }
    return classify_courant(lip, dt);
}

CourantCheck check_courant(const VelocityFunction& w, double t, const Mesh& mesh, double dt)
{
    return check_courant(interpolate(w, mesh, t), mesh, dt);
}

UpwindTable build_upwind_table(const Mesh& mesh, const QuadratureRule& quad, const VelocityFunction& w,
                               double t, double dt)
{
    const auto nq = quad.size();
    const auto ne = static_cast<std::int64_t>(mesh.element_count());
    UpwindTable table;
    table.points_per_element = nq;
    table.t = t;
    table.source.resize(mesh.element_count() * nq);
    table.foot.resize(table.source.size());
    table.where.resize(table.source.size());

    constexpr double tol = UpwindTable::clamp_tolerance;
    std::int64_t escaped = std::numeric_limits<std::int64_t>::max();
    std::size_t clamped = 0;

#pragma omp parallel reduction(+ : clamped) reduction(min : escaped)
    {
        PointLocator locator(mesh, tol);
#pragma omp for schedule(static)
        for (std::int64_t k = 0; k < ne; ++k) {
            for (std::size_t q = 0; q < nq; ++q) {
                const auto idx = static_cast<std::size_t>(k) * nq + q;
                const Vec2 x = map_to_element(mesh, static_cast<std::size_t>(k), quad.points[q]);
                Vec2 y = upwind_point(x, w(x, t), dt);
                table.source[idx] = x;
                if (y.x < -tol || y.x > 1.0 + tol || y.y < -tol || y.y > 1.0 + tol) {
                    escaped = std::min(escaped, static_cast<std::int64_t>(idx));
                    continue;
                }
                const Vec2 inside{std::clamp(y.x, 0.0, 1.0), std::clamp(y.y, 0.0, 1.0)};
                if (!(inside == y)) {
                    ++clamped;
                    y = inside;
                }
                table.foot[idx] = y;
                table.where[idx] = locator.locate(y, static_cast<int>(k));
            }
        }
    }

    if (escaped != std::numeric_limits<std::int64_t>::max()) {
        const auto courant = check_courant(w, t, mesh, dt);
        const Vec2 x = table.source[static_cast<std::size_t>(escaped)];
        const Vec2 y = upwind_point(x, w(x, t), dt);
        std::ostringstream msg;
        msg.precision(17);
        msg << "upwind point of (" << x.x << ", " << x.y << ") at t=" << t << " is (" << y.x << ", " << y.y
            << "), outside the domain; dt*|w|_1,inf ~= " << courant.courant;
        throw UpwindEscape(msg.str(), courant.courant);
    }
    table.clamped = clamped;
    return table;
}

}  // namespace plg
