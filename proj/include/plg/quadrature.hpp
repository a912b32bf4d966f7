#pragma once

#include <array>
#include <vector>

namespace plg {

/// Triangle quadrature in barycentric coordinates:
///   int_K f  ~=  area(K) * sum_i weights[i] * f(points[i]).
struct QuadratureRule {
    int degree = 0;
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;

    std::size_t size() const noexcept { return weights.size(); }
};

/// Cheapest available rule that integrates polynomials of total degree
/// `min_degree` exactly. Degree 5 is the seven-point Gauss rule.
QuadratureRule quad_rule(int min_degree);

}  // namespace plg
