#include "plg/quadrature.hpp"

#include "plg/error.hpp"

#include <cmath>
#include <string>

namespace plg {

namespace {

void add_orbit3(QuadratureRule& rule, double a, double b, double w)
{
    rule.points.push_back({a, b, b});
    rule.points.push_back({b, a, b});
    rule.points.push_back({b, b, a});
    for (int i = 0; i < 3; ++i) rule.weights.push_back(w);
}

}  // namespace

QuadratureRule quad_rule(int min_degree)
{
    if (min_degree > 5) {
        throw UnsupportedDegree("quad_rule: no rule of degree " + std::to_string(min_degree));
    }
    QuadratureRule rule;
    if (min_degree <= 1) {
        rule.degree = 1;
        rule.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
        rule.weights.push_back(1.0);
        return rule;
    }
    if (min_degree == 2) {
        rule.degree = 2;
        add_orbit3(rule, 2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0);
        return rule;
    }

    const double s = std::sqrt(15.0);
    rule.degree = 5;
    rule.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    rule.weights.push_back(9.0 / 40.0);
    add_orbit3(rule, (9.0 - 2.0 * s) / 21.0, (6.0 + s) / 21.0, (155.0 + s) / 1200.0);
    add_orbit3(rule, (9.0 + 2.0 * s) / 21.0, (6.0 - s) / 21.0, (155.0 - s) / 1200.0);
    return rule;
}

}  // namespace plg
