#include "plg/error.hpp"
#include "plg/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace plg;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// Reference triangle (0,0), (1,0), (0,1): int x^a y^b = a! b! / (a + b + 2)!.
double exact_monomial(int a, int b) { return factorial(a) * factorial(b) / factorial(a + b + 2); }

double rule_monomial(const QuadratureRule& q, int a, int b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double x = q.points[i][1];
        const double y = q.points[i][2];
        s += q.weights[i] * std::pow(x, a) * std::pow(y, b);
    }
    return 0.5 * s;
}

TEST(Quadrature, ExactUpToDegree)
{
    for (int d = 0; d <= 5; ++d) {
        const auto q = quad_rule(d);
        EXPECT_GE(q.degree, d);
        for (int a = 0; a <= q.degree; ++a) {
            for (int b = 0; a + b <= q.degree; ++b) {
                EXPECT_NEAR(rule_monomial(q, a, b), exact_monomial(a, b), 1e-15) << "d=" << d << " x^" << a
                                                                                  << " y^" << b;
            }
        }
    }
}

TEST(Quadrature, KnownValue)
{
    EXPECT_NEAR(rule_monomial(quad_rule(5), 2, 3), 1.0 / 420.0, 1e-16);
    EXPECT_NEAR(exact_monomial(2, 3), 1.0 / 420.0, 1e-16);
}

TEST(Quadrature, NotExactBeyondDegree)
{
    const auto q = quad_rule(5);
    double worst = 0.0;
    for (int a = 0; a <= 6; ++a) worst = std::max(worst, std::abs(rule_monomial(q, a, 6 - a) - exact_monomial(a, 6 - a)));
    EXPECT_GT(worst, 1e-8);
}

TEST(Quadrature, WeightsAndPoints)
{
    for (int d : {1, 2, 5}) {
        const auto q = quad_rule(d);
        EXPECT_NEAR(std::accumulate(q.weights.begin(), q.weights.end(), 0.0), 1.0, 1e-15);
        for (const auto& p : q.points) {
            EXPECT_NEAR(p[0] + p[1] + p[2], 1.0, 1e-15);
            for (double l : p) EXPECT_GT(l, 0.0);
        }
        for (double w : q.weights) EXPECT_GT(w, 0.0);
    }
    EXPECT_EQ(quad_rule(1).size(), 1u);
    EXPECT_EQ(quad_rule(2).size(), 3u);
    EXPECT_EQ(quad_rule(5).size(), 7u);
}

TEST(Quadrature, UnsupportedDegree)
{
    EXPECT_THROW(quad_rule(6), UnsupportedDegree);
    EXPECT_THROW(quad_rule(20), UnsupportedDegree);
}

}  // namespace
