#include "plg/error.hpp"
#include "plg/mesh.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace plg;

namespace {

class MeshTest : public ::testing::TestWithParam<std::tuple<int, Diagonal>> {};

TEST_P(MeshTest, CountsAndAreas)
{
    const auto [n, diag] = GetParam();
    const Mesh mesh(n, diag);
    EXPECT_EQ(mesh.node_count(), static_cast<std::size_t>((n + 1) * (n + 1)));
    EXPECT_EQ(mesh.element_count(), static_cast<std::size_t>(2 * n * n));
    double total = 0.0;
    for (std::size_t k = 0; k < mesh.element_count(); ++k) {
        EXPECT_NEAR(mesh.geometry(k).area, 0.5 / (n * n), 1e-15);
        EXPECT_NEAR(mesh.diameter(k), std::sqrt(2.0) / n, 1e-15);
        total += mesh.geometry(k).area;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(mesh.h(), std::sqrt(2.0) / n, 1e-15);
}

TEST_P(MeshTest, CounterClockwiseAndGradientsSumToZero)
{
    const auto [n, diag] = GetParam();
    const Mesh mesh(n, diag);
    for (std::size_t k = 0; k < mesh.element_count(); ++k) {
        const auto& e = mesh.element(k);
        const Vec2 a = mesh.node(e[0]), b = mesh.node(e[1]), c = mesh.node(e[2]);
        const double cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
        EXPECT_GT(cross, 0.0);
        const auto& g = mesh.geometry(k).grad;
        const Vec2 s = g[0] + g[1] + g[2];
        EXPECT_NEAR(s.x, 0.0, 1e-12);
        EXPECT_NEAR(s.y, 0.0, 1e-12);
        // grad lambda_i . (p_j - p_i) = -1 for j != i.
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                const double v = dot(g[i], mesh.node(e[j]));
                const double expect = dot(g[i], mesh.node(e[i])) - (i == j ? 0.0 : 1.0);
                EXPECT_NEAR(v, expect, 1e-12);
            }
        }
    }
}

TEST_P(MeshTest, AdjacencyIsSymmetric)
{
    const auto [n, diag] = GetParam();
    const Mesh mesh(n, diag);
    std::size_t boundary_edges = 0;
    for (std::size_t k = 0; k < mesh.element_count(); ++k) {
        const auto& e = mesh.element(k);
        for (int i = 0; i < 3; ++i) {
            const int nb = mesh.neighbors(k)[i];
            const int p = e[(i + 1) % 3], q = e[(i + 2) % 3];
            if (nb == Mesh::no_neighbor) {
                ++boundary_edges;
                EXPECT_TRUE(mesh.on_boundary(p) && mesh.on_boundary(q));
                continue;
            }
            const auto& f = mesh.element(nb);
            EXPECT_TRUE(std::count(f.begin(), f.end(), p) == 1 && std::count(f.begin(), f.end(), q) == 1);
            const auto& back = mesh.neighbors(nb);
            EXPECT_EQ(std::count(back.begin(), back.end(), static_cast<int>(k)), 1);
        }
    }
    EXPECT_EQ(boundary_edges, static_cast<std::size_t>(4 * n));
}

TEST_P(MeshTest, BoundaryFlagsAndNodeElements)
{
    const auto [n, diag] = GetParam();
    const Mesh mesh(n, diag);
    std::size_t on = 0;
    for (std::size_t i = 0; i < mesh.node_count(); ++i) {
        const Vec2 x = mesh.node(i);
        const bool b = x.x == 0.0 || x.x == 1.0 || x.y == 0.0 || x.y == 1.0;
        EXPECT_EQ(mesh.on_boundary(i), b);
        on += b;
        const auto els = mesh.elements_of_node(i);
        EXPECT_TRUE(std::is_sorted(els.begin(), els.end()));
        for (int k : els) {
            const auto& e = mesh.element(k);
            EXPECT_EQ(std::count(e.begin(), e.end(), static_cast<int>(i)), 1);
        }
    }
    EXPECT_EQ(on, static_cast<std::size_t>(4 * n));
}

TEST_P(MeshTest, LocateRandomPoints)
{
    const auto [n, diag] = GetParam();
    const Mesh mesh(n, diag);
    PointLocator locator(mesh);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int s = 0; s < 500; ++s) {
        const Vec2 x{u(rng), u(rng)};
        const auto loc = locator.locate(x);
        ASSERT_GE(loc.element, 0);
        double sum = 0.0;
        Vec2 back{};
        const auto& e = mesh.element(loc.element);
        for (int i = 0; i < 3; ++i) {
            EXPECT_GE(loc.bary[i], 0.0);
            sum += loc.bary[i];
            back = back + loc.bary[i] * mesh.node(e[i]);
        }
        EXPECT_NEAR(sum, 1.0, 1e-14);
        EXPECT_NEAR(back.x, x.x, 1e-13);
        EXPECT_NEAR(back.y, x.y, 1e-13);
        const auto direct = locate_point(mesh, x);
        EXPECT_EQ(direct.element, loc.element);
    }
}

TEST_P(MeshTest, VertexAndEdgeTiesUseLowestIndex)
{
    const auto [n, diag] = GetParam();
    const Mesh mesh(n, diag);
    PointLocator locator(mesh);
    for (std::size_t i = 0; i < mesh.node_count(); ++i) {
        const auto loc = locator.locate(mesh.node(i), static_cast<int>(mesh.element_count() - 1));
        EXPECT_EQ(loc.element, mesh.elements_of_node(i).front());
    }
    // Midpoint of an interior edge belongs to the smaller of its two elements.
    for (std::size_t k = 0; k < mesh.element_count(); ++k) {
        const auto& e = mesh.element(k);
        for (int i = 0; i < 3; ++i) {
            const int nb = mesh.neighbors(k)[i];
            if (nb == Mesh::no_neighbor) continue;
            const Vec2 mid = 0.5 * (mesh.node(e[(i + 1) % 3]) + mesh.node(e[(i + 2) % 3]));
            EXPECT_EQ(locator.locate(mid).element, std::min<int>(static_cast<int>(k), nb));
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Sizes, MeshTest,
                         ::testing::Combine(::testing::Values(1, 2, 5, 16), ::testing::Values(Diagonal::right,
                                                                                                  Diagonal::left)));

TEST(Mesh, RejectsZeroDivisions)
{
    EXPECT_THROW(Mesh(0, Diagonal::right), InvalidParameter);
    EXPECT_THROW(build_unit_square_mesh(-3), InvalidParameter);
}

TEST(Mesh, RightAndLeftSplitsDiffer)
{
    const Mesh r(1, Diagonal::right), l(1, Diagonal::left);
    const std::set<int> r0(r.element(0).begin(), r.element(0).end());
    const std::set<int> l0(l.element(0).begin(), l.element(0).end());
    EXPECT_EQ(r0, (std::set<int>{0, 1, 3}));
    EXPECT_EQ(l0, (std::set<int>{0, 1, 2}));
}

TEST(Mesh, OutOfDomainThrows)
{
    const Mesh mesh(4, Diagonal::right);
    PointLocator locator(mesh);
    EXPECT_THROW(locator.locate({1.1, 0.5}), OutOfDomain);
    EXPECT_THROW(locator.locate({0.5, -1e-6}), OutOfDomain);
    // Within tolerance: clamped onto the boundary.
    const auto loc = locator.locate({1.0 + 1e-14, 0.5});
    EXPECT_GE(loc.element, 0);
}

TEST(Mesh, ElementGeometryMatchesStored)
{
    const Mesh mesh(3, Diagonal::left);
    for (std::size_t k = 0; k < mesh.element_count(); ++k) {
        const auto g = element_geometry(mesh, k);
        EXPECT_DOUBLE_EQ(g.area, mesh.geometry(k).area);
        for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(g.grad[i].x, mesh.geometry(k).grad[i].x);
    }
    EXPECT_THROW(element_geometry(mesh, mesh.element_count()), InvalidParameter);
}

TEST(Mesh, BarycentricOfVertices)
{
    const Mesh mesh(2, Diagonal::right);
    const auto& e = mesh.element(3);
    for (int i = 0; i < 3; ++i) {
        const auto l = mesh.barycentric(3, mesh.node(e[i]));
        for (int j = 0; j < 3; ++j) EXPECT_NEAR(l[j], i == j ? 1.0 : 0.0, 1e-14);
    }
}

}  // namespace
