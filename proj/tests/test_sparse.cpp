#include "plg/error.hpp"
#include "plg/sparse.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace plg;

namespace {

Eigen::MatrixXd dense(const SparseMatrix& a)
{
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(a.rows), static_cast<Eigen::Index>(a.cols));
    for (std::size_t r = 0; r < a.rows; ++r) {
        for (auto k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) {
            m(static_cast<Eigen::Index>(r), a.col_indices[k]) = a.values[k];
        }
    }
    return m;
}

TripletBuffer random_buffer(std::size_t n, std::size_t entries, std::uint64_t seed, double diag)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> idx(0, static_cast<int>(n) - 1);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    TripletBuffer t(n, n);
    for (std::size_t i = 0; i < entries; ++i) t.add(idx(rng), idx(rng), val(rng));
    for (std::size_t i = 0; i < n; ++i) t.add(static_cast<int>(i), static_cast<int>(i), diag);
    return t;
}

TEST(Sparse, DuplicatesAreSummed)
{
    TripletBuffer t(2, 3);
    t.add(0, 1, 1.5);
    t.add(1, 2, 2.0);
    t.add(0, 1, -0.25);
    t.add(1, 0, 4.0);
    const auto a = compress(t);
    EXPECT_EQ(a.nnz(), 3u);
    EXPECT_DOUBLE_EQ(a.coeff(0, 1), 1.25);
    EXPECT_DOUBLE_EQ(a.coeff(1, 0), 4.0);
    EXPECT_DOUBLE_EQ(a.coeff(1, 2), 2.0);
    EXPECT_DOUBLE_EQ(a.coeff(0, 0), 0.0);
    EXPECT_EQ(a.row_offsets, (std::vector<std::int32_t>{0, 1, 3}));
}

TEST(Sparse, CompressMatchesDenseOracle)
{
    const auto t = random_buffer(40, 600, 7, 0.0);
    Eigen::MatrixXd oracle = Eigen::MatrixXd::Zero(40, 40);
    for (const auto& e : t.entries()) oracle(e.row, e.col) += e.value;
    const auto a = compress(t);
    EXPECT_LT((dense(a) - oracle).cwiseAbs().maxCoeff(), 1e-14);
    for (std::size_t r = 0; r < a.rows; ++r) {
        EXPECT_TRUE(std::is_sorted(a.col_indices.begin() + a.row_offsets[r], a.col_indices.begin() + a.row_offsets[r + 1]));
        EXPECT_TRUE(std::adjacent_find(a.col_indices.begin() + a.row_offsets[r],
                                       a.col_indices.begin() + a.row_offsets[r + 1]) ==
                    a.col_indices.begin() + a.row_offsets[r + 1]);
    }
}

TEST(Sparse, CompressIsOrderIndependent)
{
    const auto t = random_buffer(30, 2000, 11, 1.0);
    std::vector<Triplet> shuffled(t.entries().begin(), t.entries().end());
    std::mt19937_64 rng(3);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    TripletBuffer u(30, 30);
    for (const auto& e : shuffled) u.add(e.row, e.col, e.value);
    const auto a = compress(t);
    const auto b = compress(u);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.col_indices, b.col_indices);
}

TEST(Sparse, AccumulateIsOrderIndependent)
{
    std::vector<std::pair<std::int32_t, double>> e{{2, 0.1}, {0, 1e16}, {2, 0.2}, {0, 1.0}, {0, -1e16}, {2, 0.3}};
    const auto x = accumulate(3, e);
    std::reverse(e.begin(), e.end());
    const auto y = accumulate(3, e);
    EXPECT_EQ(x, y);
    EXPECT_DOUBLE_EQ(x[1], 0.0);
    EXPECT_NEAR(x[2], 0.6, 1e-15);
    EXPECT_THROW(accumulate(3, std::vector<std::pair<std::int32_t, double>>{{3, 1.0}}), DimensionMismatch);
}

TEST(Sparse, OutOfRangeEntriesThrow)
{
    TripletBuffer t(2, 2);
    t.add(2, 0, 1.0);
    EXPECT_THROW(compress(t), DimensionMismatch);
    TripletBuffer u(3, 3);
    EXPECT_THROW(t.append(u), DimensionMismatch);
}

TEST(Sparse, SpmvMatchesDense)
{
    const auto a = compress(random_buffer(25, 200, 5, 2.0));
    std::vector<double> x(25);
    for (int i = 0; i < 25; ++i) x[i] = std::sin(i + 1.0);
    const auto y = spmv(a, x);
    const Eigen::VectorXd ref = dense(a) * Eigen::Map<const Eigen::VectorXd>(x.data(), 25);
    for (int i = 0; i < 25; ++i) EXPECT_NEAR(y[i], ref[i], 1e-13);
    EXPECT_THROW(spmv(a, std::vector<double>(24)), DimensionMismatch);
}

TEST(Sparse, SolveTwoByTwo)
{
    TripletBuffer t(2, 2);
    t.add(0, 0, 2.0);
    t.add(0, 1, 1.0);
    t.add(1, 0, 1.0);
    t.add(1, 1, 3.0);
    const auto x = solve(compress(t), std::vector<double>{3.0, 5.0});
    EXPECT_NEAR(x[0], 0.8, 1e-14);
    EXPECT_NEAR(x[1], 1.4, 1e-14);
}

TEST(Sparse, SolveIdentityAndZeroRhs)
{
    TripletBuffer t(5, 5);
    for (int i = 0; i < 5; ++i) t.add(i, i, 1.0);
    const auto a = compress(t);
    const std::vector<double> b{1, 2, 3, 4, 5};
    EXPECT_EQ(solve(a, b), b);
    EXPECT_EQ(solve(a, std::vector<double>(5, 0.0)), std::vector<double>(5, 0.0));
}

TEST(Sparse, SolveMatchesDenseLu)
{
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto a = compress(random_buffer(120, 1500, seed, 20.0));
        std::vector<double> b(120);
        for (int i = 0; i < 120; ++i) b[i] = std::cos(0.3 * i);
        SparseDirectSolver solver;
        const auto x = solver.solve(a, b);
        const Eigen::VectorXd ref = dense(a).partialPivLu().solve(Eigen::Map<const Eigen::VectorXd>(b.data(), 120));
        for (int i = 0; i < 120; ++i) EXPECT_NEAR(x[i], ref[i], 1e-12);
        EXPECT_LE(solver.last_residual(), 1e-10);
    }
}

TEST(Sparse, SolverReusesPatternAndHandlesChanges)
{
    SparseDirectSolver solver;
    auto t = random_buffer(60, 400, 9, 10.0);
    const auto a = compress(t);
    std::vector<double> b(60, 1.0);
    const auto x1 = solver.solve(a, b);
    auto a2 = a;
    for (auto& v : a2.values) v *= 2.0;
    const auto x2 = solver.solve(a2, b);
    for (int i = 0; i < 60; ++i) EXPECT_NEAR(x2[i], 0.5 * x1[i], 1e-13);
    const auto c = compress(random_buffer(80, 500, 10, 10.0));
    const auto x3 = solver.solve(c, std::vector<double>(80, 1.0));
    const auto r = spmv(c, x3);
    for (double v : r) EXPECT_NEAR(v, 1.0, 1e-11);
}

TEST(Sparse, BorderedSystemWithDenseRow)
{
    // Singular Laplacian-like block bordered by a mean constraint.
    const int n = 50;
    TripletBuffer t(n + 1, n + 1);
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        t.add(i, i, 1.0);
        t.add(j, j, 1.0);
        t.add(i, j, -1.0);
        t.add(j, i, -1.0);
        t.add(i, n, 1.0);
        t.add(n, i, 1.0);
    }
    std::vector<double> b(n + 1, 0.0);
    for (int i = 0; i < n; ++i) b[i] = std::sin(2.0 * 3.14159265358979 * i / n);
    const auto a = compress(t);
    const auto x = solve(a, b);
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += x[i];
    EXPECT_NEAR(mean, 0.0, 1e-12);
    EXPECT_NEAR(x[n], 0.0, 1e-12);
}

TEST(Sparse, SingularMatrixFails)
{
    TripletBuffer t(3, 3);
    t.add(0, 0, 1.0);
    t.add(1, 1, 1.0);
    t.add(2, 0, 1.0);
    EXPECT_THROW(solve(compress(t), std::vector<double>{1, 1, 1}), SolverFailure);
    TripletBuffer r(2, 3);
    r.add(0, 0, 1.0);
    EXPECT_THROW(solve(compress(r), std::vector<double>{1, 1}), DimensionMismatch);
}

}  // namespace
