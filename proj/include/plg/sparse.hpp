#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace plg {

struct Triplet {
    std::int32_t row;
    std::int32_t col;
    double value;
};

/// Unordered (row, col, value) entries. Duplicates are summed on compression.
class TripletBuffer {
public:
    TripletBuffer(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

    void add(std::int32_t row, std::int32_t col, double value) { entries_.push_back({row, col, value}); }
    void reserve(std::size_t n) { entries_.reserve(n); }
    /// Appends another buffer's entries after this one's.
    void append(const TripletBuffer& other);
    void clear() noexcept { entries_.clear(); }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::span<const Triplet> entries() const noexcept { return entries_; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Triplet> entries_;
};

/// Compressed sparse row matrix with sorted, unique column indices per row.
struct SparseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::int32_t> row_offsets;
    std::vector<std::int32_t> col_indices;
    std::vector<double> values;

    std::size_t nnz() const noexcept { return values.size(); }
    /// Stored value at (i, j), or 0 when the entry is structurally absent.
    double coeff(std::size_t i, std::size_t j) const;
    bool same_pattern(const SparseMatrix& other) const;
};

/// Duplicates are summed in ascending value order, so the result does not
/// depend on the order entries were added.
SparseMatrix compress(const TripletBuffer& buffer);

/// Order-independent summation of (index, value) contributions into a dense vector.
std::vector<double> accumulate(std::size_t size, std::span<const std::pair<std::int32_t, double>> entries);

std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x);

double norm2(std::span<const double> v);

/// Direct LU solver that keeps the symbolic analysis between calls with the
/// same sparsity pattern.
class SparseDirectSolver {
public:
    SparseDirectSolver();
    ~SparseDirectSolver();
    SparseDirectSolver(SparseDirectSolver&&) noexcept;
    SparseDirectSolver& operator=(SparseDirectSolver&&) noexcept;

    /// Solves Ax = b with ||Ax - b|| <= rel_tol ||b||; throws SolverFailure otherwise.
    std::vector<double> solve(const SparseMatrix& a, std::span<const double> b, double rel_tol = 1e-10);

    /// Relative residual of the last accepted solve.
    double last_residual() const noexcept { return last_residual_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    double last_residual_ = 0.0;
};

std::vector<double> solve(const SparseMatrix& a, std::span<const double> b, double rel_tol = 1e-10);

}  // namespace plg
