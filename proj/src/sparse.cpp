#include "plg/sparse.hpp"

#include "plg/error.hpp"

#include <amd.h>
#include <klu.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace plg {

void TripletBuffer::append(const TripletBuffer& other)
{
    if (other.rows_ != rows_ || other.cols_ != cols_) {
        throw DimensionMismatch("TripletBuffer::append: dimension mismatch");
    }
    entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
}

double SparseMatrix::coeff(std::size_t i, std::size_t j) const
{
    const auto first = col_indices.begin() + row_offsets[i];
    const auto last = col_indices.begin() + row_offsets[i + 1];
    const auto it = std::lower_bound(first, last, static_cast<std::int32_t>(j));
    if (it == last || *it != static_cast<std::int32_t>(j)) return 0.0;
    return values[static_cast<std::size_t>(it - col_indices.begin())];
}

bool SparseMatrix::same_pattern(const SparseMatrix& other) const
{
    return rows == other.rows && cols == other.cols && row_offsets == other.row_offsets &&
           col_indices == other.col_indices;
}

SparseMatrix compress(const TripletBuffer& buffer)
{
    const auto entries = buffer.entries();
    const auto rows = buffer.rows();
    const auto cols = buffer.cols();

    std::vector<std::int32_t> count(rows + 1, 0);
    for (const auto& t : entries) {
        if (t.row < 0 || static_cast<std::size_t>(t.row) >= rows || t.col < 0 ||
            static_cast<std::size_t>(t.col) >= cols) {
            throw DimensionMismatch("compress: entry (" + std::to_string(t.row) + ", " +
                                    std::to_string(t.col) + ") outside " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
        }
        ++count[t.row + 1];
    }
    std::partial_sum(count.begin(), count.end(), count.begin());

    std::vector<Triplet> by_row(entries.size());
    {
        std::vector<std::int32_t> fill(count.begin(), count.end() - 1);
        for (const auto& t : entries) by_row[fill[t.row]++] = t;
    }

    SparseMatrix a;
    a.rows = rows;
    a.cols = cols;
    a.row_offsets.assign(rows + 1, 0);
    a.col_indices.reserve(entries.size() / 2 + 1);
    a.values.reserve(entries.size() / 2 + 1);

    for (std::size_t r = 0; r < rows; ++r) {
        const auto first = by_row.begin() + count[r];
        const auto last = by_row.begin() + count[r + 1];
        std::sort(first, last, [](const Triplet& x, const Triplet& y) {
            return x.col != y.col ? x.col < y.col : x.value < y.value;
        });
        for (auto it = first; it != last;) {
            const std::int32_t c = it->col;
            double sum = 0.0;
            for (; it != last && it->col == c; ++it) sum += it->value;
            a.col_indices.push_back(c);
            a.values.push_back(sum);
        }
        a.row_offsets[r + 1] = static_cast<std::int32_t>(a.values.size());
    }
    return a;
}

std::vector<double> accumulate(std::size_t size, std::span<const std::pair<std::int32_t, double>> entries)
{
    std::vector<std::pair<std::int32_t, double>> sorted(entries.begin(), entries.end());
    for (const auto& [i, v] : sorted) {
        if (i < 0 || static_cast<std::size_t>(i) >= size) {
            throw DimensionMismatch("accumulate: index out of range");
        }
    }
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> out(size, 0.0);
    for (const auto& [i, v] : sorted) out[i] += v;
    return out;
}

std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x)
{
    if (x.size() != a.cols) throw DimensionMismatch("spmv: vector length does not match columns");
    std::vector<double> y(a.rows, 0.0);
    for (std::size_t r = 0; r < a.rows; ++r) {
        double s = 0.0;
        for (auto k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) s += a.values[k] * x[a.col_indices[k]];
        y[r] = s;
    }
    return y;
}

double norm2(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

namespace {

double relative_residual(const SparseMatrix& a, std::span<const double> x, std::span<const double> b,
                         std::vector<double>& r)
{
    r = spmv(a, x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    return norm2(r) / norm2(b);
}

// AMD on the pattern without dense rows/columns, which are appended last so
// that a bordering constraint row does not spoil the ordering.
std::vector<std::int32_t> fill_reducing_order(const SparseMatrix& a)
{
    const auto n = static_cast<std::int32_t>(a.rows);
    std::vector<std::int32_t> degree(a.rows, 0);
    for (std::int32_t r = 0; r < n; ++r) {
        degree[r] += a.row_offsets[r + 1] - a.row_offsets[r];
        for (auto k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) ++degree[a.col_indices[k]];
    }
    const double dense_threshold = std::max(32.0, 20.0 * std::sqrt(static_cast<double>(n)));
    std::vector<std::int32_t> compact(a.rows, -1);
    std::vector<std::int32_t> sparse_nodes, dense_nodes;
    for (std::int32_t i = 0; i < n; ++i) {
        if (degree[i] > dense_threshold) {
            dense_nodes.push_back(i);
        } else {
            compact[i] = static_cast<std::int32_t>(sparse_nodes.size());
            sparse_nodes.push_back(i);
        }
    }

    std::vector<std::int32_t> ap{0}, ai;
    ai.reserve(a.nnz());
    for (std::int32_t r : sparse_nodes) {
        for (auto k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) {
            if (const auto c = compact[a.col_indices[k]]; c >= 0) ai.push_back(c);
        }
        ap.push_back(static_cast<std::int32_t>(ai.size()));
    }

    const auto m = static_cast<std::int32_t>(sparse_nodes.size());
    std::vector<std::int32_t> perm(static_cast<std::size_t>(m));
    if (m > 0) {
        double control[AMD_CONTROL];
        double info[AMD_INFO];
        amd_defaults(control);
        const int status = amd_order(m, ap.data(), ai.data(), perm.data(), control, info);
        if (status != AMD_OK && status != AMD_OK_BUT_JUMBLED) {
            throw SolverFailure("solve: AMD ordering failed", std::numeric_limits<double>::infinity());
        }
    }
    std::vector<std::int32_t> order;
    order.reserve(a.rows);
    for (std::int32_t i : perm) order.push_back(sparse_nodes[i]);
    order.insert(order.end(), dense_nodes.begin(), dense_nodes.end());
    return order;
}

// KLU works on compressed columns; the CSR arrays of A are the CSC arrays of
// A^T, so A^T is factored and A x = b is solved with the transposed solve.
int* index_ptr(const std::vector<std::int32_t>& v) { return const_cast<int*>(v.data()); }
double* value_ptr(const std::vector<double>& v) { return const_cast<double*>(v.data()); }

}  // namespace

struct SparseDirectSolver::Impl {
    klu_common common{};
    klu_symbolic* symbolic = nullptr;
    klu_numeric* numeric = nullptr;
    SparseMatrix pattern;

    Impl() { klu_defaults(&common); }
    ~Impl() { release(); }
    Impl(const Impl&) = delete;
    Impl& operator=(const Impl&) = delete;

    void release_numeric()
    {
        if (numeric) klu_free_numeric(&numeric, &common);
        numeric = nullptr;
    }
    void release()
    {
        release_numeric();
        if (symbolic) klu_free_symbolic(&symbolic, &common);
        symbolic = nullptr;
    }

    void analyze(const SparseMatrix& a)
    {
        release();
        common.btf = 0;
        std::vector<std::int32_t> order = fill_reducing_order(a);
        symbolic = klu_analyze_given(static_cast<int>(a.rows), index_ptr(a.row_offsets), index_ptr(a.col_indices),
                                     order.data(), order.data(), &common);
        if (!symbolic) {
            throw SolverFailure("solve: symbolic analysis failed (KLU status " + std::to_string(common.status) + ")",
                                std::numeric_limits<double>::infinity());
        }
        pattern.rows = a.rows;
        pattern.cols = a.cols;
        pattern.row_offsets = a.row_offsets;
        pattern.col_indices = a.col_indices;
    }

    void factor(const SparseMatrix& a)
    {
        release_numeric();
        numeric = klu_factor(index_ptr(a.row_offsets), index_ptr(a.col_indices), value_ptr(a.values), symbolic,
                             &common);
        if (!numeric || common.status == KLU_SINGULAR) {
            release_numeric();
            throw SolverFailure("solve: LU factorization failed (KLU status " + std::to_string(common.status) + ")",
                                std::numeric_limits<double>::infinity());
        }
    }

    /// Reuses the previous pivot sequence; false if that breaks down.
    bool refactor(const SparseMatrix& a)
    {
        return klu_refactor(index_ptr(a.row_offsets), index_ptr(a.col_indices), value_ptr(a.values), symbolic,
                            numeric, &common) == 1 &&
               common.status == KLU_OK;
    }

    void apply(std::vector<double>& rhs)
    {
        klu_tsolve(symbolic, numeric, static_cast<int>(rhs.size()), 1, rhs.data(), &common);
    }
};

SparseDirectSolver::SparseDirectSolver() : impl_(std::make_unique<Impl>()) {}
SparseDirectSolver::~SparseDirectSolver() = default;
SparseDirectSolver::SparseDirectSolver(SparseDirectSolver&&) noexcept = default;
SparseDirectSolver& SparseDirectSolver::operator=(SparseDirectSolver&&) noexcept = default;

std::vector<double> SparseDirectSolver::solve(const SparseMatrix& a, std::span<const double> b, double rel_tol)
{
    if (a.rows != a.cols) throw DimensionMismatch("solve: matrix is not square");
    if (b.size() != a.rows) throw DimensionMismatch("solve: right-hand side length mismatch");

    if (norm2(b) == 0.0) {
        last_residual_ = 0.0;
        return std::vector<double>(a.rows, 0.0);
    }
    auto& impl = *impl_;

    const bool new_pattern = !impl.symbolic || !impl.pattern.same_pattern(a);
    if (new_pattern) impl.analyze(a);

    auto attempt = [&](std::vector<double>& x) {
        x.assign(b.begin(), b.end());
        impl.apply(x);
        std::vector<double> r;
        double res = relative_residual(a, x, b, r);
        for (int refine = 0; refine < 3 && !(res <= rel_tol); ++refine) {
            impl.apply(r);
            for (std::size_t i = 0; i < x.size(); ++i) x[i] += r[i];
            res = relative_residual(a, x, b, r);
        }
        return res;
    };

    std::vector<double> x;
    double res = std::numeric_limits<double>::infinity();
    if (!new_pattern && impl.numeric && impl.refactor(a)) res = attempt(x);
    if (!(res <= rel_tol)) {
        impl.factor(a);
        res = attempt(x);
    }
    if (!(res <= rel_tol)) {
        throw SolverFailure("solve: relative residual " + std::to_string(res) + " above tolerance", res);
    }
    last_residual_ = res;
    return x;
}

std::vector<double> solve(const SparseMatrix& a, std::span<const double> b, double rel_tol)
{
    SparseDirectSolver solver;
    return solver.solve(a, b, rel_tol);
}

}  // namespace plg
