#pragma once

#include "plg/fields.hpp"
#include "plg/geometry.hpp"
#include "plg/mesh.hpp"
#include "plg/quadrature.hpp"

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace plg {

/// Weight of component c in the pointwise squared norm: the symmetric
/// off-diagonal C12 stands for two matrix entries.
template <int K>
constexpr double component_weight(int c)
{
    return (K == 3 && c == 1) ? 2.0 : 1.0;
}

/// Exact L2 norm of a P1 field.
template <int K>
double l2_norm(const NodalField<K>& f, const Mesh& mesh);

/// Exact L2 norm of the gradient of a P1 field.
template <int K>
double h1_seminorm(const NodalField<K>& f, const Mesh& mesh);

/// (L2, full H1) norms of a P1 field; the integrals are exact.
template <int K>
std::pair<double, double> l2_and_h1_norms(const NodalField<K>& f, const Mesh& mesh);

/// { sum_K h_K^2 |grad p|^2_K }^{1/2}.
double h_seminorm(const ScalarField& p, const Mesh& mesh);

template <int K>
NodalField<K> difference(const NodalField<K>& a, const NodalField<K>& b);

/// Analytic fields at one time level, for norms computed against the exact
/// solution by quadrature.
struct ExactSnapshot {
    std::function<Vec2(Vec2)> u;
    std::function<Mat2(Vec2)> grad_u;
    std::function<double(Vec2)> p;
    std::function<Vec2(Vec2)> grad_p;
    std::function<Sym2(Vec2)> C;
    std::function<std::array<Sym2, 2>(Vec2)> grad_C;
};

/// Quadrature ("primed") norms of P1 field minus analytic function.
double primed_l2_error(const VectorField& uh, const std::function<Vec2(Vec2)>& u, const Mesh& mesh,
                       const QuadratureRule& quad);
double primed_l2_error(const ScalarField& ph, const std::function<double(Vec2)>& p, const Mesh& mesh,
                       const QuadratureRule& quad);
double primed_l2_error(const SymTensorField& Ch, const std::function<Sym2(Vec2)>& C, const Mesh& mesh,
                       const QuadratureRule& quad);
double primed_h1_error(const VectorField& uh, const std::function<Vec2(Vec2)>& u,
                       const std::function<Mat2(Vec2)>& grad_u, const Mesh& mesh, const QuadratureRule& quad);
double primed_h1_error(const SymTensorField& Ch, const std::function<Sym2(Vec2)>& C,
                       const std::function<std::array<Sym2, 2>(Vec2)>& grad_C, const Mesh& mesh,
                       const QuadratureRule& quad);
double primed_h_seminorm_error(const ScalarField& ph, const std::function<Vec2(Vec2)>& grad_p, const Mesh& mesh,
                               const QuadratureRule& quad);

/// Primed L2 norm of a P1 field itself.
template <int K>
double primed_l2_norm(const NodalField<K>& f, const Mesh& mesh, const QuadratureRule& quad);

/// Norms of one time level entering the relative errors.
struct LevelNorms {
    // discrete minus interpolant
    double u_l2 = 0, u_h1 = 0, p_l2 = 0, p_h = 0, C_l2 = 0, C_h1 = 0;
    // interpolant
    double iu_l2 = 0, iu_h1 = 0, ip_l2 = 0, iC_l2 = 0, iC_h1 = 0;
    // discrete minus exact, by quadrature
    std::optional<std::array<double, 6>> primed;
};

struct DiscreteLevel {
    const VectorField& u;
    const ScalarField& p;
    const SymTensorField& C;
};

/// Interpolated exact fields use the Lagrange interpolant at the mesh nodes.
LevelNorms measure_level(const DiscreteLevel& discrete, const DiscreteLevel& interpolant, const Mesh& mesh,
                         const ExactSnapshot* exact = nullptr, const QuadratureRule* quad = nullptr);

using ErrorSet = std::array<double, 6>;

/// Space-time norms over a trajectory: l-infinity channels take the max over
/// levels 0..N_T, l2 channels sum dt*|.|^2 over levels 1..N_T.
class ErrorAccumulator {
public:
    explicit ErrorAccumulator(double dt) : dt_(dt) {}

    void add(int level, const LevelNorms& norms);

    /// Er1..Er6; NaN where a denominator vanishes.
    ErrorSet relative_errors() const;
    std::optional<ErrorSet> primed_errors() const;

    int levels() const noexcept { return levels_; }

private:
    struct Channel {
        double max = 0.0;
        double sum = 0.0;
        void add(int level, double value, double dt);
        double linf() const { return max; }
        double l2() const;
    };

    double dt_;
    int levels_ = 0;
    bool primed_ = true;
    Channel u_l2_, u_h1_, p_l2_, p_h_, C_l2_, C_h1_;
    Channel iu_l2_, iu_h1_, ip_l2_, iC_l2_, iC_h1_;
    std::array<Channel, 6> primed_ch_{};
};

ErrorSet relative_errors(std::span<const LevelNorms> trajectory, double dt);

/// Convergence order between consecutive levels: log(E_i/E_{i+1}) / log(N_{i+1}/N_i);
/// empty for the first level.
std::vector<std::optional<double>> slopes(std::span<const int> divisions, std::span<const double> errors);

struct ReportRow {
    int N = 0;
    double h = 0.0;
    ErrorSet er{};
    std::optional<ErrorSet> er_primed;
};

struct ErrorReport {
    std::vector<ReportRow> rows;

    /// slope_table()[row][k] for Er(k+1); primed uses the primed columns.
    std::vector<std::array<std::optional<double>, 6>> slope_table(bool primed = false) const;
};

}  // namespace plg
