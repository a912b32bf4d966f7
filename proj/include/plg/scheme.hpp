#pragma once

#include "plg/characteristics.hpp"
#include "plg/fields.hpp"
#include "plg/geometry.hpp"
#include "plg/mesh.hpp"
#include "plg/quadrature.hpp"
#include "plg/sparse.hpp"

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace plg {

struct Params {
    double nu = 0.1;
    double eps = 0.1;
    double delta0 = 1.0;
    double dt = 1.0 / 32.0;
    double final_time = 0.5;

    /// floor(T / dt), robust to T being an exact multiple of dt.
    int num_steps() const;
    /// Throws InvalidParameter unless nu > 0, eps >= 0, delta0 > 0, dt > 0, T >= 0.
    void validate() const;
};

struct State {
    int step = 0;
    double time = 0.0;
    VectorField u;
    ScalarField p;
    SymTensorField C;
};

State zero_state(const Mesh& mesh);

/// Global unknown layout: u1 and u2 at interior nodes, then p, C11, C12, C22
/// at every node, then one multiplier enforcing zero pressure mean.
class DofMap {
public:
    static constexpr int dirichlet = -1;

    explicit DofMap(const Mesh& mesh);

    std::size_t size() const noexcept { return size_; }
    std::size_t interior_count() const noexcept { return interior_; }
    int velocity(int comp, std::size_t node) const
    {
        const int i = interior_index_[node];
        return i < 0 ? dirichlet : comp * static_cast<int>(interior_) + i;
    }
    int pressure(std::size_t node) const { return static_cast<int>(2 * interior_ + node); }
    int tensor(int comp, std::size_t node) const
    {
        return static_cast<int>(2 * interior_ + (1 + comp) * nodes_ + node);
    }
    int multiplier() const { return static_cast<int>(size_ - 1); }

    State unpack(std::span<const double> x, int step, double time) const;
    std::vector<double> pack(const State& s) const;

private:
    std::size_t nodes_;
    std::size_t interior_ = 0;
    std::size_t size_;
    std::vector<int> interior_index_;
};

using TensorFunction = std::function<Sym2(Vec2, double)>;

/// Given transport velocity and body forces of the Oseen-type system.
struct ProblemData {
    VelocityFunction w;
    VelocityFunction f;
    TensorFunction F;
};

ProblemData zero_problem();

enum class Execution { serial, parallel };

struct AssemblyOptions {
    Execution execution = Execution::parallel;
    /// Serial mode only: visit elements in this order instead of 0..n-1.
    std::span<const int> element_order;
};

struct LinearSystem {
    SparseMatrix matrix;
    std::vector<double> rhs;
    std::size_t clamped = 0;  ///< upwind points pulled back onto the boundary
};

/// Monolithic system for (u^n, p^n, C^n) given the previous level.
/// The velocity rows couple to tr C^n and the tensor rows to grad u^n.
LinearSystem assemble_step_system(const Mesh& mesh, const QuadratureRule& quad, const DofMap& dofs,
                                  const Params& params, const State& prev, const UpwindTable& table,
                                  double t_n, const ProblemData& data, const AssemblyOptions& options = {});

/// Builds the upwind table from data.w at t_n, then assembles.
LinearSystem assemble_step_system(const Mesh& mesh, const QuadratureRule& quad, const Params& params,
                                  const State& prev, double t_n, const ProblemData& data,
                                  const AssemblyOptions& options = {});

struct StepReport {
    int step = 0;
    CourantCheck courant;
    std::size_t clamped = 0;
    double residual = 0.0;
};

/// Advances one level. Subtracts any residual pressure mean from the result.
State time_step(const State& prev, const Mesh& mesh, const QuadratureRule& quad, const Params& params,
                const ProblemData& data, SparseDirectSolver& solver, double solver_tol = 1e-10,
                const AssemblyOptions& options = {}, StepReport* report = nullptr);

/// Analytic data consumed by the Stokes-Poisson projection.
struct AnalyticTriple {
    std::function<Vec2(Vec2)> u;
    std::function<Mat2(Vec2)> grad_u;
    std::function<double(Vec2)> p;
    std::function<Sym2(Vec2)> C;
    std::function<std::array<Sym2, 2>(Vec2)> grad_C;
};

struct Projection {
    VectorField u;
    ScalarField p;
    SymTensorField C;
};

/// Stabilized Stokes projection of (u, p) and the (-Lap + I) projection of C.
Projection stokes_poisson_project(const AnalyticTriple& exact, const Mesh& mesh, const QuadratureRule& quad,
                                  const Params& params, double solver_tol = 1e-10);

/// Zero-mean shift of a P1 pressure, using exact integration.
void remove_mean(ScalarField& p, const Mesh& mesh);
double mean_value(const ScalarField& p, const Mesh& mesh);

using StateObserver = std::function<void(const State&, const StepReport*)>;

/// Calls observer on the initial state and after every step; step failures
/// are rethrown as SimulationError carrying the step index.
State run_simulation(const Mesh& mesh, const QuadratureRule& quad, const Params& params,
                     const ProblemData& data, State initial, const StateObserver& observer,
                     double solver_tol = 1e-10, const AssemblyOptions& options = {});

}  // namespace plg
