#include "plg/scheme.hpp"

#include "plg/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace plg {

int Params::num_steps() const
{
    const double ratio = final_time / dt;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) return static_cast<int>(nearest);
    return static_cast<int>(std::floor(ratio));
}

void Params::validate() const
{
    if (!(nu > 0.0)) throw InvalidParameter("nu must be positive");
    if (!(eps >= 0.0)) throw InvalidParameter("eps must be non-negative");
    if (!(delta0 > 0.0)) throw InvalidParameter("delta0 must be positive");
    if (!(dt > 0.0)) throw InvalidParameter("dt must be positive");
    if (!(final_time >= 0.0)) throw InvalidParameter("final time must be non-negative");
}

State zero_state(const Mesh& mesh)
{
    State s;
    s.u = VectorField(mesh.node_count());
    s.p = ScalarField(mesh.node_count());
    s.C = SymTensorField(mesh.node_count());
    return s;
}

DofMap::DofMap(const Mesh& mesh)
    : nodes_(mesh.node_count()), interior_index_(mesh.node_count(), dirichlet)
{
    for (std::size_t i = 0; i < nodes_; ++i) {
        if (!mesh.on_boundary(i)) interior_index_[i] = static_cast<int>(interior_++);
    }
    size_ = 2 * interior_ + 4 * nodes_ + 1;
}

State DofMap::unpack(std::span<const double> x, int step, double time) const
{
    if (x.size() != size_) throw DimensionMismatch("DofMap::unpack: vector length mismatch");
    State s;
    s.step = step;
    s.time = time;
    s.u = VectorField(nodes_);
    s.p = ScalarField(nodes_);
    s.C = SymTensorField(nodes_);
    for (std::size_t i = 0; i < nodes_; ++i) {
        for (int c = 0; c < 2; ++c) {
            const int d = velocity(c, i);
            s.u[c][i] = d == dirichlet ? 0.0 : x[d];
        }
        s.p[0][i] = x[pressure(i)];
        for (int c = 0; c < 3; ++c) s.C[c][i] = x[tensor(c, i)];
    }
    return s;
}

std::vector<double> DofMap::pack(const State& s) const
{
    std::vector<double> x(size_, 0.0);
    for (std::size_t i = 0; i < nodes_; ++i) {
        for (int c = 0; c < 2; ++c) {
            const int d = velocity(c, i);
            if (d != dirichlet) x[d] = s.u[c][i];
        }
        x[pressure(i)] = s.p[0][i];
        for (int c = 0; c < 3; ++c) x[tensor(c, i)] = s.C[c][i];
    }
    return x;
}

ProblemData zero_problem()
{
    return {[](Vec2, double) { return Vec2{}; }, [](Vec2, double) { return Vec2{}; },
            [](Vec2, double) { return Sym2{}; }};
}

namespace {

// Frobenius weight E:E of the symmetric basis tensors (E12 = e1 e2^T + e2 e1^T).
constexpr std::array<double, 3> basis_weight{1.0, 2.0, 1.0};

double mass_entry(double area, int a, int b) { return area * (a == b ? 2.0 : 1.0) / 12.0; }

Sym2 sym_at(const SymTensorField& f, const std::array<int, 3>& e, const std::array<double, 3>& l)
{
    Sym2 s;
    s.c11 = l[0] * f[0][e[0]] + l[1] * f[0][e[1]] + l[2] * f[0][e[2]];
    s.c12 = l[0] * f[1][e[0]] + l[1] * f[1][e[1]] + l[2] * f[1][e[2]];
    s.c22 = l[0] * f[2][e[0]] + l[1] * f[2][e[1]] + l[2] * f[2][e[2]];
    return s;
}

struct LocalOutput {
    TripletBuffer triplets;
    std::vector<std::pair<std::int32_t, double>> rhs;
};

struct StepKernel {
    const Mesh& mesh;
    const QuadratureRule& quad;
    const DofMap& dofs;
    const Params& params;
    const State& prev;
    const UpwindTable& table;
    double t_n;
    const ProblemData& data;

    void operator()(std::size_t k, LocalOutput& out) const
    {
        const auto& e = mesh.element(k);
        const auto& geo = mesh.geometry(k);
        const double area = geo.area;
        const auto& g = geo.grad;
        const double dt = params.dt;
        const double hk = mesh.diameter(k);
        auto& T = out.triplets;

        std::array<std::array<int, 2>, 3> vel{};
        std::array<int, 3> pre{};
        std::array<std::array<int, 3>, 3> ten{};
        for (int a = 0; a < 3; ++a) {
            for (int i = 0; i < 2; ++i) vel[a][i] = dofs.velocity(i, e[a]);
            pre[a] = dofs.pressure(e[a]);
            for (int c = 0; c < 3; ++c) ten[a][c] = dofs.tensor(c, e[a]);
        }

        // Quadrature-point data.
        const auto nq = quad.size();
        std::array<double, 3> rhs_u[2]{};  // [i][a]
        std::array<std::array<double, 3>, 3> rhs_c{};  // [c][a]
        // coupling_u[i][a][b] = int lambda_b (Cprev grad lambda_a)_i
        double coupling_u[2][3][3]{};
        // coupling_c[c][a][b][j]: tensor row (c,a), velocity column (j,b)
        double coupling_c[3][3][3][2]{};
        double reaction[3][3]{};

        for (std::size_t q = 0; q < nq; ++q) {
            const auto& l = quad.points[q];
            const double wq = area * quad.weights[q];
            const auto idx = table.index(k, q);
            const Vec2 x = table.source[idx];
            const Sym2 c_prev = sym_at(prev.C, e, l);
            const double tr_prev = c_prev.trace();

            const auto u_foot = eval_field(prev.u, mesh, table.where[idx]);
            const auto c_foot = eval_field(prev.C, mesh, table.where[idx]);
            const Vec2 f = data.f(x, t_n);
            const Sym2 F = data.F(x, t_n);

            const std::array<double, 3> c_rhs{c_foot[0] / dt + tr_prev + F.c11,
                                              2.0 * (c_foot[1] / dt + F.c12),
                                              c_foot[2] / dt + tr_prev + F.c22};
            for (int a = 0; a < 3; ++a) {
                const double wa = wq * l[a];
                rhs_u[0][a] += wa * (u_foot[0] / dt + f.x);
                rhs_u[1][a] += wa * (u_foot[1] / dt + f.y);
                for (int c = 0; c < 3; ++c) rhs_c[c][a] += wa * c_rhs[c];
                for (int b = 0; b < 3; ++b) {
                    const double wab = wa * l[b];
                    reaction[a][b] += wab * tr_prev * tr_prev;
                    for (int i = 0; i < 2; ++i) {
                        coupling_u[i][a][b] += wq * l[b] * (c_prev(i, 0) * g[a].x + c_prev(i, 1) * g[a].y);
                    }
                    const Vec2 cg{c_prev(0, 0) * g[b].x + c_prev(0, 1) * g[b].y,
                                  c_prev(1, 0) * g[b].x + c_prev(1, 1) * g[b].y};
                    // ((grad u) Cprev) : E for u = lambda_b e_j.
                    coupling_c[0][a][b][0] += wa * cg.x;
                    coupling_c[1][a][b][0] += wa * cg.y;
                    coupling_c[1][a][b][1] += wa * cg.x;
                    coupling_c[2][a][b][1] += wa * cg.y;
                }
            }
        }

        // Momentum rows.
        for (int a = 0; a < 3; ++a) {
            for (int i = 0; i < 2; ++i) {
                const int row = vel[a][i];
                if (row == DofMap::dirichlet) continue;
                for (int b = 0; b < 3; ++b) {
                    for (int j = 0; j < 2; ++j) {
                        const int col = vel[b][j];
                        if (col == DofMap::dirichlet) continue;
                        double v = params.nu * area * (g[b][i] * g[a][j]);
                        if (i == j) v += mass_entry(area, a, b) / dt + params.nu * area * dot(g[a], g[b]);
                        T.add(row, col, v);
                    }
                    T.add(row, pre[b], -g[a][i] * area / 3.0);
                    T.add(row, ten[b][0], coupling_u[i][a][b]);
                    T.add(row, ten[b][2], coupling_u[i][a][b]);
                }
                out.rhs.emplace_back(row, rhs_u[i][a]);
            }
        }

        // Continuity rows and the pressure-mean constraint.
        const double stab = params.delta0 * hk * hk * area;
        const int lam = dofs.multiplier();
        for (int a = 0; a < 3; ++a) {
            const int row = pre[a];
            for (int b = 0; b < 3; ++b) {
                for (int j = 0; j < 2; ++j) {
                    const int col = vel[b][j];
                    if (col != DofMap::dirichlet) T.add(row, col, -g[b][j] * area / 3.0);
                }
                T.add(row, pre[b], -stab * dot(g[a], g[b]));
            }
            T.add(row, lam, area / 3.0);
            T.add(lam, row, area / 3.0);
        }

        // Conformation rows.
        for (int a = 0; a < 3; ++a) {
            for (int c = 0; c < 3; ++c) {
                const int row = ten[a][c];
                for (int b = 0; b < 3; ++b) {
                    const double v = mass_entry(area, a, b) / dt + params.eps * area * dot(g[a], g[b]) +
                                     reaction[a][b];
                    T.add(row, ten[b][c], basis_weight[c] * v);
                    for (int j = 0; j < 2; ++j) {
                        const int col = vel[b][j];
                        if (col != DofMap::dirichlet) T.add(row, col, -2.0 * coupling_c[c][a][b][j]);
                    }
                }
                out.rhs.emplace_back(row, rhs_c[c][a]);
            }
        }
    }
};

template <typename Kernel>
void run_element_loop(const Mesh& mesh, std::size_t n, const AssemblyOptions& options, const Kernel& kernel,
                      LocalOutput& result)
{
    const auto ne = mesh.element_count();
    if (options.execution == Execution::serial) {
        if (!options.element_order.empty()) {
            if (options.element_order.size() != ne) {
                throw DimensionMismatch("assembly: element order has wrong length");
            }
            for (int k : options.element_order) kernel(static_cast<std::size_t>(k), result);
        } else {
            for (std::size_t k = 0; k < ne; ++k) kernel(k, result);
        }
        return;
    }

#ifdef _OPENMP
    const int threads = omp_get_max_threads();
#else
    const int threads = 1;
#endif
    std::vector<LocalOutput> partial;
    partial.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) partial.push_back({TripletBuffer(n, n), {}});

    const auto count = static_cast<std::int64_t>(ne);
#pragma omp parallel num_threads(threads)
    {
#ifdef _OPENMP
        auto& local = partial[static_cast<std::size_t>(omp_get_thread_num())];
#else
        auto& local = partial[0];
#endif
#pragma omp for schedule(static)
        for (std::int64_t k = 0; k < count; ++k) kernel(static_cast<std::size_t>(k), local);
    }
    // Fixed merge order: thread 0 first.
    for (const auto& p : partial) {
        result.triplets.append(p.triplets);
        result.rhs.insert(result.rhs.end(), p.rhs.begin(), p.rhs.end());
    }
}

}  // namespace

LinearSystem assemble_step_system(const Mesh& mesh, const QuadratureRule& quad, const DofMap& dofs,
                                  const Params& params, const State& prev, const UpwindTable& table,
                                  double t_n, const ProblemData& data, const AssemblyOptions& options)
{
    check_size(prev.u, mesh);
    check_size(prev.C, mesh);
    if (table.points_per_element != quad.size() || table.where.size() != mesh.element_count() * quad.size()) {
        throw DimensionMismatch("assembly: upwind table does not match mesh and quadrature");
    }
    const auto n = dofs.size();
    LocalOutput out{TripletBuffer(n, n), {}};
    out.triplets.reserve(mesh.element_count() * 210);
    const StepKernel kernel{mesh, quad, dofs, params, prev, table, t_n, data};
    run_element_loop(mesh, n, options, kernel, out);

    LinearSystem sys;
    sys.matrix = compress(out.triplets);
    sys.rhs = accumulate(n, out.rhs);
    sys.clamped = table.clamped;
    return sys;
}

LinearSystem assemble_step_system(const Mesh& mesh, const QuadratureRule& quad, const Params& params,
                                  const State& prev, double t_n, const ProblemData& data,
                                  const AssemblyOptions& options)
{
    const DofMap dofs(mesh);
    const auto table = build_upwind_table(mesh, quad, data.w, t_n, params.dt);
    return assemble_step_system(mesh, quad, dofs, params, prev, table, t_n, data, options);
}

double mean_value(const ScalarField& p, const Mesh& mesh)
{
    double integral = 0.0;
    double measure = 0.0;
    for (std::size_t k = 0; k < mesh.element_count(); ++k) {
        const auto& e = mesh.element(k);
        const double area = mesh.geometry(k).area;
        integral += area * (p[0][e[0]] + p[0][e[1]] + p[0][e[2]]) / 3.0;
        measure += area;
    }
    return integral / measure;
}

void remove_mean(ScalarField& p, const Mesh& mesh)
{
    const double m = mean_value(p, mesh);
    for (double& v : p[0]) v -= m;
}

State time_step(const State& prev, const Mesh& mesh, const QuadratureRule& quad, const Params& params,
                const ProblemData& data, SparseDirectSolver& solver, double solver_tol,
                const AssemblyOptions& options, StepReport* report)
{
    const int step = prev.step + 1;
    const double t_n = step * params.dt;
    const DofMap dofs(mesh);
    const auto courant = check_courant(data.w, t_n, mesh, params.dt);
    const auto table = build_upwind_table(mesh, quad, data.w, t_n, params.dt);
    const auto sys = assemble_step_system(mesh, quad, dofs, params, prev, table, t_n, data, options);
    const auto x = solver.solve(sys.matrix, sys.rhs, solver_tol);

    State next = dofs.unpack(x, step, t_n);
    remove_mean(next.p, mesh);
    if (report != nullptr) {
        report->step = step;
        report->courant = courant;
        report->clamped = sys.clamped;
        report->residual = solver.last_residual();
    }
    return next;
}

namespace {

struct ProjectionKernel {
    const Mesh& mesh;
    const QuadratureRule& quad;
    const DofMap& dofs;
    const Params& params;
    const AnalyticTriple& exact;

    void operator()(std::size_t k, LocalOutput& out) const
    {
        const auto& e = mesh.element(k);
        const auto& geo = mesh.geometry(k);
        const double area = geo.area;
        const auto& g = geo.grad;
        const double hk = mesh.diameter(k);
        auto& T = out.triplets;

        std::array<double, 3> rhs_u[2]{};
        std::array<double, 3> rhs_p{};
        std::array<std::array<double, 3>, 3> rhs_c{};
        for (std::size_t q = 0; q < quad.size(); ++q) {
            const auto& l = quad.points[q];
            const double wq = area * quad.weights[q];
            const Vec2 x = map_to_element(mesh, k, l);
            const Mat2 gu = exact.grad_u(x);
            const double p = exact.p(x);
            const Sym2 C = exact.C(x);
            const auto gC = exact.grad_C(x);
            const double div_u = gu(0, 0) + gu(1, 1);
            const std::array<double, 3> cval{C.c11, C.c12, C.c22};
            const std::array<Vec2, 3> cgrad{Vec2{gC[0].c11, gC[1].c11}, Vec2{gC[0].c12, gC[1].c12},
                                            Vec2{gC[0].c22, gC[1].c22}};
            for (int a = 0; a < 3; ++a) {
                for (int i = 0; i < 2; ++i) {
                    // nu 2 D(u):D(v) - div(v) p  with v = lambda_a e_i.
                    const double sym = (gu(i, 0) + gu(0, i)) * g[a].x + (gu(i, 1) + gu(1, i)) * g[a].y;
                    rhs_u[i][a] += wq * (params.nu * sym - g[a][i] * p);
                }
                rhs_p[a] -= wq * l[a] * div_u;
                for (int c = 0; c < 3; ++c) rhs_c[c][a] += wq * (dot(cgrad[c], g[a]) + cval[c] * l[a]);
            }
        }

        std::array<std::array<int, 2>, 3> vel{};
        std::array<int, 3> pre{};
        for (int a = 0; a < 3; ++a) {
            for (int i = 0; i < 2; ++i) vel[a][i] = dofs.velocity(i, e[a]);
            pre[a] = dofs.pressure(e[a]);
        }
        const double stab = params.delta0 * hk * hk * area;
        const int lam = dofs.multiplier();
        for (int a = 0; a < 3; ++a) {
            for (int i = 0; i < 2; ++i) {
                const int row = vel[a][i];
                if (row == DofMap::dirichlet) continue;
                for (int b = 0; b < 3; ++b) {
                    for (int j = 0; j < 2; ++j) {
                        const int col = vel[b][j];
                        if (col == DofMap::dirichlet) continue;
                        double v = params.nu * area * (g[b][i] * g[a][j]);
                        if (i == j) v += params.nu * area * dot(g[a], g[b]);
                        T.add(row, col, v);
                    }
                    T.add(row, pre[b], -g[a][i] * area / 3.0);
                }
                out.rhs.emplace_back(row, rhs_u[i][a]);
            }
            const int prow = pre[a];
            for (int b = 0; b < 3; ++b) {
                for (int j = 0; j < 2; ++j) {
                    const int col = vel[b][j];
                    if (col != DofMap::dirichlet) T.add(prow, col, -g[b][j] * area / 3.0);
                }
                T.add(prow, pre[b], -stab * dot(g[a], g[b]));
            }
            T.add(prow, lam, area / 3.0);
            T.add(lam, prow, area / 3.0);
            out.rhs.emplace_back(prow, rhs_p[a]);

            for (int c = 0; c < 3; ++c) {
                const int row = dofs.tensor(c, e[a]);
                for (int b = 0; b < 3; ++b) {
                    T.add(row, dofs.tensor(c, e[b]), area * dot(g[a], g[b]) + mass_entry(area, a, b));
                }
                out.rhs.emplace_back(row, rhs_c[c][a]);
            }
        }
    }
};

}  // namespace

Projection stokes_poisson_project(const AnalyticTriple& exact, const Mesh& mesh, const QuadratureRule& quad,
                                  const Params& params, double solver_tol)
{
    const DofMap dofs(mesh);
    const auto n = dofs.size();
    LocalOutput out{TripletBuffer(n, n), {}};
    ProjectionKernel kernel{mesh, quad, dofs, params, exact};
    run_element_loop(mesh, n, AssemblyOptions{Execution::serial, {}}, kernel, out);
    const auto a = compress(out.triplets);
    const auto b = accumulate(n, out.rhs);
    const auto x = solve(a, b, solver_tol);
    State s = dofs.unpack(x, 0, 0.0);
    remove_mean(s.p, mesh);
    return {std::move(s.u), std::move(s.p), std::move(s.C)};
}

State run_simulation(const Mesh& mesh, const QuadratureRule& quad, const Params& params, const ProblemData& data,
                     State initial, const StateObserver& observer, double solver_tol,
                     const AssemblyOptions& options)
{
    params.validate();
    if (observer) observer(initial, nullptr);
    SparseDirectSolver solver;
    State current = std::move(initial);
    const int steps = params.num_steps();
    for (int n = current.step + 1; n <= steps; ++n) {
        StepReport report;
        try {
            current = time_step(current, mesh, quad, params, data, solver, solver_tol, options, &report);
        } catch (const Error& err) {
            throw SimulationError(n, err.what());
        }
        if (observer) observer(current, &report);
    }
    return current;
}

}  // namespace plg
