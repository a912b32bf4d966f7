#include "plg/study.hpp"

#include "plg/error.hpp"
#include "plg/manufactured.hpp"
#include "plg/scheme.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace plg {

RunConfig RunConfig::defaults(bool full)
{
    RunConfig c;
    c.cases = {{0.1, 0.1}, {0.1, 1e-3}, {1.0, 0.0}};
    c.levels = full ? std::vector<int>{16, 32, 64, 128, 256} : std::vector<int>{16, 32, 64};
    return c;
}

void RunConfig::validate() const
{
    if (cases.empty()) throw InvalidParameter("no (nu, eps) case given");
    for (const auto& c : cases) {
        if (!(c.nu > 0.0)) throw InvalidParameter("nu must be positive");
        if (!(c.eps >= 0.0)) throw InvalidParameter("eps must be non-negative");
    }
    if (levels.empty()) throw InvalidParameter("no mesh level given");
    for (int n : levels) {
        if (n < 1) throw InvalidParameter("N must be >= 1");
    }
    if (!(dt_ratio > 0.0)) throw InvalidParameter("dt-ratio must be positive");
    if (!(final_time > 0.0)) throw InvalidParameter("T must be positive");
    if (!(delta0 > 0.0)) throw InvalidParameter("delta0 must be positive");
    if (!(solver_tol > 0.0)) throw InvalidParameter("solver-tol must be positive");
}

namespace {

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5e", v);
    return buf;
}

std::string case_label(const FlowCase& f)
{
    std::ostringstream s;
    s << "nu=" << f.nu << " eps=" << f.eps;
    return s.str();
}

void dump_state(const std::filesystem::path& dir, const Mesh& mesh, const State& s)
{
    char name[32];
    std::snprintf(name, sizeof name, "step_%05d.csv", s.step);
    std::ofstream out(dir / name);
    out << "x,y,u1,u2,p,C11,C12,C22\n";
    out.precision(17);
    for (std::size_t i = 0; i < mesh.node_count(); ++i) {
        const Vec2 x = mesh.node(i);
        out << x.x << ',' << x.y << ',' << s.u[0][i] << ',' << s.u[1][i] << ',' << s.p[0][i] << ','
            << s.C[0][i] << ',' << s.C[1][i] << ',' << s.C[2][i] << '\n';
    }
}

ExactSnapshot snapshot(const ManufacturedSolution& m, double t)
{
    return {
        [&m, t](Vec2 x) { return m.velocity(x, t); },
        [&m, t](Vec2 x) { return m.velocity_gradient(x, t); },
        [&m, t](Vec2 x) { return m.pressure(x, t); },
        [&m, t](Vec2 x) { return m.pressure_gradient(x, t); },
        [&m, t](Vec2 x) { return m.tensor(x, t); },
        [&m, t](Vec2 x) { return m.tensor_gradient(x, t); },
    };
}

}  // namespace

CaseRunResult run_case(const FlowCase& flow, int divisions, const RunConfig& config, const LogSink& log)
{
    const Mesh mesh(divisions, config.diagonal);
    const auto quad = quad_rule(5);
    const ManufacturedSolution exact(flow.nu, flow.eps);

    Params params;
    params.nu = flow.nu;
    params.eps = flow.eps;
    params.delta0 = config.delta0;
    params.dt = config.dt_ratio / divisions;
    params.final_time = config.final_time;
    params.validate();

    ProblemData data{
        [&exact](Vec2 x, double t) { return exact.given_velocity(x, t); },
        [&exact](Vec2 x, double t) { return exact.forcing_f(x, t); },
        [&exact](Vec2 x, double t) { return exact.forcing_F(x, t); },
    };

    // Initial data: velocity and tensor components of the projection of (u0, 0, C0).
    const AnalyticTriple initial_data{
        [&exact](Vec2 x) { return exact.velocity(x, 0.0); },
        [&exact](Vec2 x) { return exact.velocity_gradient(x, 0.0); },
        [](Vec2) { return 0.0; },
        [&exact](Vec2 x) { return exact.tensor(x, 0.0); },
        [&exact](Vec2 x) { return exact.tensor_gradient(x, 0.0); },
    };
    auto projected = stokes_poisson_project(initial_data, mesh, quad, params, config.solver_tol);
    State initial;
    initial.u = std::move(projected.u);
    initial.p = std::move(projected.p);
    initial.C = std::move(projected.C);

    std::filesystem::path state_dir;
    if (config.dump_states) {
        std::ostringstream sub;
        sub << "states_nu" << flow.nu << "_eps" << flow.eps << "_N" << divisions;
        state_dir = config.out_dir / sub.str();
        std::filesystem::create_directories(state_dir);
    }

    CaseRunResult result;
    ErrorAccumulator acc(params.dt);
    auto observe = [&](const State& s, const StepReport* report) {
        const auto iu = interpolate([&](Vec2 x, double t) { return exact.velocity(x, t); }, mesh, s.time);
        const auto ip = interpolate([&](Vec2 x, double t) { return exact.pressure(x, t); }, mesh, s.time);
        const auto iC = interpolate([&](Vec2 x, double t) { return exact.tensor(x, t); }, mesh, s.time);
        const DiscreteLevel discrete{s.u, s.p, s.C};
        const DiscreteLevel interp{iu, ip, iC};
        if (config.primed) {
            const auto snap = snapshot(exact, s.time);
            acc.add(s.step, measure_level(discrete, interp, mesh, &snap, &quad));
        } else {
            acc.add(s.step, measure_level(discrete, interp, mesh));
        }
        if (report != nullptr) {
            result.steps = report->step;
            result.clamped += report->clamped;
            result.max_courant = std::max(result.max_courant, report->courant.courant);
            if (report->courant.status != CourantStatus::ok) {
                ++result.courant_warnings;
                if (log) {
                    std::ostringstream msg;
                    msg << case_label(flow) << " N=" << divisions << " step " << report->step << ": dt*|w|_1,inf = "
                        << report->courant.courant
                        << (report->courant.status == CourantStatus::warn_bijective ? " >= 1 (upwind map may not be bijective)"
                                                                                     : " > 1/4 (Jacobian bound not guaranteed)");
                    log(msg.str());
                }
            }
            if (report->clamped > 0 && log) {
                std::ostringstream msg;
                msg << case_label(flow) << " N=" << divisions << " step " << report->step << ": clamped "
                    << report->clamped << " upwind points onto the boundary";
                log(msg.str());
            }
        }
        if (config.dump_states) dump_state(state_dir, mesh, s);
    };

    run_simulation(mesh, quad, params, data, std::move(initial), observe, config.solver_tol);

    result.row.N = divisions;
    result.row.h = 1.0 / divisions;
    result.row.er = acc.relative_errors();
    result.row.er_primed = acc.primed_errors();
    return result;
}

bool StudyReport::all_succeeded() const
{
    for (const auto& c : cases) {
        if (!c.failures.empty()) return false;
    }
    return true;
}

std::string csv_file_name(const FlowCase& flow)
{
    std::ostringstream s;
    s << "errors_nu" << flow.nu << "_eps" << flow.eps << ".csv";
    return s.str();
}

std::string format_csv(const CaseReport& report, bool primed)
{
    std::ostringstream out;
    out << "h";
    for (int k = 1; k <= 6; ++k) out << ",Er" << k;
    for (int k = 1; k <= 6; ++k) out << ",slope" << k;
    if (primed) {
        for (int k = 1; k <= 6; ++k) out << ",Er" << k << "_prime";
        for (int k = 1; k <= 6; ++k) out << ",slope" << k << "_prime";
    }
    out << '\n';

    const auto& rows = report.report.rows;
    const auto slope = report.report.slope_table(false);
    const auto slope_p = report.report.slope_table(true);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << format_number(rows[i].h);
        for (double e : rows[i].er) out << ',' << format_number(e);
        for (const auto& s : slope[i]) out << ',' << (s ? format_number(*s) : "");
        if (primed) {
            for (int k = 0; k < 6; ++k) {
                out << ',' << (rows[i].er_primed ? format_number((*rows[i].er_primed)[k]) : "");
            }
            for (const auto& s : slope_p[i]) out << ',' << (s ? format_number(*s) : "");
        }
        out << '\n';
    }
    return out.str();
}

namespace {

nlohmann::json encode(double v)
{
    if (std::isfinite(v)) return v;
    return nullptr;
}

double decode(const nlohmann::json& j)
{
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

nlohmann::json encode(const ErrorSet& e)
{
    auto a = nlohmann::json::array();
    for (double v : e) a.push_back(encode(v));
    return a;
}

ErrorSet decode_set(const nlohmann::json& j)
{
    ErrorSet e{};
    for (std::size_t i = 0; i < 6; ++i) e[i] = decode(j.at(i));
    return e;
}

}  // namespace

nlohmann::json to_json(const StudyReport& report, const RunConfig& config)
{
    nlohmann::json j;
    j["config"] = {
        {"dt_ratio", config.dt_ratio},
        {"T", config.final_time},
        {"delta0", config.delta0},
        {"diagonal", config.diagonal == Diagonal::right ? "right" : "left"},
        {"solver_tol", config.solver_tol},
        {"primed", config.primed},
        {"N", config.levels},
    };
    auto cases = nlohmann::json::array();
    for (const auto& c : report.cases) {
        nlohmann::json jc;
        jc["nu"] = c.flow.nu;
        jc["eps"] = c.flow.eps;
        auto rows = nlohmann::json::array();
        const auto slope = c.report.slope_table(false);
        for (std::size_t i = 0; i < c.report.rows.size(); ++i) {
            const auto& r = c.report.rows[i];
            nlohmann::json jr;
            jr["N"] = r.N;
            jr["h"] = r.h;
            jr["er"] = encode(r.er);
            if (r.er_primed) jr["er_primed"] = encode(*r.er_primed);
            auto s = nlohmann::json::array();
            for (const auto& v : slope[i]) s.push_back(v ? encode(*v) : nlohmann::json(nullptr));
            jr["slopes"] = s;
            rows.push_back(jr);
        }
        jc["rows"] = rows;
        auto failures = nlohmann::json::array();
        for (const auto& f : c.failures) failures.push_back({{"N", f.N}, {"error", f.error}});
        jc["failures"] = failures;
        cases.push_back(jc);
    }
    j["cases"] = cases;
    return j;
}

StudyReport study_from_json(const nlohmann::json& j)
{
    StudyReport report;
    for (const auto& jc : j.at("cases")) {
        CaseReport c;
        c.flow = {jc.at("nu").get<double>(), jc.at("eps").get<double>()};
        for (const auto& jr : jc.at("rows")) {
            ReportRow r;
            r.N = jr.at("N").get<int>();
            r.h = jr.at("h").get<double>();
            r.er = decode_set(jr.at("er"));
            if (jr.contains("er_primed")) r.er_primed = decode_set(jr.at("er_primed"));
            c.report.rows.push_back(r);
        }
        for (const auto& jf : jc.at("failures")) {
            c.failures.push_back({jf.at("N").get<int>(), jf.at("error").get<std::string>()});
        }
        report.cases.push_back(std::move(c));
    }
    return report;
}

StudyReport run_study(const RunConfig& config)
{
    config.validate();
    std::filesystem::create_directories(config.out_dir);
    const auto log_path = config.log_path.empty() ? config.out_dir / "study.log" : config.log_path;
    if (log_path.has_parent_path()) std::filesystem::create_directories(log_path.parent_path());
    std::ofstream log_file(log_path);
    const LogSink log = [&log_file](const std::string& line) {
        log_file << line << '\n';
        log_file.flush();
    };

    StudyReport report;
    for (const auto& flow : config.cases) {
        CaseReport c;
        c.flow = flow;
        for (int n : config.levels) {
            try {
                auto r = run_case(flow, n, config, log);
                std::ostringstream msg;
                msg << case_label(flow) << " N=" << n << ": " << r.steps << " steps, Er1=" << r.row.er[0]
                    << ", max dt*|w|_1,inf=" << r.max_courant << ", clamped=" << r.clamped;
                log(msg.str());
                c.report.rows.push_back(r.row);
            } catch (const std::exception& err) {
                log(case_label(flow) + " N=" + std::to_string(n) + " failed: " + err.what());
                c.failures.push_back({n, err.what()});
            }
        }
        std::ofstream csv(config.out_dir / csv_file_name(flow), std::ios::binary);
        csv << format_csv(c, config.primed);
        report.cases.push_back(std::move(c));
    }

    std::ofstream summary(config.out_dir / "summary.json", std::ios::binary);
    summary << to_json(report, config).dump(2) << '\n';
    return report;
}

namespace {

std::vector<int> parse_levels(const std::string& text)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            throw InvalidParameter("malformed N list: '" + text + "'");
        }
        if (used != item.size() || v < 1) throw InvalidParameter("malformed N list: '" + text + "'");
        out.push_back(v);
    }
    if (out.empty()) throw InvalidParameter("empty N list");
    return out;
}

double parse_real(const std::string& text)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw InvalidParameter("malformed number: '" + text + "'");
    }
    if (used != text.size()) throw InvalidParameter("malformed number: '" + text + "'");
    return v;
}

FlowCase parse_case(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw InvalidParameter("--case expects <nu>:<eps>, got '" + text + "'");
    return {parse_real(text.substr(0, colon)), parse_real(text.substr(colon + 1))};
}

}  // namespace

ParsedArgs parse_args(int argc, const char* const* argv)
{
    CLI::App app{"Convergence study of the stabilized Lagrange-Galerkin Peterlin scheme"};
    std::vector<std::string> cases;
    std::string levels;
    double dt_ratio = 0.5;
    double final_time = 0.5;
    double delta0 = 1.0;
    std::string diagonal = "right";
    double solver_tol = 1e-10;
    bool primed = false;
    bool full = false;
    bool dump = false;
    std::string out_dir = "results";
    std::string log_path;

    app.add_option("--case", cases, "viscosity pair <nu>:<eps> (repeatable)");
    app.add_option("--N", levels, "comma-separated divisions per side");
    app.add_option("--dt-ratio", dt_ratio, "time step as a multiple of h = 1/N");
    app.add_option("--T", final_time, "final time");
    app.add_option("--delta0", delta0, "pressure stabilization constant");
    app.add_option("--diagonal", diagonal, "triangle split: right or left")->check(CLI::IsMember({"right", "left"}));
    app.add_option("--solver-tol", solver_tol, "relative residual tolerance of the linear solver");
    app.add_flag("--primed", primed, "also compute errors against the exact solution by quadrature");
    app.add_flag("--full", full, "default N list up to 256");
    app.add_flag("--dump-states", dump, "write nodal values of every step");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--log", log_path, "log file (default <out>/study.log)");

    ParsedArgs parsed;
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        parsed.exit_code = 0;
        parsed.message = app.help();
        return parsed;
    } catch (const CLI::ParseError& err) {
        parsed.exit_code = 2;
        parsed.message = std::string(err.what()) + "\n" + app.help();
        return parsed;
    }

    try {
        RunConfig c = RunConfig::defaults(full);
        if (!cases.empty()) {
            c.cases.clear();
            for (const auto& s : cases) c.cases.push_back(parse_case(s));
        }
        if (!levels.empty()) c.levels = parse_levels(levels);
        c.dt_ratio = dt_ratio;
        c.final_time = final_time;
        c.delta0 = delta0;
        c.diagonal = diagonal == "left" ? Diagonal::left : Diagonal::right;
        c.solver_tol = solver_tol;
        c.primed = primed;
        c.dump_states = dump;
        c.out_dir = out_dir;
        c.log_path = log_path;
        c.validate();
        parsed.config = std::move(c);
    } catch (const InvalidParameter& err) {
        parsed.exit_code = 2;
        parsed.message = std::string("error: ") + err.what() + "\n" + app.help();
    }
    return parsed;
}

}  // namespace plg
