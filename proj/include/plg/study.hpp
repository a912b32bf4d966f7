#pragma once

#include "plg/mesh.hpp"
#include "plg/norms.hpp"

#include <json.hpp>

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace plg {

struct FlowCase {
    double nu = 0.1;
    double eps = 0.1;

    friend bool operator==(const FlowCase&, const FlowCase&) = default;
};

/// Convergence-study parameters. The time step is dt_ratio / N.
struct RunConfig {
    std::vector<FlowCase> cases;
    std::vector<int> levels;
    double dt_ratio = 0.5;
    double final_time = 0.5;
    double delta0 = 1.0;
    Diagonal diagonal = Diagonal::right;
    double solver_tol = 1e-10;
    std::filesystem::path out_dir = "results";
    std::filesystem::path log_path;  ///< empty: <out_dir>/study.log
    bool primed = false;
    bool dump_states = false;

    /// Three viscosity cases on N = 16, 32, 64 (up to 256 with `full`).
    static RunConfig defaults(bool full = false);
    void validate() const;
};

using LogSink = std::function<void(const std::string&)>;

struct CaseRunResult {
    ReportRow row;
    int steps = 0;
    std::size_t clamped = 0;
    int courant_warnings = 0;
    double max_courant = 0.0;
};

/// Full manufactured-solution run for one (case, N): projection of the
/// initial data, N_T steps, Er1..Er6 (and primed errors when enabled).
CaseRunResult run_case(const FlowCase& flow, int divisions, const RunConfig& config, const LogSink& log = {});

struct RunFailure {
    int N = 0;
    std::string error;

    friend bool operator==(const RunFailure&, const RunFailure&) = default;
};

struct CaseReport {
    FlowCase flow;
    ErrorReport report;
    std::vector<RunFailure> failures;
};

struct StudyReport {
    std::vector<CaseReport> cases;

    bool all_succeeded() const;
};

/// Runs every (case, N), continuing past failures, and writes one CSV per
/// case plus summary.json into config.out_dir.
StudyReport run_study(const RunConfig& config);

/// Header plus one row per level; numbers in %.5e, slope cells blank on the
/// coarsest level.
std::string format_csv(const CaseReport& report, bool primed);
std::string csv_file_name(const FlowCase& flow);

nlohmann::json to_json(const StudyReport& report, const RunConfig& config);
StudyReport study_from_json(const nlohmann::json& j);

struct ParsedArgs {
    RunConfig config;
    std::optional<int> exit_code;  ///< set when the program should stop (help or usage error)
    std::string message;
};

/// Exit code 2 on usage errors.
ParsedArgs parse_args(int argc, const char* const* argv);

}  // namespace plg
