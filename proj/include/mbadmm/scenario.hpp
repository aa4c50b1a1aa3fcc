#pragma once

#include "mbadmm/applications.hpp"
#include "mbadmm/serialize.hpp"
#include "mbadmm/solvers.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mbadmm {

/// Builds an instance by generator name. Parameters are a JSON object; see
/// README for the names each generator accepts. Throws FormatError for a
/// missing or mistyped parameter and GeneratorError for invalid values.
GeneratedInstance make_instance(const std::string& generator, const nlohmann::json& params,
                                std::uint64_t seed);

const std::vector<std::string>& generator_names();

struct SchemeRun {
    std::string label;  // trace file stem, unique within a scenario
    SolverConfig config;
};

struct Scenario {
    // instance source: a problem file, or a generator
    std::optional<std::filesystem::path> instance_file;
    std::string generator;
    nlohmann::json generator_params = nlohmann::json::object();
    std::uint64_t seed = 0;

    std::vector<SchemeRun> schemes;
    std::filesystem::path output_dir;
    TraceFormat trace_format = TraceFormat::csv;
    bool run_oracle = true;
    /// Off by default so reruns give bit-identical trace files.
    bool record_timing = false;
    std::set<Scheme> allow_divergence;
    int workers = 1;
};

/// Parses a scenario document. Relative instance/output paths are resolved
/// against `base_dir`. Throws FormatError with line or field context.
Scenario parse_scenario_text(const std::string& text, const std::filesystem::path& base_dir = {});
Scenario parse_scenario(const std::filesystem::path& path);

struct SchemeSummary {
    std::string label;
    Scheme scheme = Scheme::two_block;
    std::optional<Status> status;  // empty when the solver raised
    long iterations = 0;
    ObjectiveValue final_objective;
    double final_residual = 0.0;
    double wall_ms = 0.0;
    std::optional<double> relative_gap;
    std::string trace_file;
    std::string error;
    bool divergence_allowed = false;

    /// Converged, or diverged with divergence allowed.
    bool ok() const;
};

struct RunSummary {
    std::string instance;
    std::optional<double> oracle_objective;
    std::string oracle_error;
    std::vector<SchemeSummary> schemes;

    /// 0 when every scheme is ok, 1 otherwise.
    int exit_code() const;
};

/// |obj - oracle| / max(1, |oracle|); infinite objective gives infinity.
double relative_gap(const ObjectiveValue& objective, double oracle);

/// Runs every scheme on the same instance and initial point, writing one
/// trace per scheme, instance.json, ground_truth.json and summary.json into
/// the output directory. Solver errors are recorded per scheme.
RunSummary run_scenario(const Scenario& scenario);

std::string summary_to_string(const RunSummary& summary);

namespace exit_code {
inline constexpr int success = 0;
inline constexpr int convergence_failure = 1;
inline constexpr int config_error = 2;
inline constexpr int io_error = 3;
}  // namespace exit_code

}  // namespace mbadmm
