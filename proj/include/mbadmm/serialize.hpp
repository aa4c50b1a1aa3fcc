#pragma once

#include "mbadmm/applications.hpp"
#include "mbadmm/solvers.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mbadmm {

/// Malformed document. The message carries a field path such as
/// `blocks[2].A` or a line/column for syntax errors.
struct FormatError : Error {
    using Error::Error;
};

/// File could not be opened, read or written. The message names the path.
struct IoError : Error {
    using Error::Error;
};

inline constexpr int kFormatVersion = 1;

// Problem interchange file
//
//   { "format_version": 1,
//     "c": [...],
//     "blocks": [ { "dim": n, "A": [[...], ...], "objective": {...}, "local_set": {...} } ],
//     "initial_x": [[...], ...]            (optional) }
//
// objective:  {"type": "zero"}
//             {"type": "quadratic", "Q": [[...]], "q": [...], "offset": v}
//             {"type": "l1", "beta": b, "weights": [...]}   (weights optional)
//             {"type": "indicator", "set": <local_set>}
//             {"type": "sum", "terms": [<objective>, ...]}
// local_set:  {"kind": "unbounded"} | {"kind": "nonnegative"}
//             {"kind": "box", "lo": [...], "hi": [...]}   infinite bounds as "inf" / "-inf"
//
// Numbers are written with 17 significant digits, so reading back is exact.

struct InstanceFile {
    ProblemSpec problem;
    std::optional<BlockVectors> initial_x;
};

std::string problem_to_string(const ProblemSpec& problem,
                              const std::optional<BlockVectors>& initial_x = std::nullopt);
InstanceFile problem_from_string(const std::string& text);

void write_problem(const std::filesystem::path& path, const ProblemSpec& problem,
                   const std::optional<BlockVectors>& initial_x = std::nullopt);
InstanceFile read_problem(const std::filesystem::path& path);

/// Sidecar with true states, attack support and oracle objective.
std::string ground_truth_to_string(const std::string& generator, const GroundTruth& truth);
GroundTruth ground_truth_from_string(const std::string& text);
void write_ground_truth(const std::filesystem::path& path, const std::string& generator,
                        const GroundTruth& truth);

// Traces

enum class TraceFormat { csv, json };

inline constexpr const char* kTraceHeader = "k,objective,primal_residual,iterate_change,wall_ms";

std::string trace_to_csv(const std::vector<TraceRecord>& trace);
std::vector<TraceRecord> trace_from_csv(const std::string& text);
std::string trace_to_json(const std::vector<TraceRecord>& trace);
std::vector<TraceRecord> trace_from_json(const std::string& text);

void emit_traces(const SolveReport& report, TraceFormat format, const std::filesystem::path& path);
std::vector<TraceRecord> read_trace(const std::filesystem::path& path, TraceFormat format);

/// %.17g, with inf / -inf / nan spelled out.
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace mbadmm
