#include "mbadmm/serialize.hpp"

#include "json_util.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace mbadmm {

using nlohmann::json;
using detail::JsonPath;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path.string());
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

namespace {

// ----- writing -------------------------------------------------------------

json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

json vec(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v[i]));
    return a;
}

json mat(const Matrix& M) {
    json a = json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r) a.push_back(vec(M.row(r).transpose()));
    return a;
}

json set_json(const LocalSet& s) {
    switch (s.kind) {
    case LocalSet::Kind::unbounded: return {{"kind", "unbounded"}};
    case LocalSet::Kind::nonnegative: return {{"kind", "nonnegative"}};
    case LocalSet::Kind::box: return {{"kind", "box"}, {"lo", vec(s.lo)}, {"hi", vec(s.hi)}};
    }
    return {};
}

json objective_json(const ObjectiveHandle& h) {
    return std::visit(
        [](const auto& t) -> json {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, objective::Zero>) {
                return {{"type", "zero"}};
            } else if constexpr (std::is_same_v<T, objective::Quadratic>) {
                return {{"type", "quadratic"}, {"Q", mat(t.Q)}, {"q", vec(t.q)}, {"offset", number(t.offset)}};
            } else if constexpr (std::is_same_v<T, objective::L1>) {
                json j = {{"type", "l1"}, {"beta", number(t.beta)}};
                if (t.weights.size()) j["weights"] = vec(t.weights);
                return j;
            } else if constexpr (std::is_same_v<T, objective::Indicator>) {
                return {{"type", "indicator"}, {"set", set_json(t.set)}};
            } else {
                json terms = json::array();
                for (const auto& term : t.terms) terms.push_back(objective_json(term));
                return {{"type", "sum"}, {"terms", terms}};
            }
        },
        h.term());
}

// ----- reading -------------------------------------------------------------

Vector read_vec(const json& j, const JsonPath& path) {
    if (!j.is_array()) throw FormatError(path.str() + ": expected an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = detail::read_number(j[i], path.at(i));
    return v;
}

Matrix read_mat(const json& j, const JsonPath& path, Eigen::Index cols) {
    if (!j.is_array()) throw FormatError(path.str() + ": expected an array of rows");
    Matrix M(static_cast<Eigen::Index>(j.size()), cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        const Vector row = read_vec(j[r], path.at(r));
        if (row.size() != cols)
            throw FormatError(path.at(r).str() + ": row has " + std::to_string(row.size()) +
                              " entries, expected " + std::to_string(cols));
        M.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    return M;
}

LocalSet read_set(const json& j, const JsonPath& path) {
    const std::string kind = detail::read_string(detail::require(j, "kind", path), path.key("kind"));
    if (kind == "unbounded") return LocalSet::unbounded();
    if (kind == "nonnegative") return LocalSet::nonnegative();
    if (kind == "box") {
        Vector lo = read_vec(detail::require(j, "lo", path), path.key("lo"));
        Vector hi = read_vec(detail::require(j, "hi", path), path.key("hi"));
        try {
            return LocalSet::box(std::move(lo), std::move(hi));
        } catch (const Error& e) {
            throw FormatError(path.str() + ": " + e.what());
        }
    }
    throw FormatError(path.key("kind").str() + ": unknown local set kind '" + kind + "'");
}

ObjectiveHandle read_objective(const json& j, const JsonPath& path, Eigen::Index n) {
    const std::string type = detail::read_string(detail::require(j, "type", path), path.key("type"));
    if (type == "zero") return ObjectiveHandle::zero();
    if (type == "quadratic") {
        Matrix Q = read_mat(detail::require(j, "Q", path), path.key("Q"), n);
        Vector q = read_vec(detail::require(j, "q", path), path.key("q"));
        const double offset = j.contains("offset") ? detail::read_number(j["offset"], path.key("offset")) : 0.0;
        return ObjectiveHandle::quadratic(std::move(Q), std::move(q), offset);
    }
    if (type == "l1") {
        const double beta = detail::read_number(detail::require(j, "beta", path), path.key("beta"));
        Vector w = j.contains("weights") ? read_vec(j["weights"], path.key("weights")) : Vector();
        return ObjectiveHandle::l1(beta, std::move(w));
    }
    if (type == "indicator") return ObjectiveHandle::indicator(read_set(detail::require(j, "set", path), path.key("set")));
    if (type == "sum") {
        const json& terms = detail::require(j, "terms", path);
        if (!terms.is_array()) throw FormatError(path.key("terms").str() + ": expected an array");
        std::vector<ObjectiveHandle> out;
        for (std::size_t i = 0; i < terms.size(); ++i) out.push_back(read_objective(terms[i], path.key("terms").at(i), n));
        return ObjectiveHandle::sum(std::move(out));
    }
    throw FormatError(path.key("type").str() + ": unknown objective type '" + type + "'");
}

BlockVectors read_blocks(const json& j, const JsonPath& path) {
    if (!j.is_array()) throw FormatError(path.str() + ": expected an array");
    BlockVectors out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_vec(j[i], path.at(i)));
    return out;
}

void check_version(const json& doc) {
    if (!doc.is_object()) throw FormatError("document root must be an object");
    const auto v = detail::read_number(detail::require(doc, "format_version", JsonPath()), JsonPath().key("format_version"));
    if (v != kFormatVersion)
        throw FormatError("format_version: unsupported version " + format_double(v));
}

}  // namespace

// ----- problems ------------------------------------------------------------

std::string problem_to_string(const ProblemSpec& problem, const std::optional<BlockVectors>& initial_x) {
    json doc = {{"format_version", kFormatVersion}, {"c", vec(problem.rhs())}};
    json blocks = json::array();
    for (const auto& b : problem.blocks())
        blocks.push_back({{"dim", b.dim()},
                          {"A", mat(b.coupling)},
                          {"objective", objective_json(b.objective)},
                          {"local_set", set_json(b.local_set)}});
    doc["blocks"] = std::move(blocks);
    if (initial_x) {
        json x = json::array();
        for (const auto& xi : *initial_x) x.push_back(vec(xi));
        doc["initial_x"] = std::move(x);
    }
    return detail::dump(doc);
}

InstanceFile problem_from_string(const std::string& text) {
    const json doc = detail::parse(text);
    check_version(doc);
    const JsonPath root;
    const Vector c = read_vec(detail::require(doc, "c", root), root.key("c"));
    const json& blocks = detail::require(doc, "blocks", root);
    if (!blocks.is_array()) throw FormatError("blocks: expected an array");
    std::vector<BlockSpec> specs;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const JsonPath p = root.key("blocks").at(i);
        const json& b = blocks[i];
        const auto n = static_cast<Eigen::Index>(detail::read_integer(detail::require(b, "dim", p), p.key("dim")));
        BlockSpec spec;
        spec.coupling = read_mat(detail::require(b, "A", p), p.key("A"), n);
        spec.objective = b.contains("objective") ? read_objective(b["objective"], p.key("objective"), n)
                                                 : ObjectiveHandle::zero();
        spec.local_set = b.contains("local_set") ? read_set(b["local_set"], p.key("local_set")) : LocalSet::unbounded();
        specs.push_back(std::move(spec));
    }
    InstanceFile out{assemble_problem(std::move(specs), c), std::nullopt};
    if (doc.contains("initial_x")) {
        BlockVectors x = read_blocks(doc["initial_x"], root.key("initial_x"));
        check_conformable(out.problem, x);
        out.initial_x = std::move(x);
    }
    return out;
}

void write_problem(const std::filesystem::path& path, const ProblemSpec& problem,
                   const std::optional<BlockVectors>& initial_x) {
    write_text_file(path, problem_to_string(problem, initial_x));
}

InstanceFile read_problem(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    try {
        return problem_from_string(text);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

// ----- ground truth --------------------------------------------------------

std::string ground_truth_to_string(const std::string& generator, const GroundTruth& truth) {
    json doc = {{"format_version", kFormatVersion}, {"generator", generator}};
    json x = json::array();
    for (const auto& xi : truth.true_x) x.push_back(vec(xi));
    doc["true_x"] = std::move(x);
    doc["attack_support"] = truth.attack_support;
    doc["oracle_objective"] = truth.oracle_objective ? number(*truth.oracle_objective) : json(nullptr);
    return detail::dump(doc);
}

GroundTruth ground_truth_from_string(const std::string& text) {
    const json doc = detail::parse(text);
    check_version(doc);
    const JsonPath root;
    GroundTruth truth;
    if (doc.contains("true_x")) truth.true_x = read_blocks(doc["true_x"], root.key("true_x"));
    if (doc.contains("attack_support")) {
        const json& s = doc["attack_support"];
        for (std::size_t i = 0; i < s.size(); ++i) {
            std::vector<Eigen::Index> idx;
            for (std::size_t k = 0; k < s[i].size(); ++k)
                idx.push_back(static_cast<Eigen::Index>(detail::read_integer(s[i][k], root.key("attack_support").at(i).at(k))));
            truth.attack_support.push_back(std::move(idx));
        }
    }
    if (doc.contains("oracle_objective") && !doc["oracle_objective"].is_null())
        truth.oracle_objective = detail::read_number(doc["oracle_objective"], root.key("oracle_objective"));
    return truth;
}

void write_ground_truth(const std::filesystem::path& path, const std::string& generator,
                        const GroundTruth& truth) {
    write_text_file(path, ground_truth_to_string(generator, truth));
}

// ----- traces --------------------------------------------------------------

namespace {

std::string objective_text(const ObjectiveValue& v) { return v.infinite ? "inf" : format_double(v.value); }

ObjectiveValue objective_from(double v) {
    if (std::isinf(v) && v > 0) return ObjectiveValue::inf();
    return {v, false};
}

double parse_field(const std::string& s, std::size_t line, const char* field) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (s.empty() || end != begin + s.size())
        throw FormatError("line " + std::to_string(line) + ", field " + field + ": not a number '" + s + "'");
    return v;
}

}  // namespace

std::string trace_to_csv(const std::vector<TraceRecord>& trace) {
    std::string out = kTraceHeader;
    out += '\n';
    for (const auto& r : trace) {
        out += std::to_string(r.k);
        out += ',' + objective_text(r.objective);
        out += ',' + format_double(r.primal_residual_norm);
        out += ',' + format_double(r.iterate_change);
        out += ',' + format_double(r.wall_ms);
        out += '\n';
    }
    return out;
}

std::vector<TraceRecord> trace_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kTraceHeader)
        throw FormatError("line 1: expected header '" + std::string(kTraceHeader) + "'");
    static const char* fields[] = {"k", "objective", "primal_residual", "iterate_change", "wall_ms"};
    std::vector<TraceRecord> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 5)
            throw FormatError("line " + std::to_string(lineno) + ": expected 5 fields, got " + std::to_string(cells.size()));
        double v[5];
        for (int f = 0; f < 5; ++f) v[f] = parse_field(cells[f], lineno, fields[f]);
        TraceRecord r;
        r.k = static_cast<long>(v[0]);
        r.objective = objective_from(v[1]);
        r.primal_residual_norm = v[2];
        r.iterate_change = v[3];
        r.wall_ms = v[4];
        out.push_back(r);
    }
    return out;
}

std::string trace_to_json(const std::vector<TraceRecord>& trace) {
    json records = json::array();
    for (const auto& r : trace)
        records.push_back({{"k", r.k},
                           {"objective", r.objective.infinite ? json("inf") : number(r.objective.value)},
                           {"primal_residual", number(r.primal_residual_norm)},
                           {"iterate_change", number(r.iterate_change)},
                           {"wall_ms", number(r.wall_ms)}});
    return detail::dump(json{{"format_version", kFormatVersion}, {"records", records}});
}

std::vector<TraceRecord> trace_from_json(const std::string& text) {
    const json doc = detail::parse(text);
    check_version(doc);
    const JsonPath root;
    const json& records = detail::require(doc, "records", root);
    std::vector<TraceRecord> out;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const JsonPath p = root.key("records").at(i);
        const json& j = records[i];
        TraceRecord r;
        r.k = detail::read_integer(detail::require(j, "k", p), p.key("k"));
        r.objective = objective_from(detail::read_number(detail::require(j, "objective", p), p.key("objective")));
        r.primal_residual_norm = detail::read_number(detail::require(j, "primal_residual", p), p.key("primal_residual"));
        r.iterate_change = detail::read_number(detail::require(j, "iterate_change", p), p.key("iterate_change"));
        r.wall_ms = detail::read_number(detail::require(j, "wall_ms", p), p.key("wall_ms"));
        out.push_back(r);
    }
    return out;
}

void emit_traces(const SolveReport& report, TraceFormat format, const std::filesystem::path& path) {
    write_text_file(path, format == TraceFormat::csv ? trace_to_csv(report.trace) : trace_to_json(report.trace));
}

std::vector<TraceRecord> read_trace(const std::filesystem::path& path, TraceFormat format) {
    const std::string text = read_text_file(path);
    try {
        return format == TraceFormat::csv ? trace_from_csv(text) : trace_from_json(text);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

}  // namespace mbadmm
