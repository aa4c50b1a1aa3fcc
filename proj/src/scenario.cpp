#include "mbadmm/scenario.hpp"

#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace mbadmm {

using nlohmann::json;
using detail::JsonPath;

namespace {

std::string join(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
    return out;
}

/// Typed access to generator parameters with unknown-key detection.
class Params {
public:
    Params(const json& j, std::string generator, std::vector<std::string> known)
        : j_(j), generator_(std::move(generator)) {
        if (!j_.is_object()) throw FormatError("params: expected an object");
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (std::find(known.begin(), known.end(), it.key()) == known.end())
                throw FormatError("params." + it.key() + ": unknown parameter for generator " + generator_ +
                                  " (known: " + join(known) + ")");
    }

    long long integer(const char* key, std::optional<long long> fallback, long long min_value = 0) const {
        if (!j_.contains(key)) {
            if (!fallback) throw FormatError(path(key) + ": missing required generator parameter");
            return *fallback;
        }
        const auto v = detail::read_integer(j_[key], JsonPath().key("params").key(key));
        if (v < min_value) throw FormatError(path(key) + ": must be at least " + std::to_string(min_value));
        return v;
    }

    double real(const char* key, double fallback) const {
        return j_.contains(key) ? detail::read_number(j_[key], JsonPath().key("params").key(key)) : fallback;
    }

    bool flag(const char* key, bool fallback) const {
        return j_.contains(key) ? detail::read_bool(j_[key], JsonPath().key("params").key(key)) : fallback;
    }

    std::vector<std::size_t> indices(const char* key) const {
        std::vector<std::size_t> out;
        if (!j_.contains(key)) return out;
        const json& a = j_[key];
        if (!a.is_array()) throw FormatError(path(key) + ": expected an array of integers");
        for (std::size_t i = 0; i < a.size(); ++i) {
            const auto v = detail::read_integer(a[i], JsonPath().key("params").key(key).at(i));
            if (v < 0) throw FormatError(path(key) + ": indices must be nonnegative");
            out.push_back(static_cast<std::size_t>(v));
        }
        return out;
    }

private:
    std::string path(const char* key) const { return std::string("params.") + key; }
    const json& j_;
    std::string generator_;
};

}  // namespace

const std::vector<std::string>& generator_names() {
    static const std::vector<std::string> names = {"state_estimation", "energy_management", "scopf",
                                                   "random_qp", "gauss_seidel_stress", "jacobi_stress"};
    return names;
}

GeneratedInstance make_instance(const std::string& generator, const json& params, std::uint64_t seed) {
    const json empty = json::object();
    const json& pj = params.is_null() ? empty : params;
    if (generator == "state_estimation") {
        Params p(pj, generator,
                 {"areas", "boundary_size", "attack_cardinality", "beta", "interior_states",
                  "measurement_redundancy", "noise_sigma", "signal_scale", "sparsity_budget"});
        StateEstimationOptions opt;
        opt.interior_states = p.integer("interior_states", opt.interior_states);
        opt.measurement_redundancy = static_cast<int>(p.integer("measurement_redundancy", opt.measurement_redundancy, 1));
        opt.noise_sigma = p.real("noise_sigma", opt.noise_sigma);
        opt.signal_scale = p.real("signal_scale", opt.signal_scale);
        opt.sparsity_budget = static_cast<int>(p.integer("sparsity_budget", opt.sparsity_budget, -1));
        auto [inst, problem] = gen_state_estimation(
            static_cast<std::size_t>(p.integer("areas", 3)), p.integer("boundary_size", 2, -1000000),
            static_cast<std::size_t>(p.integer("attack_cardinality", 2)), p.real("beta", 0.1), seed, opt);
        GeneratedInstance g{generator, std::move(problem), {}, std::nullopt};
        for (std::size_t i = 0; i < inst.areas; ++i) {
            Vector xi(inst.true_states[i].size() + inst.attacks[i].size());
            xi << inst.true_states[i], inst.attacks[i];
            g.truth.true_x.push_back(std::move(xi));
        }
        g.truth.attack_support = inst.attack_support;
        return g;
    }
    if (generator == "energy_management") {
        Params p(pj, generator,
                 {"generators", "loads", "nets", "horizon", "storage_units", "curtailable_loads",
                  "curtailment_penalty", "demand_scale", "line_susceptance"});
        EnergyMgmtOptions opt;
        opt.storage_units = static_cast<std::size_t>(p.integer("storage_units", 1));
        opt.curtailable_loads = p.flag("curtailable_loads", false);
        opt.curtailment_penalty = p.real("curtailment_penalty", opt.curtailment_penalty);
        opt.demand_scale = p.real("demand_scale", opt.demand_scale);
        opt.line_susceptance = p.real("line_susceptance", opt.line_susceptance);
        auto [inst, problem] = gen_energy_management(
            static_cast<std::size_t>(p.integer("generators", 3)), static_cast<std::size_t>(p.integer("loads", 2)),
            static_cast<std::size_t>(p.integer("nets", 2)), static_cast<std::size_t>(p.integer("horizon", 4)), seed, opt);
        return {generator, std::move(problem), {}, std::nullopt};
    }
    if (generator == "scopf") {
        Params p(pj, generator, {"buses", "contingencies", "ramp_limit", "outages"});
        ScopfOptions opt;
        opt.ramp_limit = p.real("ramp_limit", opt.ramp_limit);
        opt.outages = p.indices("outages");
        auto [inst, problem] = gen_scopf_qp(static_cast<std::size_t>(p.integer("buses", std::nullopt)),
                                            static_cast<std::size_t>(p.integer("contingencies", std::nullopt)),
                                            seed, opt);
        return {generator, std::move(problem), {}, std::nullopt};
    }
    if (generator == "random_qp") {
        Params p(pj, generator, {"blocks", "min_block_dim", "max_block_dim", "rows", "strong_convexity"});
        RandomQpOptions opt;
        opt.min_block_dim = p.integer("min_block_dim", opt.min_block_dim, 1);
        opt.max_block_dim = p.integer("max_block_dim", opt.max_block_dim, 1);
        opt.rows = p.integer("rows", opt.rows);
        opt.strong_convexity = p.real("strong_convexity", opt.strong_convexity);
        return {generator, gen_random_qp(static_cast<std::size_t>(p.integer("blocks", std::nullopt, 1)), seed, opt), {},
                std::nullopt};
    }
    if (generator == "gauss_seidel_stress") {
        Params p(pj, generator, {});
        return gen_gauss_seidel_stress();
    }
    if (generator == "jacobi_stress") {
        Params p(pj, generator, {});
        return gen_jacobi_stress();
    }
    throw FormatError("instance.generator: unknown generator '" + generator + "' (valid: " +
                      join(generator_names()) + ")");
}

// ---------------------------------------------------------------------------
// Scenario parsing
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> scheme_names() {
    std::vector<std::string> out;
    for (auto s : all_schemes()) out.emplace_back(to_string(s));
    return out;
}

Scheme read_scheme(const json& j, const JsonPath& path) {
    const std::string name = detail::read_string(j, path);
    if (auto s = parse_scheme(name)) return *s;
    throw FormatError(path.str() + ": unknown scheme '" + name + "' (valid: " + join(scheme_names()) + ")");
}

/// Applies solver overrides from `j` onto `cfg`, ignoring `skip` keys.
void apply_overrides(SolverConfig& cfg, const json& j, const JsonPath& path,
                     const std::vector<std::string>& skip) {
    static const std::vector<std::string> known = {"rho",     "alpha",    "gamma",       "eps_abs",
                                                   "eps_rel", "max_iter", "prox_policy", "prox_safety"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (std::find(skip.begin(), skip.end(), key) != skip.end()) continue;
        const JsonPath p = path.key(key);
        if (key == "rho") {
            cfg.rho = detail::read_number(*it, p);
            if (!(cfg.rho > 0.0) || !std::isfinite(cfg.rho))
                throw FormatError(p.str() + ": " + format_double(cfg.rho) + " out of range, must be positive");
        } else if (key == "alpha") {
            cfg.alpha = detail::read_number(*it, p);
            if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
                throw FormatError(p.str() + ": " + format_double(cfg.alpha) +
                                  " out of range, must lie in the open interval (0,1)");
        } else if (key == "gamma") {
            cfg.gamma = detail::read_number(*it, p);
            if (!(cfg.gamma > 0.0) || !std::isfinite(cfg.gamma))
                throw FormatError(p.str() + ": " + format_double(cfg.gamma) + " out of range, must be positive");
        } else if (key == "eps_abs" || key == "eps_rel") {
            const double v = detail::read_number(*it, p);
            if (!(v > 0.0)) throw FormatError(p.str() + ": must be positive");
            (key == "eps_abs" ? cfg.eps_abs : cfg.eps_rel) = v;
        } else if (key == "max_iter") {
            cfg.max_iter = static_cast<long>(detail::read_integer(*it, p));
            if (cfg.max_iter < 1) throw FormatError(p.str() + ": must be a positive integer");
        } else if (key == "prox_policy") {
            const std::string v = detail::read_string(*it, p);
            if (v == "linearized")
                cfg.prox_policy.kind = ProxPolicy::Kind::linearized;
            else if (v == "zero")
                cfg.prox_policy.kind = ProxPolicy::Kind::zero;
            else
                throw FormatError(p.str() + ": unknown prox policy '" + v + "' (valid: linearized, zero)");
        } else if (key == "prox_safety") {
            cfg.prox_policy.safety = detail::read_number(*it, p);
            if (!(cfg.prox_policy.safety > 1.0)) throw FormatError(p.str() + ": must exceed 1");
        } else {
            throw FormatError(p.str() + ": unknown solver option (known: " + join(known) + ")");
        }
    }
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::filesystem::path& base_dir) {
    const json doc = detail::parse(text);
    if (!doc.is_object()) throw FormatError("document root must be an object");
    const JsonPath root;
    static const std::vector<std::string> known = {"format_version", "instance",       "schemes",
                                                   "defaults",       "output",         "trace_format",
                                                   "oracle",         "record_timing",  "allow_divergence",
                                                   "workers",        "description"};
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw FormatError(it.key() + ": unknown scenario field");

    const auto version = detail::read_integer(detail::require(doc, "format_version", root), root.key("format_version"));
    if (version != kFormatVersion)
        throw FormatError("format_version: unsupported version " + std::to_string(version));

    Scenario s;
    const json& inst = detail::require(doc, "instance", root);
    const JsonPath ip = root.key("instance");
    if (!inst.is_object()) throw FormatError("instance: expected an object");
    if (inst.contains("file")) {
        std::filesystem::path f = detail::read_string(inst["file"], ip.key("file"));
        s.instance_file = f.is_relative() && !base_dir.empty() ? base_dir / f : f;
    } else {
        s.generator = detail::read_string(detail::require(inst, "generator", ip), ip.key("generator"));
        const auto& names = generator_names();
        if (std::find(names.begin(), names.end(), s.generator) == names.end())
            throw FormatError("instance.generator: unknown generator '" + s.generator + "' (valid: " + join(names) + ")");
        if (inst.contains("params")) s.generator_params = inst["params"];
        if (inst.contains("seed")) {
            const auto seed = detail::read_integer(inst["seed"], ip.key("seed"));
            if (seed < 0) throw FormatError("instance.seed: must be nonnegative");
            s.seed = static_cast<std::uint64_t>(seed);
        }
        // surface parameter errors at parse time
        try {
            (void)make_instance(s.generator, s.generator_params, s.seed);
        } catch (const FormatError& e) {
            throw FormatError(std::string("instance.") + e.what());
        }
    }

    SolverConfig defaults;
    if (doc.contains("defaults")) {
        if (!doc["defaults"].is_object()) throw FormatError("defaults: expected an object");
        apply_overrides(defaults, doc["defaults"], root.key("defaults"), {});
    }

    const json& schemes = detail::require(doc, "schemes", root);
    if (!schemes.is_array() || schemes.empty()) throw FormatError("schemes: must be a nonempty array");
    for (std::size_t i = 0; i < schemes.size(); ++i) {
        const JsonPath p = root.key("schemes").at(i);
        SchemeRun run{"", defaults};
        if (schemes[i].is_string()) {
            run.config.scheme = read_scheme(schemes[i], p);
        } else if (schemes[i].is_object()) {
            run.config.scheme = read_scheme(detail::require(schemes[i], "scheme", p), p.key("scheme"));
            if (schemes[i].contains("label")) run.label = detail::read_string(schemes[i]["label"], p.key("label"));
            apply_overrides(run.config, schemes[i], p, {"scheme", "label"});
        } else {
            throw FormatError(p.str() + ": expected a scheme name or an object");
        }
        if (run.label.empty()) run.label = std::string(to_string(run.config.scheme));
        if (run.label.find_first_of("/\\") != std::string::npos || run.label == "." || run.label == "..")
            throw FormatError(p.key("label").str() + ": not usable as a file name");
        for (const auto& other : s.schemes)
            if (other.label == run.label)
                throw FormatError(p.str() + ": duplicate label '" + run.label + "', set a distinct \"label\"");
        try {
            run.config.validate();
        } catch (const ConfigError& e) {
            throw FormatError(p.str() + ": " + e.what());
        }
        s.schemes.push_back(std::move(run));
    }

    if (doc.contains("output")) {
        std::filesystem::path o = detail::read_string(doc["output"], root.key("output"));
        s.output_dir = o.is_relative() && !base_dir.empty() ? base_dir / o : o;
    }
    if (doc.contains("trace_format")) {
        const std::string f = detail::read_string(doc["trace_format"], root.key("trace_format"));
        if (f == "csv")
            s.trace_format = TraceFormat::csv;
        else if (f == "json")
            s.trace_format = TraceFormat::json;
        else
            throw FormatError("trace_format: unknown format '" + f + "' (valid: csv, json)");
    }
    if (doc.contains("oracle")) s.run_oracle = detail::read_bool(doc["oracle"], root.key("oracle"));
    if (doc.contains("record_timing")) s.record_timing = detail::read_bool(doc["record_timing"], root.key("record_timing"));
    if (doc.contains("workers")) {
        s.workers = static_cast<int>(detail::read_integer(doc["workers"], root.key("workers")));
        if (s.workers < 1) throw FormatError("workers: must be a positive integer");
    }
    if (doc.contains("allow_divergence")) {
        const json& a = doc["allow_divergence"];
        if (!a.is_array()) throw FormatError("allow_divergence: expected an array of scheme names");
        for (std::size_t i = 0; i < a.size(); ++i) s.allow_divergence.insert(read_scheme(a[i], root.key("allow_divergence").at(i)));
    }
    return s;
}

Scenario parse_scenario(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    try {
        return parse_scenario_text(text, path.parent_path());
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

bool SchemeSummary::ok() const {
    if (!status) return false;
    return *status == Status::converged || (*status == Status::diverged && divergence_allowed);
}

int RunSummary::exit_code() const {
    for (const auto& s : schemes)
        if (!s.ok()) return exit_code::convergence_failure;
    return exit_code::success;
}

double relative_gap(const ObjectiveValue& objective, double oracle) {
    if (objective.infinite || !std::isfinite(objective.value)) return std::numeric_limits<double>::infinity();
    return std::abs(objective.value - oracle) / std::max(1.0, std::abs(oracle));
}

namespace {

json number_or_string(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

}  // namespace

std::string summary_to_string(const RunSummary& summary) {
    json doc = {{"format_version", kFormatVersion}, {"instance", summary.instance}};
    doc["oracle_objective"] = summary.oracle_objective ? number_or_string(*summary.oracle_objective) : json(nullptr);
    if (!summary.oracle_error.empty()) doc["oracle_error"] = summary.oracle_error;
    json schemes = json::array();
    for (const auto& s : summary.schemes) {
        json j = {{"label", s.label}, {"scheme", std::string(to_string(s.scheme))}};
        j["status"] = s.status ? json(std::string(to_string(*s.status))) : json("error");
        j["iterations"] = s.iterations;
        j["final_objective"] = s.final_objective.infinite ? json("inf") : number_or_string(s.final_objective.value);
        j["final_residual"] = number_or_string(s.final_residual);
        j["wall_ms"] = s.wall_ms;
        j["relative_gap"] = s.relative_gap ? number_or_string(*s.relative_gap) : json(nullptr);
        j["trace_file"] = s.trace_file;
        j["divergence_allowed"] = s.divergence_allowed;
        j["ok"] = s.ok();
        if (!s.error.empty()) j["error"] = s.error;
        schemes.push_back(std::move(j));
    }
    doc["schemes"] = std::move(schemes);
    doc["exit_code"] = summary.exit_code();
    return detail::dump(doc);
}

RunSummary run_scenario(const Scenario& scenario) {
    if (scenario.schemes.empty()) throw FormatError("schemes: must be a nonempty array");
    if (scenario.output_dir.empty()) throw FormatError("no output directory given");
    std::error_code ec;
    std::filesystem::create_directories(scenario.output_dir, ec);
    if (ec) throw IoError("cannot create output directory " + scenario.output_dir.string() + ": " + ec.message());

    GeneratedInstance inst;
    if (scenario.instance_file) {
        InstanceFile f = read_problem(*scenario.instance_file);
        inst.generator = "file";
        inst.problem = std::move(f.problem);
        if (f.initial_x) {
            IterateState x0 = IterateState::zeros(inst.problem);
            x0.x = std::move(*f.initial_x);
            inst.initial_point = std::move(x0);
        }
    } else {
        inst = make_instance(scenario.generator, scenario.generator_params, scenario.seed);
    }

    RunSummary summary;
    summary.instance = scenario.instance_file ? scenario.instance_file->string() : inst.generator;

    if (inst.truth.oracle_objective) {
        summary.oracle_objective = inst.truth.oracle_objective;
    } else if (scenario.run_oracle) {
        try {
            summary.oracle_objective = oracle_solve(inst.problem).objective_star;
            inst.truth.oracle_objective = summary.oracle_objective;
        } catch (const Error& e) {
            summary.oracle_error = e.what();
        }
    }

    std::optional<BlockVectors> x0_blocks;
    if (inst.initial_point) x0_blocks = inst.initial_point->x;
    write_problem(scenario.output_dir / "instance.json", inst.problem, x0_blocks);
    write_ground_truth(scenario.output_dir / "ground_truth.json", inst.generator, inst.truth);

    const IterateState x0 = inst.initial_point ? *inst.initial_point : IterateState::zeros(inst.problem);
    const char* ext = scenario.trace_format == TraceFormat::csv ? ".csv" : ".json";
    for (const auto& run : scenario.schemes) {
        SchemeSummary s;
        s.label = run.label;
        s.scheme = run.config.scheme;
        s.divergence_allowed = scenario.allow_divergence.count(run.config.scheme) > 0;
        SolverConfig cfg = run.config;
        cfg.parallel_workers = scenario.workers;
        cfg.record_timing = scenario.record_timing;
        const auto t0 = Clock::now();
        try {
            SolveReport report = solve(inst.problem, cfg, x0);
            s.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
            s.status = report.status;
            s.iterations = report.iterations;
            s.error = report.message;
            if (!report.trace.empty()) {
                s.final_objective = report.last().objective;
                s.final_residual = report.last().primal_residual_norm;
            }
            if (summary.oracle_objective) s.relative_gap = relative_gap(s.final_objective, *summary.oracle_objective);
            const std::string file = run.label + ext;
            emit_traces(report, scenario.trace_format, scenario.output_dir / file);
            s.trace_file = file;
        } catch (const IoError&) {
            throw;
        } catch (const Error& e) {
            s.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
            s.error = e.what();
        }
        summary.schemes.push_back(std::move(s));
    }
    write_text_file(scenario.output_dir / "summary.json", summary_to_string(summary));
    return summary;
}

}  // namespace mbadmm
