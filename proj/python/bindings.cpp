#include "mbadmm/applications.hpp"
#include "mbadmm/prox.hpp"
#include "mbadmm/scenario.hpp"
#include "mbadmm/serialize.hpp"
#include "mbadmm/solvers.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace mbadmm;

namespace {

py::dict trace_dict(const std::vector<TraceRecord>& trace) {
    const auto n = static_cast<Eigen::Index>(trace.size());
    Eigen::VectorXi k(n);
    Vector obj(n), res(n), change(n), wall(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = trace[static_cast<std::size_t>(i)];
        k[i] = static_cast<int>(r.k);
        obj[i] = r.objective.infinite ? std::numeric_limits<double>::infinity() : r.objective.value;
        res[i] = r.primal_residual_norm;
        change[i] = r.iterate_change;
        wall[i] = r.wall_ms;
    }
    py::dict d;
    d["k"] = py::cast(std::move(k));
    d["objective"] = py::cast(std::move(obj));
    d["primal_residual"] = py::cast(std::move(res));
    d["iterate_change"] = py::cast(std::move(change));
    d["wall_ms"] = py::cast(std::move(wall));
    return d;
}

IterateState start_from(const ProblemSpec& problem, const std::optional<BlockVectors>& x0,
                        const std::optional<Vector>& lambda0) {
    IterateState s = IterateState::zeros(problem);
    if (x0) s.x = *x0;
    if (lambda0) s.lambda = *lambda0;
    check_conformable(problem, s);
    return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Multi-block ADMM solvers";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DimensionMismatch>(m, "DimensionMismatch", PyExc_ValueError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<WrongScheme>(m, "WrongScheme", PyExc_ValueError);
    py::register_exception<GeneratorError>(m, "GeneratorError", PyExc_ValueError);
    py::register_exception<OracleFailure>(m, "OracleFailure", PyExc_RuntimeError);
    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<LocalSet>(m, "LocalSet")
        .def_static("unbounded", &LocalSet::unbounded)
        .def_static("nonnegative", &LocalSet::nonnegative)
        .def_static("box", &LocalSet::box, py::arg("lo"), py::arg("hi"))
        .def("contains", &LocalSet::contains)
        .def_property_readonly("kind", [](const LocalSet& s) {
            switch (s.kind) {
            case LocalSet::Kind::unbounded: return "unbounded";
            case LocalSet::Kind::nonnegative: return "nonnegative";
            case LocalSet::Kind::box: return "box";
            }
            return "";
        });

    py::class_<ObjectiveHandle>(m, "Objective")
        .def_static("zero", &ObjectiveHandle::zero)
        .def_static("quadratic", &ObjectiveHandle::quadratic, py::arg("Q"), py::arg("q"), py::arg("offset") = 0.0)
        .def_static("l1", &ObjectiveHandle::l1, py::arg("beta"), py::arg("weights") = Vector())
        .def_static("indicator", &ObjectiveHandle::indicator, py::arg("set"))
        .def_static("sum", &ObjectiveHandle::sum, py::arg("terms"));

    py::class_<BlockSpec>(m, "Block")
        .def(py::init([](const Matrix& A, std::optional<ObjectiveHandle> f, std::optional<LocalSet> set) {
                 return BlockSpec{f.value_or(ObjectiveHandle::zero()), A, set.value_or(LocalSet::unbounded())};
             }),
             py::arg("A"), py::arg("objective") = std::nullopt, py::arg("local_set") = std::nullopt)
        .def_readonly("A", &BlockSpec::coupling)
        .def_property_readonly("dim", &BlockSpec::dim);

    py::class_<ProblemSpec>(m, "Problem")
        .def(py::init(&assemble_problem), py::arg("blocks"), py::arg("c"))
        .def_property_readonly("num_blocks", &ProblemSpec::num_blocks)
        .def_property_readonly("rows", &ProblemSpec::rows)
        .def_property_readonly("c", &ProblemSpec::rhs)
        .def("block", &ProblemSpec::block, py::return_value_policy::reference_internal)
        .def("objective", [](const ProblemSpec& p, const BlockVectors& x) {
            const auto v = eval_objective(p, x);
            return v.infinite ? std::numeric_limits<double>::infinity() : v.value;
        })
        .def("residual", &coupling_residual)
        .def("to_json", [](const ProblemSpec& p) { return problem_to_string(p); })
        .def_static("from_json", [](const std::string& s) { return problem_from_string(s).problem; });

    m.def("prox_l1", &prox_l1, py::arg("v"), py::arg("t"));
    m.def("project_box", &project_box, py::arg("v"), py::arg("lo"), py::arg("hi"));
    m.def("project_zero_sum", &project_zero_sum, py::arg("w"));

    std::vector<std::string> names;
    for (auto s : all_schemes()) names.emplace_back(to_string(s));
    m.attr("SCHEMES") = names;
    m.attr("GENERATORS") = generator_names();

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init([](const std::string& scheme) {
                 SolverConfig c;
                 auto s = parse_scheme(scheme);
                 if (!s) throw ConfigError("unknown scheme '" + scheme + "'");
                 c.scheme = *s;
                 return c;
             }),
             py::arg("scheme") = "two_block")
        .def_property(
            "scheme", [](const SolverConfig& c) { return std::string(to_string(c.scheme)); },
            [](SolverConfig& c, const std::string& name) {
                auto s = parse_scheme(name);
                if (!s) throw ConfigError("unknown scheme '" + name + "'");
                c.scheme = *s;
            })
        .def_readwrite("rho", &SolverConfig::rho)
        .def_readwrite("alpha", &SolverConfig::alpha)
        .def_readwrite("gamma", &SolverConfig::gamma)
        .def_readwrite("eps_abs", &SolverConfig::eps_abs)
        .def_readwrite("eps_rel", &SolverConfig::eps_rel)
        .def_readwrite("max_iter", &SolverConfig::max_iter)
        .def_readwrite("parallel_workers", &SolverConfig::parallel_workers)
        .def_readwrite("record_timing", &SolverConfig::record_timing)
        .def_property(
            "prox_policy",
            [](const SolverConfig& c) {
                return c.prox_policy.kind == ProxPolicy::Kind::zero ? "zero"
                       : c.prox_policy.kind == ProxPolicy::Kind::linearized ? "linearized"
                                                                             : "custom";
            },
            [](SolverConfig& c, const std::string& v) {
                if (v == "zero")
                    c.prox_policy = ProxPolicy::zero();
                else if (v == "linearized")
                    c.prox_policy = ProxPolicy::linearized();
                else
                    throw ConfigError("prox_policy must be 'linearized' or 'zero'");
            })
        .def("validate", &SolverConfig::validate);

    py::class_<SolveReport>(m, "SolveReport")
        .def_property_readonly("status", [](const SolveReport& r) { return std::string(to_string(r.status)); })
        .def_readonly("iterations", &SolveReport::iterations)
        .def_readonly("message", &SolveReport::message)
        .def_property_readonly("x", [](const SolveReport& r) { return r.final_state.x; })
        .def_property_readonly("lam", [](const SolveReport& r) { return r.final_state.lambda; })
        .def_property_readonly("trace", [](const SolveReport& r) { return trace_dict(r.trace); })
        .def("trace_csv", [](const SolveReport& r) { return trace_to_csv(r.trace); });

    m.def(
        "solve",
        [](const ProblemSpec& p, const SolverConfig& c, std::optional<BlockVectors> x0, std::optional<Vector> lambda0) {
            const IterateState start = start_from(p, x0, lambda0);
            py::gil_scoped_release release;
            return solve(p, c, start);
        },
        py::arg("problem"), py::arg("config"), py::arg("x0") = std::nullopt, py::arg("lambda0") = std::nullopt);

    m.def("oracle_solve", [](const ProblemSpec& p) {
        const OracleSolution s = oracle_solve(p);
        py::dict d;
        d["x"] = s.x_star;
        d["objective"] = s.objective_star;
        d["solver_residual"] = s.solver_residual;
        d["direct_kkt"] = s.direct_kkt;
        return d;
    });

    m.def(
        "_make_instance",
        [](const std::string& name, const std::string& params_json, std::uint64_t seed) {
            GeneratedInstance g = make_instance(name, nlohmann::json::parse(params_json), seed);
            py::dict d;
            d["problem"] = g.problem;
            d["true_x"] = g.truth.true_x;
            d["attack_support"] = g.truth.attack_support;
            d["oracle_objective"] = g.truth.oracle_objective;
            d["x0"] = g.initial_point ? py::cast(g.initial_point->x) : py::none();
            return d;
        },
        py::arg("name"), py::arg("params_json"), py::arg("seed"));

    m.def(
        "_run_scenario",
        [](const std::string& path, const std::string& out, int workers) {
            Scenario s = parse_scenario(path);
            if (!out.empty()) s.output_dir = out;
            if (workers > 0) s.workers = workers;
            const RunSummary summary = run_scenario(s);
            return py::make_tuple(summary.exit_code(), summary_to_string(summary));
        },
        py::arg("path"), py::arg("out") = "", py::arg("workers") = 0);
}
