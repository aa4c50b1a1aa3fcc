#include "mbadmm/solvers.hpp"

#include "mbadmm/prox.hpp"
#include "worker_pool.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace mbadmm {

// ---------------------------------------------------------------------------
// Names and configuration
// ---------------------------------------------------------------------------

namespace {

constexpr std::array<std::pair<Scheme, std::string_view>, 6> kSchemeNames{{
    {Scheme::two_block, "two_block"},
    {Scheme::gauss_seidel, "gauss_seidel"},
    {Scheme::jacobi, "jacobi"},
    {Scheme::variable_splitting, "variable_splitting"},
    {Scheme::gbs, "gbs"},
    {Scheme::prox_jacobi, "prox_jacobi"},
}};

}  // namespace

std::string_view to_string(Scheme scheme) {
    for (const auto& [s, name] : kSchemeNames)
        if (s == scheme) return name;
    return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
    for (const auto& [s, n] : kSchemeNames)
        if (n == name) return s;
    return std::nullopt;
}

const std::vector<Scheme>& all_schemes() {
    static const std::vector<Scheme> schemes = [] {
        std::vector<Scheme> v;
        for (const auto& entry : kSchemeNames) v.push_back(entry.first);
        return v;
    }();
    return schemes;
}

std::string_view to_string(Status status) {
    switch (status) {
    case Status::converged: return "converged";
    case Status::max_iter: return "max_iter";
    case Status::diverged: return "diverged";
    case Status::ill_posed: return "ill_posed";
    }
    return "unknown";
}

void SolverConfig::validate() const {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw ConfigError("rho must be a positive finite number");
    if (scheme == Scheme::gbs && !(alpha > 0.0 && alpha < 1.0))
        throw ConfigError("alpha must lie in (0,1) for gbs");
    if (scheme == Scheme::prox_jacobi && !(gamma > 0.0 && std::isfinite(gamma)))
        throw ConfigError("gamma must be positive for prox_jacobi");
    if (!(eps_abs > 0.0)) throw ConfigError("eps_abs must be positive");
    if (!(eps_rel > 0.0)) throw ConfigError("eps_rel must be positive");
    if (max_iter < 1) throw ConfigError("max_iter must be a positive integer");
    if (parallel_workers < 1) throw ConfigError("parallel_workers must be a positive integer");
    if (prox_policy.kind == ProxPolicy::Kind::custom && !prox_policy.custom)
        throw ConfigError("custom prox policy has no builder");
    if (prox_policy.kind == ProxPolicy::Kind::linearized && !(prox_policy.safety > 1.0))
        throw ConfigError("linearized prox policy needs a safety factor above 1");
}

std::vector<Matrix> build_prox_matrices(const ProblemSpec& problem, const ProxPolicy& policy,
                                        double rho) {
    const auto N = problem.num_blocks();
    std::vector<Matrix> out;
    out.reserve(N);
    for (std::size_t i = 0; i < N; ++i) {
        const Matrix& A = problem.block(i).coupling;
        const auto n = A.cols();
        switch (policy.kind) {
        case ProxPolicy::Kind::zero: out.push_back(Matrix::Zero(n, n)); break;
        case ProxPolicy::Kind::linearized: {
            const Matrix gram = A.transpose() * A;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Eigen::MatrixXd(gram),
                                                              Eigen::EigenvaluesOnly);
            const double sigma2 = std::max(0.0, eig.eigenvalues().maxCoeff());
            const double tau = policy.safety * rho * static_cast<double>(N) * sigma2;
            Matrix P = -rho * gram;
            P.diagonal().array() += tau;
            out.push_back(std::move(P));
            break;
        }
        case ProxPolicy::Kind::custom: {
            Matrix P = policy.custom(i, A, rho, N);
            if (P.rows() != n || P.cols() != n)
                throw ConfigError("prox policy returned a matrix of the wrong size for block " +
                                  std::to_string(i + 1));
            const double scale = 1.0 + P.cwiseAbs().maxCoeff();
            if ((P - P.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
                throw ConfigError("prox matrix for block " + std::to_string(i + 1) +
                                  " is not symmetric");
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Eigen::MatrixXd(P),
                                                              Eigen::EigenvaluesOnly);
            if (eig.eigenvalues().minCoeff() < -1e-10 * scale)
                throw ConfigError("prox matrix for block " + std::to_string(i + 1) +
                                  " is not positive semidefinite");
            out.push_back(std::move(P));
            break;
        }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Stopping rule
// ---------------------------------------------------------------------------

StopDecision stopping_and_divergence_check(std::span<const TraceRecord> trace,
                                           const SolverConfig& config, const StoppingScale& scale) {
    const TraceRecord& first = trace.front();
    const TraceRecord& last = trace.back();
    const double r = last.primal_residual_norm;
    if (!std::isfinite(r) || r > kDivergenceFactor * (1.0 + first.primal_residual_norm))
        return StopDecision::diverged;
    const bool primal_ok = r <= config.eps_abs * scale.sqrt_rows + config.eps_rel * scale.residual_scale;
    const bool change_ok = last.iterate_change <= config.eps_abs * scale.iterate_scale;
    if (primal_ok && change_ok) return StopDecision::converged;
    if (last.k >= config.max_iter) return StopDecision::max_iter;
    return StopDecision::proceed;
}

// ---------------------------------------------------------------------------
// GbsOperators
// ---------------------------------------------------------------------------

GbsOperators::GbsOperators(const ProblemSpec& problem, double rho) : problem_(&problem), rho_(rho) {
    for (std::size_t i = 1; i < problem.num_blocks(); ++i) {
        const Matrix& A = problem.block(i).coupling;
        const Eigen::MatrixXd gram = A.transpose() * A;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
        const double lo = eig.eigenvalues().minCoeff();
        const double hi = eig.eigenvalues().maxCoeff();
        if (!(lo > 0.0) || hi / lo >= kMaxCondition) {
            std::ostringstream os;
            os << "gbs requires A_i'A_i nonsingular for i >= 2; block " << i + 1
               << " has condition estimate " << (lo > 0.0 ? hi / lo : INFINITY);
            throw ConfigError(os.str());
        }
        gram_.emplace_back(gram);
    }
}

GbsVector GbsOperators::apply_H(const GbsVector& v) const {
    GbsVector out;
    for (std::size_t i = 1; i < problem_->num_blocks(); ++i) {
        const Matrix& A = problem_->block(i).coupling;
        out.x.push_back(rho_ * (A.transpose() * (A * v.x[i - 1])));
    }
    out.lambda = v.lambda / rho_;
    return out;
}

GbsVector GbsOperators::apply_Mt(const GbsVector& v) const {
    const auto N = problem_->num_blocks();
    GbsVector out;
    out.x.resize(N - 1);
    Vector tail = Vector::Zero(problem_->rows());
    for (std::size_t i = N; i-- > 1;) {
        const Matrix& A = problem_->block(i).coupling;
        tail += A * v.x[i - 1];
        out.x[i - 1] = rho_ * (A.transpose() * tail);
    }
    out.lambda = v.lambda / rho_;
    return out;
}

GbsVector GbsOperators::back_substitute(const GbsVector& diff, double alpha) const {
    const auto N = problem_->num_blocks();
    GbsVector dv;
    dv.x.resize(N - 1);
    dv.lambda = alpha * diff.lambda;
    Vector tail = Vector::Zero(problem_->rows());  // sum_{j>i} A_j dx_j
    for (std::size_t i = N; i-- > 1;) {
        const Matrix& A = problem_->block(i).coupling;
        const Vector coupling_term = gram_[i - 1].solve(Eigen::VectorXd(A.transpose() * tail));
        dv.x[i - 1] = alpha * diff.x[i - 1] - coupling_term;
        tail += A * dv.x[i - 1];
    }
    return dv;
}

// ---------------------------------------------------------------------------
// Iteration engine
// ---------------------------------------------------------------------------

namespace {

ObjectiveValue eval_form(const SeparableForm& f, const Vector& x) {
    if ((x.array() < f.lo.array()).any() || (x.array() > f.hi.array()).any())
        return ObjectiveValue::inf();
    double v = f.offset;
    if (f.has_quadratic) v += 0.5 * x.dot(f.Q * x) + f.q.dot(x);
    if (f.has_l1) v += f.l1.dot(x.cwiseAbs());
    return {v, false};
}

bool same_state(const IterateState& a, const IterateState& b) {
    for (std::size_t i = 0; i < a.x.size(); ++i)
        if (!(a.x[i].array() == b.x[i].array()).all()) return false;
    return (a.lambda.array() == b.lambda.array()).all();
}

struct StepResult {
    IterateState next;
    BlockVectors products;              // A_i x_i^{k+1}
    BlockVectors multiplier_residuals;
    double multiplier_step = 0.0;
    std::optional<GbsPrediction> prediction;
};

class Engine {
public:
    Engine(const ProblemSpec& problem, const SolverConfig& config, std::vector<Matrix> prox = {})
        : problem_(problem), config_(config), prox_(std::move(prox)), pool_(config.parallel_workers) {
        const auto N = problem.num_blocks();
        forms_.reserve(N);
        subs_.reserve(N);
        for (std::size_t i = 0; i < N; ++i) {
            const BlockSpec& b = problem.block(i);
            forms_.push_back(flatten(b.objective, b.local_set, b.dim()));
            Matrix K = config.rho * (b.coupling.transpose() * b.coupling);
            if (!prox_.empty()) K += prox_[i];
            subs_.emplace_back(b.objective, b.local_set, K);
        }
    }

    const ProblemSpec& problem() const { return problem_; }
    const SolverConfig& config() const { return config_; }
    detail::WorkerPool& pool() { return pool_; }

    Vector product(std::size_t i, const Vector& x) const { return problem_.block(i).coupling * x; }

    BlockVectors products(const BlockVectors& x) const {
        BlockVectors out;
        out.reserve(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) out.push_back(product(i, x[i]));
        return out;
    }

    /// sum_i Ax_i - c, left to right.
    Vector residual(const BlockVectors& Ax) const {
        Vector r = Vector::Zero(problem_.rows());
        for (const auto& v : Ax) r += v;
        r -= problem_.rhs();
        return r;
    }

    /// sum_{j != i} Ax_j - c, left to right.
    Vector others_offset(std::size_t i, const BlockVectors& Ax) const {
        Vector s = Vector::Zero(problem_.rows());
        for (std::size_t j = 0; j < Ax.size(); ++j)
            if (j != i) s += Ax[j];
        s -= problem_.rhs();
        return s;
    }

    /// argmin_x f_i(x) - lambda'(A_i x + offset) + rho/2 ||A_i x + offset||^2
    ///          (+ 1/2 ||x - x_prev||_{P_i}^2 when proximal matrices are set)
    Vector block_update(std::size_t i, const Vector& offset, const Vector& lambda,
                        const Vector& x_prev) const {
        const Matrix& A = problem_.block(i).coupling;
        const Vector weighted = config_.rho * offset - lambda;
        Vector linear = A.transpose() * weighted;
        if (!prox_.empty()) linear -= prox_[i] * x_prev;
        return subs_[i].solve(linear, &x_prev);
    }

    ObjectiveValue objective(const BlockVectors& x) const {
        ObjectiveValue total;
        for (std::size_t i = 0; i < x.size(); ++i) total += eval_form(forms_[i], x[i]);
        return total;
    }

    double wall_ms() const {
        if (!config_.record_timing) return 0.0;
        return std::chrono::duration<double, std::milli>(Clock::now() - t0_).count();
    }

    StoppingScale scale(const BlockVectors& x, const BlockVectors& Ax) const {
        StoppingScale s;
        s.sqrt_rows = std::sqrt(static_cast<double>(problem_.rows()));
        s.residual_scale = problem_.rhs().norm();
        double xmax = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            s.residual_scale = std::max(s.residual_scale, Ax[i].norm());
            xmax = std::max(xmax, x[i].norm());
        }
        s.iterate_scale = 1.0 + xmax;
        return s;
    }

    /// `objective_of` picks the point whose objective is traced; the
    /// residual is always that of the new iterate.
    template <class Step>
    SolveReport run(IterateState state, const IterationObserver& observer, Step&& step,
                    bool trace_prediction_objective = false) {
        t0_ = Clock::now();
        SolveReport report;
        {
            const BlockVectors Ax = products(state.x);
            TraceRecord rec;
            rec.k = 0;
            rec.objective = objective(state.x);
            rec.primal_residual_norm = residual(Ax).norm();
            rec.iterate_change = 0.0;
            rec.wall_ms = wall_ms();
            report.trace.push_back(rec);
            if (!std::isfinite(rec.primal_residual_norm)) {
                report.status = Status::diverged;
                report.final_state = std::move(state);
                report.message = "initial residual is not finite";
                return report;
            }
        }
        state.k = 0;
        for (long k = 1;; ++k) {
            StepResult s;
            try {
                s = step(state);
            } catch (const IllPosedSubproblem& e) {
                report.status = Status::ill_posed;
                report.message = e.what();
                report.iterations = k - 1;
                break;
            }
            s.next.k = k;
            TraceRecord rec;
            rec.k = k;
            rec.objective = trace_prediction_objective && s.prediction ? objective(s.prediction->x)
                                                                       : objective(s.next.x);
            rec.primal_residual_norm = residual(s.products).norm();
            rec.iterate_change = max_block_distance(s.next.x, state.x);
            rec.wall_ms = wall_ms();

            if (observer) {
                IterationEvent ev{k, state, s.next, s.multiplier_residuals, s.multiplier_step,
                                  s.prediction ? &*s.prediction : nullptr};
                observer(ev);
            }
            report.trace.push_back(rec);
            const StopDecision decision =
                stopping_and_divergence_check(report.trace, config_, scale(s.next.x, s.products));

            if (decision == StopDecision::converged && k == 1 && same_state(state, s.next)) {
                // the starting point is already a fixed point of the iteration
                report.trace.pop_back();
                report.status = Status::converged;
                report.iterations = 0;
                break;
            }
            state = std::move(s.next);
            if (decision == StopDecision::proceed) continue;
            report.iterations = k;
            report.status = decision == StopDecision::converged  ? Status::converged
                            : decision == StopDecision::diverged ? Status::diverged
                                                                 : Status::max_iter;
            break;
        }
        report.final_state = std::move(state);
        return report;
    }

private:
    const ProblemSpec& problem_;
    const SolverConfig& config_;
    std::vector<Matrix> prox_;
    std::vector<SeparableForm> forms_;
    std::vector<BlockSubproblem> subs_;
    detail::WorkerPool pool_;
    Clock::time_point t0_;
};

IterateState prepare_start(const ProblemSpec& problem, const SolverConfig& config,
                           const IterateState& x0) {
    config.validate();
    check_conformable(problem, x0);
    IterateState s = x0;
    s.k = 0;
    return s;
}

void require_blocks(const ProblemSpec& problem, Scheme scheme, std::size_t min_blocks,
                    bool exact = false) {
    const auto N = problem.num_blocks();
    if (exact ? N != min_blocks : N < min_blocks) {
        std::ostringstream os;
        os << to_string(scheme) << " requires " << (exact ? "exactly " : "at least ") << min_blocks
           << " blocks, problem has " << N;
        throw WrongScheme(os.str());
    }
}

SolverConfig with_scheme(const SolverConfig& config, Scheme scheme) {
    SolverConfig c = config;
    c.scheme = scheme;
    return c;
}

/// Sequential sweep over all blocks; Ax is updated in place.
BlockVectors gauss_seidel_sweep(const Engine& eng, const IterateState& cur, BlockVectors& Ax) {
    BlockVectors x = cur.x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = eng.block_update(i, eng.others_offset(i, Ax), cur.lambda, cur.x[i]);
        Ax[i] = eng.product(i, x[i]);
    }
    return x;
}

/// Jacobi and proximal Jacobi: every block reads the same k-level snapshot.
SolveReport run_jacobi_family(const ProblemSpec& problem, const SolverConfig& config,
                              IterateState start, const IterationObserver& observer,
                              std::vector<Matrix> prox, double multiplier_step) {
    Engine eng(problem, config, std::move(prox));
    const auto N = problem.num_blocks();
    return eng.run(std::move(start), observer, [&](const IterateState& cur) {
        const BlockVectors Ax = eng.products(cur.x);
        StepResult s;
        s.next.x.resize(N);
        s.products.resize(N);
        eng.pool().run(N, [&](std::size_t i) {
            s.next.x[i] = eng.block_update(i, eng.others_offset(i, Ax), cur.lambda, cur.x[i]);
            s.products[i] = eng.product(i, s.next.x[i]);
        });
        s.multiplier_residuals.push_back(eng.residual(s.products));
        s.multiplier_step = multiplier_step;
        s.next.lambda = cur.lambda - multiplier_step * s.multiplier_residuals.front();
        return s;
    });
}

}  // namespace

// ---------------------------------------------------------------------------
// Schemes
// ---------------------------------------------------------------------------

SolveReport solve_two_block(const ProblemSpec& problem, const SolverConfig& config,
                            const IterateState& x0, const IterationObserver& observer) {
    require_blocks(problem, Scheme::two_block, 2, true);
    const auto cfg = with_scheme(config, Scheme::two_block);
    Engine eng(problem, cfg);
    return eng.run(prepare_start(problem, cfg, x0), observer, [&](const IterateState& cur) {
        StepResult s;
        s.products = eng.products(cur.x);
        s.next.x.resize(2);
        // x1 against x2^k, then x2 against x1^{k+1}
        s.next.x[0] = eng.block_update(0, eng.others_offset(0, s.products), cur.lambda, cur.x[0]);
        s.products[0] = eng.product(0, s.next.x[0]);
        s.next.x[1] = eng.block_update(1, eng.others_offset(1, s.products), cur.lambda, cur.x[1]);
        s.products[1] = eng.product(1, s.next.x[1]);
        s.multiplier_residuals.push_back(eng.residual(s.products));
        s.multiplier_step = cfg.rho;
        s.next.lambda = cur.lambda - cfg.rho * s.multiplier_residuals.front();
        return s;
    });
}

SolveReport solve_gauss_seidel(const ProblemSpec& problem, const SolverConfig& config,
                               const IterateState& x0, const IterationObserver& observer) {
    require_blocks(problem, Scheme::gauss_seidel, 2);
    const auto cfg = with_scheme(config, Scheme::gauss_seidel);
    Engine eng(problem, cfg);
    return eng.run(prepare_start(problem, cfg, x0), observer, [&](const IterateState& cur) {
        StepResult s;
        s.products = eng.products(cur.x);
        s.next.x = gauss_seidel_sweep(eng, cur, s.products);
        s.multiplier_residuals.push_back(eng.residual(s.products));
        s.multiplier_step = cfg.rho;
        s.next.lambda = cur.lambda - cfg.rho * s.multiplier_residuals.front();
        return s;
    });
}

SolveReport solve_jacobi(const ProblemSpec& problem, const SolverConfig& config,
                         const IterateState& x0, const IterationObserver& observer) {
    require_blocks(problem, Scheme::jacobi, 2);
    const auto cfg = with_scheme(config, Scheme::jacobi);
    return run_jacobi_family(problem, cfg, prepare_start(problem, cfg, x0), observer, {}, cfg.rho);
}

SolveReport solve_prox_jacobi(const ProblemSpec& problem, const SolverConfig& config,
                              const IterateState& x0, const IterationObserver& observer) {
    require_blocks(problem, Scheme::prox_jacobi, 1);
    const auto cfg = with_scheme(config, Scheme::prox_jacobi);
    auto start = prepare_start(problem, cfg, x0);
    auto prox = build_prox_matrices(problem, cfg.prox_policy, cfg.rho);
    return run_jacobi_family(problem, cfg, std::move(start), observer, std::move(prox),
                             cfg.gamma * cfg.rho);
}

SolveReport solve_variable_splitting(const ProblemSpec& problem, const SolverConfig& config,
                                     const IterateState& x0, const IterationObserver& observer) {
    require_blocks(problem, Scheme::variable_splitting, 1);
    const auto cfg = with_scheme(config, Scheme::variable_splitting);
    IterateState start = prepare_start(problem, cfg, x0);
    const auto N = problem.num_blocks();
    const auto m = problem.rows();
    if (!start.z) start.z = BlockVectors(N, Vector::Zero(m));
    if (!start.block_lambda) start.block_lambda = BlockVectors(N, start.lambda);
    if (start.block_lambda->size() != N)
        throw DimensionMismatch(0, "block multipliers must have one entry per block");
    for (std::size_t i = 0; i < N; ++i)
        if ((*start.block_lambda)[i].size() != m)
            throw DimensionMismatch(i + 1, "block multiplier must have length m");

    const Vector share = problem.rhs() / static_cast<double>(N);  // c/N
    Engine eng(problem, cfg);
    return eng.run(std::move(start), observer, [&](const IterateState& cur) {
        const BlockVectors& z = *cur.z;
        const BlockVectors& lam = *cur.block_lambda;
        StepResult s;
        s.next.x.resize(N);
        s.products.resize(N);
        // x-group: A_i x_i + z_i^k = c/N
        eng.pool().run(N, [&](std::size_t i) {
            const Vector offset = z[i] - share;
            s.next.x[i] = eng.block_update(i, offset, lam[i], cur.x[i]);
            s.products[i] = eng.product(i, s.next.x[i]);
        });
        // z-group: projection of w_i = c/N - A_i x_i + lambda_i / rho onto sum z_i = 0
        BlockVectors w(N);
        eng.pool().run(N, [&](std::size_t i) { w[i] = share - s.products[i] + lam[i] / cfg.rho; });
        s.next.z = project_zero_sum(w);
        s.next.block_lambda = BlockVectors(N);
        s.multiplier_residuals.resize(N);
        eng.pool().run(N, [&](std::size_t i) {
            s.multiplier_residuals[i] = (s.products[i] + (*s.next.z)[i]) - share;
            (*s.next.block_lambda)[i] = lam[i] - cfg.rho * s.multiplier_residuals[i];
        });
        s.multiplier_step = cfg.rho;
        s.next.lambda = Vector::Zero(m);
        for (const auto& l : *s.next.block_lambda) s.next.lambda += l;
        s.next.lambda /= static_cast<double>(N);
        return s;
    });
}

SolveReport solve_gbs(const ProblemSpec& problem, const SolverConfig& config,
                      const IterateState& x0, const IterationObserver& observer) {
    require_blocks(problem, Scheme::gbs, 2);
    const auto cfg = with_scheme(config, Scheme::gbs);
    IterateState start = prepare_start(problem, cfg, x0);
    const GbsOperators ops(problem, cfg.rho);
    const auto N = problem.num_blocks();
    Engine eng(problem, cfg);
    return eng.run(
        std::move(start), observer,
        [&](const IterateState& cur) {
            // prediction: one forward Gauss-Seidel sweep, then lambda_tilde
            BlockVectors Ax = eng.products(cur.x);
            GbsPrediction pred;
            pred.x = gauss_seidel_sweep(eng, cur, Ax);
            const Vector r_tilde = eng.residual(Ax);
            pred.lambda = cur.lambda - cfg.rho * r_tilde;

            // correction: M'(v^{k+1} - v^k) = alpha H (v_tilde - v^k), backwards
            GbsVector diff;
            for (std::size_t i = 1; i < N; ++i) diff.x.push_back(pred.x[i] - cur.x[i]);
            diff.lambda = pred.lambda - cur.lambda;
            const GbsVector dv = ops.back_substitute(diff, cfg.alpha);

            StepResult s;
            s.next.x.resize(N);
            s.next.x[0] = pred.x[0];
            for (std::size_t i = 1; i < N; ++i) s.next.x[i] = cur.x[i] + dv.x[i - 1];
            s.multiplier_step = cfg.alpha * cfg.rho;
            s.next.lambda = cur.lambda - s.multiplier_step * r_tilde;
            s.multiplier_residuals.push_back(r_tilde);
            s.products = eng.products(s.next.x);
            s.prediction = std::move(pred);
            return s;
        },
        /*trace_prediction_objective=*/true);
}

SolveReport solve(const ProblemSpec& problem, const SolverConfig& config, const IterateState& x0,
                  const IterationObserver& observer) {
    switch (config.scheme) {
    case Scheme::two_block: return solve_two_block(problem, config, x0, observer);
    case Scheme::gauss_seidel: return solve_gauss_seidel(problem, config, x0, observer);
    case Scheme::jacobi: return solve_jacobi(problem, config, x0, observer);
    case Scheme::variable_splitting: return solve_variable_splitting(problem, config, x0, observer);
    case Scheme::gbs: return solve_gbs(problem, config, x0, observer);
    case Scheme::prox_jacobi: return solve_prox_jacobi(problem, config, x0, observer);
    }
    throw ConfigError("unknown scheme");
}

SolveReport solve(const ProblemSpec& problem, const SolverConfig& config) {
    return solve(problem, config, IterateState::zeros(problem));
}

}  // namespace mbadmm
