#pragma once

#include "mbadmm/problem.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mbadmm {

enum class Scheme { two_block, gauss_seidel, jacobi, variable_splitting, gbs, prox_jacobi };

std::string_view to_string(Scheme scheme);
std::optional<Scheme> parse_scheme(std::string_view name);
const std::vector<Scheme>& all_schemes();

/// Invalid solver configuration, or a violated scheme precondition.
struct ConfigError : Error {
    using Error::Error;
};

/// Scheme applied to a problem with the wrong number of blocks.
struct WrongScheme : Error {
    using Error::Error;
};

/// Rule producing the proximal matrices P_i of the proximal Jacobian scheme.
struct ProxPolicy {
    enum class Kind {
        linearized,  // P_i = tau_i I - rho A_i'A_i, tau_i = safety * rho * N * sigma_max(A_i)^2
        zero,        // P_i = 0
        custom
    };
    using Builder = std::function<Matrix(std::size_t block, const Matrix& coupling, double rho,
                                         std::size_t num_blocks)>;

    Kind kind = Kind::linearized;
    double safety = 1.01;
    Builder custom;

    static ProxPolicy linearized() { return {}; }
    static ProxPolicy zero() { return {Kind::zero, 1.01, {}}; }
    static ProxPolicy from(Builder b) { return {Kind::custom, 1.01, std::move(b)}; }
};

/// Proximal matrices for every block; throws ConfigError for a non-PSD P_i.
std::vector<Matrix> build_prox_matrices(const ProblemSpec& problem, const ProxPolicy& policy,
                                        double rho);

struct SolverConfig {
    Scheme scheme = Scheme::two_block;
    double rho = 1.0;
    double alpha = 0.9;  // gbs correction step, in (0,1)
    double gamma = 1.0;  // prox_jacobi multiplier damping
    ProxPolicy prox_policy;
    double eps_abs = 1e-8;
    double eps_rel = 1e-6;
    long max_iter = 100'000;
    int parallel_workers = 1;
    /// When false every wall_ms is written as 0 so traces are reproducible.
    bool record_timing = true;

    void validate() const;
};

enum class Status { converged, max_iter, diverged, ill_posed };
std::string_view to_string(Status status);

struct TraceRecord {
    long k = 0;
    ObjectiveValue objective;
    double primal_residual_norm = 0.0;
    double iterate_change = 0.0;
    double wall_ms = 0.0;
};

struct SolveReport {
    Status status = Status::max_iter;
    IterateState final_state;
    std::vector<TraceRecord> trace;
    long iterations = 0;
    std::string message;

    const TraceRecord& last() const { return trace.back(); }
};

// ---------------------------------------------------------------------------
// Stopping rule
// ---------------------------------------------------------------------------

enum class StopDecision { proceed, converged, diverged, max_iter };

/// Scale factors the stopping rule needs beyond the trace itself.
struct StoppingScale {
    double sqrt_rows = 1.0;       // sqrt(m)
    double residual_scale = 0.0;  // max(||c||, max_i ||A_i x_i||)
    double iterate_scale = 1.0;   // 1 + max_i ||x_i||
};

/// converged: residual <= eps_abs sqrt(m) + eps_rel scale and
///            change <= eps_abs (1 + max_i ||x_i||)
/// diverged:  residual non-finite or > 1e6 (1 + initial residual)
/// max_iter:  k >= cap
StopDecision stopping_and_divergence_check(std::span<const TraceRecord> trace,
                                           const SolverConfig& config, const StoppingScale& scale);

inline constexpr double kDivergenceFactor = 1e6;

// ---------------------------------------------------------------------------
// Gaussian back substitution operators
// ---------------------------------------------------------------------------

/// v = (x_2, ..., x_N, lambda) as used by the correction step.
struct GbsVector {
    BlockVectors x;  // blocks 2..N
    Vector lambda;
};

/// H = diag(rho A_2'A_2, ..., rho A_N'A_N, I/rho) and the lower block
/// triangular M with M(j,i) = rho A_j'A_i for j >= i >= 2 and I/rho last.
class GbsOperators {
public:
    /// Throws ConfigError when some A_i'A_i (i >= 2) is singular.
    GbsOperators(const ProblemSpec& problem, double rho);

    GbsVector apply_H(const GbsVector& v) const;
    GbsVector apply_Mt(const GbsVector& v) const;

    /// Solves M' dv = alpha H diff by backward block substitution, where
    /// diff = v_tilde - v.
    GbsVector back_substitute(const GbsVector& diff, double alpha) const;

    static constexpr double kMaxCondition = 1e12;

private:
    const ProblemSpec* problem_;
    double rho_;
    std::vector<Eigen::LDLT<Eigen::MatrixXd>> gram_;  // A_i'A_i, i = 2..N
};

// ---------------------------------------------------------------------------
// Iteration hooks
// ---------------------------------------------------------------------------

struct GbsPrediction {
    BlockVectors x;  // x_tilde for every block
    Vector lambda;   // lambda_tilde
};

/// Emitted after every iteration, before the stopping test.
struct IterationEvent {
    long k = 0;
    const IterateState& prev;
    const IterateState& curr;
    /// Residual(s) the multiplier step used: one vector, or one per block for
    /// variable splitting.
    std::span<const Vector> multiplier_residuals;
    /// lambda_new = lambda_old - multiplier_step * residual
    double multiplier_step = 0.0;
    const GbsPrediction* prediction = nullptr;
};

using IterationObserver = std::function<void(const IterationEvent&)>;

// ---------------------------------------------------------------------------
// Schemes
// ---------------------------------------------------------------------------

SolveReport solve_two_block(const ProblemSpec& problem, const SolverConfig& config,
                            const IterateState& x0, const IterationObserver& observer = {});
SolveReport solve_gauss_seidel(const ProblemSpec& problem, const SolverConfig& config,
                               const IterateState& x0, const IterationObserver& observer = {});
SolveReport solve_jacobi(const ProblemSpec& problem, const SolverConfig& config,
                         const IterateState& x0, const IterationObserver& observer = {});
SolveReport solve_variable_splitting(const ProblemSpec& problem, const SolverConfig& config,
                                     const IterateState& x0,
                                     const IterationObserver& observer = {});
SolveReport solve_gbs(const ProblemSpec& problem, const SolverConfig& config,
                      const IterateState& x0, const IterationObserver& observer = {});
SolveReport solve_prox_jacobi(const ProblemSpec& problem, const SolverConfig& config,
                              const IterateState& x0, const IterationObserver& observer = {});

/// Dispatches on config.scheme.
SolveReport solve(const ProblemSpec& problem, const SolverConfig& config, const IterateState& x0,
                  const IterationObserver& observer = {});
SolveReport solve(const ProblemSpec& problem, const SolverConfig& config);

}  // namespace mbadmm
