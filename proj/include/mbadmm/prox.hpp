#pragma once

#include "mbadmm/problem.hpp"

#include <optional>

namespace mbadmm {

/// The block subproblem has no unique attainable minimizer.
struct IllPosedSubproblem : Error {
    using Error::Error;
};

/// Soft thresholding, the prox of t*||.||_1.
Vector prox_l1(const Vector& v, double t);

Vector project_box(const Vector& v, const Vector& lo, const Vector& hi);

/// Euclidean projection onto {z : sum_i z_i = 0}.
BlockVectors project_zero_sum(const BlockVectors& w);

/// min_u 0.5 u'Ku + l'u + handle(u)  s.t.  u in local_set
struct SubproblemRequest {
    ObjectiveHandle handle;
    Vector linear_coeff;
    Matrix quadratic_coeff;
    LocalSet local_set;
};

/// Inner iteration limits for the generic (non closed-form) path.
struct InnerSolverOptions {
    double tolerance = 1e-10;
    int max_steps = 10'000;
};

/// A block subproblem with fixed quadratic part, prepared once and solved for
/// many linear terms. Immutable after construction and safe to share.
class BlockSubproblem {
public:
    enum class Method { linear_solve, separable, proximal_gradient };

    BlockSubproblem(const ObjectiveHandle& handle, const LocalSet& set, const Matrix& quadratic_coeff,
                    InnerSolverOptions options = {});

    /// Minimizer for the given linear coefficient. `warm_start` seeds the
    /// iterative path only.
    Vector solve(const Vector& linear_coeff, const Vector* warm_start = nullptr) const;

    Method method() const { return method_; }
    Eigen::Index dim() const { return form_.q.size(); }
    const SeparableForm& form() const { return form_; }

private:
    Vector solve_separable(const Vector& linear) const;
    Vector solve_proximal_gradient(const Vector& linear, const Vector* warm_start) const;
    Vector prox_step(const Vector& v, double step) const;

    SeparableForm form_;  // handle folded together with quadratic_coeff
    InnerSolverOptions options_;
    Method method_ = Method::linear_solve;
    Eigen::LDLT<Eigen::MatrixXd> factor_;
    double lipschitz_ = 0.0;
    double strong_convexity_ = 0.0;
};

Vector solve_block_subproblem(const SubproblemRequest& request);

}  // namespace mbadmm
