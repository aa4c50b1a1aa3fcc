#include "mbadmm/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mbadmm {

namespace {

constexpr double kPivotTol = 1e-12;

double soft(double v, double t) {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
}

bool is_diagonal(const Matrix& K) {
    for (Eigen::Index r = 0; r < K.rows(); ++r)
        for (Eigen::Index c = 0; c < K.cols(); ++c)
            if (r != c && K(r, c) != 0.0) return false;
    return true;
}

/// True when the LDLT pivots show a (numerically) singular matrix.
bool singular_factor(const Eigen::LDLT<Eigen::MatrixXd>& ldlt, double scale) {
    if (ldlt.info() != Eigen::Success) return true;
    const Vector d = ldlt.vectorD();
    return d.size() > 0 && d.minCoeff() <= kPivotTol * std::max(1.0, scale);
}

}  // namespace

Vector prox_l1(const Vector& v, double t) {
    if (!(t >= 0.0)) throw InvalidArgument("prox_l1: threshold must be nonnegative");
    Vector out(v.size());
    for (Eigen::Index j = 0; j < v.size(); ++j) out[j] = soft(v[j], t);
    return out;
}

Vector project_box(const Vector& v, const Vector& lo, const Vector& hi) {
    if (lo.size() != v.size() || hi.size() != v.size())
        throw DimensionMismatch(0, "project_box: bounds and point differ in length");
    for (Eigen::Index j = 0; j < v.size(); ++j)
        if (!(lo[j] <= hi[j]))
            throw InvalidArgument("project_box: inverted bounds at coordinate " + std::to_string(j));
    return v.cwiseMax(lo).cwiseMin(hi);
}

BlockVectors project_zero_sum(const BlockVectors& w) {
    if (w.empty()) return {};
    const auto m = w.front().size();
    for (std::size_t i = 1; i < w.size(); ++i)
        if (w[i].size() != m)
            throw DimensionMismatch(i + 1, "project_zero_sum: ragged input lengths");
    Vector mean = Vector::Zero(m);
    for (const auto& wi : w) mean += wi;
    mean /= static_cast<double>(w.size());
    BlockVectors z;
    z.reserve(w.size());
    for (const auto& wi : w) z.push_back(wi - mean);
    return z;
}

// ---------------------------------------------------------------------------
// BlockSubproblem
// ---------------------------------------------------------------------------

BlockSubproblem::BlockSubproblem(const ObjectiveHandle& handle, const LocalSet& set,
                                 const Matrix& quadratic_coeff, InnerSolverOptions options)
    : options_(options) {
    const auto n = quadratic_coeff.rows();
    if (quadratic_coeff.cols() != n)
        throw DimensionMismatch(0, "subproblem quadratic coefficient is not square");
    handle.validate(n);
    set.validate(n);
    form_ = flatten(handle, set, n);
    form_.Q += quadratic_coeff;
    form_.has_quadratic = true;

    const Matrix& K = form_.Q;
    const double scale = K.cwiseAbs().maxCoeff();

    // Coordinates with no bound and no l1 term: the quadratic alone must be
    // positive definite on them, otherwise the minimizer is not unique or
    // does not exist.
    std::vector<Eigen::Index> free;
    for (Eigen::Index j = 0; j < n; ++j)
        if (std::isinf(form_.lo[j]) && std::isinf(form_.hi[j]) && form_.l1[j] == 0.0)
            free.push_back(j);
    if (!free.empty()) {
        Eigen::MatrixXd Kff(free.size(), free.size());
        for (std::size_t a = 0; a < free.size(); ++a)
            for (std::size_t b = 0; b < free.size(); ++b) Kff(a, b) = K(free[a], free[b]);
        Eigen::LDLT<Eigen::MatrixXd> ldlt(Kff);
        if (singular_factor(ldlt, scale))
            throw IllPosedSubproblem(
                "block subproblem is singular on unconstrained coordinates (no strict convexity)");
        if (static_cast<Eigen::Index>(free.size()) == n) {
            method_ = Method::linear_solve;
            factor_ = std::move(ldlt);
            return;
        }
    }

    if (is_diagonal(K)) {
        method_ = Method::separable;
        return;
    }

    method_ = Method::proximal_gradient;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Eigen::MatrixXd(K), Eigen::EigenvaluesOnly);
    lipschitz_ = eig.eigenvalues().maxCoeff();
    strong_convexity_ = std::max(0.0, eig.eigenvalues().minCoeff());
    if (strong_convexity_ <= kPivotTol * lipschitz_) strong_convexity_ = 0.0;
}

Vector BlockSubproblem::solve(const Vector& linear_coeff, const Vector* warm_start) const {
    if (linear_coeff.size() != dim())
        throw DimensionMismatch(0, "subproblem linear coefficient has wrong length");
    Vector linear = linear_coeff + form_.q;
    switch (method_) {
    case Method::linear_solve: return factor_.solve(-linear);
    case Method::separable: return solve_separable(linear);
    case Method::proximal_gradient: return solve_proximal_gradient(linear, warm_start);
    }
    return {};
}

Vector BlockSubproblem::solve_separable(const Vector& linear) const {
    const auto n = dim();
    Vector u(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double k = form_.Q(j, j);
        const double l = linear[j];
        const double w = form_.l1[j];
        const double lo = form_.lo[j];
        const double hi = form_.hi[j];
        double v;
        if (k > 0.0) {
            v = soft(-l / k, w / k);
        } else if (l + w < 0.0) {
            if (std::isinf(hi)) throw IllPosedSubproblem("block subproblem is unbounded below");
            v = hi;
        } else if (l - w > 0.0) {
            if (std::isinf(lo)) throw IllPosedSubproblem("block subproblem is unbounded below");
            v = lo;
        } else {
            v = 0.0;
        }
        u[j] = std::clamp(v, lo, hi);
    }
    return u;
}

Vector BlockSubproblem::prox_step(const Vector& v, double step) const {
    Vector u(v.size());
    for (Eigen::Index j = 0; j < v.size(); ++j)
        u[j] = std::clamp(soft(v[j], step * form_.l1[j]), form_.lo[j], form_.hi[j]);
    return u;
}

// Accelerated proximal gradient. Constant momentum when the quadratic is
// strongly convex, otherwise FISTA with gradient-based restart.
Vector BlockSubproblem::solve_proximal_gradient(const Vector& linear, const Vector* warm_start) const {
    const auto n = dim();
    const Matrix& K = form_.Q;
    const double step = 1.0 / lipschitz_;
    const bool strongly_convex = strong_convexity_ > 0.0;
    const double momentum_sc = strongly_convex
                                   ? (std::sqrt(lipschitz_) - std::sqrt(strong_convexity_)) /
                                         (std::sqrt(lipschitz_) + std::sqrt(strong_convexity_))
                                   : 0.0;

    Vector u = warm_start && warm_start->size() == n ? *warm_start : Vector::Zero(n);
    u = u.cwiseMax(form_.lo).cwiseMin(form_.hi);
    Vector y = u;
    Vector u_next(n);
    double t = 1.0;
    for (int it = 0; it < options_.max_steps; ++it) {
        const Vector grad = K * y + linear;
        u_next = prox_step(y - step * grad, step);
        if (!u_next.allFinite()) throw IllPosedSubproblem("block subproblem iteration diverged");

        const double gap = (u_next - y).lpNorm<Eigen::Infinity>();
        if (gap <= options_.tolerance * (1.0 + u_next.lpNorm<Eigen::Infinity>())) return u_next;

        double beta;
        if (strongly_convex) {
            beta = momentum_sc;
        } else {
            const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            beta = (t - 1.0) / t_next;
            t = t_next;
        }
        // restart when the step opposes the momentum direction
        if ((y - u_next).dot(u_next - u) > 0.0) {
            beta = 0.0;
            t = 1.0;
        }
        y = u_next + beta * (u_next - u);
        u.swap(u_next);
    }
    return u;
}

Vector solve_block_subproblem(const SubproblemRequest& req) {
    const auto n = req.quadratic_coeff.rows();
    if (req.linear_coeff.size() != n)
        throw DimensionMismatch(0, "subproblem linear coefficient has wrong length");
    const Matrix& K = req.quadratic_coeff;
    if (K.cols() != n) throw DimensionMismatch(0, "subproblem quadratic coefficient is not square");
    const double scale = 1.0 + K.cwiseAbs().maxCoeff();
    if ((K - K.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw InvalidArgument("subproblem quadratic coefficient is not symmetric");
    BlockSubproblem sub(req.handle, req.local_set, K);
    return sub.solve(req.linear_coeff);
}

}  // namespace mbadmm
