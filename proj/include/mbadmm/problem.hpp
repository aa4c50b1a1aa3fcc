#pragma once

#include <Eigen/Dense>

#include <chrono>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mbadmm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a block's dimensions disagree with the problem. `block` is the
/// 1-based index of the offending block, or 0 when no single block is at fault.
struct DimensionMismatch : Error {
    DimensionMismatch(std::size_t block, const std::string& what);
    std::size_t block;
};

struct EmptyBlocks : Error {
    EmptyBlocks() : Error("problem has no blocks") {}
};

struct InvalidArgument : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Local sets and objective handles
// ---------------------------------------------------------------------------

/// Descriptor of X_i. Box bounds may be infinite.
struct LocalSet {
    enum class Kind { unbounded, box, nonnegative };

    Kind kind = Kind::unbounded;
    Vector lo;
    Vector hi;

    static LocalSet unbounded() { return {}; }
    static LocalSet nonnegative() { return {Kind::nonnegative, {}, {}}; }
    static LocalSet box(Vector lo, Vector hi);

    /// Lower/upper bound vectors of length n (infinite where unconstrained).
    Vector lower(Eigen::Index n) const;
    Vector upper(Eigen::Index n) const;
    bool contains(const Vector& x) const;
    void validate(Eigen::Index n) const;
};

class ObjectiveHandle;

namespace objective {

struct Zero {};

/// 0.5 x'Qx + q'x + offset
struct Quadratic {
    Matrix Q;
    Vector q;
    double offset = 0.0;
};

/// beta * sum_j w_j |x_j|; empty weights means all ones.
struct L1 {
    double beta = 0.0;
    Vector weights;
};

struct Indicator {
    LocalSet set;
};

struct SumOf {
    std::vector<ObjectiveHandle> terms;
};

}  // namespace objective

/// Closed convex objective f_i built from a small algebra of terms.
class ObjectiveHandle {
public:
    using Term = std::variant<objective::Zero, objective::Quadratic, objective::L1,
                              objective::Indicator, objective::SumOf>;

    ObjectiveHandle() = default;
    ObjectiveHandle(Term term) : term_(std::move(term)) {}

    static ObjectiveHandle zero() { return {}; }
    static ObjectiveHandle quadratic(Matrix Q, Vector q, double offset = 0.0);
    static ObjectiveHandle l1(double beta, Vector weights = {});
    static ObjectiveHandle indicator(LocalSet set);
    static ObjectiveHandle sum(std::vector<ObjectiveHandle> terms);

    const Term& term() const { return term_; }

    /// Throws InvalidArgument unless every term is well formed for dimension n.
    void validate(Eigen::Index n) const;

private:
    Term term_ = objective::Zero{};
};

/// Flattened view of an objective restricted to a local set: one quadratic,
/// one weighted-l1 term and one box. Every handle reduces to this form.
struct SeparableForm {
    Matrix Q;        // n x n, zero when the handle has no quadratic part
    Vector q;
    double offset = 0.0;
    Vector l1;       // per-coordinate weight, beta * w_j
    Vector lo;
    Vector hi;
    bool has_quadratic = false;
    bool has_l1 = false;
};

SeparableForm flatten(const ObjectiveHandle& handle, const LocalSet& set, Eigen::Index n);

/// Objective value with an explicit flag for +infinity (indicator violated).
struct ObjectiveValue {
    double value = 0.0;
    bool infinite = false;

    static ObjectiveValue inf() { return {0.0, true}; }
    ObjectiveValue& operator+=(const ObjectiveValue& other);
};

// ---------------------------------------------------------------------------
// Problem data
// ---------------------------------------------------------------------------

struct BlockSpec {
    ObjectiveHandle objective;
    Matrix coupling;  // A_i, m x n_i
    LocalSet local_set;

    Eigen::Index dim() const { return coupling.cols(); }
};

/// min sum_i f_i(x_i)  s.t.  sum_i A_i x_i = c,  x_i in X_i.
/// Immutable once assembled.
class ProblemSpec {
public:
    const std::vector<BlockSpec>& blocks() const { return blocks_; }
    const BlockSpec& block(std::size_t i) const { return blocks_[i]; }
    const Vector& rhs() const { return rhs_; }
    std::size_t num_blocks() const { return blocks_.size(); }
    Eigen::Index rows() const { return rhs_.size(); }
    Eigen::Index total_dim() const;

private:
    friend ProblemSpec assemble_problem(std::vector<BlockSpec> blocks, Vector rhs);
    std::vector<BlockSpec> blocks_;
    Vector rhs_;
};

ProblemSpec assemble_problem(std::vector<BlockSpec> blocks, Vector rhs);

using BlockVectors = std::vector<Vector>;

struct IterateState {
    BlockVectors x;
    Vector lambda;
    std::optional<BlockVectors> z;             // variable splitting only
    std::optional<BlockVectors> block_lambda;  // variable splitting only
    long k = 0;

    /// x = 0, lambda = 0.
    static IterateState zeros(const ProblemSpec& problem);
};

void check_conformable(const ProblemSpec& problem, const BlockVectors& x);
void check_conformable(const ProblemSpec& problem, const IterateState& state);

struct Diagnostics {
    ObjectiveValue objective;
    double primal_residual_norm = 0.0;
    double iterate_change = 0.0;
    double wall_ms = 0.0;
};

/// sum_i A_i x_i - c, accumulated left to right.
Vector coupling_residual(const ProblemSpec& problem, const BlockVectors& x);

ObjectiveValue eval_block_objective(const BlockSpec& block, const Vector& x);
ObjectiveValue eval_objective(const ProblemSpec& problem, const BlockVectors& x);

ObjectiveValue eval_augmented_lagrangian(const ProblemSpec& problem, const IterateState& state,
                                         double rho);

using Clock = std::chrono::steady_clock;

Diagnostics compute_diagnostics(const ProblemSpec& problem, const IterateState& prev,
                                const IterateState& curr, Clock::time_point t0);

/// max_i ||a_i - b_i||_2
double max_block_distance(const BlockVectors& a, const BlockVectors& b);

}  // namespace mbadmm
