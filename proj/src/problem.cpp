#include "mbadmm/problem.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace mbadmm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSymmetryTol = 1e-10;

std::string describe(std::size_t block, const std::string& what) {
    std::ostringstream os;
    if (block > 0) os << "block " << block << ": ";
    os << what;
    return os.str();
}

}  // namespace

DimensionMismatch::DimensionMismatch(std::size_t b, const std::string& what)
    : Error("dimension mismatch: " + describe(b, what)), block(b) {}

// ---------------------------------------------------------------------------
// LocalSet
// ---------------------------------------------------------------------------

LocalSet LocalSet::box(Vector lo, Vector hi) {
    LocalSet s{Kind::box, std::move(lo), std::move(hi)};
    if (s.lo.size() != s.hi.size())
        throw InvalidArgument("box bounds have different lengths");
    for (Eigen::Index j = 0; j < s.lo.size(); ++j) {
        if (std::isnan(s.lo[j]) || std::isnan(s.hi[j]) || s.lo[j] > s.hi[j])
            throw InvalidArgument("box bounds inverted at coordinate " + std::to_string(j));
    }
    return s;
}

Vector LocalSet::lower(Eigen::Index n) const {
    switch (kind) {
    case Kind::unbounded: return Vector::Constant(n, -kInf);
    case Kind::nonnegative: return Vector::Zero(n);
    case Kind::box: return lo;
    }
    return {};
}

Vector LocalSet::upper(Eigen::Index n) const {
    switch (kind) {
    case Kind::unbounded:
    case Kind::nonnegative: return Vector::Constant(n, kInf);
    case Kind::box: return hi;
    }
    return {};
}

bool LocalSet::contains(const Vector& x) const {
    switch (kind) {
    case Kind::unbounded: return true;
    case Kind::nonnegative: return (x.array() >= 0.0).all();
    case Kind::box: return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
    }
    return false;
}

void LocalSet::validate(Eigen::Index n) const {
    if (kind != Kind::box) return;
    if (lo.size() != n || hi.size() != n)
        throw InvalidArgument("box bounds have length " + std::to_string(lo.size()) +
                              ", expected " + std::to_string(n));
    for (Eigen::Index j = 0; j < n; ++j)
        if (!(lo[j] <= hi[j]))
            throw InvalidArgument("box bounds inverted at coordinate " + std::to_string(j));
}

// ---------------------------------------------------------------------------
// ObjectiveHandle
// ---------------------------------------------------------------------------

ObjectiveHandle ObjectiveHandle::quadratic(Matrix Q, Vector q, double offset) {
    return ObjectiveHandle(objective::Quadratic{std::move(Q), std::move(q), offset});
}

ObjectiveHandle ObjectiveHandle::l1(double beta, Vector weights) {
    if (!(beta >= 0.0)) throw InvalidArgument("l1 weight beta must be nonnegative");
    if ((weights.array() < 0.0).any())
        throw InvalidArgument("l1 per-coordinate weights must be nonnegative");
    return ObjectiveHandle(objective::L1{beta, std::move(weights)});
}

ObjectiveHandle ObjectiveHandle::indicator(LocalSet set) {
    return ObjectiveHandle(objective::Indicator{std::move(set)});
}

ObjectiveHandle ObjectiveHandle::sum(std::vector<ObjectiveHandle> terms) {
    return ObjectiveHandle(objective::SumOf{std::move(terms)});
}

void ObjectiveHandle::validate(Eigen::Index n) const {
    std::visit(
        [n](const auto& t) {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, objective::Quadratic>) {
                if (t.Q.rows() != n || t.Q.cols() != n || t.q.size() != n)
                    throw InvalidArgument("quadratic term dimensions do not match block size " +
                                          std::to_string(n));
                const double scale = 1.0 + t.Q.cwiseAbs().maxCoeff();
                if ((t.Q - t.Q.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale)
                    throw InvalidArgument("quadratic term Q is not symmetric");
            } else if constexpr (std::is_same_v<T, objective::L1>) {
                if (!(t.beta >= 0.0)) throw InvalidArgument("l1 weight beta must be nonnegative");
                if (t.weights.size() != 0 && t.weights.size() != n)
                    throw InvalidArgument("l1 weights do not match block size");
            } else if constexpr (std::is_same_v<T, objective::Indicator>) {
                t.set.validate(n);
            } else if constexpr (std::is_same_v<T, objective::SumOf>) {
                for (const auto& term : t.terms) term.validate(n);
            }
        },
        term_);
}

namespace {

void accumulate(const ObjectiveHandle& handle, SeparableForm& form) {
    std::visit(
        [&form](const auto& t) {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, objective::Quadratic>) {
                form.Q += t.Q;
                form.q += t.q;
                form.offset += t.offset;
                form.has_quadratic = true;
            } else if constexpr (std::is_same_v<T, objective::L1>) {
                if (t.weights.size() == 0)
                    form.l1.array() += t.beta;
                else
                    form.l1 += t.beta * t.weights;
                form.has_l1 = form.has_l1 || t.beta > 0.0;
            } else if constexpr (std::is_same_v<T, objective::Indicator>) {
                const auto n = form.lo.size();
                form.lo = form.lo.cwiseMax(t.set.lower(n));
                form.hi = form.hi.cwiseMin(t.set.upper(n));
            } else if constexpr (std::is_same_v<T, objective::SumOf>) {
                for (const auto& term : t.terms) accumulate(term, form);
            }
        },
        handle.term());
}

}  // namespace

SeparableForm flatten(const ObjectiveHandle& handle, const LocalSet& set, Eigen::Index n) {
    SeparableForm form;
    form.Q = Matrix::Zero(n, n);
    form.q = Vector::Zero(n);
    form.l1 = Vector::Zero(n);
    form.lo = set.lower(n);
    form.hi = set.upper(n);
    accumulate(handle, form);
    if ((form.lo.array() > form.hi.array()).any())
        throw InvalidArgument("objective indicator and local set have empty intersection");
    return form;
}

ObjectiveValue& ObjectiveValue::operator+=(const ObjectiveValue& other) {
    infinite = infinite || other.infinite;
    value = infinite ? 0.0 : value + other.value;
    return *this;
}

// ---------------------------------------------------------------------------
// ProblemSpec
// ---------------------------------------------------------------------------

Eigen::Index ProblemSpec::total_dim() const {
    Eigen::Index n = 0;
    for (const auto& b : blocks_) n += b.dim();
    return n;
}

ProblemSpec assemble_problem(std::vector<BlockSpec> blocks, Vector rhs) {
    if (blocks.empty()) throw EmptyBlocks();
    const auto m = rhs.size();
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const auto& b = blocks[i];
        if (b.coupling.rows() != m)
            throw DimensionMismatch(i + 1, "coupling matrix has " +
                                               std::to_string(b.coupling.rows()) +
                                               " rows, rhs has length " + std::to_string(m));
        if (b.coupling.cols() < 1)
            throw DimensionMismatch(i + 1, "block has no variables");
        try {
            b.local_set.validate(b.dim());
            b.objective.validate(b.dim());
            (void)flatten(b.objective, b.local_set, b.dim());
        } catch (const InvalidArgument& e) {
            throw InvalidArgument("block " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    ProblemSpec p;
    p.blocks_ = std::move(blocks);
    p.rhs_ = std::move(rhs);
    return p;
}

IterateState IterateState::zeros(const ProblemSpec& problem) {
    IterateState s;
    s.x.reserve(problem.num_blocks());
    for (const auto& b : problem.blocks()) s.x.push_back(Vector::Zero(b.dim()));
    s.lambda = Vector::Zero(problem.rows());
    return s;
}

void check_conformable(const ProblemSpec& problem, const BlockVectors& x) {
    if (x.size() != problem.num_blocks())
        throw DimensionMismatch(0, "expected " + std::to_string(problem.num_blocks()) +
                                       " block vectors, got " + std::to_string(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i].size() != problem.block(i).dim())
            throw DimensionMismatch(i + 1, "vector has length " + std::to_string(x[i].size()) +
                                               ", expected " +
                                               std::to_string(problem.block(i).dim()));
}

void check_conformable(const ProblemSpec& problem, const IterateState& state) {
    check_conformable(problem, state.x);
    if (state.lambda.size() != problem.rows())
        throw DimensionMismatch(0, "multiplier has length " + std::to_string(state.lambda.size()) +
                                       ", expected " + std::to_string(problem.rows()));
    if (state.z) {
        if (state.z->size() != problem.num_blocks())
            throw DimensionMismatch(0, "auxiliary z must have one entry per block");
        for (std::size_t i = 0; i < state.z->size(); ++i)
            if ((*state.z)[i].size() != problem.rows())
                throw DimensionMismatch(i + 1, "auxiliary z_i must have length m");
    }
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

Vector coupling_residual(const ProblemSpec& problem, const BlockVectors& x) {
    Vector r = Vector::Zero(problem.rows());
    for (std::size_t i = 0; i < problem.num_blocks(); ++i) r.noalias() += problem.block(i).coupling * x[i];
    r -= problem.rhs();
    return r;
}

ObjectiveValue eval_block_objective(const BlockSpec& block, const Vector& x) {
    const auto form = flatten(block.objective, block.local_set, block.dim());
    if ((x.array() < form.lo.array()).any() || (x.array() > form.hi.array()).any())
        return ObjectiveValue::inf();
    double v = form.offset;
    if (form.has_quadratic) v += 0.5 * x.dot(form.Q * x) + form.q.dot(x);
    if (form.has_l1) v += form.l1.dot(x.cwiseAbs());
    return {v, false};
}

ObjectiveValue eval_objective(const ProblemSpec& problem, const BlockVectors& x) {
    check_conformable(problem, x);
    ObjectiveValue total;
    for (std::size_t i = 0; i < problem.num_blocks(); ++i)
        total += eval_block_objective(problem.block(i), x[i]);
    return total;
}

ObjectiveValue eval_augmented_lagrangian(const ProblemSpec& problem, const IterateState& state,
                                         double rho) {
    if (!(rho > 0.0)) throw InvalidArgument("penalty rho must be positive");
    check_conformable(problem, state);
    ObjectiveValue value = eval_objective(problem, state.x);
    if (value.infinite) return value;
    const Vector r = coupling_residual(problem, state.x);
    value.value += -state.lambda.dot(r) + 0.5 * rho * r.squaredNorm();
    return value;
}

double max_block_distance(const BlockVectors& a, const BlockVectors& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, (a[i] - b[i]).norm());
    return d;
}

Diagnostics compute_diagnostics(const ProblemSpec& problem, const IterateState& prev,
                                const IterateState& curr, Clock::time_point t0) {
    check_conformable(problem, prev.x);
    check_conformable(problem, curr.x);
    Diagnostics d;
    d.objective = eval_objective(problem, curr.x);
    d.primal_residual_norm = coupling_residual(problem, curr.x).norm();
    d.iterate_change = max_block_distance(curr.x, prev.x);
    d.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    return d;
}

}  // namespace mbadmm
