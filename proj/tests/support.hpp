#pragma once

// Helpers shared by unit and acceptance tests. Everything here is written
// independently of the solver engine.

#include "mbadmm/applications.hpp"
#include "mbadmm/solvers.hpp"

#include <Eigen/Dense>

#include <cstring>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace testsupport {

using mbadmm::BlockVectors;
using mbadmm::Matrix;
using mbadmm::ProblemSpec;
using mbadmm::Vector;

/// Concatenation of block vectors.
inline Vector stack(const BlockVectors& x) {
    Eigen::Index n = 0;
    for (const auto& v : x) n += v.size();
    Vector out(n);
    Eigen::Index off = 0;
    for (const auto& v : x) {
        out.segment(off, v.size()) = v;
        off += v.size();
    }
    return out;
}

inline BlockVectors split(const ProblemSpec& p, const Vector& x) {
    BlockVectors out;
    Eigen::Index off = 0;
    for (const auto& b : p.blocks()) {
        out.push_back(x.segment(off, b.dim()));
        off += b.dim();
    }
    return out;
}

inline Eigen::MatrixXd full_coupling(const ProblemSpec& p) {
    Eigen::MatrixXd A(p.rows(), p.total_dim());
    Eigen::Index off = 0;
    for (const auto& b : p.blocks()) {
        A.middleCols(off, b.dim()) = b.coupling;
        off += b.dim();
    }
    return A;
}

struct DenseQp {
    Eigen::MatrixXd Q;
    Vector q;
    double offset = 0.0;
};

/// Block-diagonal quadratic of a problem whose objectives are all plain quadratics.
inline DenseQp dense_quadratic(const ProblemSpec& p) {
    const auto n = p.total_dim();
    DenseQp out{Eigen::MatrixXd::Zero(n, n), Vector::Zero(n), 0.0};
    Eigen::Index off = 0;
    for (const auto& b : p.blocks()) {
        const auto* quad = std::get_if<mbadmm::objective::Quadratic>(&b.objective.term());
        if (quad) {
            out.Q.block(off, off, b.dim(), b.dim()) = quad->Q;
            out.q.segment(off, b.dim()) = quad->q;
            out.offset += quad->offset;
        }
        off += b.dim();
    }
    return out;
}

/// Minimizer of a strongly convex equality constrained QP from the KKT system,
/// solved with full pivoting LU.
inline BlockVectors kkt_solution(const ProblemSpec& p) {
    const DenseQp qp = dense_quadratic(p);
    const Eigen::MatrixXd A = full_coupling(p);
    const auto n = qp.Q.rows(), m = A.rows();
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + m, n + m);
    K.topLeftCorner(n, n) = qp.Q;
    K.topRightCorner(n, m) = A.transpose();
    K.bottomLeftCorner(m, n) = A;
    Vector rhs(n + m);
    rhs << -qp.q, p.rhs();
    const Vector sol = K.fullPivLu().solve(rhs);
    return split(p, sol.head(n));
}

inline double dense_objective(const ProblemSpec& p, const BlockVectors& x) {
    const DenseQp qp = dense_quadratic(p);
    const Vector v = stack(x);
    return 0.5 * v.dot(qp.Q * v) + qp.q.dot(v) + qp.offset;
}

inline bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

inline bool same_bits(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) return false;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (!same_bits(a[i], b[i])) return false;
    return true;
}

inline bool same_bits(const BlockVectors& a, const BlockVectors& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!same_bits(a[i], b[i])) return false;
    return true;
}

inline bool same_trace(const std::vector<mbadmm::TraceRecord>& a, const std::vector<mbadmm::TraceRecord>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto &r = a[i], &s = b[i];
        if (r.k != s.k || r.objective.infinite != s.objective.infinite) return false;
        if (!same_bits(r.objective.value, s.objective.value) ||
            !same_bits(r.primal_residual_norm, s.primal_residual_norm) ||
            !same_bits(r.iterate_change, s.iterate_change) || !same_bits(r.wall_ms, s.wall_ms))
            return false;
    }
    return true;
}

/// Quadratic blocks whose couplings live on disjoint row sets, so
/// A_i' A_j = 0 for i != j.
inline ProblemSpec disjoint_support_instance(std::size_t blocks, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    const Eigen::Index rows_per_block = 3, n = 2;
    const auto m = static_cast<Eigen::Index>(blocks) * rows_per_block;
    std::vector<mbadmm::BlockSpec> out;
    Vector c(m);
    for (Eigen::Index r = 0; r < m; ++r) c[r] = g(rng);
    for (std::size_t i = 0; i < blocks; ++i) {
        Matrix B(n, n);
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index k = 0; k < n; ++k) B(r, k) = g(rng);
        Matrix Q = B * B.transpose();
        Q.diagonal().array() += 0.5;
        Vector q(n);
        for (Eigen::Index k = 0; k < n; ++k) q[k] = g(rng);
        mbadmm::BlockSpec b;
        b.objective = mbadmm::ObjectiveHandle::quadratic(Q, q);
        b.coupling = Matrix::Zero(m, n);
        for (Eigen::Index r = 0; r < rows_per_block; ++r)
            for (Eigen::Index k = 0; k < n; ++k)
                b.coupling(static_cast<Eigen::Index>(i) * rows_per_block + r, k) = g(rng);
        out.push_back(std::move(b));
    }
    return mbadmm::assemble_problem(std::move(out), c);
}

/// Same, then every coupling rotated by one shared orthogonal matrix:
/// mutually orthogonal column spaces with overlapping row supports.
inline ProblemSpec rotated_orthogonal_instance(std::size_t blocks, std::uint64_t seed) {
    const ProblemSpec base = disjoint_support_instance(blocks, seed);
    std::mt19937_64 rng(seed + 1000);
    std::normal_distribution<double> g;
    Eigen::MatrixXd G(base.rows(), base.rows());
    for (Eigen::Index r = 0; r < G.rows(); ++r)
        for (Eigen::Index k = 0; k < G.cols(); ++k) G(r, k) = g(rng);
    const Eigen::MatrixXd U = Eigen::HouseholderQR<Eigen::MatrixXd>(G).householderQ();
    std::vector<mbadmm::BlockSpec> out;
    for (const auto& b : base.blocks()) {
        mbadmm::BlockSpec r = b;
        r.coupling = U * b.coupling;
        out.push_back(std::move(r));
    }
    return mbadmm::assemble_problem(std::move(out), U * base.rhs());
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("mbadmm_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testsupport
