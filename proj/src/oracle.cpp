// Centralized reference solver for the monolithic problem. Deliberately
// independent of the block subproblem machinery used by the schemes.

#include "mbadmm/applications.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace mbadmm {

namespace {

using Dense = Eigen::MatrixXd;

struct MonolithicQp {
    Dense Q;
    Vector q;
    Dense A;
    Vector b;
    Vector lo;
    Vector hi;
    Vector l1;
    std::vector<Eigen::Index> offsets;  // start of each block inside x
};

MonolithicQp assemble(const ProblemSpec& problem) {
    MonolithicQp qp;
    const auto n = problem.total_dim();
    const auto m = problem.rows();
    qp.Q = Dense::Zero(n, n);
    qp.q = Vector::Zero(n);
    qp.A = Dense::Zero(m, n);
    qp.b = problem.rhs();
    qp.lo.resize(n);
    qp.hi.resize(n);
    qp.l1.resize(n);
    Eigen::Index at = 0;
    for (const auto& block : problem.blocks()) {
        const auto ni = block.dim();
        const SeparableForm f = flatten(block.objective, block.local_set, ni);
        qp.offsets.push_back(at);
        qp.Q.block(at, at, ni, ni) = f.Q;
        qp.q.segment(at, ni) = f.q;
        qp.A.middleCols(at, ni) = block.coupling;
        qp.lo.segment(at, ni) = f.lo;
        qp.hi.segment(at, ni) = f.hi;
        qp.l1.segment(at, ni) = f.l1;
        at += ni;
    }
    return qp;
}

BlockVectors split(const ProblemSpec& problem, const MonolithicQp& qp, const Vector& x) {
    BlockVectors out;
    for (std::size_t i = 0; i < problem.num_blocks(); ++i)
        out.push_back(x.segment(qp.offsets[i], problem.block(i).dim()));
    return out;
}

struct IpmResult {
    Vector x;
    int iterations = 0;
    double residual = 0.0;
};

// Mehrotra predictor-corrector on
//   min 1/2 x'Qx + q'x  s.t.  Ax = b,  x_j >= lo_j (finite),  x_j <= hi_j (finite)
IpmResult interior_point(const Dense& Q, const Vector& q, const Dense& A, const Vector& b,
                         const Vector& lo, const Vector& hi) {
    constexpr double kFeasTol = 1e-11;
    constexpr double kGapTol = 1e-13;
    constexpr double kAcceptTol = 1e-9;
    constexpr int kMaxIter = 200;
    constexpr double kRegPrimal = 1e-12;
    constexpr double kRegDual = 1e-12;

    const auto n = Q.rows();
    const auto m = A.rows();
    std::vector<Eigen::Index> L, U;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (std::isfinite(lo[j])) L.push_back(j);
        if (std::isfinite(hi[j])) U.push_back(j);
    }
    const auto nl = static_cast<Eigen::Index>(L.size());
    const auto nu = static_cast<Eigen::Index>(U.size());
    const double count = static_cast<double>(nl + nu);

    Vector x(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const bool fl = std::isfinite(lo[j]), fh = std::isfinite(hi[j]);
        if (fl && fh) x[j] = 0.5 * (lo[j] + hi[j]);
        else if (fl) x[j] = lo[j] + 1.0;
        else if (fh) x[j] = hi[j] - 1.0;
        else x[j] = 0.0;
    }
    Vector y = Vector::Zero(m);
    Vector zl = Vector::Ones(nl), zu = Vector::Ones(nu);

    const double b_scale = 1.0 + (m > 0 ? b.lpNorm<Eigen::Infinity>() : 0.0);
    const double q_scale = 1.0 + (n > 0 ? q.lpNorm<Eigen::Infinity>() : 0.0);

    IpmResult res;
    double best = std::numeric_limits<double>::infinity();
    Vector best_x = x;

    for (int it = 0; it <= kMaxIter; ++it) {
        Vector sl(nl), su(nu);
        for (Eigen::Index a = 0; a < nl; ++a) sl[a] = x[L[a]] - lo[L[a]];
        for (Eigen::Index a = 0; a < nu; ++a) su[a] = hi[U[a]] - x[U[a]];

        Vector rd = Q * x + q - A.transpose() * y;
        for (Eigen::Index a = 0; a < nl; ++a) rd[L[a]] -= zl[a];
        for (Eigen::Index a = 0; a < nu; ++a) rd[U[a]] += zu[a];
        const Vector rp = A * x - b;
        const double mu = count > 0 ? (sl.dot(zl) + su.dot(zu)) / count : 0.0;

        const double pinf = m > 0 ? rp.lpNorm<Eigen::Infinity>() : 0.0;
        const double dinf = n > 0 ? rd.lpNorm<Eigen::Infinity>() : 0.0;
        const double merit = std::max({pinf / b_scale, dinf / q_scale, mu});
        if (merit < best) {
            best = merit;
            best_x = x;
            res.residual = std::max({pinf, dinf, mu});
        }
        res.iterations = it;
        if (pinf <= kFeasTol * b_scale && dinf <= kFeasTol * q_scale && mu <= kGapTol) {
            res.x = x;
            return res;
        }
        if (it == kMaxIter) break;

        Dense K = Dense::Zero(n + m, n + m);
        K.topLeftCorner(n, n) = Q;
        K.topLeftCorner(n, n).diagonal().array() += kRegPrimal;
        for (Eigen::Index a = 0; a < nl; ++a) K(L[a], L[a]) += zl[a] / sl[a];
        for (Eigen::Index a = 0; a < nu; ++a) K(U[a], U[a]) += zu[a] / su[a];
        K.topRightCorner(n, m) = -A.transpose();
        K.bottomLeftCorner(m, n) = A;
        K.bottomRightCorner(m, m).diagonal().setConstant(kRegDual);
        const Eigen::PartialPivLU<Dense> lu(K);

        struct Direction {
            Vector dx, dy, dzl, dzu;
        };
        auto solve_dir = [&](const Vector& rcl, const Vector& rcu) {
            Vector rhs(n + m);
            rhs.head(n) = -rd;
            for (Eigen::Index a = 0; a < nl; ++a) rhs[L[a]] -= rcl[a] / sl[a];
            for (Eigen::Index a = 0; a < nu; ++a) rhs[U[a]] += rcu[a] / su[a];
            rhs.tail(m) = -rp;
            const Vector sol = lu.solve(rhs);
            Direction d{sol.head(n), sol.tail(m), Vector(nl), Vector(nu)};
            for (Eigen::Index a = 0; a < nl; ++a) d.dzl[a] = (-rcl[a] - zl[a] * d.dx[L[a]]) / sl[a];
            for (Eigen::Index a = 0; a < nu; ++a) d.dzu[a] = (-rcu[a] + zu[a] * d.dx[U[a]]) / su[a];
            return d;
        };
        auto max_step = [&](const Direction& d) {
            double alpha = 1.0;
            for (Eigen::Index a = 0; a < nl; ++a) {
                if (d.dx[L[a]] < 0) alpha = std::min(alpha, -sl[a] / d.dx[L[a]]);
                if (d.dzl[a] < 0) alpha = std::min(alpha, -zl[a] / d.dzl[a]);
            }
            for (Eigen::Index a = 0; a < nu; ++a) {
                if (d.dx[U[a]] > 0) alpha = std::min(alpha, su[a] / d.dx[U[a]]);
                if (d.dzu[a] < 0) alpha = std::min(alpha, -zu[a] / d.dzu[a]);
            }
            return alpha;
        };

        const Vector rcl_aff = sl.cwiseProduct(zl);
        const Vector rcu_aff = su.cwiseProduct(zu);
        const Direction aff = solve_dir(rcl_aff, rcu_aff);

        Direction step = aff;
        if (count > 0) {
            const double a_aff = max_step(aff);
            double mu_aff = 0.0;
            for (Eigen::Index a = 0; a < nl; ++a)
                mu_aff += (sl[a] + a_aff * aff.dx[L[a]]) * (zl[a] + a_aff * aff.dzl[a]);
            for (Eigen::Index a = 0; a < nu; ++a)
                mu_aff += (su[a] - a_aff * aff.dx[U[a]]) * (zu[a] + a_aff * aff.dzu[a]);
            mu_aff /= count;
            const double sigma = std::pow(mu_aff / mu, 3);
            Vector rcl(nl), rcu(nu);
            for (Eigen::Index a = 0; a < nl; ++a)
                rcl[a] = sl[a] * zl[a] + aff.dx[L[a]] * aff.dzl[a] - sigma * mu;
            for (Eigen::Index a = 0; a < nu; ++a)
                rcu[a] = su[a] * zu[a] - aff.dx[U[a]] * aff.dzu[a] - sigma * mu;
            step = solve_dir(rcl, rcu);
        }
        const double alpha = count > 0 ? std::min(1.0, 0.995 * max_step(step)) : 1.0;
        x += alpha * step.dx;
        y += alpha * step.dy;
        zl += alpha * step.dzl;
        zu += alpha * step.dzu;
        if (!x.allFinite() || !y.allFinite()) break;
    }
    if (best <= kAcceptTol) {
        res.x = best_x;
        return res;
    }
    throw OracleFailure("interior point method stalled with relative residual " + std::to_string(best));
}

}  // namespace

OracleSolution oracle_solve(const ProblemSpec& problem) {
    const MonolithicQp qp = assemble(problem);
    const auto n = qp.Q.rows();
    const auto m = qp.A.rows();
    OracleSolution sol;

    const bool has_l1 = (qp.l1.array() > 0.0).any();
    const bool has_bounds = qp.lo.array().isFinite().any() || qp.hi.array().isFinite().any();

    Vector x;
    if (!has_l1 && !has_bounds) {
        Dense K = Dense::Zero(n + m, n + m);
        K.topLeftCorner(n, n) = qp.Q;
        K.topRightCorner(n, m) = qp.A.transpose();
        K.bottomLeftCorner(m, n) = qp.A;
        Vector rhs(n + m);
        rhs << -qp.q, qp.b;
        auto residual_of = [&](const Vector& s) {
            return s.allFinite() ? (K * s - rhs).lpNorm<Eigen::Infinity>()
                                 : std::numeric_limits<double>::infinity();
        };
        const double tol = 1e-9 * (1.0 + rhs.lpNorm<Eigen::Infinity>());
        Vector s = Eigen::PartialPivLU<Dense>(K).solve(rhs);
        if (!(residual_of(s) <= tol)) s = Eigen::CompleteOrthogonalDecomposition<Dense>(K).solve(rhs);
        const double r = residual_of(s);
        if (!(r <= tol))
            throw OracleFailure("KKT system has no solution (residual " + std::to_string(r) + ")");
        x = s.head(n);
        sol.direct_kkt = true;
        sol.solver_residual = r;
    } else {
        // split every l1 coordinate x_j = p_j - n_j, p, n >= 0
        std::vector<Eigen::Index> l1_idx;
        for (Eigen::Index j = 0; j < n; ++j)
            if (qp.l1[j] > 0.0) l1_idx.push_back(j);
        const auto k = static_cast<Eigen::Index>(l1_idx.size());
        const auto n_ext = n + 2 * k;
        const auto m_ext = m + k;
        Dense Q = Dense::Zero(n_ext, n_ext);
        Q.topLeftCorner(n, n) = qp.Q;
        Vector q = Vector::Zero(n_ext);
        q.head(n) = qp.q;
        Dense A = Dense::Zero(m_ext, n_ext);
        A.topLeftCorner(m, n) = qp.A;
        Vector b = Vector::Zero(m_ext);
        b.head(m) = qp.b;
        Vector lo = Vector::Zero(n_ext), hi = Vector::Constant(n_ext, std::numeric_limits<double>::infinity());
        lo.head(n) = qp.lo;
        hi.head(n) = qp.hi;
        for (Eigen::Index a = 0; a < k; ++a) {
            const auto j = l1_idx[a];
            q[n + a] = qp.l1[j];
            q[n + k + a] = qp.l1[j];
            A(m + a, j) = 1.0;
            A(m + a, n + a) = -1.0;
            A(m + a, n + k + a) = 1.0;
        }

        // eliminate fixed variables (lo == hi)
        std::vector<Eigen::Index> keep, fixed;
        for (Eigen::Index j = 0; j < n_ext; ++j) (lo[j] == hi[j] ? fixed : keep).push_back(j);
        Vector full = Vector::Zero(n_ext);
        for (auto j : fixed) full[j] = lo[j];
        const auto nk = static_cast<Eigen::Index>(keep.size());
        Dense Qr(nk, nk), Ar(m_ext, nk);
        Vector qr(nk), lor(nk), hir(nk);
        Vector br = b - A * full;
        const Vector shift = Q * full;
        for (Eigen::Index a = 0; a < nk; ++a) {
            const auto j = keep[a];
            for (Eigen::Index c = 0; c < nk; ++c) Qr(a, c) = Q(j, keep[c]);
            Ar.col(a) = A.col(j);
            qr[a] = q[j] + shift[j];
            lor[a] = lo[j];
            hir[a] = hi[j];
        }
        const IpmResult ipm = interior_point(Qr, qr, Ar, br, lor, hir);
        for (Eigen::Index a = 0; a < nk; ++a) full[keep[a]] = ipm.x[a];
        x = full.head(n).cwiseMax(qp.lo).cwiseMin(qp.hi);
        sol.iterations = ipm.iterations;
        sol.solver_residual = ipm.residual;
    }

    sol.x_star = split(problem, qp, x);
    const ObjectiveValue obj = eval_objective(problem, sol.x_star);
    if (obj.infinite) throw OracleFailure("oracle point violates a local set");
    sol.objective_star = obj.value;
    return sol;
}

}  // namespace mbadmm
