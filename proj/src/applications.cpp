#include "mbadmm/applications.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <set>

namespace mbadmm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double normal() { return normal_(engine_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
    Matrix gaussian(Eigen::Index rows, Eigen::Index cols) {
        Matrix M(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r)
            for (Eigen::Index c = 0; c < cols; ++c) M(r, c) = normal();
        return M;
    }
    Vector gaussian(Eigen::Index n) {
        Vector v(n);
        for (Eigen::Index j = 0; j < n; ++j) v[j] = normal();
        return v;
    }
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[index(i)]);
    }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

}  // namespace

// ---------------------------------------------------------------------------
// State estimation
// ---------------------------------------------------------------------------

ProblemSpec state_estimation_problem(const StateEstInstance& inst, double beta) {
    if (!(beta >= 0.0)) throw GeneratorError("beta must be nonnegative");
    Eigen::Index rows = 0;
    for (const auto& link : inst.links) rows += static_cast<Eigen::Index>(link.index_in_a.size());

    std::vector<BlockSpec> blocks;
    for (std::size_t i = 0; i < inst.areas; ++i) {
        const Matrix& J = inst.jacobians[i];
        const Vector& meas = inst.measurements[i];
        const auto n = J.cols();
        const auto mi = J.rows();
        Matrix Q(n + mi, n + mi);
        Q.topLeftCorner(n, n) = J.transpose() * J;
        Q.topRightCorner(n, mi) = J.transpose();
        Q.bottomLeftCorner(mi, n) = J;
        Q.bottomRightCorner(mi, mi).setIdentity();
        Vector q(n + mi);
        q.head(n) = -J.transpose() * meas;
        q.tail(mi) = -meas;
        Vector weights = Vector::Zero(n + mi);
        weights.tail(mi).setOnes();
        BlockSpec block;
        block.objective = ObjectiveHandle::sum(
            {ObjectiveHandle::quadratic(std::move(Q), std::move(q), 0.5 * meas.squaredNorm()),
             ObjectiveHandle::l1(beta, std::move(weights))});
        block.coupling = Matrix::Zero(rows, n + mi);
        blocks.push_back(std::move(block));
    }
    Eigen::Index r = 0;
    for (const auto& link : inst.links) {
        for (std::size_t s = 0; s < link.index_in_a.size(); ++s, ++r) {
            blocks[link.area_a].coupling(r, link.index_in_a[s]) = 1.0;
            blocks[link.area_b].coupling(r, link.index_in_b[s]) = -1.0;
        }
    }
    return assemble_problem(std::move(blocks), Vector::Zero(rows));
}

std::pair<StateEstInstance, ProblemSpec> gen_state_estimation(std::size_t areas,
                                                              Eigen::Index boundary_size,
                                                              std::size_t attack_cardinality,
                                                              double beta, std::uint64_t seed,
                                                              const StateEstimationOptions& opt) {
    if (areas < 2) throw GeneratorError("state estimation needs at least 2 areas");
    if (boundary_size < 1)
        throw GeneratorError("boundary sizes inconsistent with topology: neighboring areas must share "
                             "at least one state");
    if (opt.interior_states < 0 || opt.measurement_redundancy < 1)
        throw GeneratorError("invalid state estimation options");

    Rng rng(seed);
    StateEstInstance inst;
    inst.areas = areas;
    inst.beta = beta;
    inst.neighbors.resize(areas);

    std::vector<std::pair<std::size_t, std::size_t>> edges;
    if (areas == 2)
        edges.emplace_back(0, 1);
    else
        for (std::size_t i = 0; i < areas; ++i) edges.emplace_back(std::min(i, (i + 1) % areas), std::max(i, (i + 1) % areas));

    // layout of x_i: interior states, then one slice per incident edge
    std::vector<Eigen::Index> dim(areas, opt.interior_states);
    inst.links.resize(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
        auto [a, b] = edges[e];
        inst.neighbors[a].push_back(b);
        inst.neighbors[b].push_back(a);
        SharedLink& link = inst.links[e];
        link.area_a = a;
        link.area_b = b;
        for (Eigen::Index s = 0; s < boundary_size; ++s) {
            link.index_in_a.push_back(dim[a] + s);
            link.index_in_b.push_back(dim[b] + s);
        }
        dim[a] += boundary_size;
        dim[b] += boundary_size;
    }

    const double scale = opt.signal_scale;
    inst.true_states.resize(areas);
    for (std::size_t i = 0; i < areas; ++i) {
        inst.true_states[i] = Vector::Zero(dim[i]);
        for (Eigen::Index j = 0; j < opt.interior_states; ++j) inst.true_states[i][j] = scale * rng.normal();
    }
    for (const auto& link : inst.links) {
        for (std::size_t s = 0; s < link.index_in_a.size(); ++s) {
            const double v = scale * rng.normal();
            inst.true_states[link.area_a][link.index_in_a[s]] = v;
            inst.true_states[link.area_b][link.index_in_b[s]] = v;
        }
    }

    std::size_t total_meas = 0;
    for (std::size_t i = 0; i < areas; ++i) {
        const Eigen::Index mi = opt.measurement_redundancy * dim[i];
        inst.jacobians.push_back(rng.gaussian(mi, dim[i]));
        total_meas += static_cast<std::size_t>(mi);
    }
    const std::size_t budget =
        opt.sparsity_budget < 0 ? total_meas / 4 : static_cast<std::size_t>(opt.sparsity_budget);
    if (attack_cardinality > budget)
        throw GeneratorError("attack cardinality " + std::to_string(attack_cardinality) +
                             " exceeds sparsity budget " + std::to_string(budget));

    std::vector<std::size_t> order(total_meas);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    std::vector<std::size_t> attacked(order.begin(), order.begin() + attack_cardinality);
    std::sort(attacked.begin(), attacked.end());

    inst.attacks.resize(areas);
    inst.attack_support.resize(areas);
    std::size_t base = 0;
    for (std::size_t i = 0; i < areas; ++i) {
        const auto mi = inst.jacobians[i].rows();
        inst.attacks[i] = Vector::Zero(mi);
        for (auto g : attacked) {
            if (g < base || g >= base + static_cast<std::size_t>(mi)) continue;
            const auto j = static_cast<Eigen::Index>(g - base);
            const double sign = rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0;
            inst.attacks[i][j] = sign * scale * rng.uniform(1.0, 2.0);
            inst.attack_support[i].push_back(j);
        }
        base += static_cast<std::size_t>(mi);
    }
    for (std::size_t i = 0; i < areas; ++i) {
        const Vector noise = opt.noise_sigma * scale * rng.gaussian(inst.jacobians[i].rows());
        inst.measurements.push_back(inst.jacobians[i] * inst.true_states[i] + inst.attacks[i] + noise);
    }
    ProblemSpec problem = state_estimation_problem(inst, beta);
    return {std::move(inst), std::move(problem)};
}

std::vector<std::vector<Eigen::Index>> estimated_attack_support(const StateEstInstance& inst,
                                                                const BlockVectors& x, double tol) {
    std::vector<std::vector<Eigen::Index>> support(inst.areas);
    for (std::size_t i = 0; i < inst.areas; ++i) {
        const auto mi = inst.jacobians[i].rows();
        const Vector o = x[i].tail(mi);
        for (Eigen::Index j = 0; j < mi; ++j)
            if (std::abs(o[j]) > tol) support[i].push_back(j);
    }
    return support;
}

// ---------------------------------------------------------------------------
// Energy management
// ---------------------------------------------------------------------------

std::vector<Vector> EnergyMgmtInstance::terminal_power(std::size_t d, const Vector& x) const {
    const EnergyDevice& dev = devices[d];
    const auto T = static_cast<Eigen::Index>(horizon);
    switch (dev.kind) {
    case EnergyDevice::Kind::generator:
    case EnergyDevice::Kind::load: return {x};
    case EnergyDevice::Kind::storage: {
        Vector p(T);
        for (Eigen::Index t = 0; t < T; ++t) p[t] = (t > 0 ? x[t - 1] : 0.0) - x[t];
        return {p};
    }
    case EnergyDevice::Kind::line: {
        const Vector flow = dev.susceptance * (x.head(T) - x.tail(T));
        return {-flow, flow};
    }
    }
    return {};
}

std::pair<EnergyMgmtInstance, ProblemSpec> gen_energy_management(std::size_t generators,
                                                                 std::size_t loads, std::size_t nets,
                                                                 std::size_t horizon,
                                                                 std::uint64_t seed,
                                                                 const EnergyMgmtOptions& opt) {
    if (generators == 0 || loads == 0 || nets == 0 || horizon == 0)
        throw GeneratorError("energy management counts must be positive");
    Rng rng(seed);
    EnergyMgmtInstance inst;
    inst.nets = nets;
    inst.horizon = horizon;
    const auto T = static_cast<Eigen::Index>(horizon);

    std::vector<EnergyDevice> gens, lds, stores, lines;
    for (std::size_t g = 0; g < generators; ++g) {
        EnergyDevice d;
        d.kind = EnergyDevice::Kind::generator;
        d.nets = {g % nets};
        d.a = rng.uniform(0.5, 1.5);
        d.b = rng.uniform(0.0, 1.0);
        gens.push_back(d);
    }
    Vector total_demand = Vector::Zero(T);
    for (std::size_t l = 0; l < loads; ++l) {
        EnergyDevice d;
        d.kind = EnergyDevice::Kind::load;
        d.nets = {l % nets};
        d.demand.resize(T);
        for (Eigen::Index t = 0; t < T; ++t) d.demand[t] = opt.demand_scale * rng.uniform(0.5, 1.5);
        total_demand += d.demand;
        lds.push_back(d);
    }
    const double peak = total_demand.size() ? total_demand.maxCoeff() : 0.0;
    for (auto& g : gens) g.p_max = 1.5 * peak / static_cast<double>(generators) + 0.1;
    for (std::size_t s = 0; s < opt.storage_units; ++s) {
        EnergyDevice d;
        d.kind = EnergyDevice::Kind::storage;
        d.nets = {s % nets};
        d.capacity = rng.uniform(0.5, 1.0);
        stores.push_back(d);
    }
    if (nets >= 2) {
        std::vector<std::pair<std::size_t, std::size_t>> ends;
        if (nets == 2)
            ends = {{0, 1}, {0, 1}};
        else
            for (std::size_t n = 0; n < nets; ++n) ends.emplace_back(n, (n + 1) % nets);
        for (auto [a, b] : ends) {
            EnergyDevice d;
            d.kind = EnergyDevice::Kind::line;
            d.nets = {a, b};
            d.susceptance = opt.line_susceptance * rng.uniform(0.8, 1.2);
            lines.push_back(d);
        }
    }
    for (auto* group : {&gens, &lds, &stores, &lines})
        inst.devices.insert(inst.devices.end(), group->begin(), group->end());

    std::vector<std::size_t> terminals(nets, 0);
    for (const auto& d : inst.devices)
        for (auto n : d.nets) ++terminals[n];
    for (std::size_t n = 0; n < nets; ++n)
        if (terminals[n] < 2)
            throw GeneratorError("dangling net " + std::to_string(n) + ": fewer than two terminals");

    // phase terminals (device, side) per net
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> phase_terms(nets);
    for (std::size_t d = 0; d < inst.devices.size(); ++d)
        if (inst.devices[d].kind == EnergyDevice::Kind::line)
            for (std::size_t side = 0; side < 2; ++side)
                phase_terms[inst.devices[d].nets[side]].emplace_back(d, side);

    inst.power_rows = nets * horizon;
    std::size_t phase_rows = 0;
    for (const auto& terms : phase_terms)
        if (terms.size() > 1) phase_rows += (terms.size() - 1) * horizon;
    const bool has_lines = !lines.empty();
    if (has_lines) phase_rows += horizon;  // reference phase
    inst.phase_rows = phase_rows;
    const auto rows = static_cast<Eigen::Index>(inst.power_rows + inst.phase_rows);
    auto balance_row = [&](std::size_t net, Eigen::Index t) {
        return static_cast<Eigen::Index>(net) * T + t;
    };

    std::vector<BlockSpec> blocks;
    for (const auto& dev : inst.devices) {
        BlockSpec block;
        const auto n = dev.kind == EnergyDevice::Kind::line ? 2 * T : T;
        block.coupling = Matrix::Zero(rows, n);
        Matrix& A = block.coupling;
        switch (dev.kind) {
        case EnergyDevice::Kind::generator: {
            Matrix Q = Matrix::Zero(T, T);
            Q.diagonal().setConstant(2.0 * dev.a);
            block.objective = ObjectiveHandle::quadratic(std::move(Q), Vector::Constant(T, dev.b));
            block.local_set = LocalSet::box(Vector::Zero(T), Vector::Constant(T, dev.p_max));
            for (Eigen::Index t = 0; t < T; ++t) A(balance_row(dev.nets[0], t), t) = 1.0;
            break;
        }
        case EnergyDevice::Kind::load: {
            if (opt.curtailable_loads) {
                block.objective = ObjectiveHandle::quadratic(
                    Matrix::Zero(T, T), Vector::Constant(T, opt.curtailment_penalty),
                    opt.curtailment_penalty * dev.demand.sum());
                block.local_set = LocalSet::box(-dev.demand, Vector::Zero(T));
            } else {
                block.local_set = LocalSet::box(-dev.demand, -dev.demand);
            }
            for (Eigen::Index t = 0; t < T; ++t) A(balance_row(dev.nets[0], t), t) = 1.0;
            break;
        }
        case EnergyDevice::Kind::storage: {
            block.local_set = LocalSet::box(Vector::Zero(T), Vector::Constant(T, dev.capacity));
            for (Eigen::Index t = 0; t < T; ++t) {
                A(balance_row(dev.nets[0], t), t) = -1.0;
                if (t + 1 < T) A(balance_row(dev.nets[0], t + 1), t) = 1.0;
            }
            break;
        }
        case EnergyDevice::Kind::line: {
            const double b = dev.susceptance;
            for (Eigen::Index t = 0; t < T; ++t) {
                A(balance_row(dev.nets[0], t), t) = -b;
                A(balance_row(dev.nets[0], t), T + t) = b;
                A(balance_row(dev.nets[1], t), t) = b;
                A(balance_row(dev.nets[1], t), T + t) = -b;
            }
            break;
        }
        }
        blocks.push_back(std::move(block));
    }
    auto r = static_cast<Eigen::Index>(inst.power_rows);
    for (const auto& terms : phase_terms) {
        for (std::size_t k = 1; k < terms.size(); ++k) {
            for (Eigen::Index t = 0; t < T; ++t, ++r) {
                blocks[terms[k].first].coupling(r, static_cast<Eigen::Index>(terms[k].second) * T + t) += 1.0;
                blocks[terms[0].first].coupling(r, static_cast<Eigen::Index>(terms[0].second) * T + t) -= 1.0;
            }
        }
    }
    if (has_lines) {
        const std::size_t first_line = inst.devices.size() - lines.size();
        for (Eigen::Index t = 0; t < T; ++t, ++r) blocks[first_line].coupling(r, t) = 1.0;
    }
    ProblemSpec problem = assemble_problem(std::move(blocks), Vector::Zero(rows));
    return {std::move(inst), std::move(problem)};
}

// ---------------------------------------------------------------------------
// SCOPF
// ---------------------------------------------------------------------------

namespace {

bool connected(std::size_t buses, const std::vector<Branch>& branches,
               const std::vector<std::size_t>& active) {
    std::vector<std::vector<std::size_t>> adj(buses);
    for (auto l : active) {
        adj[branches[l].from].push_back(branches[l].to);
        adj[branches[l].to].push_back(branches[l].from);
    }
    std::vector<bool> seen(buses, false);
    std::queue<std::size_t> frontier;
    frontier.push(0);
    seen[0] = true;
    std::size_t count = 1;
    while (!frontier.empty()) {
        const auto u = frontier.front();
        frontier.pop();
        for (auto v : adj[u])
            if (!seen[v]) {
                seen[v] = true;
                ++count;
                frontier.push(v);
            }
    }
    return count == buses;
}

std::vector<std::size_t> all_but(std::size_t count, std::optional<std::size_t> skip) {
    std::vector<std::size_t> out;
    for (std::size_t l = 0; l < count; ++l)
        if (!skip || l != *skip) out.push_back(l);
    return out;
}

/// DC flows for the given injections with bus 0 as angle reference.
Vector dc_flows(const ScopfInstance& inst, const std::vector<std::size_t>& active, const Vector& injection) {
    const auto nb = static_cast<Eigen::Index>(inst.buses);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nb, nb);
    for (auto l : active) {
        const auto& br = inst.branches[l];
        const auto f = static_cast<Eigen::Index>(br.from), t = static_cast<Eigen::Index>(br.to);
        B(f, f) += br.susceptance;
        B(t, t) += br.susceptance;
        B(f, t) -= br.susceptance;
        B(t, f) -= br.susceptance;
    }
    Vector theta = Vector::Zero(nb);
    theta.tail(nb - 1) = B.bottomRightCorner(nb - 1, nb - 1).ldlt().solve(injection.tail(nb - 1));
    Vector flows(active.size());
    for (std::size_t k = 0; k < active.size(); ++k) {
        const auto& br = inst.branches[active[k]];
        flows[static_cast<Eigen::Index>(k)] =
            br.susceptance * (theta[static_cast<Eigen::Index>(br.from)] - theta[static_cast<Eigen::Index>(br.to)]);
    }
    return flows;
}

}  // namespace

std::vector<std::size_t> ScopfInstance::active_branches(std::size_t c) const {
    return all_but(branches.size(), c == 0 ? std::nullopt : std::optional<std::size_t>(outages[c - 1]));
}

Eigen::Index ScopfInstance::case_dim(std::size_t c) const {
    return static_cast<Eigen::Index>(generators() + (buses - 1) + active_branches(c).size());
}

Vector ScopfInstance::controls(const Vector& block_x) const {
    return block_x.head(static_cast<Eigen::Index>(generators()));
}

std::pair<ScopfInstance, ProblemSpec> gen_scopf_qp(std::size_t buses, std::size_t contingencies,
                                                   std::uint64_t seed, const ScopfOptions& opt) {
    if (buses < 3) throw GeneratorError("scopf needs at least 3 buses");
    if (!(opt.ramp_limit >= 0.0)) throw GeneratorError("ramp limit must be nonnegative");
    Rng rng(seed);
    ScopfInstance inst;
    inst.buses = buses;
    inst.ramp_limit = opt.ramp_limit;

    std::set<std::pair<std::size_t, std::size_t>> used;
    auto add_branch = [&](std::size_t a, std::size_t b) {
        inst.branches.push_back({a, b, rng.uniform(5.0, 15.0), 0.0});
        used.insert({std::min(a, b), std::max(a, b)});
    };
    for (std::size_t i = 0; i < buses; ++i) add_branch(i, (i + 1) % buses);
    const std::size_t chords = buses / 2;
    for (std::size_t attempt = 0, added = 0; added < chords && attempt < 50 * buses; ++attempt) {
        const auto a = rng.index(buses), b = rng.index(buses);
        if (a == b || used.count({std::min(a, b), std::max(a, b)})) continue;
        add_branch(a, b);
        ++added;
    }
    const auto L = inst.branches.size();

    const std::size_t G = std::max<std::size_t>(2, buses / 2);
    for (std::size_t g = 0; g < G; ++g) inst.generator_bus.push_back(g * buses / G);
    inst.cost_quadratic.resize(static_cast<Eigen::Index>(G));
    inst.cost_linear.resize(static_cast<Eigen::Index>(G));
    for (Eigen::Index g = 0; g < static_cast<Eigen::Index>(G); ++g) {
        inst.cost_quadratic[g] = rng.uniform(0.5, 1.5);
        inst.cost_linear[g] = rng.uniform(1.0, 3.0);
    }
    inst.demand.resize(static_cast<Eigen::Index>(buses));
    for (Eigen::Index b = 0; b < static_cast<Eigen::Index>(buses); ++b) inst.demand[b] = rng.uniform(0.5, 1.5);
    const double total = inst.demand.sum();
    inst.u_max.resize(static_cast<Eigen::Index>(G));
    for (Eigen::Index g = 0; g < static_cast<Eigen::Index>(G); ++g)
        inst.u_max[g] = 2.0 * total / static_cast<double>(G) * rng.uniform(0.9, 1.1);

    // contingencies
    if (!opt.outages.empty()) {
        if (opt.outages.size() != contingencies)
            throw GeneratorError("explicit outage list must have one entry per contingency");
        std::set<std::size_t> seen;
        for (auto l : opt.outages) {
            if (l >= L) throw GeneratorError("outage branch index out of range");
            if (!seen.insert(l).second) throw GeneratorError("duplicate outage branch");
            if (!connected(buses, inst.branches, all_but(L, l)))
                throw GeneratorError("disconnecting contingency rejected: branch " + std::to_string(l));
        }
        inst.outages = opt.outages;
    } else if (contingencies > 0) {
        if (contingencies > L - (buses - 1))
            throw GeneratorError("at most " + std::to_string(L - (buses - 1)) +
                                 " contingencies keep this network connected");
        std::vector<std::size_t> order(L);
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        for (auto l : order) {
            if (inst.outages.size() == contingencies) break;
            if (connected(buses, inst.branches, all_but(L, l))) inst.outages.push_back(l);
        }
        if (inst.outages.size() < contingencies)
            throw GeneratorError("not enough non-disconnecting branches for the requested contingencies");
    }
    const std::size_t C = inst.outages.size();

    // line limits from a proportional reference dispatch, feasible in every case
    const Vector u_ref = inst.u_max * (total / inst.u_max.sum());
    Vector injection = -inst.demand;
    for (std::size_t g = 0; g < G; ++g)
        injection[static_cast<Eigen::Index>(inst.generator_bus[g])] += u_ref[static_cast<Eigen::Index>(g)];
    Vector worst = Vector::Zero(static_cast<Eigen::Index>(L));
    for (std::size_t c = 0; c <= C; ++c) {
        const auto active = inst.active_branches(c);
        const Vector f = dc_flows(inst, active, injection);
        for (std::size_t k = 0; k < active.size(); ++k)
            worst[static_cast<Eigen::Index>(active[k])] =
                std::max(worst[static_cast<Eigen::Index>(active[k])], std::abs(f[static_cast<Eigen::Index>(k)]));
    }
    for (std::size_t l = 0; l < L; ++l) inst.branches[l].limit = 1.05 * worst[static_cast<Eigen::Index>(l)] + 0.05;

    // rows: per case (flow definitions, bus balance), then ramp coupling
    const auto nb = static_cast<Eigen::Index>(buses);
    const auto nG = static_cast<Eigen::Index>(G);
    std::vector<Eigen::Index> case_row(C + 1);
    Eigen::Index rows = 0;
    for (std::size_t c = 0; c <= C; ++c) {
        case_row[c] = rows;
        rows += static_cast<Eigen::Index>(inst.active_branches(c).size()) + nb;
    }
    const Eigen::Index ramp_row = rows;
    rows += static_cast<Eigen::Index>(C) * nG;

    Vector rhs = Vector::Zero(rows);
    std::vector<BlockSpec> blocks;
    for (std::size_t c = 0; c <= C; ++c) {
        const auto active = inst.active_branches(c);
        const auto nl = static_cast<Eigen::Index>(active.size());
        const Eigen::Index n = nG + (nb - 1) + nl;
        const Eigen::Index theta0 = nG, flow0 = nG + nb - 1;
        auto theta_col = [&](std::size_t bus) { return theta0 + static_cast<Eigen::Index>(bus) - 1; };

        BlockSpec block;
        block.coupling = Matrix::Zero(rows, n);
        Matrix& A = block.coupling;
        const Eigen::Index flow_rows = case_row[c], bal_rows = case_row[c] + nl;
        for (Eigen::Index k = 0; k < nl; ++k) {
            const auto& br = inst.branches[active[static_cast<std::size_t>(k)]];
            A(flow_rows + k, flow0 + k) = 1.0;
            if (br.from != 0) A(flow_rows + k, theta_col(br.from)) -= br.susceptance;
            if (br.to != 0) A(flow_rows + k, theta_col(br.to)) += br.susceptance;
            A(bal_rows + static_cast<Eigen::Index>(br.from), flow0 + k) -= 1.0;
            A(bal_rows + static_cast<Eigen::Index>(br.to), flow0 + k) += 1.0;
        }
        for (Eigen::Index g = 0; g < nG; ++g)
            A(bal_rows + static_cast<Eigen::Index>(inst.generator_bus[static_cast<std::size_t>(g)]), g) += 1.0;
        rhs.segment(bal_rows, nb) = inst.demand;

        Vector lo = Vector::Constant(n, -kInf), hi = Vector::Constant(n, kInf);
        lo.head(nG).setZero();
        hi.head(nG) = inst.u_max;
        for (Eigen::Index k = 0; k < nl; ++k) {
            const double F = inst.branches[active[static_cast<std::size_t>(k)]].limit;
            lo[flow0 + k] = -F;
            hi[flow0 + k] = F;
        }
        LocalSet box = LocalSet::box(lo, hi);
        if (c == 0) {
            Matrix Q = Matrix::Zero(n, n);
            Q.diagonal().head(nG) = 2.0 * inst.cost_quadratic;
            Vector q = Vector::Zero(n);
            q.head(nG) = inst.cost_linear;
            block.objective = ObjectiveHandle::quadratic(std::move(Q), std::move(q));
            block.local_set = std::move(box);
            for (std::size_t cc = 1; cc <= C; ++cc)
                for (Eigen::Index g = 0; g < nG; ++g)
                    A(ramp_row + static_cast<Eigen::Index>(cc - 1) * nG + g, g) = 1.0;
        } else {
            block.objective = ObjectiveHandle::indicator(std::move(box));
            for (Eigen::Index g = 0; g < nG; ++g)
                A(ramp_row + static_cast<Eigen::Index>(c - 1) * nG + g, g) = -1.0;
        }
        blocks.push_back(std::move(block));
    }
    for (std::size_t c = 1; c <= C; ++c) {
        BlockSpec slack;
        slack.coupling = Matrix::Zero(rows, nG);
        for (Eigen::Index g = 0; g < nG; ++g) slack.coupling(ramp_row + static_cast<Eigen::Index>(c - 1) * nG + g, g) = 1.0;
        slack.local_set = LocalSet::box(Vector::Constant(nG, -opt.ramp_limit), Vector::Constant(nG, opt.ramp_limit));
        blocks.push_back(std::move(slack));
    }
    ProblemSpec problem = assemble_problem(std::move(blocks), std::move(rhs));
    return {std::move(inst), std::move(problem)};
}

// ---------------------------------------------------------------------------
// Synthetic instances
// ---------------------------------------------------------------------------

ProblemSpec gen_random_qp(std::size_t blocks, std::uint64_t seed, const RandomQpOptions& opt) {
    if (blocks == 0) throw GeneratorError("random qp needs at least one block");
    if (opt.min_block_dim < 1 || opt.max_block_dim < opt.min_block_dim)
        throw GeneratorError("invalid block dimension range");
    Rng rng(seed);
    std::vector<Eigen::Index> dims(blocks);
    for (auto& n : dims)
        n = opt.min_block_dim +
            static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(opt.max_block_dim - opt.min_block_dim + 1)));
    const Eigen::Index largest = *std::max_element(dims.begin(), dims.end());
    const Eigen::Index total = std::accumulate(dims.begin(), dims.end(), Eigen::Index{0});
    // default: a few more rows than the largest block, but fewer than the
    // total dimension so the feasible set is not a single point
    const Eigen::Index m = opt.rows > 0 ? opt.rows : std::max(largest, std::min(opt.max_block_dim + 2, total - 1));
    if (m < largest) throw GeneratorError("rows must be at least the largest block dimension");
    std::vector<BlockSpec> out;
    Vector c = Vector::Zero(m);
    for (const auto n : dims) {
        const Matrix B = rng.gaussian(n, n);
        Matrix Q = B * B.transpose() / static_cast<double>(n);
        Q = 0.5 * (Q + Q.transpose()).eval();
        Q.diagonal().array() += opt.strong_convexity;
        BlockSpec block;
        block.objective = ObjectiveHandle::quadratic(std::move(Q), rng.gaussian(n));
        block.coupling = rng.gaussian(m, n);
        c += block.coupling * rng.gaussian(n);
        out.push_back(std::move(block));
    }
    return assemble_problem(std::move(out), std::move(c));
}

GeneratedInstance gen_gauss_seidel_stress() {
    std::vector<BlockSpec> blocks(3);
    const double cols[3][3] = {{1, 1, 1}, {1, 1, 2}, {1, 2, 2}};
    for (int i = 0; i < 3; ++i) {
        blocks[i].coupling = Matrix(3, 1);
        blocks[i].coupling << cols[i][0], cols[i][1], cols[i][2];
    }
    GeneratedInstance g{"gauss_seidel_stress", assemble_problem(std::move(blocks), Vector::Zero(3)), {}, {}};
    IterateState x0 = IterateState::zeros(g.problem);
    for (auto& xi : x0.x) xi.setOnes();
    g.initial_point = std::move(x0);
    g.truth.true_x = BlockVectors(3, Vector::Zero(1));
    g.truth.oracle_objective = 0.0;
    return g;
}

GeneratedInstance gen_jacobi_stress() {
    std::vector<BlockSpec> blocks(2);
    blocks[0].coupling = Matrix::Identity(2, 2);
    blocks[1].coupling = Matrix(2, 2);
    blocks[1].coupling << 1.0, 0.9, 0.9, 1.0;
    GeneratedInstance g{"jacobi_stress", assemble_problem(std::move(blocks), Vector::Zero(2)), {}, {}};
    IterateState x0 = IterateState::zeros(g.problem);
    x0.x[0] << 1.0, -0.5;
    x0.x[1] << 0.25, 1.0;
    g.initial_point = std::move(x0);
    g.truth.true_x = BlockVectors(2, Vector::Zero(2));
    g.truth.oracle_objective = 0.0;
    return g;
}

}  // namespace mbadmm
