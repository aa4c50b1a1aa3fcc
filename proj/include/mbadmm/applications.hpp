#pragma once

#include "mbadmm/problem.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mbadmm {

/// Generator parameters that cannot produce a valid instance.
struct GeneratorError : Error {
    using Error::Error;
};

struct OracleFailure : Error {
    using Error::Error;
};

/// Known answer attached to a generated instance.
struct GroundTruth {
    BlockVectors true_x;                                  // empty when unknown
    std::vector<std::vector<Eigen::Index>> attack_support;  // per block, empty when n/a
    std::optional<double> oracle_objective;
};

struct GeneratedInstance {
    std::string generator;
    ProblemSpec problem;
    GroundTruth truth;
    std::optional<IterateState> initial_point;
};

// ---------------------------------------------------------------------------
// Centralized reference solver
// ---------------------------------------------------------------------------

struct OracleSolution {
    BlockVectors x_star;
    double objective_star = 0.0;
    double solver_residual = 0.0;  // max of primal, dual and complementarity residuals
    bool direct_kkt = false;       // solved by one KKT factorization
    int iterations = 0;
};

/// Solves the monolithic problem. Pure quadratic / equality instances go through
/// a single KKT solve, everything else through a dense primal-dual interior
/// point method (l1 terms split into nonnegative parts). Shares no code with
/// the iteration schemes.
OracleSolution oracle_solve(const ProblemSpec& problem);

// ---------------------------------------------------------------------------
// Distributed robust state estimation
// ---------------------------------------------------------------------------

struct StateEstimationOptions {
    Eigen::Index interior_states = 2;  // per area, not shared with anyone
    int measurement_redundancy = 3;    // measurements per state variable
    double noise_sigma = 0.01;         // relative to signal_scale
    double signal_scale = 1.0;
    /// Max attacked measurements; negative means a quarter of all measurements.
    int sparsity_budget = -1;
};

/// Pair of neighboring areas and the coordinates they share.
struct SharedLink {
    std::size_t area_a = 0;
    std::size_t area_b = 0;
    std::vector<Eigen::Index> index_in_a;  // positions inside x_a
    std::vector<Eigen::Index> index_in_b;  // positions inside x_b
};

struct StateEstInstance {
    std::size_t areas = 0;
    std::vector<std::vector<std::size_t>> neighbors;
    std::vector<SharedLink> links;
    BlockVectors measurements;
    std::vector<Matrix> jacobians;
    BlockVectors true_states;
    BlockVectors attacks;
    std::vector<std::vector<Eigen::Index>> attack_support;  // measurement indices per area
    double beta = 0.0;

    Eigen::Index state_dim(std::size_t area) const { return jacobians[area].cols(); }
};

/// Block i holds (x_i, o_i) with f_i = 1/2 ||m_i - J_i x_i - o_i||^2 + beta ||o_i||_1;
/// every shared coordinate adds one coupling row (+1 in area a, -1 in area b).
std::pair<StateEstInstance, ProblemSpec> gen_state_estimation(std::size_t areas,
                                                              Eigen::Index boundary_size,
                                                              std::size_t attack_cardinality,
                                                              double beta, std::uint64_t seed,
                                                              const StateEstimationOptions& options = {});

/// Same instance with a different l1 weight.
ProblemSpec state_estimation_problem(const StateEstInstance& inst, double beta);

/// Attack estimate o_i read off a solution, and its support (|o_j| > tol).
std::vector<std::vector<Eigen::Index>> estimated_attack_support(const StateEstInstance& inst,
                                                                const BlockVectors& x,
                                                                double tol = 1e-6);

// ---------------------------------------------------------------------------
// Dynamic network energy management
// ---------------------------------------------------------------------------

struct EnergyMgmtOptions {
    std::size_t storage_units = 1;
    bool curtailable_loads = false;
    double curtailment_penalty = 5.0;  // disutility per unit of unserved demand
    double demand_scale = 1.0;         // 0 gives all-zero loads
    double line_susceptance = 5.0;
};

struct EnergyDevice {
    enum class Kind { generator, load, storage, line };
    Kind kind = Kind::generator;
    std::vector<std::size_t> nets;  // one per terminal
    // generator: cost a p^2 + b p on [0, p_max]
    double a = 0.0, b = 0.0, p_max = 0.0;
    // load: demand per time step
    Vector demand;
    // storage: state of charge in [0, capacity], empty at t = 0
    double capacity = 0.0;
    // line: power b (theta_from - theta_to)
    double susceptance = 0.0;
};

struct EnergyMgmtInstance {
    std::size_t nets = 0;
    std::size_t horizon = 0;
    std::vector<EnergyDevice> devices;  // block i <-> devices[i]
    std::size_t power_rows = 0;         // net-balance rows come first
    std::size_t phase_rows = 0;         // then phase consistency and reference rows

    /// Power injected into each terminal's net, one T-vector per terminal.
    std::vector<Vector> terminal_power(std::size_t device, const Vector& x) const;
};

/// Devices are blocks. Net-balance rows force the terminal powers on every net
/// to sum to zero each period; phase rows force the terminal phases of every
/// net to agree (plus one reference phase per period).
std::pair<EnergyMgmtInstance, ProblemSpec> gen_energy_management(std::size_t generators,
                                                                 std::size_t loads,
                                                                 std::size_t nets,
                                                                 std::size_t horizon,
                                                                 std::uint64_t seed,
                                                                 const EnergyMgmtOptions& options = {});

// ---------------------------------------------------------------------------
// Security constrained DC optimal power flow
// ---------------------------------------------------------------------------

struct ScopfOptions {
    double ramp_limit = 0.1;  // Delta_c, same for every contingency
    /// Branch indices to take out, one per contingency. When empty the
    /// generator picks non-disconnecting branches itself.
    std::vector<std::size_t> outages;
};

struct Branch {
    std::size_t from = 0;
    std::size_t to = 0;
    double susceptance = 0.0;
    double limit = 0.0;
};

struct ScopfInstance {
    std::size_t buses = 0;
    std::vector<Branch> branches;
    std::vector<std::size_t> generator_bus;
    Vector cost_quadratic;  // f0 = sum a_g u_g^2 + b_g u_g
    Vector cost_linear;
    Vector u_max;
    Vector demand;  // per bus
    std::vector<std::size_t> outages;  // branch removed in contingency c = 1..C
    double ramp_limit = 0.0;

    std::size_t contingencies() const { return outages.size(); }
    std::size_t generators() const { return generator_bus.size(); }
    /// Branches in service for case c (0 = base case).
    std::vector<std::size_t> active_branches(std::size_t c) const;
    /// Block layout (u, theta for buses 1.., flows) of case c.
    Eigen::Index case_dim(std::size_t c) const;
    /// u^c read off the block vector of case c.
    Vector controls(const Vector& block_x) const;
};

/// Block c = 0..C holds (u^c, theta^c, flow^c); power balance and flow
/// definitions are rows of the coupling touching that block only. Blocks
/// C+1..2C are slacks s_c in [-Delta, Delta] with u0 - u^c + s_c = 0.
std::pair<ScopfInstance, ProblemSpec> gen_scopf_qp(std::size_t buses, std::size_t contingencies,
                                                   std::uint64_t seed,
                                                   const ScopfOptions& options = {});

// ---------------------------------------------------------------------------
// Synthetic instances
// ---------------------------------------------------------------------------

struct RandomQpOptions {
    Eigen::Index min_block_dim = 2;
    Eigen::Index max_block_dim = 5;
    Eigen::Index rows = 0;  // 0: max block dim + 2, kept below the total dimension
    double strong_convexity = 0.5;
};

/// Strongly convex quadratic blocks with dense Gaussian couplings of full
/// column rank, and a feasible right-hand side.
ProblemSpec gen_random_qp(std::size_t blocks, std::uint64_t seed, const RandomQpOptions& options = {});

/// f_i = 0, scalar blocks with columns (1,1,1), (1,1,2), (1,2,2) and c = 0.
/// Cyclic three-block ADMM is not convergent here; start from x = (1,1,1).
GeneratedInstance gen_gauss_seidel_stress();

/// Two strongly correlated blocks with f_i = 0 on which the Jacobi scheme blows up.
GeneratedInstance gen_jacobi_stress();

}  // namespace mbadmm
