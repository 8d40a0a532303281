#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bpdc/phase_retrieval.hpp"
#include "bpdc/solvers.hpp"

namespace bpdc {

enum class SolverId { Bpdca, Bpdcae, Bpg, Bpge, WirtingerFlow };
enum class LBoundKind { Bpg, DcSum, Gaussian, None };
enum class InitKind { Spectral, Zero, Random };

SolverId parse_solver_id(std::string_view name); // bpdca|bpdcae|bpg|bpge|wf
std::string solver_id_name(SolverId id);
LBoundKind parse_l_bound(std::string_view name); // bpg|dc-sum|gaussian
std::string l_bound_name(LBoundKind kind);

struct SolverChoice {
    SolverId solver = SolverId::Bpdca;
    LBoundKind bound = LBoundKind::Gaussian;
};

// Rejects inadmissible pairings: Wirtinger flow needs theta = 0, BPG-type
// solvers run with their own bound, DC solvers with any of the three.
void validate_choice(const SolverChoice& choice, double theta_reg);

double l_bound_for(const phase::PhaseRetrievalInstance& inst, LBoundKind kind,
                   double gaussian_delta);

// Quartic kernel for the DC solvers, quartic-quad for BPG-type ones.
KernelKind default_kernel(SolverId solver);

// Everything needed to run one solver on one instance. lambda is pinned to
// 1/L for the selected bound.
struct RunSpec {
    SolverChoice choice;
    std::optional<KernelKind> kernel; // default_kernel(solver) when unset
    double gaussian_delta = 0.0;
    int max_iterations = 50000;
    double termination_tol = 1e-6;
    double rho = 0.99;
    std::optional<int> fixed_restart_period = 200;
    bool monitor_auxiliary = false; // M = (1 + rho) / (2 lambda)
    InitKind init = InitKind::Spectral;
    double init_scale = 1.0; // multiplies the spectral start
    std::uint64_t init_seed = 0;
    bool record_trace = true;
};

SolveResult run_configured(
    const std::shared_ptr<const phase::PhaseRetrievalInstance>& inst,
    const RunSpec& spec);

struct ExperimentPlan {
    std::vector<std::pair<Eigen::Index, Eigen::Index>> cells; // (m, d)
    std::vector<SolverChoice> solvers;
    int instances_per_cell = 10;
    std::uint64_t seed_base = 1;
    int max_iterations = 50000;
    double termination_tol = 1e-6;
    double theta_reg = 1.0;
    double rho = 0.99;
    std::optional<int> fixed_restart_period = 200;
    double sparsity = 0.05;
    double gaussian_delta = 0.0;
    // Benchmark convention: start from the spectral estimate scaled by 1.5.
    // Scale 1.0 is the plain spectral start of the success experiment.
    double init_scale = 1.5;
};

struct RunRecord {
    SolverChoice choice;
    Eigen::Index m = 0;
    Eigen::Index d = 0;
    std::uint64_t seed = 0;
    int iterations = 0;
    double accuracy = 0.0;
    double rel_error = 0.0;
    TerminationReason reason = TerminationReason::MaxIterations;
    double wall_seconds = 0.0;
};

struct ExperimentRow {
    std::string solver;
    std::string bound;
    Eigen::Index m = 0;
    Eigen::Index d = 0;
    double mean_iterations = 0.0;
    double mean_wall_time_s = 0.0;
    double mean_accuracy = 0.0;
    int success_count = 0; // runs that terminated with "converged"
};

struct TableResult {
    std::vector<ExperimentRow> rows; // plan order: cells outer, solvers inner
    std::vector<RunRecord> runs;
};

// Per-instance seeds are seed_base + cell_index * instances_per_cell +
// instance_index; every solver in the plan runs on the same instances.
TableResult run_table(const ExperimentPlan& plan);

// Columns: solver,bound,m,d,mean_iterations,mean_wall_time_s,mean_accuracy,
// success_count. Deterministic except the wall-time column.
void write_table_csv(const TableResult& result, std::ostream& out);

struct SuccessProbPlan {
    Eigen::Index d = 128;
    std::vector<double> m_over_d = {2.0, 4.0, 6.0, 8.0};
    int trials = 20;
    int iter_cap = 2500;
    std::uint64_t seed_base = 1;
    std::vector<SolverId> solvers = {SolverId::Bpdcae, SolverId::WirtingerFlow};
    LBoundKind bpdcae_bound = LBoundKind::Gaussian;
    double rho = 0.99;
    std::optional<int> fixed_restart_period = 200;
    // The success protocol evaluates the error after a fixed-length run, so
    // the step tolerance is effectively disabled by default.
    double termination_tol = 1e-12;
    double sparsity = 0.05;
    double success_threshold = 1e-5; // relative error counted as success
    double gaussian_delta = 0.0;
};

struct SuccessProbRow {
    double m_over_d = 0.0;
    std::vector<double> rates; // one per plan solver
};

struct SuccessProbResult {
    std::vector<std::string> solver_names;
    std::vector<SuccessProbRow> rows;
    std::vector<RunRecord> runs;
};

// Regularizer-free protocol: theta = 0, spectral initialization, success
// when the sign-folded relative error drops below the threshold within
// iter_cap iterations.
SuccessProbResult run_success_prob(const SuccessProbPlan& plan);

void write_success_prob_csv(const SuccessProbResult& result, std::ostream& out);

} // namespace bpdc
