#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bpdc/dc_problem.hpp"

namespace bpdc {

enum class TerminationReason { Converged, MaxIterations, NumericFailure };

// Lowercase wire names: "converged", "max-iterations", "numeric-failure".
std::string_view termination_reason_name(TerminationReason reason);

struct SolverConfig {
    // Step parameter; admissible when 0 < lambda * L < 1. lambda = 1/L
    // exactly is accepted and flagged, the descent bookkeeping then only
    // checks plain non-increase.
    double lambda = 0.0;
    int max_iterations = 50000;
    // Stop when ||x^k - x^{k-1}|| / max(1, ||x^k||) <= termination_tol.
    double termination_tol = 1e-6;
    bool extrapolation = false;
    double restart_rho = 0.99;                    // rho in [0, 1)
    std::optional<int> fixed_restart_period = 200; // K; nullopt disables
    std::optional<double> monitor_M;               // H_M diagnostics
    bool record_trace = true;
    std::uint64_t seed = 0;
};

struct TraceRow {
    int iter = 0;
    double psi = 0.0;
    double step_norm = 0.0;
    double bregman_gap = 0.0; // D_h(x^{k-1}, x^k)
    double beta = 0.0;
    bool restart = false;
    double h_m = 0.0; // NaN when unmonitored
    // D_h(x^k, x^{k-1}); used by the descent diagnostics, not part of the CSV
    double bregman_gap_reverse = 0.0;
};

struct SolveResult {
    Eigen::VectorXd final_iterate;
    int iterations_used = 0;
    TerminationReason termination_reason = TerminationReason::MaxIterations;
    std::vector<TraceRow> trace;
    double wall_time_seconds = 0.0;
    bool lambda_at_upper_limit = false;
    // configuration echo, used when post-processing traces
    double lambda = 0.0;
    double rho = 0.0;
    // Worst observed violation of the per-step inequality
    //   lambda Psi(x+) <= lambda Psi(x) - (1 - lambda L) D_h(x+, x);
    // tracked for the non-extrapolated variants, <= 0 means it always held.
    double max_descent_violation = 0.0;
    // Worst observed increase of H_M(x^k, x^{k-1}); tracked when monitored.
    double max_auxiliary_increase = 0.0;
    std::string message;
};

// Bregman proximal DC iteration: linearize f1 and f2 at x^k and move
// against D_h(., x^k)/lambda.
SolveResult run_bpdca(const DcProblem& p, const SolverConfig& config,
                      const Eigen::VectorXd& x0);

// BPDCA with Nesterov-type extrapolation y^k = x^k + beta_k (x^k - x^{k-1}),
//   beta_k = (theta_{k-1} - 1) / theta_k,
//   theta_{k+1} = (1 + sqrt(1 + 4 theta_k^2)) / 2,
// reset to beta = 0 (theta state back to 1) whenever
//   D_h(x^k, y^k) > rho * D_h(x^{k-1}, x^k)
// or every fixed_restart_period iterations. The f2 subgradient is taken at
// x^k, the f1 gradient at y^k.
SolveResult run_bpdcae(const DcProblem& p, const SolverConfig& config,
                       const Eigen::VectorXd& x0);

// Bregman proximal gradient on Psi = (f1 - f2) + g: both gradients taken at
// the current point. Expects the problem to be bound with a kernel and L
// valid for the pair (f1 - f2, h).
SolveResult run_bpg(const DcProblem& p, const SolverConfig& config,
                    const Eigen::VectorXd& x0);

// BPG stepped from the extrapolated anchor, with the same beta/theta
// schedule and restart tests as run_bpdcae; grad f2 is taken at y^k.
SolveResult run_bpge(const DcProblem& p, const SolverConfig& config,
                     const Eigen::VectorXd& x0);

// Dispatch on config.extrapolation.
SolveResult run_solver(const DcProblem& p, const SolverConfig& config,
                       const Eigen::VectorXd& x0);

// Auxiliary sequence H_M(x^k, x^{k-1}) = Psi(x^k) + M * D_h(x^{k-1}, x^k)
// recomputed from a recorded trace. Requires rho/lambda <= M <= 1/lambda
// (checked against the run's configuration).
std::vector<double> auxiliary_sequence(const SolveResult& result, double monitor_M);

// Columns: iter,psi,step_norm,bregman_gap,beta,restart,h_m
// (h_m left empty when the run was not monitored).
void write_trace_csv(const SolveResult& result, std::ostream& out);

} // namespace bpdc
