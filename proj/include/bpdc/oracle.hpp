#pragma once

#include <cstdint>
#include <functional>

#include "bpdc/dc_problem.hpp"

namespace bpdc::oracle {

struct OracleReport {
    double oracle_value = 0.0;
    double candidate_value = 0.0;
    double gap = 0.0; // candidate_value - oracle_value
    bool passed = false;
    long evaluations = 0;
};

// Objective of the reduced subproblem: tau ||y||_1 + h(y) - <c, y>.
double subproblem_objective(const Eigen::VectorXd& y, const Eigen::VectorXd& c,
                            double tau, KernelKind kind);

// Global minimizer of the reduced subproblem, found independently of the
// closed form: restrict to the ray of soft_threshold(c, tau) and run a
// golden-section search on the radius over [0, ||c|| + 1]. The reduced
// one-dimensional function is convex for every shipped kernel, so the
// search is globally valid. Desk scale only (d <= 50).
Eigen::VectorXd numeric_subproblem_oracle(const Eigen::VectorXd& c, double tau,
                                          KernelKind kind, double tol,
                                          long* evaluations = nullptr);

// Checks a candidate minimizer against the oracle; passed means the
// candidate did not beat the oracle by more than tol.
OracleReport compare_with_oracle(const Eigen::VectorXd& candidate,
                                 const Eigen::VectorXd& c, double tau,
                                 KernelKind kind, double tol);

// Cross-validation path with no ray reduction: cyclic coordinate descent
// on the full subproblem from `starts` random starts, best result wins.
Eigen::VectorXd coordinate_descent_subproblem(const Eigen::VectorXd& c, double tau,
                                              KernelKind kind, int starts,
                                              std::uint64_t seed, double tol);

// Central differences, one coordinate at a time.
Eigen::VectorXd finite_difference_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f_value,
    const Eigen::VectorXd& x, double step);

// Fallback subproblem solver for problems without a closed form: proximal
// gradient with backtracking on
//   lambda <grad f1(anchor) - xi, u> + D_h(u, anchor) + lambda g(u),
// run to first-order residual <= tol. Intended for tests and generic
// problems, not for benchmark timing paths.
Eigen::VectorXd generic_numeric_subproblem(const DcProblem& p,
                                           const Eigen::VectorXd& anchor,
                                           const Eigen::VectorXd& subgrad_f2,
                                           double lambda, double tol);

} // namespace bpdc::oracle
