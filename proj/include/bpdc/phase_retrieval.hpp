#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>

#include "bpdc/dc_problem.hpp"
#include "bpdc/solvers.hpp"

namespace bpdc::phase {

// Recover x from magnitude-squared measurements b_r ~ <a_r, x>^2:
//   min  1/4 sum_r (<a_r, x>^2 - b_r)^2 + theta ||x||_1
// split into the DC parts
//   f1(x) = 1/4 sum_r <a_r, x>^4 + 1/4 ||b||^2
//   f2(x) = 1/2 sum_r b_r <a_r, x>^2
struct PhaseRetrievalInstance {
    Eigen::MatrixXd sensing;      // m x d, rows a_r
    Eigen::VectorXd measurements; // b, entries >= 0
    Eigen::VectorXd ground_truth; // x_tilde
    double theta_reg = 0.0;
    std::uint64_t seed = 0;

    Eigen::Index m() const { return sensing.rows(); }
    Eigen::Index d() const { return sensing.cols(); }
};

// Entries of the sensing rows i.i.d. standard normal; the ground truth has
// ceil(sparsity * d) standard-normal entries on a uniformly drawn support;
// measurements are exact (noiseless). Fully determined by the seed.
PhaseRetrievalInstance generate_gaussian_instance(Eigen::Index m, Eigen::Index d,
                                                  double sparsity, double theta_reg,
                                                  std::uint64_t seed);

double f1_value(const PhaseRetrievalInstance& inst, const Eigen::VectorXd& x);
Eigen::VectorXd f1_gradient(const PhaseRetrievalInstance& inst, const Eigen::VectorXd& x);
double f2_value(const PhaseRetrievalInstance& inst, const Eigen::VectorXd& x);
Eigen::VectorXd f2_gradient(const PhaseRetrievalInstance& inst, const Eigen::VectorXd& x);

// 1/4 sum_r (<a_r, x>^2 - b_r)^2 + theta ||x||_1, evaluated in residual form
// (equal to f1 - f2 + g, without the cancellation).
double objective(const PhaseRetrievalInstance& inst, const Eigen::VectorXd& x);

// Smoothness constant for (f1 - f2, h) with h = 1/4 ||x||^4 + 1/2 ||x||^2:
//   sum_r (3 ||a_r||^4 + ||a_r||^2 |b_r|).
double l_bound_bpg(const PhaseRetrievalInstance& inst);

// Smoothness constant for (f1, h) with h = 1/4 ||x||^4:
//   3 || sum_r ||a_r||^2 a_r a_r^T ||   (spectral norm by power iteration).
double l_bound_dc_sum(const PhaseRetrievalInstance& inst);

// Gaussian-model constant 9 || sum_r a_r a_r^T || + delta; a valid
// smoothness constant only with high probability when m >~ d log d.
double l_bound_gaussian(const PhaseRetrievalInstance& inst, double delta = 0.0);

// Minimizer of  tau ||y||_1 + h(y) - <c, y>  for the quartic kernels.
// With s = soft_threshold(c, tau): zero when s = 0; otherwise the solution
// lies on the ray of s with radius t solving t^3 = ||s|| (quartic) or
// t^3 + t = ||s|| (quartic-quad).
Eigen::VectorXd closed_form_subproblem(const Eigen::VectorXd& c, double tau,
                                       KernelKind kind);

// Scaled leading eigenvector of (1/m) sum_r b_r a_r a_r^T; the scale is
// sqrt(d * sum(b) / sum ||a_r||^2). Sign fixed by making the entry of
// largest magnitude positive. All-zero measurements yield the zero vector.
Eigen::VectorXd spectral_initialization(const PhaseRetrievalInstance& inst);

// Gradient descent on the quartic residual with spectral initialization and
// the ramped step schedule mu_k = min(1 - exp(-k/330), 0.4), scaled by
// ||x0||^2. Requires theta_reg = 0. start overrides the spectral
// initialization when provided.
SolveResult run_wirtinger_flow(const PhaseRetrievalInstance& inst,
                               const SolverConfig& config,
                               const Eigen::VectorXd* start = nullptr);

// log10 |Psi(x_hat) - Psi(x_tilde)|; -inf when the gap is exactly zero.
double accuracy_metric(const PhaseRetrievalInstance& inst, const Eigen::VectorXd& x_hat);

// min over sign s in {+1, -1} of ||s x_hat - x_tilde|| / ||x_tilde||.
double relative_error(const PhaseRetrievalInstance& inst, const Eigen::VectorXd& x_hat);

// Binds the instance into a DC problem with the given kernel kind and
// smoothness constant; the subproblem solver is the closed form above.
DcProblem make_dc_problem(std::shared_ptr<const PhaseRetrievalInstance> inst,
                          KernelKind kind, double smoothness);

// Flat text format for cross-language replay: header line "m,d,theta,seed",
// then the sensing rows, the measurements, and the ground truth, one CSV
// line each, shortest round-trip doubles.
void save_instance(const PhaseRetrievalInstance& inst, std::ostream& out);
PhaseRetrievalInstance load_instance(std::istream& in);
void save_instance_file(const PhaseRetrievalInstance& inst, const std::string& path);
PhaseRetrievalInstance load_instance_file(const std::string& path);

} // namespace bpdc::phase
