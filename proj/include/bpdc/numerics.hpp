#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace bpdc {

// Componentwise soft-thresholding: sign(c_i) * max(|c_i| - tau, 0).
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& c, double tau);

// Unique nonnegative root of t^3 + t = s for s >= 0. Closed form
// t = w - 1/(3w) with w = cbrt(s/2 + sqrt(s^2/4 + 1/27)), then Newton
// polish to 1e-12.
double cubic_plus_linear_root(double s);

struct PowerIterationResult {
    double eigenvalue = 0.0;
    Eigen::VectorXd eigenvector;
    int iterations = 0;
};

// Dominant eigenpair of a symmetric PSD matrix, power iteration with a
// seed-derived start vector. Throws NumericError when the Rayleigh
// quotient has not settled to rel_tol within max_iterations.
PowerIterationResult power_iteration(const Eigen::MatrixXd& matrix,
                                     std::uint64_t seed,
                                     double rel_tol = 1e-8,
                                     int max_iterations = 10000);

// Spectral norm of a symmetric PSD matrix.
double spectral_norm(const Eigen::MatrixXd& matrix, std::uint64_t seed,
                     double rel_tol = 1e-8);

} // namespace bpdc
