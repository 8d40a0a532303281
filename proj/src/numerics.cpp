#include "bpdc/numerics.hpp"

#include <cmath>

#include "bpdc/errors.hpp"
#include "bpdc/rng.hpp"

namespace bpdc {

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& c, double tau) {
    if (tau < 0.0) throw ConfigError("soft_threshold: tau must be nonnegative");
    Eigen::VectorXd out(c.size());
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        const double magnitude = std::abs(c[i]) - tau;
        out[i] = magnitude > 0.0 ? std::copysign(magnitude, c[i]) : 0.0;
    }
    return out;
}

double cubic_plus_linear_root(double s) {
    if (s <= 0.0) return 0.0;
    const double disc = std::sqrt(0.25 * s * s + 1.0 / 27.0);
    const double w = std::cbrt(0.5 * s + disc);
    double t = w - 1.0 / (3.0 * w);
    for (int i = 0; i < 3; ++i) {
        const double residual = t * t * t + t - s;
        const double step = residual / (3.0 * t * t + 1.0);
        t -= step;
        if (std::abs(step) <= 1e-12 * std::max(1.0, std::abs(t))) break;
    }
    return t > 0.0 ? t : 0.0;
}

PowerIterationResult power_iteration(const Eigen::MatrixXd& matrix,
                                     std::uint64_t seed, double rel_tol,
                                     int max_iterations) {
    const Eigen::Index n = matrix.rows();
    if (n == 0 || matrix.cols() != n)
        throw ConfigError("power_iteration: matrix must be square and nonempty");

    Rng rng(mix_seed(seed, 0x70773269ULL));
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.gaussian();
    v.normalize();

    PowerIterationResult result;
    result.eigenvector = v;
    double eigenvalue = 0.0;
    for (int iter = 1; iter <= max_iterations; ++iter) {
        const Eigen::VectorXd w = matrix * v;
        const double rayleigh = v.dot(w);
        const double residual = (w - rayleigh * v).norm();
        const double norm_w = w.norm();
        if (norm_w == 0.0) {
            // start vector is annihilated; for a PSD matrix this means the
            // norm along every remaining direction is zero
            result.eigenvalue = 0.0;
            result.iterations = iter;
            return result;
        }
        v = w / norm_w;
        const bool settled = std::abs(rayleigh - eigenvalue) <=
                             rel_tol * std::max(std::abs(rayleigh), 1e-300);
        eigenvalue = rayleigh;
        if (iter >= 2 && (settled || residual <= rel_tol * std::max(rayleigh, 1e-300))) {
            result.eigenvalue = eigenvalue;
            result.eigenvector = v;
            result.iterations = iter;
            return result;
        }
    }
    throw NumericError("power_iteration: no convergence within iteration cap");
}

double spectral_norm(const Eigen::MatrixXd& matrix, std::uint64_t seed,
                     double rel_tol) {
    if (matrix.size() == 0) return 0.0;
    if (matrix.cwiseAbs().maxCoeff() == 0.0) return 0.0;
    return power_iteration(matrix, seed, rel_tol).eigenvalue;
}

} // namespace bpdc
