#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bpdc {

// Kernel generating distances on all of R^d:
//   sq-euclid      h(x) = 1/2 ||x||^2
//   quartic        h(x) = 1/4 ||x||^4          (convex but not strongly convex)
//   quartic-quad   h(x) = 1/4 ||x||^4 + 1/2 ||x||^2
enum class KernelKind { SquaredEuclidean, Quartic, QuarticPlusQuadratic };

KernelKind parse_kernel_kind(std::string_view name);
std::string kernel_kind_name(KernelKind kind);

// Immutable after construction; all operations are pure and safe to share
// across concurrent solver runs.
class Kernel {
public:
    Kernel(KernelKind kind, Eigen::Index dim);

    KernelKind kind() const { return kind_; }
    Eigen::Index dim() const { return dim_; }
    bool strongly_convex() const { return kind_ != KernelKind::Quartic; }

    double value(const Eigen::VectorXd& x) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;

    // Bregman distance D_h(x, y) = h(x) - h(y) - <grad h(y), x - y>.
    // The squared-Euclidean kind evaluates 1/2 ||x - y||^2 directly to avoid
    // cancellation. Negative round-off within 1e-12 * (1 + |h(x)| + |h(y)|)
    // is clamped to zero so downstream restart tests see a true distance.
    double bregman(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

private:
    void check_dim(const Eigen::VectorXd& x, const char* op) const;

    KernelKind kind_;
    Eigen::Index dim_;
};

struct SmadPairCheck {
    double deviation = 0.0; // |f(x) - f(y) - <grad f(y), x - y>|
    double bound = 0.0;     // L * D_h(x, y)
    double ratio = 0.0;     // deviation / bound (0 when both negligible)
    bool passed = false;
};

struct SmadReport {
    std::vector<SmadPairCheck> checks;
    int failure_count = 0;
    double worst_ratio = 0.0;
    bool all_passed() const { return failure_count == 0; }
};

// Sampled check of the extended descent inequality
//   |f(x) - f(y) - <grad f(y), x - y>| <= L * D_h(x, y) + tol
// over the given pairs. A necessary condition for the pair (f, h) to be
// L-smooth adaptable, not a proof.
SmadReport smad_certificate(
    const std::function<double(const Eigen::VectorXd&)>& f_value,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f_gradient,
    const Kernel& kernel, double smoothness,
    const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& sample_pairs,
    double tol_scale = 1e-9);

} // namespace bpdc
