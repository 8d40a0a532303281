#include "bpdc/kernels.hpp"

#include <cmath>

#include "bpdc/errors.hpp"

namespace bpdc {

KernelKind parse_kernel_kind(std::string_view name) {
    if (name == "sq-euclid") return KernelKind::SquaredEuclidean;
    if (name == "quartic") return KernelKind::Quartic;
    if (name == "quartic-quad") return KernelKind::QuarticPlusQuadratic;
    throw ConfigError("unknown kernel kind: " + std::string(name));
}

std::string kernel_kind_name(KernelKind kind) {
    switch (kind) {
        case KernelKind::SquaredEuclidean: return "sq-euclid";
        case KernelKind::Quartic: return "quartic";
        case KernelKind::QuarticPlusQuadratic: return "quartic-quad";
    }
    return "?";
}

Kernel::Kernel(KernelKind kind, Eigen::Index dim) : kind_(kind), dim_(dim) {
    if (dim < 1) throw ConfigError("kernel dimension must be positive");
}

void Kernel::check_dim(const Eigen::VectorXd& x, const char* op) const {
    if (x.size() != dim_)
        throw ConfigError(std::string(op) + ": dimension mismatch, expected " +
                          std::to_string(dim_) + ", got " + std::to_string(x.size()));
}

double Kernel::value(const Eigen::VectorXd& x) const {
    check_dim(x, "kernel value");
    const double sq = x.squaredNorm();
    switch (kind_) {
        case KernelKind::SquaredEuclidean: return 0.5 * sq;
        case KernelKind::Quartic: return 0.25 * sq * sq;
        case KernelKind::QuarticPlusQuadratic: return 0.25 * sq * sq + 0.5 * sq;
    }
    return 0.0;
}

Eigen::VectorXd Kernel::gradient(const Eigen::VectorXd& x) const {
    check_dim(x, "kernel gradient");
    const double sq = x.squaredNorm();
    switch (kind_) {
        case KernelKind::SquaredEuclidean: return x;
        case KernelKind::Quartic: return sq * x;
        case KernelKind::QuarticPlusQuadratic: return (sq + 1.0) * x;
    }
    return x;
}

double Kernel::bregman(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    check_dim(x, "bregman distance");
    check_dim(y, "bregman distance");
    if (kind_ == KernelKind::SquaredEuclidean) return 0.5 * (x - y).squaredNorm();
    const double hx = value(x);
    const double hy = value(y);
    double d = hx - hy - gradient(y).dot(x - y);
    if (d < 0.0 && d >= -1e-12 * (1.0 + std::abs(hx) + std::abs(hy))) d = 0.0;
    return d;
}

SmadReport smad_certificate(
    const std::function<double(const Eigen::VectorXd&)>& f_value,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f_gradient,
    const Kernel& kernel, double smoothness,
    const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& sample_pairs,
    double tol_scale) {
    if (smoothness <= 0.0) throw ConfigError("smad_certificate: L must be positive");

    SmadReport report;
    report.checks.reserve(sample_pairs.size());
    for (const auto& [x, y] : sample_pairs) {
        const double fx = f_value(x);
        const double fy = f_value(y);
        SmadPairCheck check;
        check.deviation = std::abs(fx - fy - f_gradient(y).dot(x - y));
        check.bound = smoothness * kernel.bregman(x, y);
        const double tol = tol_scale * (1.0 + std::abs(fx) + std::abs(fy) + check.bound);
        check.passed = check.deviation <= check.bound + tol;
        check.ratio = (check.deviation <= tol && check.bound <= tol)
                          ? 0.0
                          : check.deviation / std::max(check.bound, 1e-300);
        report.worst_ratio = std::max(report.worst_ratio, check.ratio);
        if (!check.passed) ++report.failure_count;
        report.checks.push_back(check);
    }
    return report;
}

} // namespace bpdc
