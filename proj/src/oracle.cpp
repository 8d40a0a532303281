#include "bpdc/oracle.hpp"

#include <cmath>
#include <limits>

#include "bpdc/errors.hpp"
#include "bpdc/numerics.hpp"
#include "bpdc/rng.hpp"

namespace bpdc::oracle {

namespace {

constexpr double kInvPhi = 0.61803398874989484820458683436564;

// Minimizes a convex one-dimensional function on [lo, hi].
double golden_section(const std::function<double(double)>& f, double lo, double hi,
                      double xtol, long* evaluations) {
    double a = lo;
    double b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    long evals = 2;
    while (b - a > xtol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        }
        ++evals;
    }
    if (evaluations) *evaluations += evals;
    return 0.5 * (a + b);
}

} // namespace

double subproblem_objective(const Eigen::VectorXd& y, const Eigen::VectorXd& c,
                            double tau, KernelKind kind) {
    const Kernel kernel(kind, y.size());
    return tau * y.lpNorm<1>() + kernel.value(y) - c.dot(y);
}

Eigen::VectorXd numeric_subproblem_oracle(const Eigen::VectorXd& c, double tau,
                                          KernelKind kind, double tol,
                                          long* evaluations) {
    if (tol <= 0.0) throw ConfigError("subproblem oracle: tol must be positive");
    if (tau < 0.0) throw ConfigError("subproblem oracle: tau must be nonnegative");
    if (c.size() > 50) throw ConfigError("subproblem oracle: desk scale only (d <= 50)");

    const Eigen::VectorXd s = soft_threshold(c, tau);
    const double norm_s = s.norm();
    if (norm_s == 0.0) return Eigen::VectorXd::Zero(c.size());

    const Eigen::VectorXd direction = s / norm_s;
    const auto radial = [&](double t) {
        return subproblem_objective(t * direction, c, tau, kind);
    };
    const double radius = golden_section(radial, 0.0, c.norm() + 1.0, tol, evaluations);
    return radius * direction;
}

OracleReport compare_with_oracle(const Eigen::VectorXd& candidate,
                                 const Eigen::VectorXd& c, double tau,
                                 KernelKind kind, double tol) {
    OracleReport report;
    const Eigen::VectorXd best =
        numeric_subproblem_oracle(c, tau, kind, std::min(tol, 1e-10), &report.evaluations);
    report.oracle_value = subproblem_objective(best, c, tau, kind);
    report.candidate_value = subproblem_objective(candidate, c, tau, kind);
    report.gap = report.candidate_value - report.oracle_value;
    report.passed = report.gap >= -tol;
    return report;
}

Eigen::VectorXd coordinate_descent_subproblem(const Eigen::VectorXd& c, double tau,
                                              KernelKind kind, int starts,
                                              std::uint64_t seed, double tol) {
    if (starts < 1) throw ConfigError("coordinate descent: starts must be at least 1");
    const Eigen::Index d = c.size();
    const double bracket = std::cbrt(c.norm() + 1.0) + 1.0;

    Rng rng(mix_seed(seed, 0xcdULL));
    Eigen::VectorXd best = Eigen::VectorXd::Zero(d);
    double best_value = subproblem_objective(best, c, tau, kind);

    for (int start = 0; start < starts; ++start) {
        Eigen::VectorXd y(d);
        for (Eigen::Index i = 0; i < d; ++i)
            y[i] = (2.0 * rng.uniform() - 1.0) * bracket;

        for (int sweep = 0; sweep < 200; ++sweep) {
            double moved = 0.0;
            for (Eigen::Index i = 0; i < d; ++i) {
                const auto slice = [&](double u) {
                    Eigen::VectorXd probe = y;
                    probe[i] = u;
                    return subproblem_objective(probe, c, tau, kind);
                };
                const double u = golden_section(slice, -bracket, bracket, 0.1 * tol, nullptr);
                moved = std::max(moved, std::abs(u - y[i]));
                y[i] = u;
            }
            if (moved <= tol) break;
        }
        const double value = subproblem_objective(y, c, tau, kind);
        if (value < best_value) {
            best_value = value;
            best = y;
        }
    }
    return best;
}

Eigen::VectorXd finite_difference_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f_value,
    const Eigen::VectorXd& x, double step) {
    if (step <= 0.0) throw ConfigError("finite differences: step must be positive");
    Eigen::VectorXd grad(x.size());
    Eigen::VectorXd probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + step;
        const double forward = f_value(probe);
        probe[i] = x[i] - step;
        const double backward = f_value(probe);
        probe[i] = x[i];
        grad[i] = (forward - backward) / (2.0 * step);
    }
    return grad;
}

Eigen::VectorXd generic_numeric_subproblem(const DcProblem& p,
                                           const Eigen::VectorXd& anchor,
                                           const Eigen::VectorXd& subgrad_f2,
                                           double lambda, double tol) {
    if (lambda <= 0.0) throw ConfigError("generic subproblem: lambda must be positive");
    if (tol <= 0.0) throw ConfigError("generic subproblem: tol must be positive");
    if (anchor.size() != p.dimension || subgrad_f2.size() != p.dimension)
        throw ConfigError("generic subproblem: dimension mismatch");

    const Eigen::VectorXd linear = lambda * (p.f1_gradient(anchor) - subgrad_f2);
    if (!linear.allFinite()) throw NumericError("generic subproblem: non-finite gradient");
    const Eigen::VectorXd grad_h_anchor = p.kernel.gradient(anchor);
    const double prox_weight =
        p.reg.kind == Regularizer::Kind::L1 ? lambda * p.reg.weight : 0.0;

    const auto smooth_value = [&](const Eigen::VectorXd& u) {
        return linear.dot(u - anchor) + p.kernel.bregman(u, anchor);
    };
    const auto smooth_gradient = [&](const Eigen::VectorXd& u) {
        return (linear + p.kernel.gradient(u) - grad_h_anchor).eval();
    };

    Eigen::VectorXd u = anchor;
    double value = 0.0;
    double eta = 1.0;
    constexpr int kMaxIterations = 200000;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        const Eigen::VectorXd grad = smooth_gradient(u);
        Eigen::VectorXd trial;
        while (true) {
            trial = soft_threshold(u - eta * grad, eta * prox_weight);
            const Eigen::VectorXd diff = trial - u;
            const double model = value + grad.dot(diff) + diff.squaredNorm() / (2.0 * eta);
            if (smooth_value(trial) <= model + 1e-15 * (1.0 + std::abs(model))) break;
            eta *= 0.5;
            if (eta < 1e-18) throw NumericError("generic subproblem: step collapse");
        }
        const double residual = (u - trial).norm() / eta;
        u = std::move(trial);
        value = smooth_value(u);
        if (residual <= tol) return u;
        eta = std::min(eta * 1.2, 1e6);
    }
    throw NumericError("generic subproblem: iteration cap exceeded");
}

} // namespace bpdc::oracle
