#pragma once

#include <functional>

#include "bpdc/kernels.hpp"

namespace bpdc {

// Regularizer g. The weighted l1 norm and the zero function are the two
// shipped choices; both are convex and admit closed-form Bregman proximal
// steps for the shipped kernels.
struct Regularizer {
    enum class Kind { Zero, L1 };
    Kind kind = Kind::Zero;
    double weight = 0.0;

    double value(const Eigen::VectorXd& x) const {
        return kind == Kind::L1 ? weight * x.lpNorm<1>() : 0.0;
    }

    static Regularizer zero() { return {}; }
    static Regularizer l1(double weight);
};

struct DcProblem;

// Solves the linearized subproblem at `anchor`:
//   argmin_u { g(u) + <grad f1(anchor) - subgrad_f2, u - anchor>
//              + D_h(u, anchor) / lambda }
using SubproblemSolver = std::function<Eigen::VectorXd(
    const DcProblem&, const Eigen::VectorXd& anchor,
    const Eigen::VectorXd& subgrad_f2, double lambda)>;

// DC objective Psi = f1 - f2 + g, with f1, f2 convex, a kernel h, and a
// smoothness constant L making the pair (f1, h) L-smooth adaptable.
// Instances are immutable once built; evaluation hooks must be pure.
struct DcProblem {
    Eigen::Index dimension = 0;
    std::function<double(const Eigen::VectorXd&)> f1_value;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> f1_gradient;
    std::function<double(const Eigen::VectorXd&)> f2_value;
    // Must return a deterministic element of the classical subdifferential;
    // equals grad f2 wherever f2 is differentiable.
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> f2_subgradient;
    Regularizer reg;
    Kernel kernel{KernelKind::SquaredEuclidean, 1};
    double smad_constant = 0.0;
    SubproblemSolver subproblem_solver;
    // Extrapolated solvers require a convex g; the shipped regularizers
    // always are. Custom problems may clear this to opt out.
    bool g_convex = true;
};

double objective(const DcProblem& p, const Eigen::VectorXd& x);

// Validates and runs the injected subproblem solver. Throws ConfigError when
// no solver is wired, NumericError when gradients or the result are not
// finite.
Eigen::VectorXd solve_subproblem(const DcProblem& p, const Eigen::VectorXd& anchor,
                                 const Eigen::VectorXd& subgrad_f2, double lambda);

} // namespace bpdc
