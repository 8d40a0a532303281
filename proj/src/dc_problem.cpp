#include "bpdc/dc_problem.hpp"

#include "bpdc/errors.hpp"

namespace bpdc {

Regularizer Regularizer::l1(double weight) {
    if (weight < 0.0) throw ConfigError("l1 regularizer weight must be nonnegative");
    Regularizer reg;
    reg.kind = Kind::L1;
    reg.weight = weight;
    return reg;
}

double objective(const DcProblem& p, const Eigen::VectorXd& x) {
    if (x.size() != p.dimension) throw ConfigError("objective: dimension mismatch");
    return p.f1_value(x) - p.f2_value(x) + p.reg.value(x);
}

Eigen::VectorXd solve_subproblem(const DcProblem& p, const Eigen::VectorXd& anchor,
                                 const Eigen::VectorXd& subgrad_f2, double lambda) {
    if (!p.subproblem_solver)
        throw ConfigError("solve_subproblem: no subproblem solver wired into problem");
    if (anchor.size() != p.dimension || subgrad_f2.size() != p.dimension)
        throw ConfigError("solve_subproblem: dimension mismatch");
    if (lambda <= 0.0) throw ConfigError("solve_subproblem: lambda must be positive");
    if (!subgrad_f2.allFinite())
        throw NumericError("solve_subproblem: non-finite subgradient");

    Eigen::VectorXd next = p.subproblem_solver(p, anchor, subgrad_f2, lambda);
    if (!next.allFinite()) throw NumericError("solve_subproblem: non-finite result");
    return next;
}

} // namespace bpdc
