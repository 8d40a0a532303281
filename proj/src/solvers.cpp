#include "bpdc/solvers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "bpdc/csv.hpp"
#include "bpdc/errors.hpp"

namespace bpdc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Slack for recognizing lambda * L == 1 through the round trip L -> 1/L.
constexpr double kLambdaLimitSlack = 1e-9;

enum class Variant { Bpdca, Bpdcae, Bpg, Bpge };

bool extrapolated(Variant v) { return v == Variant::Bpdcae || v == Variant::Bpge; }

// BPG-type steps take the f2 gradient at the subproblem anchor; DC-type
// steps keep the subgradient at x^k even when the anchor is extrapolated.
bool f2_at_anchor(Variant v) { return v == Variant::Bpg || v == Variant::Bpge; }

struct LambdaCheck {
    double one_minus_lambda_l = 0.0;
    bool at_limit = false;
};

LambdaCheck validate(const DcProblem& p, const SolverConfig& config,
                     const Eigen::VectorXd& x0, Variant variant) {
    if (x0.size() != p.dimension) throw ConfigError("solver: x0 dimension mismatch");
    if (!x0.allFinite()) throw ConfigError("solver: x0 must be finite");
    if (p.kernel.dim() != p.dimension)
        throw ConfigError("solver: kernel dimension does not match problem");
    if (config.lambda <= 0.0) throw ConfigError("solver: lambda must be positive");
    if (p.smad_constant <= 0.0)
        throw ConfigError("solver: problem smoothness constant must be positive");
    if (config.max_iterations < 1)
        throw ConfigError("solver: max_iterations must be at least 1");
    if (config.termination_tol <= 0.0)
        throw ConfigError("solver: termination_tol must be positive");

    const double lam_l = config.lambda * p.smad_constant;
    LambdaCheck check;
    if (std::abs(lam_l - 1.0) <= kLambdaLimitSlack) {
        check.at_limit = true;
        check.one_minus_lambda_l = 0.0;
    } else if (lam_l < 1.0) {
        check.one_minus_lambda_l = 1.0 - lam_l;
    } else {
        throw ConfigError("solver: lambda * L must not exceed 1");
    }

    if (extrapolated(variant)) {
        if (config.restart_rho < 0.0 || config.restart_rho >= 1.0)
            throw ConfigError("solver: restart_rho must lie in [0, 1)");
        if (config.fixed_restart_period && *config.fixed_restart_period < 1)
            throw ConfigError("solver: fixed restart period must be at least 1");
        if (!p.g_convex)
            throw ConfigError("solver: extrapolation requires a convex regularizer");
    }
    if (config.monitor_M) {
        const double lower = config.restart_rho / config.lambda;
        const double upper = 1.0 / config.lambda;
        const double slack = 1e-12 * upper;
        if (*config.monitor_M < lower - slack || *config.monitor_M > upper + slack)
            throw ConfigError("solver: monitor_M must lie in [rho/lambda, 1/lambda]");
    }
    return check;
}

SolveResult run_core(const DcProblem& p, const SolverConfig& config,
                     const Eigen::VectorXd& x0, Variant variant) {
    const LambdaCheck admissible = validate(p, config, x0, variant);
    const bool extrap = extrapolated(variant);
    const double lambda = config.lambda;
    const double rho = config.restart_rho;
    const double monitor = config.monitor_M.value_or(kNaN);

    SolveResult result;
    result.lambda = lambda;
    result.rho = rho;
    result.lambda_at_upper_limit = admissible.at_limit;
    result.max_descent_violation = -std::numeric_limits<double>::infinity();
    result.max_auxiliary_increase = -std::numeric_limits<double>::infinity();

    const auto start_time = std::chrono::steady_clock::now();
    const auto record_wall = [&] {
        result.wall_time_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time)
                .count();
    };

    Eigen::VectorXd x = x0;
    Eigen::VectorXd x_prev = x0; // x^{-1} = x^0
    double psi = objective(p, x);
    double h_m_prev = psi; // H_M(x^0, x^-1) = Psi(x^0)

    if (config.record_trace)
        result.trace.push_back({0, psi, 0.0, 0.0, 0.0, false,
                                config.monitor_M ? psi : kNaN, 0.0});
    if (!std::isfinite(psi)) {
        result.final_iterate = x;
        result.termination_reason = TerminationReason::NumericFailure;
        result.message = "objective not finite at x0";
        record_wall();
        return result;
    }

    double theta_prev = 1.0;
    double theta_curr = 1.0;
    double dh_prev = 0.0; // D_h(x^{k-1}, x^k)

    result.termination_reason = TerminationReason::MaxIterations;
    for (int k = 0; k < config.max_iterations; ++k) {
        double beta = 0.0;
        bool restarted = false;
        Eigen::VectorXd anchor;
        if (extrap) {
            beta = (theta_prev - 1.0) / theta_curr;
            bool reset = config.fixed_restart_period && k > 0 &&
                         k % *config.fixed_restart_period == 0;
            if (beta > 0.0 && !reset) {
                anchor = x + beta * (x - x_prev);
                if (p.kernel.bregman(x, anchor) > rho * dh_prev) reset = true;
            }
            if (reset) {
                theta_prev = 1.0;
                theta_curr = 1.0;
                beta = 0.0;
                restarted = true;
            }
            const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta_curr * theta_curr));
            theta_prev = theta_curr;
            theta_curr = theta_next;
        }
        if (beta == 0.0) anchor = x;

        Eigen::VectorXd x_next;
        try {
            const Eigen::VectorXd xi = p.f2_subgradient(f2_at_anchor(variant) ? anchor : x);
            x_next = solve_subproblem(p, anchor, xi, lambda);
        } catch (const NumericError& err) {
            result.final_iterate = x;
            result.iterations_used = k;
            result.termination_reason = TerminationReason::NumericFailure;
            result.message = err.what();
            record_wall();
            return result;
        }

        const double psi_next = objective(p, x_next);
        const double step_norm = (x_next - x).norm();
        const double gap = p.kernel.bregman(x, x_next);
        const double gap_reverse = p.kernel.bregman(x_next, x);
        const double h_m = config.monitor_M ? psi_next + monitor * gap : kNaN;

        if (!extrap)
            result.max_descent_violation =
                std::max(result.max_descent_violation,
                         lambda * psi_next - lambda * psi +
                             admissible.one_minus_lambda_l * gap_reverse);
        if (config.monitor_M) {
            result.max_auxiliary_increase =
                std::max(result.max_auxiliary_increase, h_m - h_m_prev);
            h_m_prev = h_m;
        }
        if (config.record_trace)
            result.trace.push_back(
                {k + 1, psi_next, step_norm, gap, beta, restarted, h_m, gap_reverse});

        result.iterations_used = k + 1;
        if (!std::isfinite(psi_next)) {
            result.final_iterate = x_next;
            result.termination_reason = TerminationReason::NumericFailure;
            result.message = "objective not finite at iterate";
            record_wall();
            return result;
        }

        dh_prev = gap;
        x_prev = std::move(x);
        x = std::move(x_next);
        psi = psi_next;

        if (step_norm / std::max(1.0, x.norm()) <= config.termination_tol) {
            result.termination_reason = TerminationReason::Converged;
            break;
        }
    }

    result.final_iterate = std::move(x);
    record_wall();
    return result;
}

} // namespace

std::string_view termination_reason_name(TerminationReason reason) {
    switch (reason) {
        case TerminationReason::Converged: return "converged";
        case TerminationReason::MaxIterations: return "max-iterations";
        case TerminationReason::NumericFailure: return "numeric-failure";
    }
    return "?";
}

SolveResult run_bpdca(const DcProblem& p, const SolverConfig& config,
                      const Eigen::VectorXd& x0) {
    return run_core(p, config, x0, Variant::Bpdca);
}

SolveResult run_bpdcae(const DcProblem& p, const SolverConfig& config,
                       const Eigen::VectorXd& x0) {
    return run_core(p, config, x0, Variant::Bpdcae);
}

SolveResult run_bpg(const DcProblem& p, const SolverConfig& config,
                    const Eigen::VectorXd& x0) {
    return run_core(p, config, x0, Variant::Bpg);
}

SolveResult run_bpge(const DcProblem& p, const SolverConfig& config,
                     const Eigen::VectorXd& x0) {
    return run_core(p, config, x0, Variant::Bpge);
}

SolveResult run_solver(const DcProblem& p, const SolverConfig& config,
                       const Eigen::VectorXd& x0) {
    return config.extrapolation ? run_bpdcae(p, config, x0) : run_bpdca(p, config, x0);
}

std::vector<double> auxiliary_sequence(const SolveResult& result, double monitor_M) {
    if (result.lambda <= 0.0)
        throw ConfigError("auxiliary_sequence: result carries no valid lambda");
    const double lower = result.rho / result.lambda;
    const double upper = 1.0 / result.lambda;
    const double slack = 1e-12 * upper;
    if (monitor_M < lower - slack || monitor_M > upper + slack)
        throw ConfigError("auxiliary_sequence: M must lie in [rho/lambda, 1/lambda]");

    std::vector<double> values;
    values.reserve(result.trace.size());
    for (const TraceRow& row : result.trace)
        values.push_back(row.psi + monitor_M * row.bregman_gap);
    return values;
}

void write_trace_csv(const SolveResult& result, std::ostream& out) {
    out << "iter,psi,step_norm,bregman_gap,beta,restart,h_m\n";
    std::string line;
    for (const TraceRow& row : result.trace) {
        line.clear();
        line += std::to_string(row.iter);
        line += ',';
        append_double(line, row.psi);
        line += ',';
        append_double(line, row.step_norm);
        line += ',';
        append_double(line, row.bregman_gap);
        line += ',';
        append_double(line, row.beta);
        line += ',';
        line += row.restart ? '1' : '0';
        line += ',';
        if (!std::isnan(row.h_m)) append_double(line, row.h_m);
        line += '\n';
        out << line;
    }
}

} // namespace bpdc
