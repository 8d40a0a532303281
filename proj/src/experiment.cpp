#include "bpdc/experiment.hpp"

#include <cmath>
#include <ostream>

#include "bpdc/csv.hpp"
#include "bpdc/errors.hpp"
#include "bpdc/rng.hpp"

namespace bpdc {

SolverId parse_solver_id(std::string_view name) {
    if (name == "bpdca") return SolverId::Bpdca;
    if (name == "bpdcae") return SolverId::Bpdcae;
    if (name == "bpg") return SolverId::Bpg;
    if (name == "bpge") return SolverId::Bpge;
    if (name == "wf") return SolverId::WirtingerFlow;
    throw ConfigError("unknown solver: " + std::string(name));
}

std::string solver_id_name(SolverId id) {
    switch (id) {
        case SolverId::Bpdca: return "bpdca";
        case SolverId::Bpdcae: return "bpdcae";
        case SolverId::Bpg: return "bpg";
        case SolverId::Bpge: return "bpge";
        case SolverId::WirtingerFlow: return "wf";
    }
    return "?";
}

LBoundKind parse_l_bound(std::string_view name) {
    if (name == "bpg") return LBoundKind::Bpg;
    if (name == "dc-sum") return LBoundKind::DcSum;
    if (name == "gaussian") return LBoundKind::Gaussian;
    if (name == "none") return LBoundKind::None;
    throw ConfigError("unknown bound: " + std::string(name));
}

std::string l_bound_name(LBoundKind kind) {
    switch (kind) {
        case LBoundKind::Bpg: return "bpg";
        case LBoundKind::DcSum: return "dc-sum";
        case LBoundKind::Gaussian: return "gaussian";
        case LBoundKind::None: return "none";
    }
    return "?";
}

void validate_choice(const SolverChoice& choice, double theta_reg) {
    switch (choice.solver) {
        case SolverId::WirtingerFlow:
            if (theta_reg != 0.0)
                throw ConfigError("wf requires theta = 0");
            return;
        case SolverId::Bpg:
        case SolverId::Bpge:
            if (choice.bound != LBoundKind::Bpg)
                throw ConfigError(solver_id_name(choice.solver) +
                                  " must run with its own bound (--bound bpg)");
            return;
        case SolverId::Bpdca:
        case SolverId::Bpdcae:
            if (choice.bound == LBoundKind::None)
                throw ConfigError(solver_id_name(choice.solver) + " needs a bound");
            return;
    }
}

double l_bound_for(const phase::PhaseRetrievalInstance& inst, LBoundKind kind,
                   double gaussian_delta) {
    switch (kind) {
        case LBoundKind::Bpg: return phase::l_bound_bpg(inst);
        case LBoundKind::DcSum: return phase::l_bound_dc_sum(inst);
        case LBoundKind::Gaussian: return phase::l_bound_gaussian(inst, gaussian_delta);
        case LBoundKind::None: break;
    }
    throw ConfigError("no smoothness bound selected");
}

KernelKind default_kernel(SolverId solver) {
    return (solver == SolverId::Bpg || solver == SolverId::Bpge)
               ? KernelKind::QuarticPlusQuadratic
               : KernelKind::Quartic;
}

namespace {

Eigen::VectorXd initial_point(const phase::PhaseRetrievalInstance& inst,
                              InitKind init, double init_scale,
                              std::uint64_t init_seed) {
    switch (init) {
        case InitKind::Spectral:
            return init_scale * phase::spectral_initialization(inst);
        case InitKind::Zero: return Eigen::VectorXd::Zero(inst.d());
        case InitKind::Random: {
            Rng rng(mix_seed(inst.seed, 0x1000 + init_seed));
            Eigen::VectorXd x0(inst.d());
            for (Eigen::Index i = 0; i < x0.size(); ++i) x0[i] = rng.gaussian();
            return x0;
        }
    }
    throw ConfigError("unknown initialization");
}

} // namespace

SolveResult run_configured(
    const std::shared_ptr<const phase::PhaseRetrievalInstance>& inst,
    const RunSpec& spec) {
    if (!inst) throw ConfigError("run_configured: null instance");
    validate_choice(spec.choice, inst->theta_reg);

    SolverConfig config;
    config.max_iterations = spec.max_iterations;
    config.termination_tol = spec.termination_tol;
    config.restart_rho = spec.rho;
    config.fixed_restart_period = spec.fixed_restart_period;
    config.record_trace = spec.record_trace;
    config.seed = spec.init_seed;

    if (spec.choice.solver == SolverId::WirtingerFlow)
        return phase::run_wirtinger_flow(*inst, config);

    const KernelKind kernel = spec.kernel.value_or(default_kernel(spec.choice.solver));
    if ((spec.choice.solver == SolverId::Bpg || spec.choice.solver == SolverId::Bpge) &&
        kernel != KernelKind::QuarticPlusQuadratic)
        throw ConfigError("bpg/bpge require the quartic-quad kernel");
    if (kernel == KernelKind::SquaredEuclidean)
        throw ConfigError(
            "sq-euclid kernel admits no smoothness constant for phase retrieval");

    const double smoothness = l_bound_for(*inst, spec.choice.bound, spec.gaussian_delta);
    config.lambda = 1.0 / smoothness;
    if (spec.monitor_auxiliary)
        config.monitor_M = (1.0 + spec.rho) / (2.0 * config.lambda);

    const DcProblem problem = phase::make_dc_problem(inst, kernel, smoothness);
    const Eigen::VectorXd x0 =
        initial_point(*inst, spec.init, spec.init_scale, spec.init_seed);

    switch (spec.choice.solver) {
        case SolverId::Bpdca: return run_bpdca(problem, config, x0);
        case SolverId::Bpdcae:
            config.extrapolation = true;
            return run_bpdcae(problem, config, x0);
        case SolverId::Bpg: return run_bpg(problem, config, x0);
        case SolverId::Bpge:
            config.extrapolation = true;
            return run_bpge(problem, config, x0);
        case SolverId::WirtingerFlow: break;
    }
    throw ConfigError("unreachable solver id");
}

TableResult run_table(const ExperimentPlan& plan) {
    if (plan.cells.empty()) throw ConfigError("table plan: no (m, d) cells");
    if (plan.solvers.empty()) throw ConfigError("table plan: no solvers");
    if (plan.instances_per_cell < 1)
        throw ConfigError("table plan: instances_per_cell must be at least 1");
    for (const SolverChoice& choice : plan.solvers)
        validate_choice(choice, plan.theta_reg);

    TableResult result;
    for (std::size_t cell_index = 0; cell_index < plan.cells.size(); ++cell_index) {
        const auto [m, d] = plan.cells[cell_index];
        const std::size_t solver_count = plan.solvers.size();
        std::vector<double> sum_iterations(solver_count, 0.0);
        std::vector<double> sum_wall(solver_count, 0.0);
        std::vector<double> sum_accuracy(solver_count, 0.0);
        std::vector<int> successes(solver_count, 0);

        for (int instance = 0; instance < plan.instances_per_cell; ++instance) {
            const std::uint64_t seed =
                plan.seed_base +
                static_cast<std::uint64_t>(cell_index) *
                    static_cast<std::uint64_t>(plan.instances_per_cell) +
                static_cast<std::uint64_t>(instance);
            const auto inst = std::make_shared<const phase::PhaseRetrievalInstance>(
                phase::generate_gaussian_instance(m, d, plan.sparsity, plan.theta_reg,
                                                  seed));

            for (std::size_t s = 0; s < solver_count; ++s) {
                RunSpec spec;
                spec.choice = plan.solvers[s];
                spec.gaussian_delta = plan.gaussian_delta;
                spec.max_iterations = plan.max_iterations;
                spec.termination_tol = plan.termination_tol;
                spec.rho = plan.rho;
                spec.fixed_restart_period = plan.fixed_restart_period;
                spec.init_scale = plan.init_scale;
                spec.record_trace = false;

                const SolveResult solve = run_configured(inst, spec);

                RunRecord record;
                record.choice = plan.solvers[s];
                record.m = m;
                record.d = d;
                record.seed = seed;
                record.iterations = solve.iterations_used;
                record.accuracy = phase::accuracy_metric(*inst, solve.final_iterate);
                record.rel_error = phase::relative_error(*inst, solve.final_iterate);
                record.reason = solve.termination_reason;
                record.wall_seconds = solve.wall_time_seconds;
                result.runs.push_back(record);

                sum_iterations[s] += record.iterations;
                sum_wall[s] += record.wall_seconds;
                sum_accuracy[s] += record.accuracy;
                if (record.reason == TerminationReason::Converged) ++successes[s];
            }
        }

        const double count = plan.instances_per_cell;
        for (std::size_t s = 0; s < solver_count; ++s) {
            ExperimentRow row;
            row.solver = solver_id_name(plan.solvers[s].solver);
            row.bound = plan.solvers[s].solver == SolverId::WirtingerFlow
                            ? "none"
                            : l_bound_name(plan.solvers[s].bound);
            row.m = m;
            row.d = d;
            row.mean_iterations = sum_iterations[s] / count;
            row.mean_wall_time_s = sum_wall[s] / count;
            row.mean_accuracy = sum_accuracy[s] / count;
            row.success_count = successes[s];
            result.rows.push_back(std::move(row));
        }
    }
    return result;
}

void write_table_csv(const TableResult& result, std::ostream& out) {
    out << "solver,bound,m,d,mean_iterations,mean_wall_time_s,mean_accuracy,"
           "success_count\n";
    std::string line;
    for (const ExperimentRow& row : result.rows) {
        line.clear();
        line += row.solver;
        line += ',';
        line += row.bound;
        line += ',';
        line += std::to_string(row.m);
        line += ',';
        line += std::to_string(row.d);
        line += ',';
        append_double(line, row.mean_iterations);
        line += ',';
        append_double(line, row.mean_wall_time_s);
        line += ',';
        append_double(line, row.mean_accuracy);
        line += ',';
        line += std::to_string(row.success_count);
        line += '\n';
        out << line;
    }
}

SuccessProbResult run_success_prob(const SuccessProbPlan& plan) {
    if (plan.d < 1) throw ConfigError("success-prob plan: d must be at least 1");
    if (plan.trials < 0) throw ConfigError("success-prob plan: trials must be >= 0");
    if (plan.iter_cap < 1) throw ConfigError("success-prob plan: iter_cap must be >= 1");
    if (plan.solvers.empty()) throw ConfigError("success-prob plan: no solvers");

    SuccessProbResult result;
    for (SolverId solver : plan.solvers) {
        result.solver_names.push_back(solver_id_name(solver));
        validate_choice({solver, solver == SolverId::WirtingerFlow
                                     ? LBoundKind::None
                                     : plan.bpdcae_bound},
                        0.0);
    }
    if (plan.trials == 0) return result;

    for (std::size_t cell_index = 0; cell_index < plan.m_over_d.size(); ++cell_index) {
        const double ratio = plan.m_over_d[cell_index];
        const auto m = static_cast<Eigen::Index>(
            std::llround(ratio * static_cast<double>(plan.d)));
        if (m < 1) throw ConfigError("success-prob plan: m/d ratio too small");

        std::vector<int> successes(plan.solvers.size(), 0);
        for (int trial = 0; trial < plan.trials; ++trial) {
            const std::uint64_t seed = plan.seed_base +
                                       static_cast<std::uint64_t>(cell_index) *
                                           static_cast<std::uint64_t>(plan.trials) +
                                       static_cast<std::uint64_t>(trial);
            const auto inst = std::make_shared<const phase::PhaseRetrievalInstance>(
                phase::generate_gaussian_instance(m, plan.d, plan.sparsity,
                                                  /*theta_reg=*/0.0, seed));

            for (std::size_t s = 0; s < plan.solvers.size(); ++s) {
                RunSpec spec;
                spec.choice.solver = plan.solvers[s];
                spec.choice.bound = plan.solvers[s] == SolverId::WirtingerFlow
                                        ? LBoundKind::None
                                        : plan.bpdcae_bound;
                spec.gaussian_delta = plan.gaussian_delta;
                spec.max_iterations = plan.iter_cap;
                spec.termination_tol = plan.termination_tol;
                spec.rho = plan.rho;
                spec.fixed_restart_period = plan.fixed_restart_period;
                spec.record_trace = false;

                const SolveResult solve = run_configured(inst, spec);

                RunRecord record;
                record.choice = spec.choice;
                record.m = m;
                record.d = plan.d;
                record.seed = seed;
                record.iterations = solve.iterations_used;
                record.accuracy = phase::accuracy_metric(*inst, solve.final_iterate);
                record.rel_error = phase::relative_error(*inst, solve.final_iterate);
                record.reason = solve.termination_reason;
                record.wall_seconds = solve.wall_time_seconds;
                result.runs.push_back(record);

                const bool success =
                    record.reason != TerminationReason::NumericFailure &&
                    record.rel_error < plan.success_threshold;
                if (success) ++successes[s];
            }
        }

        SuccessProbRow row;
        row.m_over_d = ratio;
        for (int count : successes)
            row.rates.push_back(static_cast<double>(count) /
                                static_cast<double>(plan.trials));
        result.rows.push_back(std::move(row));
    }
    return result;
}

void write_success_prob_csv(const SuccessProbResult& result, std::ostream& out) {
    std::string line = "m_over_d";
    for (const std::string& name : result.solver_names) {
        line += ',';
        line += name;
    }
    line += '\n';
    out << line;
    for (const SuccessProbRow& row : result.rows) {
        line.clear();
        append_double(line, row.m_over_d);
        for (double rate : row.rates) {
            line += ',';
            append_double(line, rate);
        }
        line += '\n';
        out << line;
    }
}

} // namespace bpdc
