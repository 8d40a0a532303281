// Command-line harness for the Bregman proximal DC solvers: single solves
// with trace output, iteration/accuracy tables over an (m, d) grid, and the
// empirical success-probability experiment.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bpdc/csv.hpp"
#include "bpdc/errors.hpp"
#include "bpdc/experiment.hpp"
#include "bpdc/phase_retrieval.hpp"

namespace {

using namespace bpdc;

std::optional<int> period_from_flag(int value) {
    if (value < 0) throw ConfigError("--fixed-restart must be >= 0 (0 disables)");
    if (value == 0) return std::nullopt;
    return value;
}

SolverChoice parse_choice(const std::string& text) {
    SolverChoice choice;
    const auto colon = text.find(':');
    choice.solver = parse_solver_id(text.substr(0, colon));
    if (colon != std::string::npos) {
        choice.bound = parse_l_bound(text.substr(colon + 1));
    } else {
        switch (choice.solver) {
            case SolverId::Bpg:
            case SolverId::Bpge: choice.bound = LBoundKind::Bpg; break;
            case SolverId::WirtingerFlow: choice.bound = LBoundKind::None; break;
            default: choice.bound = LBoundKind::Gaussian; break;
        }
    }
    return choice;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file: " + path);
    return out;
}

struct CommonInstanceFlags {
    long m = 10000;
    long d = 10;
    double sparsity = 0.05;
    double theta = 1.0;
    std::uint64_t seed = 1;
};

void add_instance_flags(CLI::App* cmd, CommonInstanceFlags& flags) {
    cmd->add_option("--m", flags.m, "number of measurements");
    cmd->add_option("--d", flags.d, "dimension");
    cmd->add_option("--sparsity", flags.sparsity, "ground-truth sparsity fraction");
    cmd->add_option("--theta", flags.theta, "l1 regularization weight");
    cmd->add_option("--seed", flags.seed, "instance seed");
}

int cmd_gen(const CommonInstanceFlags& flags, const std::string& out_path) {
    const auto inst = phase::generate_gaussian_instance(flags.m, flags.d, flags.sparsity,
                                                        flags.theta, flags.seed);
    phase::save_instance_file(inst, out_path);
    std::cout << "wrote instance m=" << inst.m() << " d=" << inst.d()
              << " theta=" << inst.theta_reg << " seed=" << inst.seed << " to "
              << out_path << "\n";
    return 0;
}

struct SolveFlags {
    CommonInstanceFlags instance;
    std::string solver = "bpdca";
    std::string bound;
    std::string kernel;
    std::string instance_path;
    std::string init = "spectral";
    double init_scale = 1.0;
    double tol = 1e-6;
    int max_iterations = 50000;
    double rho = 0.99;
    int fixed_restart = 200;
    double delta = 0.0;
    bool monitor_hm = false;
    std::string trace_out;
};

int cmd_solve(const SolveFlags& flags) {
    auto inst = std::make_shared<const phase::PhaseRetrievalInstance>(
        flags.instance_path.empty()
            ? phase::generate_gaussian_instance(flags.instance.m, flags.instance.d,
                                                flags.instance.sparsity,
                                                flags.instance.theta,
                                                flags.instance.seed)
            : phase::load_instance_file(flags.instance_path));

    RunSpec spec;
    spec.choice = parse_choice(flags.bound.empty() ? flags.solver
                                                   : flags.solver + ":" + flags.bound);
    if (!flags.kernel.empty()) spec.kernel = parse_kernel_kind(flags.kernel);
    spec.gaussian_delta = flags.delta;
    spec.max_iterations = flags.max_iterations;
    spec.termination_tol = flags.tol;
    spec.rho = flags.rho;
    spec.fixed_restart_period = period_from_flag(flags.fixed_restart);
    spec.monitor_auxiliary = flags.monitor_hm;
    spec.init_scale = flags.init_scale;
    if (flags.init == "spectral") spec.init = InitKind::Spectral;
    else if (flags.init == "zero") spec.init = InitKind::Zero;
    else if (flags.init == "random") spec.init = InitKind::Random;
    else throw ConfigError("--init must be spectral, zero, or random");
    spec.init_seed = flags.instance.seed;
    spec.record_trace = true;

    const SolveResult result = run_configured(inst, spec);
    if (!flags.trace_out.empty()) {
        auto out = open_output(flags.trace_out);
        write_trace_csv(result, out);
    }

    std::cout << "solver=" << solver_id_name(spec.choice.solver)
              << " bound=" << l_bound_name(spec.choice.bound) << " m=" << inst->m()
              << " d=" << inst->d() << " seed=" << inst->seed
              << " iterations=" << result.iterations_used
              << " reason=" << termination_reason_name(result.termination_reason)
              << " accuracy=" << format_double(phase::accuracy_metric(*inst, result.final_iterate))
              << " relative_error="
              << format_double(phase::relative_error(*inst, result.final_iterate))
              << " wall_s=" << format_double(result.wall_time_seconds) << "\n";

    return result.termination_reason == TerminationReason::NumericFailure ? 2 : 0;
}

struct TableFlags {
    std::vector<long> m = {10000};
    std::vector<long> d = {10};
    std::vector<std::string> solvers = {"bpdca:gaussian", "bpdcae:gaussian"};
    int instances = 10;
    double theta = 1.0;
    double sparsity = 0.05;
    std::uint64_t seed = 1;
    double tol = 1e-6;
    int max_iterations = 50000;
    double rho = 0.99;
    int fixed_restart = 200;
    double delta = 0.0;
    double init_scale = 1.5;
    bool full_scale = false;
    std::string out_path;
};

int cmd_table(const TableFlags& flags) {
    ExperimentPlan plan;
    for (long m : flags.m)
        for (long d : flags.d) plan.cells.emplace_back(m, d);
    for (const std::string& text : flags.solvers)
        plan.solvers.push_back(parse_choice(text));
    plan.instances_per_cell = flags.full_scale ? 100 : flags.instances;
    plan.seed_base = flags.seed;
    plan.max_iterations = flags.max_iterations;
    plan.termination_tol = flags.tol;
    plan.theta_reg = flags.theta;
    plan.rho = flags.rho;
    plan.fixed_restart_period = period_from_flag(flags.fixed_restart);
    plan.sparsity = flags.sparsity;
    plan.gaussian_delta = flags.delta;
    plan.init_scale = flags.init_scale;

    const TableResult result = run_table(plan);
    if (flags.out_path.empty()) {
        write_table_csv(result, std::cout);
    } else {
        auto out = open_output(flags.out_path);
        write_table_csv(result, out);
    }
    return 0;
}

struct SuccessFlags {
    long d = 128;
    std::vector<double> m_over_d = {2.0, 4.0, 6.0, 8.0};
    int trials = 20;
    int iter_cap = 2500;
    std::uint64_t seed = 1;
    std::vector<std::string> solvers = {"bpdcae", "wf"};
    std::string bound = "gaussian";
    double threshold = 1e-5;
    double tol = 1e-12;
    double rho = 0.99;
    int fixed_restart = 200;
    double sparsity = 0.05;
    bool full_scale = false;
    std::string out_path;
};

int cmd_success_prob(const SuccessFlags& flags) {
    SuccessProbPlan plan;
    plan.d = flags.d;
    plan.m_over_d = flags.m_over_d;
    plan.trials = flags.full_scale ? 100 : flags.trials;
    plan.iter_cap = flags.iter_cap;
    plan.seed_base = flags.seed;
    plan.solvers.clear();
    for (const std::string& name : flags.solvers)
        plan.solvers.push_back(parse_solver_id(name));
    plan.bpdcae_bound = parse_l_bound(flags.bound);
    plan.rho = flags.rho;
    plan.fixed_restart_period = period_from_flag(flags.fixed_restart);
    plan.termination_tol = flags.tol;
    plan.sparsity = flags.sparsity;
    plan.success_threshold = flags.threshold;

    const SuccessProbResult result = run_success_prob(plan);
    if (flags.out_path.empty()) {
        write_success_prob_csv(result, std::cout);
    } else {
        auto out = open_output(flags.out_path);
        write_success_prob_csv(result, out);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bregman proximal DC optimization benchmark for phase retrieval"};
    app.require_subcommand(1);

    CommonInstanceFlags gen_flags;
    std::string gen_out;
    CLI::App* gen = app.add_subcommand("gen", "generate an instance file");
    add_instance_flags(gen, gen_flags);
    gen->add_option("--out", gen_out, "output path")->required();

    SolveFlags solve_flags;
    CLI::App* solve = app.add_subcommand("solve", "run one solver on one instance");
    add_instance_flags(solve, solve_flags.instance);
    solve->add_option("--solver", solve_flags.solver,
                      "bpdca|bpdcae|bpg|bpge|wf")->required();
    solve->add_option("--bound", solve_flags.bound, "bpg|dc-sum|gaussian");
    solve->add_option("--kernel", solve_flags.kernel, "sq-euclid|quartic|quartic-quad");
    solve->add_option("--instance", solve_flags.instance_path,
                      "load instance file instead of generating");
    solve->add_option("--init", solve_flags.init, "spectral|zero|random");
    solve->add_option("--init-scale", solve_flags.init_scale,
                      "scale applied to the spectral start");
    solve->add_option("--tol", solve_flags.tol, "termination tolerance");
    solve->add_option("--max-iter", solve_flags.max_iterations, "iteration cap");
    solve->add_option("--rho", solve_flags.rho, "adaptive restart threshold");
    solve->add_option("--fixed-restart", solve_flags.fixed_restart,
                      "fixed restart period (0 disables)");
    solve->add_option("--delta", solve_flags.delta, "gaussian bound offset");
    solve->add_flag("--monitor-hm", solve_flags.monitor_hm,
                    "record the auxiliary H_M sequence");
    solve->add_option("--out", solve_flags.trace_out, "trace CSV path");

    TableFlags table_flags;
    CLI::App* table = app.add_subcommand("table", "iteration/accuracy table");
    table->add_option("--m", table_flags.m, "measurement counts")->delimiter(',');
    table->add_option("--d", table_flags.d, "dimensions")->delimiter(',');
    table->add_option("--solvers", table_flags.solvers,
                      "solver:bound list, e.g. bpdca:gaussian,bpg:bpg")
        ->delimiter(',');
    table->add_option("--instances", table_flags.instances, "instances per cell");
    table->add_option("--theta", table_flags.theta, "l1 weight");
    table->add_option("--sparsity", table_flags.sparsity, "ground-truth sparsity");
    table->add_option("--seed", table_flags.seed, "seed base");
    table->add_option("--tol", table_flags.tol, "termination tolerance");
    table->add_option("--max-iter", table_flags.max_iterations, "iteration cap");
    table->add_option("--rho", table_flags.rho, "adaptive restart threshold");
    table->add_option("--fixed-restart", table_flags.fixed_restart,
                      "fixed restart period (0 disables)");
    table->add_option("--delta", table_flags.delta, "gaussian bound offset");
    table->add_option("--init-scale", table_flags.init_scale,
                      "scale applied to the spectral start");
    table->add_flag("--full-scale", table_flags.full_scale,
                    "100 instances per cell");
    table->add_option("--out", table_flags.out_path, "CSV path (default stdout)");

    SuccessFlags success_flags;
    CLI::App* success = app.add_subcommand("success-prob",
                                           "empirical success probability vs m/d");
    success->add_option("--d", success_flags.d, "dimension");
    success->add_option("--m-over-d", success_flags.m_over_d, "m/d ratios")
        ->delimiter(',');
    success->add_option("--trials", success_flags.trials, "trials per ratio");
    success->add_option("--iter-cap", success_flags.iter_cap, "iteration cap");
    success->add_option("--seed", success_flags.seed, "seed base");
    success->add_option("--solvers", success_flags.solvers, "bpdcae,wf")
        ->delimiter(',');
    success->add_option("--bound", success_flags.bound, "bound for bpdcae");
    success->add_option("--threshold", success_flags.threshold,
                        "relative-error success threshold");
    success->add_option("--tol", success_flags.tol, "termination tolerance");
    success->add_option("--rho", success_flags.rho, "adaptive restart threshold");
    success->add_option("--fixed-restart", success_flags.fixed_restart,
                        "fixed restart period (0 disables)");
    success->add_option("--sparsity", success_flags.sparsity, "ground-truth sparsity");
    success->add_flag("--full-scale", success_flags.full_scale, "100 trials");
    success->add_option("--out", success_flags.out_path, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) return cmd_gen(gen_flags, gen_out);
        if (solve->parsed()) return cmd_solve(solve_flags);
        if (table->parsed()) return cmd_table(table_flags);
        if (success->parsed()) return cmd_success_prob(success_flags);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
