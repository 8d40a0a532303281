// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with the observed numbers next to the required ones.

#include <doctest.h>

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <memory>
#include <vector>

#include "bpdc/experiment.hpp"
#include "bpdc/kernels.hpp"
#include "bpdc/oracle.hpp"
#include "bpdc/phase_retrieval.hpp"
#include "bpdc/rng.hpp"
#include "test_helpers.hpp"

using namespace bpdc;

namespace {

void report(int criterion, bool passed, const std::string& detail) {
    std::printf("[criterion %02d] %s  %s\n", criterion, passed ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* format, ...) {
    char buffer[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buffer, sizeof(buffer), format, args);
    va_end(args);
    return buffer;
}

// Shared anchor-cell experiment: m = 10000, d = 10, theta = 1, lambda = 1/L,
// tol 1e-6, ten seeded instances, every solver on the same instances.
struct AnchorCell {
    std::vector<int> bpdca_iterations;
    std::vector<int> bpdcae_iterations;
    std::vector<int> bpg_iterations;
    double bpdca_mean_iterations = 0.0;
    double bpdca_mean_accuracy = 0.0;
    double bpdcae_mean_iterations = 0.0;
    double bpg_mean_iterations = 0.0;

    static const AnchorCell& get() {
        static const AnchorCell cell = [] {
            ExperimentPlan plan;
            plan.cells = {{10000, 10}};
            plan.solvers = {{SolverId::Bpdca, LBoundKind::Gaussian},
                            {SolverId::Bpdcae, LBoundKind::Gaussian},
                            {SolverId::Bpg, LBoundKind::Bpg}};
            plan.instances_per_cell = 10;
            plan.seed_base = 1;
            const TableResult table = run_table(plan);

            AnchorCell out;
            for (const RunRecord& run : table.runs) {
                if (run.choice.solver == SolverId::Bpdca)
                    out.bpdca_iterations.push_back(run.iterations);
                else if (run.choice.solver == SolverId::Bpdcae)
                    out.bpdcae_iterations.push_back(run.iterations);
                else
                    out.bpg_iterations.push_back(run.iterations);
            }
            out.bpdca_mean_iterations = table.rows[0].mean_iterations;
            out.bpdca_mean_accuracy = table.rows[0].mean_accuracy;
            out.bpdcae_mean_iterations = table.rows[1].mean_iterations;
            out.bpg_mean_iterations = table.rows[2].mean_iterations;
            return out;
        }();
        return cell;
    }
};

} // namespace

TEST_CASE("criterion 1: BPDCA anchor cell iteration and accuracy bands") {
    const AnchorCell& cell = AnchorCell::get();
    const bool iters_ok =
        cell.bpdca_mean_iterations >= 34.0 && cell.bpdca_mean_iterations <= 102.0;
    const bool accuracy_ok =
        cell.bpdca_mean_accuracy >= -6.5 && cell.bpdca_mean_accuracy <= -3.5;
    report(1, iters_ok && accuracy_ok,
           fmt("bpdca(gaussian) m=10000 d=10: mean_iterations=%.1f (need [34,102]), "
               "mean_accuracy=%.3f (need [-6.5,-3.5])",
               cell.bpdca_mean_iterations, cell.bpdca_mean_accuracy));
    CHECK(iters_ok);
    CHECK(accuracy_ok);
}

TEST_CASE("criterion 2: BPDCAe anchor cell band and pairwise speedup") {
    const AnchorCell& cell = AnchorCell::get();
    const bool iters_ok =
        cell.bpdcae_mean_iterations >= 16.0 && cell.bpdcae_mean_iterations <= 48.0;
    int wins = 0;
    for (std::size_t i = 0; i < cell.bpdca_iterations.size(); ++i)
        if (cell.bpdcae_iterations[i] < cell.bpdca_iterations[i]) ++wins;
    const bool wins_ok = wins >= 9;
    report(2, iters_ok && wins_ok,
           fmt("bpdcae(gaussian): mean_iterations=%.1f (need [16,48]), faster than bpdca "
               "on %d/10 shared instances (need >= 9)",
               cell.bpdcae_mean_iterations, wins));
    CHECK(iters_ok);
    CHECK(wins_ok);
}

TEST_CASE("criterion 3: BPG baseline separation and iteration cap") {
    const AnchorCell& cell = AnchorCell::get();
    const double ratio = cell.bpg_mean_iterations / cell.bpdca_mean_iterations;
    const bool ratio_ok = ratio >= 15.0;

    // single instance at d = 50: BPG must exhaust the 50000-iteration cap
    const auto inst = std::make_shared<const phase::PhaseRetrievalInstance>(
        phase::generate_gaussian_instance(10000, 50, 0.05, 1.0, 1));
    RunSpec spec;
    spec.choice = {SolverId::Bpg, LBoundKind::Bpg};
    spec.init_scale = 1.5;
    spec.record_trace = false;
    const SolveResult capped = run_configured(inst, spec);
    const bool cap_ok = capped.termination_reason == TerminationReason::MaxIterations &&
                        capped.iterations_used == 50000;

    report(3, ratio_ok && cap_ok,
           fmt("bpg(bpg)/bpdca(gaussian) iteration ratio=%.1fx (need >= 15x); bpg at "
               "m=10000 d=50: %d iterations, reason=%s (need cap 50000)",
               ratio, capped.iterations_used,
               std::string(termination_reason_name(capped.termination_reason)).c_str()));
    CHECK(ratio_ok);
    CHECK(cap_ok);
}

TEST_CASE("criterion 4: smoothness bound ordering across 50 instances") {
    int ordering_failures = 0;
    int gaussian_failures = 0;
    const Eigen::Index dims[] = {5, 10, 50};
    for (int i = 0; i < 50; ++i) {
        const Eigen::Index d = dims[i % 3];
        const Eigen::Index m = 100 * d;
        const auto inst =
            phase::generate_gaussian_instance(m, d, 0.05, 0.0, 1000 + i);
        const double dc_sum = phase::l_bound_dc_sum(inst);
        if (dc_sum > phase::l_bound_bpg(inst)) ++ordering_failures;
        if (phase::l_bound_gaussian(inst, 0.0) >= dc_sum) ++gaussian_failures;
    }
    const bool passed = ordering_failures == 0 && gaussian_failures == 0;
    report(4, passed,
           fmt("dc-sum <= bpg violated on %d/50 instances (need 0); gaussian(0) < dc-sum "
               "violated on %d/50 (need 0, all m = 100 d)",
               ordering_failures, gaussian_failures));
    CHECK(passed);
}

TEST_CASE("criterion 5: BPDCAe success probability at desk scale") {
    SuccessProbPlan plan;
    plan.solvers = {SolverId::Bpdcae};
    plan.d = 128;
    plan.m_over_d = {2.0, 4.0, 6.0, 8.0};
    plan.trials = 20;
    plan.iter_cap = 2500;
    plan.seed_base = 1;
    const SuccessProbResult result = run_success_prob(plan);

    const double rate2 = result.rows[0].rates[0];
    const double rate8 = result.rows[3].rates[0];
    const bool high_ok = rate8 >= 0.9;
    const bool trend_ok = rate8 >= rate2;
    report(5, high_ok && trend_ok,
           fmt("bpdcae success rates over m/d {2,4,6,8} = {%.2f, %.2f, %.2f, %.2f}; need "
               "rate(8) >= 0.9 and rate(8) >= rate(2)",
               rate2, result.rows[1].rates[0], result.rows[2].rates[0], rate8));
    CHECK(high_ok);
    CHECK(trend_ok);
}

TEST_CASE("criterion 6: per-step descent inequality and complexity bound") {
    // lambda = 0.95/L keeps (1 - lambda L) > 0 so both parts bind
    bool descent_ok = true;
    bool bound_ok = true;
    double worst_violation = -std::numeric_limits<double>::infinity();
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto inst = std::make_shared<const phase::PhaseRetrievalInstance>(
            phase::generate_gaussian_instance(2000, 10, 0.05, 1.0, seed));
        const double bound = phase::l_bound_dc_sum(*inst);
        const DcProblem problem = phase::make_dc_problem(inst, KernelKind::Quartic, bound);
        SolverConfig config;
        config.lambda = 0.95 / bound;
        const SolveResult run =
            run_bpdca(problem, config, 1.5 * phase::spectral_initialization(*inst));
        REQUIRE(run.termination_reason == TerminationReason::Converged);

        const double one_minus = 1.0 - config.lambda * bound;
        for (std::size_t k = 1; k < run.trace.size(); ++k) {
            const double lhs = config.lambda * run.trace[k].psi;
            const double rhs = config.lambda * run.trace[k - 1].psi -
                               one_minus * run.trace[k].bregman_gap_reverse;
            const double scale = 1.0 + std::abs(config.lambda * run.trace[k - 1].psi);
            worst_violation = std::max(worst_violation, (lhs - rhs) / scale);
            if (lhs > rhs + 1e-10 * scale) descent_ok = false;
        }

        const double n = run.iterations_used;
        double smallest = std::numeric_limits<double>::infinity();
        for (std::size_t k = 1; k < run.trace.size(); ++k)
            smallest = std::min(smallest, run.trace[k].bregman_gap_reverse);
        const double rhs = (config.lambda / n) * run.trace.front().psi / one_minus;
        if (smallest > rhs * (1.0 + 1e-12)) bound_ok = false;
    }
    report(6, descent_ok && bound_ok,
           fmt("per-step descent inequality worst scaled violation=%.2e (need <= 1e-10); "
               "min-gap complexity bound %s on 5 runs (m=2000 d=10)",
               worst_violation, bound_ok ? "holds" : "violated"));
    CHECK(descent_ok);
    CHECK(bound_ok);
}

TEST_CASE("criterion 7: auxiliary function monotonicity along BPDCAe") {
    bool monotone = true;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto inst = std::make_shared<const phase::PhaseRetrievalInstance>(
            phase::generate_gaussian_instance(2000, 10, 0.05, 1.0, seed));
        const double bound = phase::l_bound_dc_sum(*inst);
        const DcProblem problem = phase::make_dc_problem(inst, KernelKind::Quartic, bound);
        SolverConfig config;
        config.lambda = 1.0 / bound;
        config.monitor_M = (1.0 + config.restart_rho) / (2.0 * config.lambda);
        const SolveResult run =
            run_bpdcae(problem, config, 1.5 * phase::spectral_initialization(*inst));
        REQUIRE(run.termination_reason == TerminationReason::Converged);

        for (std::size_t k = 1; k < run.trace.size(); ++k) {
            const double scale = 1.0 + std::abs(run.trace[k - 1].h_m);
            worst = std::max(worst, (run.trace[k].h_m - run.trace[k - 1].h_m) / scale);
            if (run.trace[k].h_m > run.trace[k - 1].h_m + 1e-10 * scale) monotone = false;
        }
    }
    report(7, monotone,
           fmt("H_M with M=(1+rho)/(2 lambda) on 5 BPDCAe runs: worst scaled increase=%.2e "
               "(need <= 1e-10)",
               worst));
    CHECK(monotone);
}

TEST_CASE("criterion 8: closed-form subproblem equals the numeric oracle") {
    Rng rng(20240817);
    double worst_point_gap = 0.0;
    double worst_value_gap = 0.0;
    bool passed = true;
    for (KernelKind kind : {KernelKind::Quartic, KernelKind::QuarticPlusQuadratic}) {
        for (int rep = 0; rep < 100; ++rep) {
            const Eigen::VectorXd c = test::random_vector(rng, 8, 2.0);
            const double tau = rng.uniform();
            const Eigen::VectorXd closed = phase::closed_form_subproblem(c, tau, kind);
            const Eigen::VectorXd numeric =
                oracle::numeric_subproblem_oracle(c, tau, kind, 1e-10);
            const double point_gap = (closed - numeric).norm();
            const double value_gap =
                std::abs(oracle::subproblem_objective(closed, c, tau, kind) -
                         oracle::subproblem_objective(numeric, c, tau, kind));
            worst_point_gap = std::max(worst_point_gap, point_gap);
            worst_value_gap = std::max(worst_value_gap, value_gap);
            if (point_gap > 1e-6 || value_gap > 1e-8) passed = false;
        }
    }
    report(8, passed,
           fmt("100 draws per quartic kernel: worst minimizer gap=%.2e (need <= 1e-6), "
               "worst objective gap=%.2e (need <= 1e-8)",
               worst_point_gap, worst_value_gap));
    CHECK(passed);
}

TEST_CASE("criterion 9: gradients, three-point identity, smoothness certificate") {
    Rng rng(717);

    // finite differences for f1, f2, and every kernel
    const auto inst = phase::generate_gaussian_instance(50, 5, 0.05, 0.0, 7);
    double worst_fd = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const Eigen::VectorXd x = test::random_vector(rng, 5, 1.5);
        const Eigen::VectorXd g1 = phase::f1_gradient(inst, x);
        worst_fd = std::max(
            worst_fd,
            (g1 - oracle::finite_difference_gradient(
                      [&](const Eigen::VectorXd& p) { return phase::f1_value(inst, p); },
                      x, 1e-5))
                    .norm() /
                std::max(1.0, g1.norm()));
        const Eigen::VectorXd g2 = phase::f2_gradient(inst, x);
        worst_fd = std::max(
            worst_fd,
            (g2 - oracle::finite_difference_gradient(
                      [&](const Eigen::VectorXd& p) { return phase::f2_value(inst, p); },
                      x, 1e-5))
                    .norm() /
                std::max(1.0, g2.norm()));
    }
    for (KernelKind kind : {KernelKind::SquaredEuclidean, KernelKind::Quartic,
                            KernelKind::QuarticPlusQuadratic}) {
        const Kernel kernel(kind, 5);
        for (int rep = 0; rep < 50; ++rep) {
            Eigen::VectorXd x = test::random_vector(rng, 5, 3.0);
            if (x.norm() > 10.0) x *= 10.0 / x.norm();
            const Eigen::VectorXd g = kernel.gradient(x);
            worst_fd = std::max(
                worst_fd,
                (g - oracle::finite_difference_gradient(
                         [&](const Eigen::VectorXd& p) { return kernel.value(p); }, x, 1e-5))
                        .norm() /
                    std::max(1.0, g.norm()));
        }
    }
    const bool fd_ok = worst_fd <= 1e-5;

    // three-point identity over 1000 triples
    double worst_identity = 0.0;
    const Kernel quartic(KernelKind::Quartic, 5);
    for (int rep = 0; rep < 1000; ++rep) {
        const Eigen::VectorXd x = test::random_vector(rng, 5, 3.0);
        const Eigen::VectorXd y = test::random_vector(rng, 5, 3.0);
        const Eigen::VectorXd z = test::random_vector(rng, 5, 3.0);
        const double lhs =
            quartic.bregman(x, z) - quartic.bregman(x, y) - quartic.bregman(y, z);
        const double rhs = (quartic.gradient(y) - quartic.gradient(z)).dot(x - y);
        const double scale = std::max(1.0, std::abs(quartic.bregman(x, z)) +
                                               std::abs(quartic.bregman(x, y)) +
                                               std::abs(quartic.bregman(y, z)) +
                                               std::abs(rhs));
        worst_identity = std::max(worst_identity, std::abs(lhs - rhs) / scale);
    }
    const bool identity_ok = worst_identity <= 1e-10;

    // sampled descent-lemma certificate with the dc-sum constant
    const auto pairs = test::random_pairs(rng, 5, 1000, 2.0);
    const auto certificate = smad_certificate(
        [&](const Eigen::VectorXd& x) { return phase::f1_value(inst, x); },
        [&](const Eigen::VectorXd& x) { return phase::f1_gradient(inst, x); }, quartic,
        phase::l_bound_dc_sum(inst), pairs);
    const bool smad_ok = certificate.all_passed();

    report(9, fd_ok && identity_ok && smad_ok,
           fmt("worst gradient FD error=%.2e (need <= 1e-5); worst three-point "
               "deviation=%.2e (need <= 1e-10); smad certificate failures=%d/1000 "
               "(need 0)",
               worst_fd, worst_identity, certificate.failure_count));
    CHECK(fd_ok);
    CHECK(identity_ok);
    CHECK(smad_ok);
}

TEST_CASE("criterion 10: sampled curvature expectation at d = 4") {
    const Eigen::Index d = 4;
    Eigen::VectorXd x(d);
    x << 1.0, 1.0, 1.0, 1.0;
    const Eigen::MatrixXd target =
        x.squaredNorm() * Eigen::MatrixXd::Identity(d, d) + 2.0 * x * x.transpose();

    Rng rng(424242);
    Eigen::MatrixXd accum = Eigen::MatrixXd::Zero(d, d);
    const int samples = 100000;
    Eigen::VectorXd a(d);
    for (int s = 0; s < samples; ++s) {
        for (Eigen::Index i = 0; i < d; ++i) a[i] = rng.gaussian();
        const double inner = a.dot(x);
        accum += inner * inner * a * a.transpose();
    }
    accum /= static_cast<double>(samples);

    double worst = 0.0;
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            worst = std::max(worst,
                             std::abs(accum(i, j) - target(i, j)) / std::abs(target(i, j)));
    const bool passed = worst <= 0.05;
    report(10, passed,
           fmt("10^5-sample estimate of E[<a,x>^2 aa^T] vs ||x||^2 I + 2xx^T: worst "
               "entrywise deviation=%.1f%% (need <= 5%%)",
               100.0 * worst));
    CHECK(passed);
}
