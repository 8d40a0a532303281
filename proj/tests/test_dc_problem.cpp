#include <doctest.h>

#include <cmath>
#include <memory>

#include "bpdc/dc_problem.hpp"
#include "bpdc/errors.hpp"
#include "bpdc/oracle.hpp"
#include "bpdc/phase_retrieval.hpp"
#include "bpdc/solvers.hpp"
#include "test_helpers.hpp"

using namespace bpdc;
using test::random_vector;

namespace {

std::shared_ptr<const phase::PhaseRetrievalInstance> make_instance(
    Eigen::Index m, Eigen::Index d, double theta, std::uint64_t seed) {
    return std::make_shared<const phase::PhaseRetrievalInstance>(
        phase::generate_gaussian_instance(m, d, 0.05, theta, seed));
}

} // namespace

TEST_CASE("objective at the ground truth and at zero") {
    const auto inst0 = make_instance(200, 8, 0.0, 3);
    const auto p0 = phase::make_dc_problem(inst0, KernelKind::Quartic,
                                           phase::l_bound_dc_sum(*inst0));
    const double scale = 1.0 + phase::f1_value(*inst0, inst0->ground_truth);
    CHECK(std::abs(objective(p0, inst0->ground_truth)) <= 1e-10 * scale);
    CHECK(objective(p0, Eigen::VectorXd::Zero(8)) ==
          doctest::Approx(0.25 * inst0->measurements.squaredNorm()).epsilon(1e-12));

    const auto inst1 = make_instance(200, 8, 1.0, 3);
    const auto p1 = phase::make_dc_problem(inst1, KernelKind::Quartic,
                                           phase::l_bound_dc_sum(*inst1));
    CHECK(objective(p1, inst1->ground_truth) ==
          doctest::Approx(inst1->ground_truth.lpNorm<1>()).epsilon(1e-9));
}

TEST_CASE("objective stays nonnegative for phase retrieval") {
    Rng rng(31);
    const auto inst = make_instance(100, 6, 1.0, 5);
    const auto p = phase::make_dc_problem(inst, KernelKind::Quartic,
                                          phase::l_bound_dc_sum(*inst));
    for (int rep = 0; rep < 200; ++rep) {
        const Eigen::VectorXd x = random_vector(rng, 6, 2.0);
        const double scale = 1.0 + phase::f1_value(*inst, x);
        CHECK(objective(p, x) >= -1e-10 * scale);
    }
}

TEST_CASE("f1 and f2 are convex on sampled segments") {
    Rng rng(37);
    const auto inst = make_instance(60, 5, 0.0, 9);
    for (int rep = 0; rep < 300; ++rep) {
        const Eigen::VectorXd x = random_vector(rng, 5, 2.0);
        const Eigen::VectorXd y = random_vector(rng, 5, 2.0);
        const double alpha = rng.uniform();
        const Eigen::VectorXd mid = alpha * x + (1.0 - alpha) * y;
        const double tol_f1 = 1e-10 * (1.0 + std::abs(phase::f1_value(*inst, x)) +
                                       std::abs(phase::f1_value(*inst, y)));
        CHECK(phase::f1_value(*inst, mid) <=
              alpha * phase::f1_value(*inst, x) + (1.0 - alpha) * phase::f1_value(*inst, y) + tol_f1);
        const double tol_f2 = 1e-10 * (1.0 + std::abs(phase::f2_value(*inst, x)) +
                                       std::abs(phase::f2_value(*inst, y)));
        CHECK(phase::f2_value(*inst, mid) <=
              alpha * phase::f2_value(*inst, x) + (1.0 - alpha) * phase::f2_value(*inst, y) + tol_f2);
    }
}

TEST_CASE("f2 subgradient satisfies the subgradient inequality") {
    Rng rng(41);
    const auto inst = make_instance(60, 5, 0.0, 13);
    for (int rep = 0; rep < 300; ++rep) {
        const Eigen::VectorXd x = random_vector(rng, 5, 2.0);
        const Eigen::VectorXd y = random_vector(rng, 5, 2.0);
        const Eigen::VectorXd xi = phase::f2_gradient(*inst, x);
        const double fx = phase::f2_value(*inst, x);
        const double fy = phase::f2_value(*inst, y);
        const double tol = 1e-8 * (1.0 + std::abs(fx) + std::abs(fy));
        CHECK(fy >= fx + xi.dot(y - x) - tol);
    }
}

TEST_CASE("subproblem solution satisfies the first-order condition") {
    // g = 0, f2 = 0, f1 = h: the minimizer u obeys grad h(u) = (1 - lambda) grad h(anchor)
    for (KernelKind kind : {KernelKind::Quartic, KernelKind::QuarticPlusQuadratic}) {
        const Kernel kernel(kind, 3);
        DcProblem p;
        p.dimension = 3;
        p.kernel = kernel;
        p.smad_constant = 1.0;
        p.f1_value = [kernel](const Eigen::VectorXd& x) { return kernel.value(x); };
        p.f1_gradient = [kernel](const Eigen::VectorXd& x) { return kernel.gradient(x); };
        p.f2_value = [](const Eigen::VectorXd&) { return 0.0; };
        p.f2_subgradient = [](const Eigen::VectorXd& x) {
            return Eigen::VectorXd::Zero(x.size()).eval();
        };
        p.subproblem_solver = [](const DcProblem& problem, const Eigen::VectorXd& anchor,
                                 const Eigen::VectorXd& xi, double lambda) {
            const Eigen::VectorXd c = problem.kernel.gradient(anchor) -
                                      lambda * (problem.f1_gradient(anchor) - xi).eval();
            return phase::closed_form_subproblem(c, 0.0, problem.kernel.kind());
        };

        Rng rng(43);
        for (double lambda : {0.1, 0.5, 0.9}) {
            const Eigen::VectorXd anchor = random_vector(rng, 3, 1.5);
            const Eigen::VectorXd u =
                solve_subproblem(p, anchor, Eigen::VectorXd::Zero(3), lambda);
            const Eigen::VectorXd expected = (1.0 - lambda) * kernel.gradient(anchor);
            CHECK((kernel.gradient(u) - expected).norm() <= 1e-10 * (1.0 + expected.norm()));

            // independent check against the numeric oracle
            const Eigen::VectorXd c = kernel.gradient(anchor) - lambda * kernel.gradient(anchor);
            const Eigen::VectorXd reference =
                oracle::numeric_subproblem_oracle(c, 0.0, kind, 1e-10);
            CHECK((u - reference).norm() <= 1e-6 * (1.0 + reference.norm()));
        }
    }
}

TEST_CASE("a stationary anchor is a fixed point of the subproblem") {
    // f2 = f1 makes the linearized gradient vanish, g = 0 is smooth at the anchor
    const Kernel kernel(KernelKind::Quartic, 4);
    DcProblem p;
    p.dimension = 4;
    p.kernel = kernel;
    p.smad_constant = 1.0;
    p.f1_value = [kernel](const Eigen::VectorXd& x) { return kernel.value(x); };
    p.f1_gradient = [kernel](const Eigen::VectorXd& x) { return kernel.gradient(x); };
    p.f2_value = p.f1_value;
    p.f2_subgradient = p.f1_gradient;
    p.subproblem_solver = [](const DcProblem& problem, const Eigen::VectorXd& anchor,
                             const Eigen::VectorXd& xi, double lambda) {
        const Eigen::VectorXd c = problem.kernel.gradient(anchor) -
                                  lambda * (problem.f1_gradient(anchor) - xi).eval();
        return phase::closed_form_subproblem(c, 0.0, problem.kernel.kind());
    };

    Rng rng(47);
    const Eigen::VectorXd anchor = random_vector(rng, 4, 2.0);
    const Eigen::VectorXd xi = p.f2_subgradient(anchor);
    const Eigen::VectorXd u = solve_subproblem(p, anchor, xi, 0.5);
    CHECK((u - anchor).norm() <= 1e-10 * (1.0 + anchor.norm()));
}

TEST_CASE("missing subproblem solver is a configuration error") {
    const auto inst = make_instance(20, 4, 0.0, 1);
    DcProblem p = phase::make_dc_problem(inst, KernelKind::Quartic, 10.0);
    p.subproblem_solver = nullptr;
    CHECK_THROWS_AS(
        solve_subproblem(p, Eigen::VectorXd::Zero(4), Eigen::VectorXd::Zero(4), 0.1),
        ConfigError);
}

TEST_CASE("non-finite data raises numeric errors") {
    const auto inst = make_instance(20, 4, 0.0, 1);
    const DcProblem p = phase::make_dc_problem(inst, KernelKind::Quartic, 10.0);
    Eigen::VectorXd bad = Eigen::VectorXd::Zero(4);
    bad[1] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(solve_subproblem(p, Eigen::VectorXd::Zero(4), bad, 0.1), NumericError);
}

TEST_CASE("per-step descent inequality holds along a BPDCA run") {
    const auto inst = make_instance(500, 6, 1.0, 21);
    const double bound = phase::l_bound_dc_sum(*inst);
    const DcProblem p = phase::make_dc_problem(inst, KernelKind::Quartic, bound);

    SolverConfig config;
    config.lambda = 0.95 / bound;
    const Eigen::VectorXd x0 = phase::spectral_initialization(*inst);
    const SolveResult result = run_bpdca(p, config, x0);
    REQUIRE(result.termination_reason == TerminationReason::Converged);

    const double scale = 1.0 + std::abs(config.lambda * result.trace.front().psi);
    CHECK(result.max_descent_violation <= 1e-10 * scale);
}

TEST_CASE("a converged iterate is a fixed point up to the tolerance") {
    const auto inst = make_instance(500, 6, 1.0, 23);
    const double bound = phase::l_bound_dc_sum(*inst);
    const DcProblem p = phase::make_dc_problem(inst, KernelKind::Quartic, bound);

    SolverConfig config;
    config.lambda = 1.0 / bound;
    const SolveResult result = run_bpdca(p, config, phase::spectral_initialization(*inst));
    REQUIRE(result.termination_reason == TerminationReason::Converged);

    const Eigen::VectorXd& x = result.final_iterate;
    const Eigen::VectorXd next =
        solve_subproblem(p, x, p.f2_subgradient(x), config.lambda);
    CHECK((next - x).norm() / std::max(1.0, x.norm()) <= config.termination_tol);
}
