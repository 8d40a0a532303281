#include "bpdc/phase_retrieval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include "bpdc/csv.hpp"
#include "bpdc/errors.hpp"
#include "bpdc/numerics.hpp"
#include "bpdc/rng.hpp"

namespace bpdc::phase {

namespace {

void check_dim(const PhaseRetrievalInstance& inst, const Eigen::VectorXd& x,
               const char* op) {
    if (x.size() != inst.d())
        throw ConfigError(std::string(op) + ": dimension mismatch, expected " +
                          std::to_string(inst.d()) + ", got " + std::to_string(x.size()));
}

} // namespace

PhaseRetrievalInstance generate_gaussian_instance(Eigen::Index m, Eigen::Index d,
                                                  double sparsity, double theta_reg,
                                                  std::uint64_t seed) {
    if (m < 1 || d < 1) throw ConfigError("instance: m and d must be at least 1");
    if (!(sparsity > 0.0 && sparsity <= 1.0))
        throw ConfigError("instance: sparsity must lie in (0, 1]");
    if (theta_reg < 0.0) throw ConfigError("instance: theta_reg must be nonnegative");

    Rng rng(seed);
    PhaseRetrievalInstance inst;
    inst.seed = seed;
    inst.theta_reg = theta_reg;
    inst.sensing.resize(m, d);
    for (Eigen::Index r = 0; r < m; ++r)
        for (Eigen::Index j = 0; j < d; ++j) inst.sensing(r, j) = rng.gaussian();

    const auto nonzeros = static_cast<Eigen::Index>(
        std::ceil(sparsity * static_cast<double>(d)));
    std::vector<Eigen::Index> indices(static_cast<std::size_t>(d));
    std::iota(indices.begin(), indices.end(), Eigen::Index{0});
    // partial Fisher-Yates: the first `nonzeros` entries form the support
    for (Eigen::Index i = 0; i < nonzeros; ++i) {
        const auto j = i + static_cast<Eigen::Index>(
                               rng.below(static_cast<std::uint64_t>(d - i)));
        std::swap(indices[static_cast<std::size_t>(i)], indices[static_cast<std::size_t>(j)]);
    }
    std::sort(indices.begin(), indices.begin() + nonzeros);

    inst.ground_truth = Eigen::VectorXd::Zero(d);
    for (Eigen::Index i = 0; i < nonzeros; ++i)
        inst.ground_truth[indices[static_cast<std::size_t>(i)]] = rng.gaussian();

    inst.measurements = (inst.sensing * inst.ground_truth).array().square();
    return inst;
}

double f1_value(const PhaseRetrievalInstance& inst, const Eigen::VectorXd& x) {
    check_dim(inst, x, "f1 value");
    const Eigen::ArrayXd z = (inst.sensing * x).array();
    return 0.25 * (z.square().square().sum() + inst.measurements.squaredNorm());
}

Eigen::VectorXd f1_gradient(const PhaseRetrievalInstance& inst, const Eigen::VectorXd& x) {
    check_dim(inst, x, "f1 gradient");
    const Eigen::ArrayXd z = (inst.sensing * x).array();
    return inst.sensing.transpose() * (z * z * z).matrix();
}

double f2_value(const PhaseRetrievalInstance& inst, const Eigen::VectorXd& x) {
    check_dim(inst, x, "f2 value");
    const Eigen::ArrayXd z = (inst.sensing * x).array();
    return 0.5 * (inst.measurements.array() * z.square()).sum();
}

Eigen::VectorXd f2_gradient(const PhaseRetrievalInstance& inst, const Eigen::VectorXd& x) {
    check_dim(inst, x, "f2 gradient");
    const Eigen::ArrayXd z = (inst.sensing * x).array();
    return inst.sensing.transpose() * (inst.measurements.array() * z).matrix();
}

double objective(const PhaseRetrievalInstance& inst, const Eigen::VectorXd& x) {
    check_dim(inst, x, "objective");
    const Eigen::ArrayXd z = (inst.sensing * x).array();
    const double fidelity = 0.25 * (z.square() - inst.measurements.array()).square().sum();
    return fidelity + inst.theta_reg * x.lpNorm<1>();
}

double l_bound_bpg(const PhaseRetrievalInstance& inst) {
    const Eigen::ArrayXd row_sq = inst.sensing.rowwise().squaredNorm().array();
    return (3.0 * row_sq.square() + row_sq * inst.measurements.array().abs()).sum();
}

double l_bound_dc_sum(const PhaseRetrievalInstance& inst) {
    const Eigen::VectorXd row_sq = inst.sensing.rowwise().squaredNorm();
    const Eigen::MatrixXd weighted =
        inst.sensing.transpose() * row_sq.asDiagonal() * inst.sensing;
    return 3.0 * spectral_norm(weighted, mix_seed(inst.seed, 1));
}

double l_bound_gaussian(const PhaseRetrievalInstance& inst, double delta) {
    if (delta < 0.0) throw ConfigError("l_bound_gaussian: delta must be nonnegative");
    const Eigen::MatrixXd gram = inst.sensing.transpose() * inst.sensing;
    return 9.0 * spectral_norm(gram, mix_seed(inst.seed, 2)) + delta;
}

Eigen::VectorXd closed_form_subproblem(const Eigen::VectorXd& c, double tau,
                                       KernelKind kind) {
    if (tau < 0.0) throw ConfigError("closed_form_subproblem: tau must be nonnegative");
    if (kind != KernelKind::Quartic && kind != KernelKind::QuarticPlusQuadratic)
        throw ConfigError("closed_form_subproblem: kernel kind must be quartic or quartic-quad");

    const Eigen::VectorXd s = soft_threshold(c, tau);
    const double norm_s = s.norm();
    if (norm_s == 0.0) return Eigen::VectorXd::Zero(c.size());

    const double radius = kind == KernelKind::Quartic ? std::cbrt(norm_s)
                                                      : cubic_plus_linear_root(norm_s);
    return (radius / norm_s) * s;
}

Eigen::VectorXd spectral_initialization(const PhaseRetrievalInstance& inst) {
    if (inst.m() < 1) throw ConfigError("spectral_initialization: empty instance");
    const double b_sum = inst.measurements.sum();
    if (b_sum == 0.0) {
        std::cerr << "spectral_initialization: all-zero measurements, returning zero vector\n";
        return Eigen::VectorXd::Zero(inst.d());
    }

    const Eigen::MatrixXd y_matrix =
        (inst.sensing.transpose() * inst.measurements.asDiagonal() * inst.sensing) /
        static_cast<double>(inst.m());
    Eigen::VectorXd v = power_iteration(y_matrix, mix_seed(inst.seed, 3)).eigenvector;

    Eigen::Index lead = 0;
    v.cwiseAbs().maxCoeff(&lead);
    if (v[lead] < 0.0) v = -v;

    const double scale = std::sqrt(static_cast<double>(inst.d()) * b_sum /
                                   inst.sensing.squaredNorm());
    return scale * v;
}

SolveResult run_wirtinger_flow(const PhaseRetrievalInstance& inst,
                               const SolverConfig& config,
                               const Eigen::VectorXd* start) {
    if (inst.theta_reg != 0.0)
        throw ConfigError("wirtinger flow: requires theta_reg = 0");
    if (config.max_iterations < 1)
        throw ConfigError("wirtinger flow: max_iterations must be at least 1");
    if (config.termination_tol <= 0.0)
        throw ConfigError("wirtinger flow: termination_tol must be positive");

    constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
    constexpr double kRampIterations = 330.0;
    constexpr double kMuMax = 0.4;
    constexpr double kDivergenceCap = 1e30;

    SolveResult result;
    const auto start_time = std::chrono::steady_clock::now();
    const auto record_wall = [&] {
        result.wall_time_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time)
                .count();
    };

    Eigen::VectorXd x = start ? *start : spectral_initialization(inst);
    check_dim(inst, x, "wirtinger flow start");
    const double norm0_sq = x.squaredNorm();
    double fidelity = objective(inst, x);
    if (config.record_trace)
        result.trace.push_back({0, fidelity, 0.0, 0.0, 0.0, false, kNaN, 0.0});

    if (norm0_sq == 0.0) {
        // zero measurements; the zero vector is already stationary
        result.final_iterate = std::move(x);
        result.iterations_used = 0;
        result.termination_reason = TerminationReason::Converged;
        record_wall();
        return result;
    }

    const double inv_m = 1.0 / static_cast<double>(inst.m());
    result.termination_reason = TerminationReason::MaxIterations;
    for (int k = 1; k <= config.max_iterations; ++k) {
        const double mu = std::min(1.0 - std::exp(-k / kRampIterations), kMuMax);
        const Eigen::ArrayXd z = (inst.sensing * x).array();
        // Wirtinger-calculus gradient of the averaged residual
        // 1/(4m) sum_r (<a_r,x>^2 - b_r)^2; half the real gradient.
        const Eigen::VectorXd grad =
            0.5 * inv_m *
            (inst.sensing.transpose() *
             ((z.square() - inst.measurements.array()) * z).matrix());
        const Eigen::VectorXd x_next = x - (mu / norm0_sq) * grad;

        fidelity = objective(inst, x_next);
        const double step_norm = (x_next - x).norm();
        if (config.record_trace)
            result.trace.push_back({k, fidelity, step_norm, 0.0, 0.0, false, kNaN, 0.0});
        result.iterations_used = k;
        x = x_next;

        if (!std::isfinite(fidelity) || fidelity > kDivergenceCap) {
            result.termination_reason = TerminationReason::NumericFailure;
            result.message = "objective diverged";
            result.final_iterate = std::move(x);
            record_wall();
            return result;
        }
        if (step_norm / std::max(1.0, x.norm()) <= config.termination_tol) {
            result.termination_reason = TerminationReason::Converged;
            break;
        }
    }

    result.final_iterate = std::move(x);
    record_wall();
    return result;
}

double accuracy_metric(const PhaseRetrievalInstance& inst, const Eigen::VectorXd& x_hat) {
    check_dim(inst, x_hat, "accuracy");
    const double gap = std::abs(objective(inst, x_hat) - objective(inst, inst.ground_truth));
    return std::log10(gap); // -inf when the gap is exactly zero
}

double relative_error(const PhaseRetrievalInstance& inst, const Eigen::VectorXd& x_hat) {
    check_dim(inst, x_hat, "relative error");
    const double truth_norm = inst.ground_truth.norm();
    if (truth_norm == 0.0)
        return x_hat.norm() == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    const double plus = (x_hat - inst.ground_truth).norm();
    const double minus = (-x_hat - inst.ground_truth).norm();
    return std::min(plus, minus) / truth_norm;
}

DcProblem make_dc_problem(std::shared_ptr<const PhaseRetrievalInstance> inst,
                          KernelKind kind, double smoothness) {
    if (!inst) throw ConfigError("make_dc_problem: null instance");
    if (kind != KernelKind::Quartic && kind != KernelKind::QuarticPlusQuadratic)
        throw ConfigError("make_dc_problem: kernel kind must be quartic or quartic-quad");
    if (smoothness <= 0.0)
        throw ConfigError("make_dc_problem: smoothness constant must be positive");

    DcProblem p;
    p.dimension = inst->d();
    p.kernel = Kernel(kind, inst->d());
    p.smad_constant = smoothness;
    p.reg = inst->theta_reg > 0.0 ? Regularizer::l1(inst->theta_reg)
                                  : Regularizer::zero();
    p.f1_value = [inst](const Eigen::VectorXd& x) { return f1_value(*inst, x); };
    p.f1_gradient = [inst](const Eigen::VectorXd& x) { return f1_gradient(*inst, x); };
    p.f2_value = [inst](const Eigen::VectorXd& x) { return f2_value(*inst, x); };
    p.f2_subgradient = [inst](const Eigen::VectorXd& x) { return f2_gradient(*inst, x); };
    p.subproblem_solver = [](const DcProblem& problem, const Eigen::VectorXd& anchor,
                             const Eigen::VectorXd& xi, double lambda) {
        const Eigen::VectorXd c =
            problem.kernel.gradient(anchor) -
            lambda * (problem.f1_gradient(anchor) - xi).eval();
        const double tau =
            problem.reg.kind == Regularizer::Kind::L1 ? lambda * problem.reg.weight : 0.0;
        return closed_form_subproblem(c, tau, problem.kernel.kind());
    };
    return p;
}

void save_instance(const PhaseRetrievalInstance& inst, std::ostream& out) {
    std::string line;
    line += std::to_string(inst.m());
    line += ',';
    line += std::to_string(inst.d());
    line += ',';
    append_double(line, inst.theta_reg);
    line += ',';
    line += std::to_string(inst.seed);
    line += '\n';
    out << line;

    const auto write_row = [&out, &line](const double* data, Eigen::Index n) {
        line.clear();
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i > 0) line += ',';
            append_double(line, data[i]);
        }
        line += '\n';
        out << line;
    };
    for (Eigen::Index r = 0; r < inst.m(); ++r) {
        const Eigen::VectorXd row = inst.sensing.row(r);
        write_row(row.data(), row.size());
    }
    write_row(inst.measurements.data(), inst.measurements.size());
    write_row(inst.ground_truth.data(), inst.ground_truth.size());
}

namespace {

std::vector<double> parse_csv_line(const std::string& line, const char* what) {
    std::vector<double> values;
    std::size_t begin = 0;
    while (begin <= line.size()) {
        std::size_t end = line.find(',', begin);
        if (end == std::string::npos) end = line.size();
        try {
            values.push_back(std::stod(line.substr(begin, end - begin)));
        } catch (const std::exception&) {
            throw ConfigError(std::string("instance file: malformed ") + what);
        }
        begin = end + 1;
    }
    return values;
}

} // namespace

PhaseRetrievalInstance load_instance(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("instance file: missing header");
    const std::vector<double> header = parse_csv_line(line, "header");
    if (header.size() != 4) throw ConfigError("instance file: header must have 4 fields");

    const auto m = static_cast<Eigen::Index>(header[0]);
    const auto d = static_cast<Eigen::Index>(header[1]);
    if (m < 1 || d < 1) throw ConfigError("instance file: invalid dimensions");

    PhaseRetrievalInstance inst;
    inst.theta_reg = header[2];
    inst.seed = static_cast<std::uint64_t>(header[3]);
    inst.sensing.resize(m, d);
    for (Eigen::Index r = 0; r < m; ++r) {
        if (!std::getline(in, line)) throw ConfigError("instance file: truncated sensing rows");
        const std::vector<double> row = parse_csv_line(line, "sensing row");
        if (static_cast<Eigen::Index>(row.size()) != d)
            throw ConfigError("instance file: sensing row width mismatch");
        for (Eigen::Index j = 0; j < d; ++j) inst.sensing(r, j) = row[static_cast<std::size_t>(j)];
    }

    if (!std::getline(in, line)) throw ConfigError("instance file: missing measurements");
    const std::vector<double> b = parse_csv_line(line, "measurements");
    if (static_cast<Eigen::Index>(b.size()) != m)
        throw ConfigError("instance file: measurement count mismatch");
    inst.measurements = Eigen::Map<const Eigen::VectorXd>(b.data(), m);

    if (!std::getline(in, line)) throw ConfigError("instance file: missing ground truth");
    const std::vector<double> x = parse_csv_line(line, "ground truth");
    if (static_cast<Eigen::Index>(x.size()) != d)
        throw ConfigError("instance file: ground truth width mismatch");
    inst.ground_truth = Eigen::Map<const Eigen::VectorXd>(x.data(), d);
    return inst;
}

void save_instance_file(const PhaseRetrievalInstance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open instance file for writing: " + path);
    save_instance(inst, out);
}

PhaseRetrievalInstance load_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open instance file: " + path);
    return load_instance(in);
}

} // namespace bpdc::phase
