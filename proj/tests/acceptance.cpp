// Acceptance suite: end-to-end checks of the library and CLI at pinned
// parameters and tolerances, one pass/fail line per criterion. The CLI
// binary path is expected as argv[1] (criterion 11 runs it).

#include "sympflow/cli.hpp"
#include "sympflow/config_io.hpp"
#include "sympflow/errors.hpp"
#include "sympflow/stationary.hpp"
#include "sympflow/verify.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <sys/wait.h>

using namespace sympflow;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("criterion %2d [%s] %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
    if (!pass) ++failures;
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// ---------------------------------------------------------------- criterion 1
void exact_bracket_algebra() {
    Stopwatch clock;
    TrialRng rng(101);
    int ok = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        const Polynomial f = random_polynomial(rng, 6, 6, false);
        const Polynomial g = random_polynomial(rng, 6, 6, false);
        const Polynomial h = random_polynomial(rng, 6, 6, false);
        const bool anti = (poisson_bracket(f, g) + poisson_bracket(g, f)).is_zero();
        const bool leibniz =
            poisson_bracket(f, g * h) == poisson_bracket(f, g) * h + g * poisson_bracket(f, h);
        const bool jacobi = (poisson_bracket(poisson_bracket(f, g), h) +
                             poisson_bracket(poisson_bracket(g, h), f) +
                             poisson_bracket(poisson_bracket(h, f), g))
                                .is_zero();
        if (anti && leibniz && jacobi) ++ok;
    }
    const double elapsed = clock.seconds();
    report(1, ok == trials && elapsed < 5.0,
           "exact bracket algebra (antisymmetry, Leibniz, Jacobi): " + std::to_string(ok) + "/" +
               std::to_string(trials) + " triples of degree <= 6, " + fmt(elapsed) + " s");
}

// ---------------------------------------------------------------- criterion 2
void dissipation_propositions() {
    TrialRng rng(102);
    int ok = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        const VectorField v = random_vector_field(rng, 4);
        const Polynomial f = random_polynomial(rng, 4, 4, false);
        const Polynomial g = random_polynomial(rng, 4, 4, false);
        bool pass = dissipation(v, f, g) == -divergence(v) * poisson_bracket(f, g);

        const Polynomial gen = random_polynomial(rng, 4, 4, true);
        const VectorField hv = hamiltonian_vector_field(gen);
        pass = pass && dissipation(hv, f, g).is_zero();
        const auto recovered = hamiltonian_of(hv);
        pass = pass && recovered && hamiltonian_vector_field(*recovered) == hv;
        if (!divergence(v).is_zero()) pass = pass && !hamiltonian_of(v).has_value();
        if (pass) ++ok;
    }
    report(2, ok == trials,
           "vector-field dissipation law and Hamiltonian round trip: " + std::to_string(ok) +
               "/" + std::to_string(trials) + " random fields exact");
}

// ---------------------------------------------------------------- criterion 3
void oscillator_dilation() {
    DhoParams dho{1, 1, Rational(9, 16), 2};
    const ModelSpec model = build_dho_model(dho);
    const bool drift_ok = drift_field(model) ==
                          VectorField{parse_polynomial("p"), parse_polynomial("-q - 9/16*p")};
    const bool div_ok =
        drift_divergence_from_channels(model) == Polynomial::constant(Rational(-9, 16));

    const ModelSpec ex1 = build_example1_model(parse_polynomial("1/2*p^2 + 1/2*q^2"),
                                               {Rational(1)}, {Rational(2)});
    const auto h = hamiltonian_of(drift_field(ex1));
    const bool ex1_ok = h.has_value() && drift_field(ex1) == hamiltonian_vector_field(
                                             parse_polynomial("1/2*p^2 + 1/2*q^2"));
    report(3, drift_ok && div_ok && ex1_ok,
           "quadratic-noise dilation reproduces the damped oscillator exactly; linear-noise "
           "drift stays Hamiltonian");
}

// ---------------------------------------------------------------- criterion 4
void dissipation_identity() {
    Stopwatch clock;
    TrialRng rng(104);
    int ok = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        const ModelSpec model = random_model(rng, 4, 4, true);
        const Polynomial f = random_polynomial(rng, 3, 4, false);
        const Polynomial g = random_polynomial(rng, 3, 4, false);
        if (dissipation(model, f, g) == channelwise_dissipation(model, f, g)) ++ok;
    }
    const double elapsed = clock.seconds();
    report(4, ok == trials && elapsed < 30.0,
           "dissipation identity in channel form: " + std::to_string(ok) + "/" +
               std::to_string(trials) + " random models exact, " + fmt(elapsed) + " s");
}

// ---------------------------------------------------------------- criterion 5
void published_z0_agreement() {
    const Rational grid[] = {Rational(1, 2), Rational(1), Rational(2)};
    double worst = 0.0;
    int points = 0;
    for (const auto& m : grid)
        for (const auto& w : grid)
            for (const auto& gamma : grid)
                for (const auto& eps : grid)
                    for (const auto& s : grid) {
                        LinearModelParams p;
                        p.m = m;
                        p.omega = w;
                        p.gamma = gamma;
                        p.epsilon = eps;
                        p.s = s;
                        p.z = 0;
                        const LinearDriftDiffusion ldd = linear_drift_diffusion(p);
                        if (!is_hurwitz(ldd.A)) continue;
                        ++points;
                        worst = std::max(worst, (published_covariance_z0(p) -
                                                 lyapunov_solve(ldd.A, ldd.g))
                                                    .cwiseAbs()
                                                    .maxCoeff());
                    }
    const bool grid_ok = worst <= 1e-9;

    const LinearModelParams base = default_linear_params();
    const LinearDriftDiffusion ldd = linear_drift_diffusion(base);
    const Eigen::Matrix2d sigma = lyapunov_solve(ldd.A, ldd.g);
    Eigen::Matrix2d pinned;
    pinned << 1.125, -0.25, -0.25, 1.0;
    const bool instance_ok =
        (sigma - pinned).cwiseAbs().maxCoeff() <= 1e-9 &&
        (published_covariance_z0(base) - pinned).cwiseAbs().maxCoeff() <= 1e-9 &&
        lyapunov_residual(ldd.A, ldd.g, sigma) <= 1e-12;

    report(5, grid_ok && instance_ok,
           "published z=0 covariance vs Lyapunov: instance " +
               std::string(instance_ok ? "ok" : "MISMATCH") + ", grid max |diff| = " +
               fmt(worst) + " over " + std::to_string(points) + " points (tolerance 1e-9)");
    if (!grid_ok) {
        std::printf(
            "              note: known defect in the published closed form, not in the "
            "solver. The published qq entry divides by eps^2 m^2 w^2 where the Lyapunov\n"
            "              solution of A sigma + sigma A^T = -g (with the published A and g) "
            "divides by eps m^2 w^2; the entry is also dimensionally inconsistent.\n"
            "              The two agree on the eps = 1 slice, and agree everywhere after "
            "multiplying the published qq entry by eps (checked to 1e-13 on this grid).\n");
    }
}

// ---------------------------------------------------------------- criterion 6
void monte_carlo_vs_oracle() {
    const LinearDriftDiffusion ldd = linear_drift_diffusion(default_linear_params());
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = 40.0;
    cfg.seed = 0;
    const EnsembleSummary summary =
        simulate_ensemble(SdeSystem::from_linear(ldd), {1.0, 0.0}, cfg, 10000);
    const Eigen::Matrix2d sigma = lyapunov_solve(ldd.A, ldd.g);
    double worst = 0.0;
    bool pass = true;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double pull =
                std::abs(summary.covariance(i, j) - sigma(i, j)) / summary.covariance_se(i, j);
            worst = std::max(worst, pull);
            pass = pass && pull <= 3.0;
        }
    report(6, pass,
           "terminal covariance of 10^4 paths (T=40, dt=1e-3) within 3 SE of the Lyapunov "
           "solution: worst pull = " +
               fmt(worst) + " SE");
}

// ---------------------------------------------------------------- criterion 7
void strong_order() {
    const double dts[] = {1e-2, 5e-3, 2.5e-3, 1.25e-3};
    const StrongOrderResult result = measure_strong_order(
        linear_drift_diffusion(default_linear_params()), {1.0, 0.0}, 1.0, dts, 2000, 0);
    report(7, result.order >= 0.8 && result.order <= 1.2,
           "strong order vs exact transition oracle (2000 paths): order = " + fmt(result.order) +
               " in [0.8, 1.2]");
}

// ---------------------------------------------------------------- criterion 8
void pathwise_canonicality() {
    // (a) deterministic damped flow
    IntegratorConfig det_cfg;
    det_cfg.dt = 1e-5;
    det_cfg.t_final = 1.0;
    det_cfg.with_jacobian = true;
    det_cfg.record_stride = 1 << 30;
    const Trajectory det_traj = simulate_path(
        SdeSystem::from_field({parse_polynomial("p"), parse_polynomial("-q - 1/2*p")}),
        {1.0, 0.0}, det_cfg);
    const double det_err =
        std::abs(det_traj.jacobians.back().determinant() - std::exp(-0.5));
    const bool a_ok = det_err <= 1e-4;

    // (b) plain-noise canonicality order
    DhoParams dho{1, 1, Rational(9, 16), 2};
    const SdeSystem example2 = SdeSystem::from_model(build_dho_model(dho));
    const double dts[] = {8e-3, 4e-3, 2e-3, 1e-3};
    const DetJOrderResult order =
        measure_det_j_order(example2, {1.0, 0.0}, 1.0, dts, 300, 1.0, 0);
    const bool b_ok = order.order >= 0.4;

    // (c) conjugate-pair linear model: system bracket decays at rate gamma
    IntegratorConfig lin_cfg;
    lin_cfg.dt = 1e-4;
    lin_cfg.t_final = 1.0;
    lin_cfg.seed = 0;
    lin_cfg.with_jacobian = true;
    lin_cfg.record_stride = 1 << 30;
    const Trajectory lin_traj = simulate_path(
        SdeSystem::from_linear(linear_drift_diffusion(default_linear_params())), {1.0, 0.0},
        lin_cfg);
    const double lin_err =
        std::abs(lin_traj.jacobians.back().determinant() - std::exp(-0.5));
    const bool c_ok = lin_err <= 1e-3;

    report(8, a_ok && b_ok && c_ok,
           "pathwise canonicality: deterministic |det J - e^{-gamma}| = " + fmt(det_err) +
               " (<= 1e-4); plain-noise median-|det J - 1| order = " + fmt(order.order) +
               " (>= 0.4); pair-noise |det J - e^{-gamma}| = " + fmt(lin_err) + " (<= 1e-3)");
}

// ---------------------------------------------------------------- criterion 9
void zero_cross_and_audit() {
    Stopwatch clock;
    const LinearModelParams params = default_linear_params();
    const ZeroCrossResult zc = find_zero_cross_z(params);
    const bool zc_ok = std::abs(zc.z_star + 0.25) <= 1e-9 &&
                       (zc.sigma - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() <= 1e-10 &&
                       std::abs(zc.k_b_t - 1.0) <= 1e-9;

    const auto verdicts = audit_published_formulas(params);
    std::map<std::string, bool> match;
    for (const auto& v : verdicts) match[v.item] = v.match;
    const bool audit_ok = match.at("covariance-z0") && !match.at("zero-cross-z") &&
                          !match.at("equipartition-temperature");
    const double elapsed = clock.seconds();
    report(9, zc_ok && audit_ok && elapsed < 1.0,
           "zero-cross z* = " + fmt(zc.z_star) + ", sigma = I, k_B T = " + fmt(zc.k_b_t) +
               "; audit: z=0 matrix Match, published z* and k_B T Discrepant, " + fmt(elapsed) +
               " s");
}

// --------------------------------------------------------------- criterion 10
void quantum_mapping() {
    const QuantumComparisonReport rep =
        quantum_comparison({2.0, 1.0, 1.0, 0.5, 0.0, 0.25});
    const bool coeff_ok = rep.max_drift_diff <= 1e-12 && rep.max_diffusion_diff <= 1e-12;
    const bool mu_ok = std::abs(rep.mu_match - 0.25) <= 1e-12;
    const std::string text = rep.text();
    const bool report_ok = text.find("mu = gamma/2") != std::string::npos &&
                           text.find("published claim") != std::string::npos;

    const QuantumComparisonReport thermal = quantum_comparison({1.0, 1.0, 1.0, 0.5, 1.0, 0.0});
    const bool kbt_ok = thermal.k_b_t.has_value() &&
                        std::abs(*thermal.k_b_t - 1.0 / std::log(2.0)) <= 1e-12;

    report(10, coeff_ok && mu_ok && report_ok && kbt_ok,
           "quantum coefficient family matches the classical model under s=hbar/2, "
           "eps=1/(m w) to 1e-12; matching mu = gamma/2 reported and published mu=gamma "
           "claim flagged; k_B T(n=1) = 1/ln 2");
}

// --------------------------------------------------------------- criterion 11
struct CommandResult {
    int code;
    std::string output;
};

CommandResult run_command(const std::string& command) {
    std::FILE* pipe = popen((command + " 2>&1").c_str(), "r");
    if (!pipe) return {-1, "popen failed"};
    std::string output;
    char buf[4096];
    while (std::fgets(buf, sizeof buf, pipe)) output += buf;
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void reproducibility(const std::string& cli) {
    const fs::path dir = fs::temp_directory_path() / "sympflow_acceptance";
    fs::create_directories(dir);
    const fs::path model = dir / "linear.json";
    {
        std::ofstream out(model);
        out << R"({"type": "linear", "params": {"m": 1, "omega": 1, "gamma": "1/2", )"
            << R"("epsilon": 1, "s": 1, "z": 0}})";
    }

    bool pass = true;
    std::string detail;
    if (cli.empty()) {
        pass = false;
        detail = "CLI path not supplied (argv[1])";
    } else {
        const std::string base = "'" + cli + "' simulate --model '" + model.string() +
                                 "' --t-final 1 --dt 0.001 --paths 50 --seed 7 --jacobian "
                                 "--record-stride 100 --out '";
        const CommandResult r1 = run_command(base + (dir / "a.csv").string() + "'");
        const CommandResult r2 = run_command(base + (dir / "b.csv").string() + "'");
        const bool csv_ok = r1.code == 0 && r2.code == 0 &&
                            read_file(dir / "a.csv") == read_file(dir / "b.csv") &&
                            !read_file(dir / "a.csv").empty();

        const std::string steady_cmd = "'" + cli + "' steady --model '" + model.string() +
                                       "' --find-z --out '";
        const CommandResult s1 = run_command(steady_cmd + (dir / "s1.txt").string() + "'");
        const CommandResult s2 = run_command(steady_cmd + (dir / "s2.txt").string() + "'");
        const bool report_ok = s1.code == 0 && s2.code == 0 &&
                               read_file(dir / "s1.txt") == read_file(dir / "s2.txt") &&
                               !read_file(dir / "s1.txt").empty();

        const std::string verify_cmd =
            "'" + cli + "' verify --suite theorem2 --trials 100 --degree 4 --seed 7";
        const CommandResult v1 = run_command(verify_cmd);
        const CommandResult v2 = run_command(verify_cmd);
        const bool verify_ok = v1.code == 0 && v1.output == v2.output &&
                               v1.output.find("100/100") != std::string::npos;

        pass = csv_ok && report_ok && verify_ok;
        detail = std::string("CSV bytes ") + (csv_ok ? "identical" : "DIFFER") +
                 ", steady reports " + (report_ok ? "identical" : "DIFFER") +
                 ", verify output " + (verify_ok ? "identical (exit 0)" : "DIFFER");
    }

    // ensemble statistics do not depend on the worker count
    IntegratorConfig cfg;
    cfg.dt = 1e-2;
    cfg.t_final = 2.0;
    cfg.seed = 3;
    const SdeSystem system =
        SdeSystem::from_linear(linear_drift_diffusion(default_linear_params()));
    const EnsembleSummary w1 = simulate_ensemble(system, {1.0, 0.0}, cfg, 501, 1.0, 1);
    const EnsembleSummary w4 = simulate_ensemble(system, {1.0, 0.0}, cfg, 501, 1.0, 4);
    const bool workers_ok = w1.mean == w4.mean && w1.covariance == w4.covariance &&
                            w1.covariance_se == w4.covariance_se;
    pass = pass && workers_ok;

    report(11, pass,
           "reproducibility: " + detail + "; ensemble independent of worker count: " +
               (workers_ok ? "yes" : "NO"));
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    exact_bracket_algebra();
    dissipation_propositions();
    oscillator_dilation();
    dissipation_identity();
    published_z0_agreement();
    monte_carlo_vs_oracle();
    strong_order();
    pathwise_canonicality();
    zero_cross_and_audit();
    quantum_mapping();
    reproducibility(cli);
    if (failures > 0) {
        std::printf("acceptance: %d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("acceptance: all criteria passed\n");
    return 0;
}
