#include "sympflow/cli.hpp"

#include "sympflow/config_io.hpp"
#include "sympflow/errors.hpp"
#include "sympflow/manifest.hpp"
#include "sympflow/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

namespace sympflow {

namespace {

std::string num_text(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct VerifyArgs {
    std::string suite = "all";
    int trials = 100;
    int degree = 4;
    std::uint64_t seed = 0;
    bool strict = false;
};

int cmd_verify(const VerifyArgs& args) {
    VerifyOptions options{args.trials, args.degree, args.seed};
    std::vector<SuiteResult> results;
    const bool all = args.suite == "all";
    if (all || args.suite == "core") results.push_back(run_core_suite(options));
    if (all || args.suite == "theorem1") results.push_back(run_theorem1_suite(options));
    if (all || args.suite == "theorem2") results.push_back(run_theorem2_suite(options));
    if (all || args.suite == "integrator") results.push_back(run_integrator_suite(options));
    if (all || args.suite == "paper-formulas")
        results.push_back(run_published_formula_suite(options));

    bool failed = false;
    int discrepant = 0;
    int audits = 0;
    for (const auto& r : results) {
        std::cout << suite_report_text(r);
        failed = failed || !r.all_checks_pass();
        discrepant += r.discrepant_count();
        audits += static_cast<int>(r.audits.size());
    }
    std::cout << "verify: " << (failed ? "FAIL" : "PASS");
    if (audits > 0)
        std::cout << " (" << audits << " audit items, " << discrepant << " discrepant)";
    std::cout << "\n";
    if (failed) return 1;
    if (args.strict && discrepant > 0) return 1;
    return 0;
}

struct SimulateArgs {
    std::string model;
    double t_final = 40.0;
    double dt = 1e-3;
    std::int64_t paths = 10000;
    std::uint64_t seed = 0;
    bool jacobian = false;
    std::int64_t record_stride = 1;
    std::string out;
};

int cmd_simulate(const SimulateArgs& args) {
    Stopwatch clock;
    const LoadedModel model = load_model_config(args.model);
    const SdeSystem system = model.compile();

    IntegratorConfig cfg;
    cfg.dt = args.dt;
    cfg.t_final = args.t_final;
    cfg.seed = args.seed;
    cfg.with_jacobian = args.jacobian;
    cfg.record_stride = args.record_stride;
    cfg.validate();
    if (args.paths < 1) throw DomainError("--paths must be at least 1");

    std::ofstream out(args.out, std::ios::binary);
    if (!out) throw ParseError("cannot open output file '" + args.out + "'");
    write_trajectory_csv_header(out, cfg.with_jacobian);

    const Eigen::Vector2d x0(0.0, 0.0);  // CLI runs start from the origin
    const auto [steps, dt_last] = plan_steps(cfg.dt, cfg.t_final);
    (void)dt_last;
    const std::int64_t rows_per_path = steps / cfg.record_stride + 2;
    const std::int64_t batch =
        std::clamp<std::int64_t>(2'000'000 / std::max<std::int64_t>(rows_per_path, 1), 1, 4096);
    const int workers =
        static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    std::int64_t rows = 0;
    std::vector<Eigen::Vector2d> terminal;
    std::vector<double> det_j;
    terminal.reserve(static_cast<std::size_t>(args.paths));
    std::vector<Trajectory> block(static_cast<std::size_t>(batch));
    for (std::int64_t base = 0; base < args.paths; base += batch) {
        const std::int64_t count = std::min(batch, args.paths - base);
        std::vector<std::string> errors(static_cast<std::size_t>(count));
        auto worker = [&](std::int64_t begin, std::int64_t end) {
            for (std::int64_t i = begin; i < end; ++i) {
                try {
                    block[static_cast<std::size_t>(i)] = simulate_path(
                        system, x0, cfg, static_cast<std::uint64_t>(base + i));
                } catch (const std::exception& e) {
                    errors[static_cast<std::size_t>(i)] = e.what();
                }
            }
        };
        if (count == 1 || workers == 1) {
            worker(0, count);
        } else {
            std::vector<std::thread> pool;
            const std::int64_t chunk = (count + workers - 1) / workers;
            for (int w = 0; w < workers; ++w) {
                const std::int64_t begin = w * chunk;
                const std::int64_t end = std::min(count, begin + chunk);
                if (begin >= end) break;
                pool.emplace_back(worker, begin, end);
            }
            for (auto& th : pool) th.join();
        }
        for (std::int64_t i = 0; i < count; ++i) {
            if (!errors[static_cast<std::size_t>(i)].empty())
                throw NumericError("path with seed index " + std::to_string(base + i) +
                                   " failed: " + errors[static_cast<std::size_t>(i)]);
            const Trajectory& traj = block[static_cast<std::size_t>(i)];
            write_trajectory_csv(out, base + i, traj);
            rows += static_cast<std::int64_t>(traj.times.size());
            terminal.push_back(traj.states.back());
            if (cfg.with_jacobian) det_j.push_back(traj.jacobians.back().determinant());
        }
    }
    out.close();

    RunManifest manifest;
    manifest.command = "simulate";
    manifest.seed = args.seed;
    manifest.parameters = {{"model", args.model},
                           {"t_final", num_text(args.t_final)},
                           {"dt", num_text(args.dt)},
                           {"paths", std::to_string(args.paths)},
                           {"seed", std::to_string(args.seed)},
                           {"jacobian", args.jacobian ? "true" : "false"},
                           {"record_stride", std::to_string(args.record_stride)},
                           {"x0", "(0, 0)"},
                           {"out", args.out}};
    manifest.inputs.push_back({args.model, fnv1a64_file(args.model)});
    manifest.duration_seconds = clock.seconds();
    write_manifest(manifest, args.out);

    std::cout << "simulate: wrote " << args.paths << " paths (" << rows << " rows) to "
              << args.out << "\n";
    if (args.paths >= 2)
        std::cout << ensemble_report_text(
            summarize_terminal_states(terminal, det_j, cfg.t_final));
    return 0;
}

struct SteadyArgs {
    std::string model;
    bool find_z = false;
    std::int64_t mc_check = 0;
    std::string out;
};

int cmd_steady(const SteadyArgs& args) {
    Stopwatch clock;
    const LoadedModel model = load_model_config(args.model);

    Eigen::Matrix2d a;
    Eigen::Matrix2d g;
    if (model.linear) {
        const LinearDriftDiffusion ldd = linear_drift_diffusion(*model.linear);
        a = ldd.A;
        g = ldd.g;
    } else {
        const SdeSystem system = model.compile();
        if (!system.drift_affine() || !system.additive_noise())
            throw DomainError(
                "steady-state analysis needs an affine drift and constant diffusion; "
                "model '" + args.model + "' is nonlinear");
        a = system.drift_matrix();
        g = system.diffusion_matrix();
    }

    const SteadyStateReport report = analyze_steady_state(a, g, model.spec, model.linear);
    std::ostringstream text;
    text << steady_report_text(report);

    if (args.find_z) {
        if (!model.linear)
            throw DomainError("--find-z needs a linear-type model config");
        const ZeroCrossResult zc = find_zero_cross_z(*model.linear);
        text.precision(12);
        text << "zero-cross search (sigma_qp(z*) = 0 inside the Hurwitz region)\n";
        text << "z* = " << zc.z_star << "\n";
        text << "sigma(z*) = [[" << zc.sigma(0, 0) << ", " << zc.sigma(0, 1) << "], ["
             << zc.sigma(1, 0) << ", " << zc.sigma(1, 1) << "]]\n";
        text << "k_B T = " << zc.k_b_t << "\n";
        text << "[machine]\n";
        text << "zstar=" << zc.z_star << "\n";
        text << "zstar_sigma_qq=" << zc.sigma(0, 0) << "\n";
        text << "zstar_sigma_qp=" << zc.sigma(0, 1) << "\n";
        text << "zstar_sigma_pp=" << zc.sigma(1, 1) << "\n";
        text << "zstar_k_b_t=" << zc.k_b_t << "\n";
    }

    if (args.mc_check > 0) {
        IntegratorConfig cfg;  // documented defaults
        cfg.dt = 1e-3;
        cfg.t_final = 40.0;
        cfg.seed = 0;
        const SdeSystem system = model.compile();
        const EnsembleSummary summary =
            simulate_ensemble(system, Eigen::Vector2d::Zero(), cfg, args.mc_check);
        bool agree = true;
        double worst = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const double pull = std::abs(summary.covariance(i, j) - report.sigma(i, j)) /
                                    summary.covariance_se(i, j);
                worst = std::max(worst, pull);
                agree = agree && pull <= 3.0;
            }
        text << "monte carlo check (" << args.mc_check << " paths, dt=1e-3, T=40, seed=0)\n";
        text << ensemble_report_text(summary);
        text.precision(4);
        text << "agreement with lyapunov solution within 3 SE: " << (agree ? "yes" : "NO")
             << " (worst pull " << worst << " SE)\n";
        text << "[machine]\nmc_agrees=" << (agree ? 1 : 0) << "\nmc_worst_pull=" << worst << "\n";
    }

    std::cout << text.str();
    if (!args.out.empty()) {
        std::ofstream file(args.out, std::ios::binary);
        if (!file) throw ParseError("cannot open output file '" + args.out + "'");
        file << text.str();
        file.close();
        RunManifest manifest;
        manifest.command = "steady";
        manifest.seed = 0;
        manifest.parameters = {{"model", args.model},
                               {"find_z", args.find_z ? "true" : "false"},
                               {"mc_check", std::to_string(args.mc_check)},
                               {"mc_dt", "0.001"},
                               {"mc_t_final", "40"},
                               {"mc_seed", "0"},
                               {"out", args.out}};
        manifest.inputs.push_back({args.model, fnv1a64_file(args.model)});
        manifest.duration_seconds = clock.seconds();
        write_manifest(manifest, args.out);
    }
    return 0;
}

struct QuantumArgs {
    double hbar = 2.0;
    double m = 1.0;
    double omega = 1.0;
    double gamma = 0.5;
    double n = 0.0;
    double mu = 0.25;
    std::string out;
};

int cmd_compare_quantum(const QuantumArgs& args) {
    Stopwatch clock;
    QuantumComparisonParams params{args.hbar, args.m, args.omega, args.gamma, args.n, args.mu};
    const QuantumComparisonReport report = quantum_comparison(params);
    const std::string text = report.text();
    std::cout << text;
    if (!args.out.empty()) {
        std::ofstream file(args.out, std::ios::binary);
        if (!file) throw ParseError("cannot open output file '" + args.out + "'");
        file << text;
        file.close();
        RunManifest manifest;
        manifest.command = "compare-quantum";
        manifest.parameters = {{"hbar", num_text(args.hbar)}, {"m", num_text(args.m)},
                               {"omega", num_text(args.omega)}, {"gamma", num_text(args.gamma)},
                               {"n", num_text(args.n)},         {"mu", num_text(args.mu)},
                               {"out", args.out}};
        manifest.duration_seconds = clock.seconds();
        write_manifest(manifest, args.out);
    }
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"canonical stochastic flows on phase space with symplectic noise"};
    app.require_subcommand(1);

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "run identity and integrator check suites");
    verify->add_option("--suite", verify_args.suite, "suite to run")
        ->check(CLI::IsMember({"core", "theorem1", "theorem2", "integrator", "paper-formulas",
                               "all"}));
    verify->add_option("--trials", verify_args.trials, "randomized trials per check")
        ->check(CLI::PositiveNumber);
    verify->add_option("--degree", verify_args.degree, "max polynomial degree for trials")
        ->check(CLI::PositiveNumber);
    verify->add_option("--seed", verify_args.seed, "master seed");
    verify->add_flag("--strict", verify_args.strict,
                     "treat published-formula discrepancies as failures");

    SimulateArgs sim_args;
    auto* simulate = app.add_subcommand("simulate", "integrate SDE paths and write a CSV");
    simulate->add_option("--model", sim_args.model, "model config file")->required();
    simulate->add_option("--t-final", sim_args.t_final, "final time")->required();
    simulate->add_option("--dt", sim_args.dt, "step size")->required();
    simulate->add_option("--paths", sim_args.paths, "number of paths")->required();
    simulate->add_option("--seed", sim_args.seed, "master seed")->required();
    simulate->add_flag("--jacobian", sim_args.jacobian, "co-integrate the flow Jacobian");
    simulate->add_option("--record-stride", sim_args.record_stride,
                         "record every k-th step (default 1)");
    simulate->add_option("--out", sim_args.out, "output CSV file")->required();

    SteadyArgs steady_args;
    auto* steady = app.add_subcommand("steady", "steady-state covariance analysis");
    steady->add_option("--model", steady_args.model, "model config file")->required();
    steady->add_flag("--find-z", steady_args.find_z,
                     "search the cross-term coefficient with sigma_qp = 0");
    steady->add_option("--mc-check", steady_args.mc_check,
                       "compare against a Monte Carlo ensemble of N paths");
    steady->add_option("--out", steady_args.out, "report file");

    QuantumArgs quantum_args;
    auto* quantum =
        app.add_subcommand("compare-quantum", "map the quantum Langevin coefficients onto the "
                                              "classical linear model");
    quantum->add_option("--hbar", quantum_args.hbar, "hbar")->required();
    quantum->add_option("--m", quantum_args.m, "mass")->required();
    quantum->add_option("--omega", quantum_args.omega, "angular frequency")->required();
    quantum->add_option("--gamma", quantum_args.gamma, "damping rate")->required();
    quantum->add_option("--n", quantum_args.n, "thermal occupation")->required();
    quantum->add_option("--mu", quantum_args.mu, "drift cross coefficient")->required();
    quantum->add_option("--out", quantum_args.out, "report file");

    std::vector<std::string> argv_storage;
    argv_storage.push_back("sympflow");
    for (const auto& a : args) argv_storage.push_back(a);
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (verify->parsed()) return cmd_verify(verify_args);
        if (simulate->parsed()) return cmd_simulate(sim_args);
        if (steady->parsed()) return cmd_steady(steady_args);
        if (quantum->parsed()) return cmd_compare_quantum(quantum_args);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args);
}

}  // namespace sympflow
