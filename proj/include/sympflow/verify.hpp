#pragma once

#include "sympflow/catalog.hpp"
#include "sympflow/model.hpp"
#include "sympflow/rng.hpp"
#include "sympflow/sde.hpp"
#include "sympflow/stationary.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sympflow {

/// Deterministic helper for randomized identity trials.
class TrialRng {
public:
    explicit TrialRng(std::uint64_t seed) : stream_(seed, 0x7E57) {}

    std::uint64_t u64() { return stream_.next_u64(); }
    int uniform_int(int lo, int hi);  ///< inclusive bounds
    /// Small rational with numerator in [-6, 6] and denominator in [1, 4].
    Rational small_rational(bool nonzero);

private:
    GaussianStream stream_;
};

Polynomial random_polynomial(TrialRng& rng, int max_degree, int max_terms, bool ensure_nonzero);
VectorField random_vector_field(TrialRng& rng, int max_degree);
/// Random ModelSpec: H of degree <= degree_h, 1-2 channels with generating
/// functions of degree <= degree_fg, random positive action scale. Pairs are
/// included only when with_pairs is set.
ModelSpec random_model(TrialRng& rng, int degree_h, int degree_fg, bool with_pairs);

struct VerifyOptions {
    int trials = 100;
    int degree = 4;
    std::uint64_t seed = 0;
};

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckResult> checks;
    std::vector<AuditVerdict> audits;  ///< populated by the published-formula suite

    bool all_checks_pass() const;
    int discrepant_count() const;
};

SuiteResult run_core_suite(const VerifyOptions& options);
SuiteResult run_theorem1_suite(const VerifyOptions& options);
SuiteResult run_theorem2_suite(const VerifyOptions& options);
SuiteResult run_integrator_suite(const VerifyOptions& options);
SuiteResult run_published_formula_suite(const VerifyOptions& options);

std::string suite_report_text(const SuiteResult& result);

/// m = omega = epsilon = s = 1, gamma = 1/2, z = 0.
LinearModelParams default_linear_params();

/// Least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

struct StrongOrderResult {
    std::vector<double> dts;
    std::vector<double> rms_errors;
    double order = 0.0;
};

/// Empirical strong order of Euler-Maruyama on an additive-noise linear
/// model against the exact one-step transition driven by the same Gaussian
/// increments.
StrongOrderResult measure_strong_order(const LinearDriftDiffusion& linear,
                                       const Eigen::Vector2d& x0, double t_final,
                                       std::span<const double> dts, int paths,
                                       std::uint64_t seed);

struct DetJOrderResult {
    std::vector<double> dts;
    std::vector<double> median_errors;
    double order = 0.0;
};

/// Median |det J_T - expected| per step size, with the fitted decay order.
DetJOrderResult measure_det_j_order(const SdeSystem& system, const Eigen::Vector2d& x0,
                                    double t_final, std::span<const double> dts, int paths,
                                    double expected, std::uint64_t seed);

}  // namespace sympflow
