#pragma once

#include "sympflow/catalog.hpp"
#include "sympflow/model.hpp"
#include "sympflow/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace sympflow {

/// Double-precision view of a bivariate polynomial for the integration loop.
struct CompiledPoly {
    struct Term {
        int q_exp;
        int p_exp;
        double c;
    };
    std::vector<Term> terms;

    double eval(double q, double p) const;
    bool is_constant() const;
    double constant_value() const;
    int degree() const;

    static CompiledPoly from(const Polynomial& poly);
};

/// A compiled vector field together with its exact partial derivatives,
/// ready for drift/noise evaluation and variational (Jacobian) propagation.
struct CompiledField {
    CompiledPoly fq, fp;          ///< components
    CompiledPoly dq_q, dq_p;      ///< partials of fq
    CompiledPoly dp_q, dp_p;      ///< partials of fp

    Eigen::Vector2d value(const Eigen::Vector2d& x) const;
    Eigen::Matrix2d jacobian(const Eigen::Vector2d& x) const;
    bool is_constant() const;
    int degree() const;

    static CompiledField from(const VectorField& field);
    static CompiledField constant(const Eigen::Vector2d& v);
    static CompiledField affine(const Eigen::Matrix2d& a, const Eigen::Vector2d& b);
};

/// An SDE on phase space in compiled form:
///   dx = v(x) dt + sum_k sigma_k(x) dQ_k [+ varsigma_k(x) dP_k].
/// Built from an exact ModelSpec, from constant linear-model coefficients,
/// or from a bare vector field (deterministic flow).
struct SdeSystem {
    struct Channel {
        CompiledField sigma;
        std::optional<CompiledField> varsigma;
        bool is_pair() const { return varsigma.has_value(); }
    };

    CompiledField drift;
    std::vector<Channel> channels;

    /// Number of Wiener increments consumed per step (pairs count twice).
    int increment_count() const;
    bool drift_affine() const;
    bool additive_noise() const;
    /// Drift Jacobian at the origin; the exact drift matrix when affine.
    Eigen::Matrix2d drift_matrix() const;
    /// Diffusion tensor sum sigma sigma^T + varsigma varsigma^T at the origin;
    /// exact when the noise is additive.
    Eigen::Matrix2d diffusion_matrix() const;

    SdeSystem without_noise() const;

    static SdeSystem from_model(const ModelSpec& model);
    static SdeSystem from_linear(const LinearDriftDiffusion& linear);
    static SdeSystem from_field(const VectorField& field);
};

struct IntegratorConfig {
    double dt = 1e-3;
    double t_final = 40.0;
    std::uint64_t seed = 0;
    bool with_jacobian = false;
    std::int64_t record_stride = 1;

    void validate() const;
};

/// Number of Euler-Maruyama steps and the length of the final partial step.
struct StepPlan {
    std::int64_t steps;
    double dt_last;
};
StepPlan plan_steps(double dt, double t_final);

struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::Vector2d> states;
    std::vector<Eigen::Matrix2d> jacobians;  ///< empty unless with_jacobian
};

struct EnsembleSummary {
    std::int64_t path_count = 0;
    double t_final = 0.0;
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    Eigen::Vector2d mean_se = Eigen::Vector2d::Zero();
    Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();     ///< unbiased sample covariance
    Eigen::Matrix2d covariance_se = Eigen::Matrix2d::Zero();  ///< asymptotic standard errors
    /// (median, 95th percentile) of |det J_T - expected|, when Jacobians ran.
    std::optional<std::pair<double, double>> det_j_stats;
};

/// One explicit Euler-Maruyama step with all fields evaluated at the
/// pre-step state. `increments` supplies dQ_k (then dP_k for pairs) in
/// channel order. Throws NumericError on non-finite state or increment.
Eigen::Vector2d em_step(const SdeSystem& system, const Eigen::Vector2d& state, double dt,
                        std::span<const double> increments);
Eigen::Vector2d em_step(const ModelSpec& model, const Eigen::Vector2d& state, double dt,
                        std::span<const double> increments);

/// Euler-Maruyama path with N(0, dt) increments from the stream derived from
/// (cfg.seed, path_index); bit-deterministic for fixed inputs. Records
/// step 0, every record_stride-th step and the final step. Path k of an
/// ensemble with the same cfg is reproduced by path_index = k.
Trajectory simulate_path(const SdeSystem& system, const Eigen::Vector2d& x0,
                         const IntegratorConfig& cfg, std::uint64_t path_index = 0);

/// Terminal-time ensemble statistics over independent paths (stream index =
/// path index). Results are independent of worker partitioning; workers = 0
/// selects the hardware concurrency. `expected_det_j` is the reference value
/// for the |det J - expected| statistics when cfg.with_jacobian is set.
EnsembleSummary simulate_ensemble(const SdeSystem& system, const Eigen::Vector2d& x0,
                                  const IntegratorConfig& cfg, std::int64_t path_count,
                                  double expected_det_j = 1.0, int workers = 0);

/// Statistics of already-computed terminal states (same estimators as
/// simulate_ensemble). `det_j` may be empty.
EnsembleSummary summarize_terminal_states(const std::vector<Eigen::Vector2d>& states,
                                          const std::vector<double>& det_j, double t_final,
                                          double expected_det_j = 1.0);

/// Flat text report with a trailing machine-readable key=value block.
std::string ensemble_report_text(const EnsembleSummary& summary);

/// Exact one-step propagator of the linear additive-noise model:
/// Phi = e^{A h} and Gram = int_0^h e^{A s} g e^{A^T s} ds (Van Loan's
/// augmented-matrix exponential).
std::pair<Eigen::Matrix2d, Eigen::Matrix2d> linear_transition(const Eigen::Matrix2d& a,
                                                              const Eigen::Matrix2d& g, double h);

/// Mean and covariance of the linear model at time t:
///   mean = e^{At} mean0,
///   cov  = e^{At} cov0 e^{A^T t} + int_0^t e^{As} g e^{A^T s} ds.
std::pair<Eigen::Vector2d, Eigen::Matrix2d> exact_linear_moments(
    const Eigen::Matrix2d& a, const Eigen::Matrix2d& g, const Eigen::Vector2d& mean0,
    const Eigen::Matrix2d& cov0, double t);

/// CSV rows "path,t,q,p[,J11,J12,J21,J22,detJ]" with 17 significant digits.
void write_trajectory_csv_header(std::ostream& os, bool with_jacobian);
void write_trajectory_csv(std::ostream& os, std::int64_t path_index, const Trajectory& traj);

}  // namespace sympflow
