#pragma once

#include "sympflow/model.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace sympflow {

/// Parameters of the linear conjugate-pair model
///   H = p^2/2m + (1/2) m w^2 q^2 + z q p,  F = -sqrt(gamma s eps) p,
///   G = sqrt(gamma s / eps) q,
/// with gamma = s^{-1}{F,G}. Exact rationals so the symbolic and numeric
/// layers share one parameter set.
struct LinearModelParams {
    Rational m = 1;
    Rational omega = 1;
    Rational gamma = Rational(1, 2);
    Rational epsilon = 1;
    Rational s = 1;
    Rational z = 0;

    /// Throws DomainError unless m, omega, gamma, epsilon, s > 0.
    void validate() const;
};

/// Constant-coefficient drift/diffusion data of a linear model:
/// dx = (A x + b) dt + sum_k sigma_k dQ_k + varsigma_k dP_k.
struct LinearDriftDiffusion {
    struct ChannelCoefficients {
        Eigen::Vector2d sigma = Eigen::Vector2d::Zero();     ///< dQ_k coefficients
        Eigen::Vector2d varsigma = Eigen::Vector2d::Zero();  ///< dP_k coefficients
        bool pair = false;
    };

    Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
    Eigen::Vector2d b = Eigen::Vector2d::Zero();
    Eigen::Matrix2d g = Eigen::Matrix2d::Zero();  ///< sum sigma sigma^T + varsigma varsigma^T
    std::vector<ChannelCoefficients> channels;
};

/// Exact ModelSpec for the linear model. Requires gamma*s*epsilon and
/// gamma*s/epsilon to be perfect rational squares (rational-instantiation
/// policy); use linear_drift_diffusion for arbitrary parameters.
ModelSpec build_linear_model(const LinearModelParams& params);

/// Numeric drift matrix, diffusion tensor and per-channel noise coefficients
/// of the linear model, valid for any admissible parameters.
LinearDriftDiffusion linear_drift_diffusion(const LinearModelParams& params);

/// Damped-oscillator dilation parameters:
///   H = p^2/2m + (1/2) m w^2 q^2 + (gamma/2) q p,
///   F = sqrt(gamma) (p^2 / (2 zeta) + (zeta/2) q^2)  with zeta = z_scale.
struct DhoParams {
    Rational m = 1;
    Rational omega = 1;
    Rational gamma = Rational(9, 16);
    Rational z_scale = 1;

    void validate() const;
};

/// Single plain-channel model whose Ito drift is the damped-oscillator field
/// (p/m, -m w^2 q - gamma p). Requires sqrt(gamma) rational.
ModelSpec build_dho_model(const DhoParams& params);

/// Plain channels F_k = alpha_k p + beta_k q on top of an arbitrary H; the
/// drift is exactly the Hamiltonian field of H (no dissipation).
ModelSpec build_example1_model(const Polynomial& hamiltonian,
                               const std::vector<Rational>& alphas,
                               const std::vector<Rational>& betas);

struct QuantumComparisonParams {
    double hbar = 2.0;
    double m = 1.0;
    double omega = 1.0;
    double gamma = 0.5;
    double n = 0.0;  ///< thermal occupation
    double mu = 0.25;

    void validate() const;
};

/// Outcome of mapping the damped-oscillator Langevin coefficient family onto
/// the classical linear model under s = hbar/2, epsilon = 1/(m omega).
struct QuantumComparisonReport {
    QuantumComparisonParams params;
    LinearDriftDiffusion system;     ///< quantum-side coefficients as printed
    bool hurwitz = false;
    double trace = 0.0;
    double det = 0.0;
    double s_equivalent = 0.0;        ///< hbar/2
    double epsilon_equivalent = 0.0;  ///< 1/(m omega)
    LinearDriftDiffusion classical;   ///< linear model at (s, eps, gamma, z=0)
    double max_drift_diff = 0.0;      ///< max |A - A_classical| at the given mu
    double max_diffusion_diff = 0.0;
    /// mu solving min || A(mu) - A_classical || (linear least squares);
    /// equals gamma/2, not the published "mu = gamma" claim.
    double mu_match = 0.0;
    std::optional<double> k_b_t;  ///< hbar omega / ln(1 + 1/n), absent at n = 0

    std::string text() const;
};

QuantumComparisonReport quantum_comparison(const QuantumComparisonParams& params);

}  // namespace sympflow
