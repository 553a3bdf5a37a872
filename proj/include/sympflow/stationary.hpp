#pragma once

#include "sympflow/catalog.hpp"
#include "sympflow/sde.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace sympflow {

/// 2x2 stability test: trace < 0 and determinant > 0.
bool is_hurwitz(const Eigen::Matrix2d& a);

/// Unique symmetric solution of A sigma + sigma A^T = -g via the direct 3x3
/// linear system in (sigma_qq, sigma_qp, sigma_pp). Throws DomainError naming
/// the violated Hurwitz condition when A is not stable.
Eigen::Matrix2d lyapunov_solve(const Eigen::Matrix2d& a, const Eigen::Matrix2d& g);

/// max-abs entry of A sigma + sigma A^T + g.
double lyapunov_residual(const Eigen::Matrix2d& a, const Eigen::Matrix2d& g,
                         const Eigen::Matrix2d& sigma);

/// The published closed-form steady covariance at z = 0,
///   (s/2) [ (1+eps^2 m^2 (w^2+gamma^2))/(eps^2 m^2 w^2), -eps m gamma;
///           -eps m gamma,                  (1+eps^2 m^2 w^2)/eps ],
/// evaluated verbatim. Requires params.z == 0.
Eigen::Matrix2d published_covariance_z0(const LinearModelParams& params);

struct GeneralZCovariance {
    double qq;
    double pp;
    double qp;
    double y;  ///< the published denominator Y(z)
};

/// The published general-z closed forms, evaluated verbatim (audit material,
/// not an oracle). Throws NumericError when Y(z) is singular.
GeneralZCovariance published_covariance_general_z(const LinearModelParams& params);

/// Published zero-cross point z* = -2 eps^2 m^2 w^2 gamma / (2 eps^2 m^2 w^2 + 1).
double published_zero_cross_z(const LinearModelParams& params);

/// Published equipartition temperature (s/2) (2 eps^2 m^2 w^2 + 1)/(eps m).
double published_equipartition_temperature(const LinearModelParams& params);

struct ZeroCrossResult {
    double z_star;           ///< root of sigma_qp(z) = 0 inside the Hurwitz region
    Eigen::Matrix2d sigma;   ///< Lyapunov covariance at z_star (diagonal, Gibbs form)
    double k_b_t;            ///< m w^2 sigma_qq = sigma_pp / m
};

/// Bisection on sigma_qp(z) of the Lyapunov solution over (Hurwitz boundary, 0);
/// params.z is ignored. Throws NumericError when no sign change is found,
/// reporting the scanned interval.
ZeroCrossResult find_zero_cross_z(const LinearModelParams& params);

/// Mean-zero bivariate Gaussian moment E[q^i p^j] (Isserlis recursion).
double gaussian_moment(int q_exp, int p_exp, const Eigen::Matrix2d& sigma);

/// Expectation of a polynomial under the mean-zero Gaussian with covariance
/// sigma.
double wick_expectation(const Polynomial& poly, const Eigen::Matrix2d& sigma);

/// Moment-form stationarity residuals (E[L q^2], E[L qp], E[L p^2]) with L
/// applied exactly through the generator; requires affine drift and constant
/// diffusion (throws DomainError otherwise).
Eigen::Vector3d stationarity_residuals(const ModelSpec& model, const Eigen::Matrix2d& sigma);

/// Same residuals for a compiled affine system with additive noise.
Eigen::Vector3d stationarity_residuals(const SdeSystem& system, const Eigen::Matrix2d& sigma);

struct AuditVerdict {
    std::string item;
    Eigen::MatrixXd published;
    Eigen::MatrixXd computed;
    double tolerance = 1e-9;
    double max_abs_diff = 0.0;
    bool match = false;
    std::string note;
};

/// Cross-checks the published steady-state results against the Lyapunov
/// oracle: (a) the z = 0 covariance matrix, (b) the general-z closed forms at
/// z in {0, +gamma/4, -gamma/4, published z*}, (c) the published z* against
/// the bisection root, (d) the published equipartition temperature.
/// Discrepancies are findings, not failures.
std::vector<AuditVerdict> audit_published_formulas(const LinearModelParams& params);

std::string audit_report_text(const std::vector<AuditVerdict>& verdicts);

struct SteadyStateReport {
    Eigen::Matrix2d A;
    Eigen::Matrix2d g;
    Eigen::Matrix2d sigma;
    double residual_norm = 0.0;
    bool hurwitz = false;
    bool sigma_positive_definite = false;
    std::optional<double> temperature;  ///< k_B T when sigma has Gibbs form for H_0
    Eigen::Vector3d stationarity = Eigen::Vector3d::Zero();
    std::string stationarity_route;  ///< "generator-exact" or "generator-numeric"
};

/// Solves for the stationary covariance and assembles the report. The exact
/// model, when available, is used for the generator-route stationarity
/// residuals; linear-model parameters, when given, enable the Gibbs-form
/// temperature extraction.
SteadyStateReport analyze_steady_state(const Eigen::Matrix2d& a, const Eigen::Matrix2d& g,
                                       const std::optional<ModelSpec>& exact_model,
                                       const std::optional<LinearModelParams>& linear_params);

std::string steady_report_text(const SteadyStateReport& report);

}  // namespace sympflow
