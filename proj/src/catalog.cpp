#include "sympflow/catalog.hpp"

#include "sympflow/errors.hpp"

#include <cmath>
#include <sstream>

namespace sympflow {

namespace {

void require_positive(const Rational& value, const char* name) {
    if (value <= 0) throw DomainError(std::string(name) + " must be strictly positive");
}

Polynomial linear_hamiltonian(const LinearModelParams& p) {
    Polynomial h = Polynomial::monomial(0, 2, 1 / (2 * p.m));
    h += Polynomial::monomial(2, 0, p.m * p.omega * p.omega / 2);
    h += Polynomial::monomial(1, 1, p.z);
    return h;
}

}  // namespace

void LinearModelParams::validate() const {
    require_positive(m, "m");
    require_positive(omega, "omega");
    require_positive(gamma, "gamma");
    require_positive(epsilon, "epsilon");
    require_positive(s, "s");
}

ModelSpec build_linear_model(const LinearModelParams& params) {
    params.validate();
    const auto cq = exact_sqrt(params.gamma * params.s * params.epsilon);
    const auto cp = exact_sqrt(params.gamma * params.s / params.epsilon);
    if (!cq || !cp)
        throw DomainError(
            "exact linear model needs gamma*s*epsilon and gamma*s/epsilon to be perfect "
            "rational squares (e.g. gamma=1/4, s=epsilon=1); use linear_drift_diffusion "
            "for numeric-only parameters");
    ModelSpec model;
    model.hamiltonian = linear_hamiltonian(params);
    model.channels.push_back(NoiseChannel::conjugate_pair(
        Polynomial::monomial(0, 1, -*cq), Polynomial::monomial(1, 0, *cp)));
    model.action_scale = params.s;
    return model;
}

LinearDriftDiffusion linear_drift_diffusion(const LinearModelParams& params) {
    params.validate();
    const double m = to_double(params.m);
    const double omega = to_double(params.omega);
    const double gamma = to_double(params.gamma);
    const double eps = to_double(params.epsilon);
    const double s = to_double(params.s);
    const double z = to_double(params.z);

    LinearDriftDiffusion out;
    out.A << z, 1.0 / m, -m * omega * omega, -(z + gamma);
    LinearDriftDiffusion::ChannelCoefficients ch;
    ch.pair = true;
    ch.sigma = Eigen::Vector2d(-std::sqrt(gamma * s * eps), 0.0);
    ch.varsigma = Eigen::Vector2d(0.0, -std::sqrt(gamma * s / eps));
    out.g = ch.sigma * ch.sigma.transpose() + ch.varsigma * ch.varsigma.transpose();
    out.channels.push_back(ch);
    return out;
}

void DhoParams::validate() const {
    require_positive(m, "m");
    require_positive(omega, "omega");
    require_positive(gamma, "gamma");
    require_positive(z_scale, "zScale");
}

ModelSpec build_dho_model(const DhoParams& params) {
    params.validate();
    const auto root = exact_sqrt(params.gamma);
    if (!root)
        throw DomainError(
            "damped-oscillator model needs sqrt(gamma) rational (e.g. gamma=9/16)");
    ModelSpec model;
    model.hamiltonian = Polynomial::monomial(0, 2, 1 / (2 * params.m));
    model.hamiltonian += Polynomial::monomial(2, 0, params.m * params.omega * params.omega / 2);
    model.hamiltonian += Polynomial::monomial(1, 1, params.gamma / 2);
    Polynomial f = Polynomial::monomial(0, 2, *root / (2 * params.z_scale));
    f += Polynomial::monomial(2, 0, *root * params.z_scale / 2);
    model.channels.push_back(NoiseChannel::plain(f));
    return model;
}

ModelSpec build_example1_model(const Polynomial& hamiltonian,
                               const std::vector<Rational>& alphas,
                               const std::vector<Rational>& betas) {
    if (alphas.size() != betas.size())
        throw DomainError("alphas and betas must have matching lengths");
    ModelSpec model;
    model.hamiltonian = hamiltonian;
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        Polynomial f = Polynomial::monomial(0, 1, alphas[k]);
        f += Polynomial::monomial(1, 0, betas[k]);
        model.channels.push_back(NoiseChannel::plain(f));
    }
    return model;
}

void QuantumComparisonParams::validate() const {
    if (!(hbar > 0)) throw DomainError("hbar must be strictly positive");
    if (!(m > 0)) throw DomainError("m must be strictly positive");
    if (!(omega > 0)) throw DomainError("omega must be strictly positive");
    if (!(gamma > 0)) throw DomainError("gamma must be strictly positive");
    if (!(n >= 0)) throw DomainError("n must be nonnegative");
    if (!std::isfinite(mu)) throw DomainError("mu must be finite");
}

namespace {

Eigen::Matrix2d quantum_drift(const QuantumComparisonParams& p, double mu) {
    Eigen::Matrix2d a;
    a << 0.5 * p.gamma - mu, 1.0 / p.m, -p.m * p.omega * p.omega, -(0.5 * p.gamma + mu);
    return a;
}

std::string matrix_text(const Eigen::Matrix2d& m) {
    std::ostringstream os;
    os.precision(12);
    os << "[[" << m(0, 0) << ", " << m(0, 1) << "], [" << m(1, 0) << ", " << m(1, 1) << "]]";
    return os.str();
}

}  // namespace

QuantumComparisonReport quantum_comparison(const QuantumComparisonParams& params) {
    params.validate();
    QuantumComparisonReport rep;
    rep.params = params;

    rep.system.A = quantum_drift(params, params.mu);
    // noise coefficients as printed in the Langevin coefficient family
    const double base = params.gamma * params.hbar / (2.0 * params.m * params.omega);
    const double basep = params.gamma * params.hbar * params.m * params.omega / 2.0;
    LinearDriftDiffusion::ChannelCoefficients ch1, ch2;
    ch1.pair = ch2.pair = true;
    ch1.sigma = Eigen::Vector2d(-std::sqrt((params.n + 1.0) * base), 0.0);
    ch1.varsigma = Eigen::Vector2d(0.0, -std::sqrt((params.n + 1.0) * basep));
    ch2.sigma = Eigen::Vector2d(-std::sqrt(params.n * base), 0.0);
    ch2.varsigma = Eigen::Vector2d(0.0, std::sqrt(params.n * basep));
    rep.system.channels = {ch1, ch2};
    rep.system.g = ch1.sigma * ch1.sigma.transpose() + ch1.varsigma * ch1.varsigma.transpose() +
                   ch2.sigma * ch2.sigma.transpose() + ch2.varsigma * ch2.varsigma.transpose();

    rep.trace = rep.system.A.trace();
    rep.det = rep.system.A.determinant();
    rep.hurwitz = rep.trace < 0.0 && rep.det > 0.0;

    rep.s_equivalent = params.hbar / 2.0;
    rep.epsilon_equivalent = 1.0 / (params.m * params.omega);

    LinearModelParams classical;
    classical.m = Rational(params.m);
    classical.omega = Rational(params.omega);
    classical.gamma = Rational(params.gamma);
    classical.epsilon = Rational(rep.epsilon_equivalent);
    classical.s = Rational(rep.s_equivalent);
    classical.z = 0;
    rep.classical = linear_drift_diffusion(classical);

    rep.max_drift_diff = (rep.system.A - rep.classical.A).cwiseAbs().maxCoeff();
    rep.max_diffusion_diff = (rep.system.g - rep.classical.g).cwiseAbs().maxCoeff();

    // A(mu) is affine in mu: least-squares match against the classical drift
    // reduces to one linear equation.
    const Eigen::Matrix2d r0 = quantum_drift(params, 0.0) - rep.classical.A;
    const Eigen::Matrix2d dir = quantum_drift(params, 1.0) - quantum_drift(params, 0.0);
    const double denom = dir.cwiseProduct(dir).sum();
    rep.mu_match = -r0.cwiseProduct(dir).sum() / denom;

    if (params.n > 0.0)
        rep.k_b_t = params.hbar * params.omega / std::log1p(1.0 / params.n);
    return rep;
}

std::string QuantumComparisonReport::text() const {
    std::ostringstream os;
    os.precision(12);
    os << "quantum comparison: damped-oscillator Langevin family vs classical linear model\n";
    os << "inputs: hbar=" << params.hbar << " m=" << params.m << " omega=" << params.omega
       << " gamma=" << params.gamma << " n=" << params.n << " mu=" << params.mu << "\n";
    os << "drift A = " << matrix_text(system.A) << "\n";
    os << "diffusion g = " << matrix_text(system.g) << "\n";
    for (std::size_t k = 0; k < system.channels.size(); ++k) {
        const auto& ch = system.channels[k];
        os << "channel " << (k + 1) << ": dQ coeffs (" << ch.sigma(0) << ", " << ch.sigma(1)
           << "), dP coeffs (" << ch.varsigma(0) << ", " << ch.varsigma(1) << ")\n";
    }
    os << "hurwitz: " << (hurwitz ? "yes" : "no") << " (trace = " << trace << ", det = " << det
       << ")\n";
    os << "classical identification: s = hbar/2 = " << s_equivalent
       << ", epsilon = 1/(m*omega) = " << epsilon_equivalent << "\n";
    os << "classical drift (z=0) = " << matrix_text(classical.A) << "\n";
    os << "classical diffusion    = " << matrix_text(classical.g) << "\n";
    os << "max |A - A_classical| at given mu = " << max_drift_diff << "\n";
    os << "max |g - g_classical|             = " << max_diffusion_diff << "\n";
    os << "drift-matching mu (least squares) = " << mu_match << " = gamma/2\n";
    os << "note: the published claim that mu = gamma reproduces the classical SDEs does not "
          "hold for the printed drift family; the computed match is mu = gamma/2.\n";
    if (k_b_t) {
        os << "occupation-temperature relation: k_B T = hbar*omega/ln(1 + 1/n) = " << *k_b_t
           << "\n";
    } else {
        os << "occupation-temperature relation: undefined at n = 0 (ground-state noise)\n";
    }
    os << "[machine]\n";
    os << "A11=" << system.A(0, 0) << "\nA12=" << system.A(0, 1) << "\nA21=" << system.A(1, 0)
       << "\nA22=" << system.A(1, 1) << "\n";
    os << "g_qq=" << system.g(0, 0) << "\ng_qp=" << system.g(0, 1) << "\ng_pp=" << system.g(1, 1)
       << "\n";
    os << "hurwitz=" << (hurwitz ? 1 : 0) << "\n";
    os << "s_equivalent=" << s_equivalent << "\n";
    os << "epsilon_equivalent=" << epsilon_equivalent << "\n";
    os << "max_drift_diff=" << max_drift_diff << "\n";
    os << "max_diffusion_diff=" << max_diffusion_diff << "\n";
    os << "mu_match=" << mu_match << "\n";
    if (k_b_t) os << "k_b_t=" << *k_b_t << "\n";
    return os.str();
}

}  // namespace sympflow
