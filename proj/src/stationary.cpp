#include "sympflow/stationary.hpp"

#include "sympflow/errors.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace sympflow {

bool is_hurwitz(const Eigen::Matrix2d& a) { return a.trace() < 0.0 && a.determinant() > 0.0; }

Eigen::Matrix2d lyapunov_solve(const Eigen::Matrix2d& a, const Eigen::Matrix2d& g) {
    if (!(a.trace() < 0.0))
        throw DomainError("lyapunov_solve: trace(A) = " + std::to_string(a.trace()) +
                          " is not negative; A is not Hurwitz");
    if (!(a.determinant() > 0.0))
        throw DomainError("lyapunov_solve: det(A) = " + std::to_string(a.determinant()) +
                          " is not positive; A is not Hurwitz");
    Eigen::Matrix3d m;
    m << 2.0 * a(0, 0), 2.0 * a(0, 1), 0.0,
         a(1, 0), a(0, 0) + a(1, 1), a(0, 1),
         0.0, 2.0 * a(1, 0), 2.0 * a(1, 1);
    const Eigen::Vector3d rhs(-g(0, 0), -g(0, 1), -g(1, 1));
    const Eigen::Vector3d sol = m.colPivHouseholderQr().solve(rhs);
    Eigen::Matrix2d sigma;
    sigma << sol(0), sol(1), sol(1), sol(2);
    return sigma;
}

double lyapunov_residual(const Eigen::Matrix2d& a, const Eigen::Matrix2d& g,
                         const Eigen::Matrix2d& sigma) {
    return (a * sigma + sigma * a.transpose() + g).cwiseAbs().maxCoeff();
}

Eigen::Matrix2d published_covariance_z0(const LinearModelParams& params) {
    params.validate();
    if (params.z != 0) throw DomainError("published_covariance_z0 requires z = 0");
    const double m = to_double(params.m);
    const double w = to_double(params.omega);
    const double gamma = to_double(params.gamma);
    const double eps = to_double(params.epsilon);
    const double s = to_double(params.s);
    const double e2m2 = eps * eps * m * m;
    Eigen::Matrix2d sigma;
    sigma << (1.0 + e2m2 * (w * w + gamma * gamma)) / (e2m2 * w * w), -eps * m * gamma,
             -eps * m * gamma, (1.0 + e2m2 * w * w) / eps;
    return 0.5 * s * sigma;
}

GeneralZCovariance published_covariance_general_z(const LinearModelParams& params) {
    params.validate();
    const double m = to_double(params.m);
    const double w = to_double(params.omega);
    const double gamma = to_double(params.gamma);
    const double eps = to_double(params.epsilon);
    const double s = to_double(params.s);
    const double z = to_double(params.z);

    const double scale = 2.0 * m * m / (gamma * s);
    const double y = scale * (z * w * w - z * z * z - 2.0 * z * z * gamma - z * gamma * gamma +
                              2.0 * w * w * gamma);
    const double y_magnitude = scale * (std::abs(z) * w * w + std::abs(z * z * z) +
                                        2.0 * z * z * gamma + std::abs(z) * gamma * gamma +
                                        2.0 * w * w * gamma);
    if (std::abs(y) <= 1e-12 * std::max(1.0, y_magnitude))
        throw NumericError("published general-z formulas are singular: Y(z) = 0 at z = " +
                           std::to_string(z));

    GeneralZCovariance out;
    out.y = y;
    out.qq = (2.0 * eps * eps * m * m * w * w + 2.0 * eps * eps * m * m * z * z +
              4.0 * eps * eps * m * m * gamma * z + 2.0 * eps * eps * m * m * gamma * gamma +
              2.0) / y;
    out.pp = (2.0 * std::pow(m, 4) * std::pow(w, 4) * eps * eps - m * m * z * z -
              m * m * gamma * z + 2.0 * m * m * w * w) / y;
    out.qp = -(2.0 * std::pow(m, 3) * eps * eps * w * w * z +
               2.0 * std::pow(m, 3) * eps * eps * w * w * gamma + m * z) / y;
    return out;
}

double published_zero_cross_z(const LinearModelParams& params) {
    params.validate();
    const double m = to_double(params.m);
    const double w = to_double(params.omega);
    const double gamma = to_double(params.gamma);
    const double eps = to_double(params.epsilon);
    const double e2m2w2 = eps * eps * m * m * w * w;
    return -2.0 * e2m2w2 * gamma / (2.0 * e2m2w2 + 1.0);
}

double published_equipartition_temperature(const LinearModelParams& params) {
    params.validate();
    const double m = to_double(params.m);
    const double w = to_double(params.omega);
    const double eps = to_double(params.epsilon);
    const double s = to_double(params.s);
    return 0.5 * s * (2.0 * eps * eps * m * m * w * w + 1.0) / (eps * m);
}

namespace {

Eigen::Matrix2d drift_matrix_at(const LinearModelParams& params, double z) {
    const double m = to_double(params.m);
    const double w = to_double(params.omega);
    const double gamma = to_double(params.gamma);
    Eigen::Matrix2d a;
    a << z, 1.0 / m, -m * w * w, -(z + gamma);
    return a;
}

Eigen::Matrix2d diffusion_matrix_of(const LinearModelParams& params) {
    const double gamma = to_double(params.gamma);
    const double eps = to_double(params.epsilon);
    const double s = to_double(params.s);
    Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
    g(0, 0) = gamma * s * eps;
    g(1, 1) = gamma * s / eps;
    return g;
}

}  // namespace

ZeroCrossResult find_zero_cross_z(const LinearModelParams& params) {
    params.validate();
    const double m = to_double(params.m);
    const double w = to_double(params.omega);
    const double gamma = to_double(params.gamma);
    const Eigen::Matrix2d g = diffusion_matrix_of(params);

    auto sigma_qp = [&](double z) {
        return lyapunov_solve(drift_matrix_at(params, z), g)(0, 1);
    };

    // Hurwitz region in z is (z_minus, z_plus) with z(z+gamma) = w^2 at the ends.
    const double z_minus = 0.5 * (-gamma - std::sqrt(gamma * gamma + 4.0 * w * w));
    const double at_zero = sigma_qp(0.0);  // = -s eps m gamma / 2 < 0

    double lo = 0.0;
    bool bracketed = false;
    for (double shrink : {1e-9, 1e-6, 1e-3, 1e-2, 0.1, 0.25, 0.5, 0.75}) {
        const double candidate = z_minus * (1.0 - shrink);
        if (sigma_qp(candidate) > 0.0) {
            lo = candidate;
            bracketed = true;
            break;
        }
    }
    if (!bracketed || !(at_zero < 0.0))
        throw NumericError("find_zero_cross_z: no sign change of sigma_qp found in (" +
                           std::to_string(z_minus) + ", 0)");

    double hi = 0.0;
    for (int iter = 0; iter < 200 && (hi - lo) > 1e-12 * std::max(1.0, std::abs(z_minus));
         ++iter) {
        const double mid = 0.5 * (lo + hi);
        (sigma_qp(mid) > 0.0 ? lo : hi) = mid;
    }
    ZeroCrossResult out;
    out.z_star = 0.5 * (lo + hi);
    out.sigma = lyapunov_solve(drift_matrix_at(params, out.z_star), g);
    out.k_b_t = m * w * w * out.sigma(0, 0);
    return out;
}

double gaussian_moment(int q_exp, int p_exp, const Eigen::Matrix2d& sigma) {
    if (q_exp < 0 || p_exp < 0) throw DomainError("negative moment order");
    if ((q_exp + p_exp) % 2 == 1) return 0.0;
    // Isserlis: E[q^i p^j] = (i-1) s_qq E[q^{i-2} p^j] + j s_qp E[q^{i-1} p^{j-1}]
    std::map<std::pair<int, int>, double> memo;
    auto rec = [&](auto&& self, int i, int j) -> double {
        if (i + j == 0) return 1.0;
        if ((i + j) % 2 == 1) return 0.0;
        const auto key = std::make_pair(i, j);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        double value = 0.0;
        if (i > 0) {
            if (i >= 2) value += (i - 1) * sigma(0, 0) * self(self, i - 2, j);
            if (j >= 1) value += j * sigma(0, 1) * self(self, i - 1, j - 1);
        } else {
            value = (j - 1) * sigma(1, 1) * self(self, 0, j - 2);
        }
        memo[key] = value;
        return value;
    };
    return rec(rec, q_exp, p_exp);
}

double wick_expectation(const Polynomial& poly, const Eigen::Matrix2d& sigma) {
    double acc = 0.0;
    for (const auto& [m, c] : poly.terms())
        acc += to_double(c) * gaussian_moment(m.q_exp, m.p_exp, sigma);
    return acc;
}

Eigen::Vector3d stationarity_residuals(const ModelSpec& model, const Eigen::Matrix2d& sigma) {
    const VectorField v = drift_field(model);
    if (v.vq.degree() > 1 || v.vp.degree() > 1)
        throw DomainError("stationarity residuals need an affine drift (linear model)");
    for (const auto& ch : model.channels) {
        if (ch.F.degree() > 1 || (ch.is_pair() && ch.G->degree() > 1))
            throw DomainError("stationarity residuals need constant noise fields (linear model)");
    }
    const Polynomial q2 = Polynomial::monomial(2, 0, 1);
    const Polynomial qp = Polynomial::monomial(1, 1, 1);
    const Polynomial p2 = Polynomial::monomial(0, 2, 1);
    return {wick_expectation(apply_generator(model, q2), sigma),
            wick_expectation(apply_generator(model, qp), sigma),
            wick_expectation(apply_generator(model, p2), sigma)};
}

Eigen::Vector3d stationarity_residuals(const SdeSystem& system, const Eigen::Matrix2d& sigma) {
    if (!system.drift_affine())
        throw DomainError("stationarity residuals need an affine drift (linear model)");
    if (!system.additive_noise())
        throw DomainError("stationarity residuals need constant noise fields (linear model)");
    const Eigen::Matrix2d a = system.drift_matrix();
    const Eigen::Matrix2d g = system.diffusion_matrix();
    // E[L q^2] = 2 E[q v^q] + g_qq, etc., with v = A x (+ const, which has
    // zero mean-weighted contribution).
    const Eigen::Matrix2d asig = a * sigma;
    return {2.0 * asig(0, 0) + g(0, 0), asig(0, 1) + asig(1, 0) + g(0, 1),
            2.0 * asig(1, 1) + g(1, 1)};
}

namespace {

Eigen::MatrixXd scalar_matrix(double v) {
    Eigen::MatrixXd m(1, 1);
    m(0, 0) = v;
    return m;
}

AuditVerdict make_verdict(std::string item, Eigen::MatrixXd published, Eigen::MatrixXd computed,
                          std::string note = {}) {
    AuditVerdict v;
    v.item = std::move(item);
    v.published = std::move(published);
    v.computed = std::move(computed);
    v.max_abs_diff = (v.published - v.computed).cwiseAbs().maxCoeff();
    v.match = v.max_abs_diff <= v.tolerance;
    v.note = std::move(note);
    return v;
}

}  // namespace

std::vector<AuditVerdict> audit_published_formulas(const LinearModelParams& params) {
    params.validate();
    std::vector<AuditVerdict> verdicts;
    const Eigen::Matrix2d g = diffusion_matrix_of(params);
    const double gamma = to_double(params.gamma);

    // (a) boxed z = 0 matrix against the Lyapunov solution
    LinearModelParams at_zero = params;
    at_zero.z = 0;
    const Eigen::Matrix2d lyap0 = lyapunov_solve(drift_matrix_at(params, 0.0), g);
    verdicts.push_back(make_verdict("covariance-z0", published_covariance_z0(at_zero), lyap0));

    // (b) general-z closed forms against the Lyapunov solution
    const double z_pub = published_zero_cross_z(params);
    const double z_values[] = {0.0, gamma / 4.0, -gamma / 4.0, z_pub};
    const char* labels[] = {"covariance-general-z(z=0)", "covariance-general-z(z=+gamma/4)",
                            "covariance-general-z(z=-gamma/4)",
                            "covariance-general-z(z=published z*)"};
    for (int i = 0; i < 4; ++i) {
        const double z = z_values[i];
        const Eigen::Matrix2d a = drift_matrix_at(params, z);
        if (!is_hurwitz(a)) continue;  // formulas presume a stationary state
        LinearModelParams at_z = params;
        at_z.z = Rational(z);
        try {
            const GeneralZCovariance pub = published_covariance_general_z(at_z);
            Eigen::Matrix2d pub_m;
            pub_m << pub.qq, pub.qp, pub.qp, pub.pp;
            verdicts.push_back(make_verdict(labels[i], pub_m, lyapunov_solve(a, g)));
        } catch (const NumericError& e) {
            AuditVerdict v;
            v.item = labels[i];
            v.published = scalar_matrix(std::numeric_limits<double>::quiet_NaN());
            v.computed = scalar_matrix(lyapunov_solve(a, g)(0, 1));
            v.match = false;
            v.max_abs_diff = std::numeric_limits<double>::quiet_NaN();
            v.note = e.what();
            verdicts.push_back(std::move(v));
        }
    }

    // (c) published z* against the bisection root
    const ZeroCrossResult zero_cross = find_zero_cross_z(params);
    verdicts.push_back(make_verdict("zero-cross-z", scalar_matrix(z_pub),
                                    scalar_matrix(zero_cross.z_star)));

    // (d) published equipartition temperature against m w^2 sigma_qq(z*)
    verdicts.push_back(make_verdict("equipartition-temperature",
                                    scalar_matrix(published_equipartition_temperature(params)),
                                    scalar_matrix(zero_cross.k_b_t)));
    return verdicts;
}

namespace {

std::string matrix_inline(const Eigen::MatrixXd& m) {
    std::ostringstream os;
    os.precision(10);
    if (m.rows() == 1 && m.cols() == 1) {
        os << m(0, 0);
        return os.str();
    }
    os << "[";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        os << "[";
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            os << m(r, c);
            if (c + 1 < m.cols()) os << ", ";
        }
        os << "]";
        if (r + 1 < m.rows()) os << ", ";
    }
    os << "]";
    return os.str();
}

}  // namespace

std::string audit_report_text(const std::vector<AuditVerdict>& verdicts) {
    std::ostringstream os;
    os << "audit of published steady-state formulas (tolerance 1e-09 per item)\n";
    for (const auto& v : verdicts) {
        os << "  " << (v.match ? "Match     " : "Discrepant") << "  " << v.item << "\n";
        os << "      published: " << matrix_inline(v.published) << "\n";
        os << "      computed:  " << matrix_inline(v.computed) << "\n";
        os.precision(3);
        os << "      |diff| = " << v.max_abs_diff << "\n";
        os.precision(10);
        if (!v.note.empty()) os << "      note: " << v.note << "\n";
    }
    os << "[machine]\n";
    for (const auto& v : verdicts)
        os << "audit." << v.item << "=" << (v.match ? "match" : "discrepant") << "\n";
    return os.str();
}

SteadyStateReport analyze_steady_state(const Eigen::Matrix2d& a, const Eigen::Matrix2d& g,
                                       const std::optional<ModelSpec>& exact_model,
                                       const std::optional<LinearModelParams>& linear_params) {
    SteadyStateReport rep;
    rep.A = a;
    rep.g = g;
    rep.hurwitz = is_hurwitz(a);
    rep.sigma = lyapunov_solve(a, g);  // throws with the violated condition if unstable
    rep.residual_norm = lyapunov_residual(a, g, rep.sigma);
    rep.sigma_positive_definite =
        rep.sigma(0, 0) > 0.0 && rep.sigma.determinant() > 0.0;

    if (exact_model) {
        rep.stationarity = stationarity_residuals(*exact_model, rep.sigma);
        rep.stationarity_route = "generator-exact";
    } else {
        SdeSystem sys;
        sys.drift = CompiledField::affine(a, Eigen::Vector2d::Zero());
        // one synthetic channel reproducing g: only the diffusion matrix
        // enters the residual formula
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(g);
        Eigen::Matrix2d root = es.operatorSqrt();
        SdeSystem::Channel c1, c2;
        c1.sigma = CompiledField::constant(root.col(0));
        c2.sigma = CompiledField::constant(root.col(1));
        sys.channels = {c1, c2};
        rep.stationarity = stationarity_residuals(sys, rep.sigma);
        rep.stationarity_route = "generator-numeric";
    }

    if (linear_params) {
        const double m = to_double(linear_params->m);
        const double w = to_double(linear_params->omega);
        const double scale = rep.sigma.cwiseAbs().maxCoeff();
        const double equipartition = std::abs(rep.sigma(1, 1) - m * m * w * w * rep.sigma(0, 0));
        if (std::abs(rep.sigma(0, 1)) <= 1e-10 * std::max(1.0, scale) &&
            equipartition <= 1e-8 * std::abs(rep.sigma(1, 1))) {
            rep.temperature = m * w * w * rep.sigma(0, 0);
        }
    }
    return rep;
}

std::string steady_report_text(const SteadyStateReport& rep) {
    std::ostringstream os;
    os.precision(12);
    os << "steady-state analysis\n";
    os << "drift A      = " << matrix_inline(rep.A) << "\n";
    os << "diffusion g  = " << matrix_inline(rep.g) << "\n";
    os << "covariance   = " << matrix_inline(rep.sigma) << "\n";
    os << "lyapunov residual max|A sigma + sigma A^T + g| = " << rep.residual_norm << "\n";
    os << "hurwitz: " << (rep.hurwitz ? "yes" : "no")
       << ", sigma positive definite: " << (rep.sigma_positive_definite ? "yes" : "no") << "\n";
    os << "stationarity residuals (E[L q^2], E[L qp], E[L p^2]) = (" << rep.stationarity(0)
       << ", " << rep.stationarity(1) << ", " << rep.stationarity(2) << ")  ["
       << rep.stationarity_route << "]\n";
    if (rep.temperature) {
        os << "gibbs form: yes, k_B T = " << *rep.temperature << "\n";
    } else {
        os << "gibbs form: no (cross covariance or equipartition violated); no temperature\n";
    }
    os << "[machine]\n";
    os << "sigma_qq=" << rep.sigma(0, 0) << "\nsigma_qp=" << rep.sigma(0, 1)
       << "\nsigma_pp=" << rep.sigma(1, 1) << "\n";
    os << "residual=" << rep.residual_norm << "\n";
    os << "hurwitz=" << (rep.hurwitz ? 1 : 0) << "\n";
    os << "stat_res_q2=" << rep.stationarity(0) << "\nstat_res_qp=" << rep.stationarity(1)
       << "\nstat_res_p2=" << rep.stationarity(2) << "\n";
    if (rep.temperature) os << "k_b_t=" << *rep.temperature << "\n";
    return os.str();
}

}  // namespace sympflow
