#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sympflow/errors.hpp"
#include "sympflow/stationary.hpp"
#include "sympflow/verify.hpp"

#include <cmath>
#include <map>

using namespace sympflow;

namespace {

LinearModelParams params_with(Rational gamma, Rational z = 0) {
    LinearModelParams p = default_linear_params();
    p.gamma = gamma;
    p.z = z;
    return p;
}

Eigen::Matrix2d matrix2(double a, double b, double c, double d) {
    Eigen::Matrix2d m;
    m << a, b, c, d;
    return m;
}

}  // namespace

TEST_CASE("lyapunov solver pinned instances") {
    const Eigen::Matrix2d a = matrix2(0, 1, -1, -0.5);
    const Eigen::Matrix2d g = matrix2(0.5, 0, 0, 0.5);
    const Eigen::Matrix2d sigma = lyapunov_solve(a, g);
    CHECK((sigma - matrix2(1.125, -0.25, -0.25, 1.0)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(lyapunov_residual(a, g, sigma) <= 1e-12);

    CHECK((lyapunov_solve(matrix2(-1, 0, 0, -1), matrix2(2, 0, 0, 2)) -
           Eigen::Matrix2d::Identity())
              .cwiseAbs()
              .maxCoeff() <= 1e-14);

    const Eigen::Matrix2d tilted = matrix2(-0.25, 1, -1, -0.25);
    CHECK((lyapunov_solve(tilted, g) - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() <=
          1e-14);
}

TEST_CASE("lyapunov solver rejects unstable drifts by name") {
    const Eigen::Matrix2d g = Eigen::Matrix2d::Identity();
    CHECK_THROWS_WITH_AS(lyapunov_solve(matrix2(1, 0, 0, -0.5), g),
                         doctest::Contains("trace"), DomainError);
    CHECK_THROWS_WITH_AS(lyapunov_solve(matrix2(-2, 0, 0, 1), g), doctest::Contains("det"),
                         DomainError);
    CHECK(is_hurwitz(matrix2(0, 1, -1, -0.5)));
    CHECK(!is_hurwitz(matrix2(0.25, 1, -1, -0.25)));
}

TEST_CASE("lyapunov solutions on random stable systems") {
    TrialRng rng(31);
    int tested = 0;
    while (tested < 200) {
        const double a11 = rng.uniform_int(-40, 40) / 10.0;
        const double a12 = rng.uniform_int(-40, 40) / 10.0;
        const double a21 = rng.uniform_int(-40, 40) / 10.0;
        const double a22 = rng.uniform_int(-40, 40) / 10.0;
        const Eigen::Matrix2d a = matrix2(a11, a12, a21, a22);
        if (!is_hurwitz(a)) continue;
        const double b1 = rng.uniform_int(1, 30) / 10.0;
        const double b2 = rng.uniform_int(1, 30) / 10.0;
        const double c = rng.uniform_int(-9, 9) / 10.0;
        // g = B B^T is positive definite
        const Eigen::Matrix2d b = matrix2(b1, c, 0, b2);
        const Eigen::Matrix2d g = b * b.transpose();
        const Eigen::Matrix2d sigma = lyapunov_solve(a, g);
        ++tested;
        REQUIRE(lyapunov_residual(a, g, sigma) <= 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff() +
                                                                            a.cwiseAbs().maxCoeff() *
                                                                                sigma.cwiseAbs().maxCoeff()));
        // positive definite by leading minors
        REQUIRE(sigma(0, 0) > 0.0);
        REQUIRE(sigma.determinant() > 0.0);
    }
}

TEST_CASE("published z=0 covariance instances") {
    CHECK((published_covariance_z0(params_with(Rational(1, 2))) -
           matrix2(1.125, -0.25, -0.25, 1.0))
              .cwiseAbs()
              .maxCoeff() <= 1e-15);

    LinearModelParams small_gamma = params_with(Rational(1, 100));
    CHECK(published_covariance_z0(small_gamma)(0, 1) == doctest::Approx(-0.005).epsilon(1e-12));

    LinearModelParams heavy = params_with(Rational(1, 2));
    heavy.m = 2;
    CHECK((published_covariance_z0(heavy) - matrix2(0.75, -0.5, -0.5, 2.5))
              .cwiseAbs()
              .maxCoeff() <= 1e-15);

    CHECK_THROWS_AS(published_covariance_z0(params_with(Rational(1, 2), Rational(1, 8))),
                    DomainError);
}

TEST_CASE("published z=0 covariance against the Lyapunov oracle across the grid") {
    // Exact on the epsilon = 1 slice; off it, the published qq entry is the
    // Lyapunov value divided by epsilon (a dimensional slip in the source),
    // so the comparison only passes after scaling that entry back.
    const Rational grid[] = {Rational(1, 2), Rational(1), Rational(2)};
    double worst_eps1 = 0.0;
    double worst_scaled = 0.0;
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
                        REQUIRE(is_hurwitz(ldd.A));
                        const Eigen::Matrix2d oracle = lyapunov_solve(ldd.A, ldd.g);
                        Eigen::Matrix2d published = published_covariance_z0(p);
                        if (eps == 1)
                            worst_eps1 = std::max(
                                worst_eps1, (published - oracle).cwiseAbs().maxCoeff());
                        published(0, 0) *= to_double(eps);
                        worst_scaled = std::max(worst_scaled,
                                                (published - oracle).cwiseAbs().maxCoeff());
                    }
    CHECK(worst_eps1 <= 1e-9);
    CHECK(worst_scaled <= 1e-9);

    // third route: the time-integrated covariance from the augmented matrix
    // exponential converges to the Lyapunov solution, not to the published
    // matrix, at an eps != 1 point
    LinearModelParams off_slice = params_with(Rational(1, 2));
    off_slice.epsilon = Rational(1, 2);
    const LinearDriftDiffusion ldd = linear_drift_diffusion(off_slice);
    const auto [mean_long, cov_long] = exact_linear_moments(
        ldd.A, ldd.g, Eigen::Vector2d::Zero(), Eigen::Matrix2d::Zero(), 80.0);
    (void)mean_long;
    CHECK((cov_long - lyapunov_solve(ldd.A, ldd.g)).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((cov_long - published_covariance_z0(off_slice)).cwiseAbs().maxCoeff() > 1e-2);
}

TEST_CASE("published general-z closed forms") {
    const GeneralZCovariance at_zero = published_covariance_general_z(params_with(Rational(1, 2)));
    CHECK(at_zero.qq == doctest::Approx(1.125).epsilon(1e-12));
    CHECK(at_zero.pp == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(at_zero.qp == doctest::Approx(-0.25).epsilon(1e-12));

    const GeneralZCovariance at_third =
        published_covariance_general_z(params_with(Rational(1, 2), Rational(-1, 3)));
    CHECK(std::abs(at_third.qp) <= 1e-12);  // the published z* zeroes the published qp

    // locate a root of the published denominator's cubic factor
    // z w^2 - z^3 - 2 z^2 gamma - z gamma^2 + 2 w^2 gamma (test-local oracle)
    auto cubic = [](double z) {
        const double w2 = 1.0, gamma = 0.5;
        return z * w2 - z * z * z - 2.0 * z * z * gamma - z * gamma * gamma + 2.0 * w2 * gamma;
    };
    double lo = 0.9, hi = 1.0;
    REQUIRE(cubic(lo) * cubic(hi) < 0.0);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (cubic(lo) * cubic(mid) <= 0.0 ? hi : lo) = mid;
    }
    LinearModelParams at_root = params_with(Rational(1, 2));
    at_root.z = Rational(0.5 * (lo + hi));
    CHECK_THROWS_AS(published_covariance_general_z(at_root), NumericError);
}

TEST_CASE("zero-cross search") {
    const ZeroCrossResult zc = find_zero_cross_z(params_with(Rational(1, 2)));
    CHECK(zc.z_star == doctest::Approx(-0.25).epsilon(1e-10));
    CHECK((zc.sigma - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(zc.k_b_t == doctest::Approx(1.0).epsilon(1e-10));

    LinearModelParams fast = params_with(Rational(1, 2));
    fast.omega = 2;
    const ZeroCrossResult zc2 = find_zero_cross_z(fast);
    CHECK(zc2.z_star == doctest::Approx(-0.4).epsilon(1e-9));

    // defining properties at scattered parameter points, plus the closed-form
    // root of the 3x3 system as an independent oracle
    const double ms[] = {0.5, 1.0, 2.0};
    const double ws[] = {0.5, 1.0, 3.0};
    const double gs[] = {0.1, 0.5, 2.0};
    const double es[] = {0.5, 1.0, 2.0};
    for (double m : ms)
        for (double w : ws)
            for (double gamma : gs)
                for (double eps : es) {
                    LinearModelParams q;
                    q.m = Rational(m);
                    q.omega = Rational(w);
                    q.gamma = Rational(gamma);
                    q.epsilon = Rational(eps);
                    q.s = Rational(3, 2);
                    const ZeroCrossResult r = find_zero_cross_z(q);
                    REQUIRE(std::abs(r.sigma(0, 1)) <= 1e-10);
                    REQUIRE(std::abs(r.sigma(1, 1) - m * m * w * w * r.sigma(0, 0)) <=
                            1e-8 * r.sigma(1, 1));
                    const double e2m2w2 = eps * eps * m * m * w * w;
                    const double closed_form = -e2m2w2 * gamma / (1.0 + e2m2w2);
                    REQUIRE(std::abs(r.z_star - closed_form) <= 1e-9);
                }
}

TEST_CASE("mean-zero gaussian moments by Isserlis") {
    const Eigen::Matrix2d sigma = matrix2(1.5, -0.5, -0.5, 2.0);
    CHECK(gaussian_moment(0, 0, sigma) == 1.0);
    CHECK(gaussian_moment(1, 1, sigma) == doctest::Approx(-0.5));
    CHECK(gaussian_moment(2, 1, sigma) == 0.0);
    CHECK(gaussian_moment(4, 0, sigma) == doctest::Approx(3.0 * 1.5 * 1.5));
    CHECK(gaussian_moment(3, 1, sigma) == doctest::Approx(3.0 * 1.5 * -0.5));
    CHECK(gaussian_moment(2, 2, sigma) ==
          doctest::Approx(1.5 * 2.0 + 2.0 * 0.5 * 0.5));
    CHECK(wick_expectation(parse_polynomial("2*q*p + 1/4"), sigma) ==
          doctest::Approx(2.0 * -0.5 + 0.25));
}

TEST_CASE("stationarity residuals, exact generator route") {
    LinearModelParams quarter = params_with(Rational(1, 4));
    const ModelSpec model = build_linear_model(quarter);
    const LinearDriftDiffusion ldd = linear_drift_diffusion(quarter);
    const Eigen::Matrix2d sigma = lyapunov_solve(ldd.A, ldd.g);
    const Eigen::Vector3d r = stationarity_residuals(model, sigma);
    CHECK(r.cwiseAbs().maxCoeff() <= 1e-12);

    // H = H_0, no channels, identity covariance: rotation invariance
    ModelSpec pure;
    pure.hamiltonian = parse_polynomial("1/2*p^2 + 1/2*q^2");
    const Eigen::Vector3d r0 = stationarity_residuals(pure, Eigen::Matrix2d::Identity());
    CHECK(r0.cwiseAbs().maxCoeff() == 0.0);

    DhoParams dho{1, 1, Rational(9, 16), 2};
    CHECK_THROWS_AS(stationarity_residuals(build_dho_model(dho), sigma), DomainError);
}

TEST_CASE("stationarity residuals, numeric route") {
    const LinearDriftDiffusion ldd = linear_drift_diffusion(params_with(Rational(1, 2)));
    const SdeSystem system = SdeSystem::from_linear(ldd);
    const Eigen::Matrix2d sigma = lyapunov_solve(ldd.A, ldd.g);
    CHECK(stationarity_residuals(system, sigma).cwiseAbs().maxCoeff() <= 1e-12);

    const Eigen::Vector3d at_identity =
        stationarity_residuals(system, Eigen::Matrix2d::Identity());
    CHECK(at_identity(0) == doctest::Approx(0.5).epsilon(1e-12));  // 2 sigma_qp + g_qq

    DhoParams dho{1, 1, Rational(9, 16), 2};
    CHECK_THROWS_AS(
        stationarity_residuals(SdeSystem::from_model(build_dho_model(dho)), sigma),
        DomainError);
}

TEST_CASE("audit of published formulas at the reference parameters") {
    const auto verdicts = audit_published_formulas(default_linear_params());
    std::map<std::string, const AuditVerdict*> by_item;
    for (const auto& v : verdicts) by_item[v.item] = &v;

    REQUIRE(by_item.count("covariance-z0"));
    CHECK(by_item["covariance-z0"]->match);

    REQUIRE(by_item.count("covariance-general-z(z=0)"));
    CHECK(by_item["covariance-general-z(z=0)"]->match);

    REQUIRE(by_item.count("covariance-general-z(z=published z*)"));
    CHECK(!by_item["covariance-general-z(z=published z*)"]->match);
    // the oracle cross covariance at the published z* is 3/38, not zero
    CHECK(by_item["covariance-general-z(z=published z*)"]->computed(0, 1) ==
          doctest::Approx(3.0 / 38.0).epsilon(1e-9));

    REQUIRE(by_item.count("zero-cross-z"));
    CHECK(!by_item["zero-cross-z"]->match);
    CHECK(by_item["zero-cross-z"]->published(0, 0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
    CHECK(by_item["zero-cross-z"]->computed(0, 0) == doctest::Approx(-0.25).epsilon(1e-9));

    REQUIRE(by_item.count("equipartition-temperature"));
    CHECK(!by_item["equipartition-temperature"]->match);
    CHECK(by_item["equipartition-temperature"]->published(0, 0) ==
          doctest::Approx(1.5).epsilon(1e-12));
    CHECK(by_item["equipartition-temperature"]->computed(0, 0) ==
          doctest::Approx(1.0).epsilon(1e-9));

    const std::string text = audit_report_text(verdicts);
    CHECK(text.find("audit.zero-cross-z=discrepant") != std::string::npos);
    CHECK(text.find("audit.covariance-z0=match") != std::string::npos);
}

TEST_CASE("steady-state report assembly") {
    LinearModelParams at_star = params_with(Rational(1, 2), Rational(-1, 4));
    const LinearDriftDiffusion ldd = linear_drift_diffusion(at_star);
    const SteadyStateReport rep =
        analyze_steady_state(ldd.A, ldd.g, std::nullopt, at_star);
    CHECK(rep.hurwitz);
    CHECK(rep.sigma_positive_definite);
    CHECK(rep.residual_norm <= 1e-12);
    REQUIRE(rep.temperature.has_value());
    CHECK(*rep.temperature == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.stationarity.cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(rep.stationarity_route == "generator-numeric");

    const LinearModelParams at_zero = params_with(Rational(1, 2));
    const LinearDriftDiffusion ldd0 = linear_drift_diffusion(at_zero);
    const SteadyStateReport rep0 = analyze_steady_state(ldd0.A, ldd0.g, std::nullopt, at_zero);
    CHECK(!rep0.temperature.has_value());  // cross covariance breaks the Gibbs form

    LinearModelParams quarter = params_with(Rational(1, 4));
    const LinearDriftDiffusion lddq = linear_drift_diffusion(quarter);
    const SteadyStateReport repq =
        analyze_steady_state(lddq.A, lddq.g, build_linear_model(quarter), quarter);
    CHECK(repq.stationarity_route == "generator-exact");
    CHECK(repq.stationarity.cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(steady_report_text(repq).find("sigma_qq=") != std::string::npos);
}
