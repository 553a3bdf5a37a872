#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sympflow/catalog.hpp"
#include "sympflow/errors.hpp"
#include "sympflow/verify.hpp"

#include <cmath>

using namespace sympflow;

namespace {
Polynomial poly(const char* text) { return parse_polynomial(text); }
}

TEST_CASE("exact linear model at a rational-square point") {
    LinearModelParams params = default_linear_params();
    params.gamma = Rational(1, 4);
    const ModelSpec model = build_linear_model(params);
    CHECK(model.hamiltonian == poly("1/2*p^2 + 1/2*q^2"));
    REQUIRE(model.channels.size() == 1);
    CHECK(model.channels[0].F == poly("-1/2*p"));
    CHECK(*model.channels[0].G == poly("1/2*q"));
    CHECK(drift_field(model) == VectorField{poly("p"), poly("-q - 1/4*p")});
    // gamma = s^{-1}{F, G} exactly
    CHECK(poisson_bracket(model.channels[0].F, *model.channels[0].G) ==
          Polynomial::constant(params.gamma * params.s));
}

TEST_CASE("exact linear model rejects irrational noise coefficients") {
    LinearModelParams params = default_linear_params();  // gamma = 1/2
    CHECK_THROWS_AS(build_linear_model(params), DomainError);
}

TEST_CASE("parameter domain is enforced") {
    LinearModelParams params = default_linear_params();
    params.gamma = 0;
    CHECK_THROWS_AS(build_linear_model(params), DomainError);
    CHECK_THROWS_AS(linear_drift_diffusion(params), DomainError);
    params.gamma = Rational(1, 2);
    params.m = -1;
    CHECK_THROWS_AS(linear_drift_diffusion(params), DomainError);
}

TEST_CASE("linear drift and diffusion coefficients") {
    const LinearDriftDiffusion ldd = linear_drift_diffusion(default_linear_params());
    Eigen::Matrix2d a_expected;
    a_expected << 0, 1, -1, -0.5;
    CHECK((ldd.A - a_expected).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(ldd.channels.size() == 1);
    const double root_half = std::sqrt(0.5);
    CHECK(ldd.channels[0].sigma(0) == doctest::Approx(-root_half).epsilon(1e-15));
    CHECK(ldd.channels[0].sigma(1) == 0.0);
    CHECK(ldd.channels[0].varsigma(0) == 0.0);
    CHECK(ldd.channels[0].varsigma(1) == doctest::Approx(-root_half).epsilon(1e-15));
    CHECK(ldd.g(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ldd.g(1, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ldd.g(0, 1) == 0.0);

    LinearModelParams shifted = default_linear_params();
    shifted.z = Rational(-1, 4);
    const LinearDriftDiffusion ldd_z = linear_drift_diffusion(shifted);
    Eigen::Matrix2d a_z;
    a_z << -0.25, 1, -1, -0.25;
    CHECK((ldd_z.A - a_z).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("exact linear drift matches the closed form across parameters") {
    // (gamma, s, epsilon) triples with rational square roots
    const Rational gammas[][3] = {{Rational(1, 4), 1, 1},
                                  {Rational(9, 16), 1, 1},
                                  {Rational(1), Rational(1, 2), Rational(1, 2)},
                                  {Rational(4), Rational(1, 2), 2},
                                  {Rational(1, 4), 4, 1}};
    const Rational ms[] = {Rational(1, 2), 1, 2};
    const Rational omegas[] = {1, 2};
    const Rational zs[] = {Rational(-1, 3), 0, Rational(2, 5)};
    for (const auto& gse : gammas)
        for (const auto& m : ms)
            for (const auto& omega : omegas)
                for (const auto& z : zs) {
                    LinearModelParams p;
                    p.gamma = gse[0];
                    p.s = gse[1];
                    p.epsilon = gse[2];
                    p.m = m;
                    p.omega = omega;
                    p.z = z;
                    const VectorField v = drift_field(build_linear_model(p));
                    Polynomial vq = Polynomial::monomial(1, 0, z) +
                                    Polynomial::monomial(0, 1, 1 / m);
                    Polynomial vp = Polynomial::monomial(1, 0, -m * omega * omega) +
                                    Polynomial::monomial(0, 1, -(z + gse[0]));
                    REQUIRE(v == VectorField{vq, vp});
                }
}

TEST_CASE("damped-oscillator dilation models") {
    DhoParams spec_instance{1, 1, Rational(9, 16), 2};
    const ModelSpec model = build_dho_model(spec_instance);
    CHECK(model.hamiltonian == poly("1/2*p^2 + 1/2*q^2 + 9/32*q*p"));
    REQUIRE(model.channels.size() == 1);
    CHECK(!model.channels[0].is_pair());
    CHECK(model.channels[0].F == poly("3/16*p^2 + 3/4*q^2"));
    CHECK(drift_field(model) == VectorField{poly("p"), poly("-q - 9/16*p")});
    CHECK(drift_divergence_from_channels(model) == poly("-9/16"));

    DhoParams unit{1, 1, 1, 1};
    const ModelSpec simple = build_dho_model(unit);
    CHECK(simple.channels[0].F == poly("1/2*p^2 + 1/2*q^2"));
    CHECK(drift_field(simple) == VectorField{poly("p"), poly("-q - p")});

    DhoParams irrational{1, 1, Rational(1, 2), 1};
    CHECK_THROWS_AS(build_dho_model(irrational), DomainError);
    DhoParams negative{1, 1, Rational(-1), 1};
    CHECK_THROWS_AS(build_dho_model(negative), DomainError);
}

TEST_CASE("linear-noise models keep the Hamiltonian drift") {
    const Polynomial h = poly("1/2*p^2 + 1/2*q^2");
    const ModelSpec one = build_example1_model(h, {1}, {2});
    CHECK(drift_field(one) == VectorField{poly("p"), poly("-q")});

    const ModelSpec none = build_example1_model(h, {}, {});
    CHECK(none.channels.empty());
    CHECK(drift_field(none) == hamiltonian_vector_field(h));

    const ModelSpec two = build_example1_model(poly("q^4 + p^3"), {1, 0}, {0, 1});
    CHECK(drift_field(two) == hamiltonian_vector_field(poly("q^4 + p^3")));

    CHECK_THROWS_AS(build_example1_model(h, {1}, {}), DomainError);
}

TEST_CASE("quantum comparison reproduces the classical linear model") {
    QuantumComparisonParams params{2.0, 1.0, 1.0, 0.5, 0.0, 0.25};
    const QuantumComparisonReport rep = quantum_comparison(params);

    Eigen::Matrix2d a_expected;
    a_expected << 0, 1, -1, -0.5;
    CHECK((rep.system.A - a_expected).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((rep.system.g - Eigen::Matrix2d(Eigen::Vector2d(0.5, 0.5).asDiagonal()))
              .cwiseAbs()
              .maxCoeff() <= 1e-15);
    CHECK(rep.s_equivalent == 1.0);
    CHECK(rep.epsilon_equivalent == 1.0);
    CHECK(rep.max_drift_diff <= 1e-12);
    CHECK(rep.max_diffusion_diff <= 1e-12);
    // channel coefficients agree with the classical choice as well
    CHECK(std::abs(rep.system.channels[0].sigma(0) - rep.classical.channels[0].sigma(0)) <=
          1e-12);
    CHECK(std::abs(rep.system.channels[0].varsigma(1) -
                   rep.classical.channels[0].varsigma(1)) <= 1e-12);
    CHECK(rep.system.channels[1].sigma.norm() == 0.0);  // n = 0 empties channel 2
    CHECK(rep.mu_match == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(rep.hurwitz);
    CHECK(!rep.k_b_t.has_value());
    CHECK(rep.text().find("mu = gamma/2") != std::string::npos);
}

TEST_CASE("zero cross-drift coefficient is marginal") {
    QuantumComparisonParams params{2.0, 1.0, 1.0, 0.5, 0.0, 0.0};
    const QuantumComparisonReport rep = quantum_comparison(params);
    Eigen::Matrix2d a_expected;
    a_expected << 0.25, 1, -1, -0.25;
    CHECK((rep.system.A - a_expected).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(rep.trace == 0.0);
    CHECK(!rep.hurwitz);
}

TEST_CASE("occupation-temperature relation") {
    QuantumComparisonParams params{1.0, 1.0, 1.0, 0.5, 1.0, 0.0};
    const QuantumComparisonReport rep = quantum_comparison(params);
    REQUIRE(rep.k_b_t.has_value());
    CHECK(*rep.k_b_t == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("diffusion tensor equals the channel outer-product sum") {
    const double thermals[] = {0.0, 0.3, 1.0, 2.5};
    for (double n : thermals) {
        QuantumComparisonParams params{1.5, 2.0, 0.7, 0.9, n, 0.1};
        const QuantumComparisonReport rep = quantum_comparison(params);
        Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
        for (const auto& ch : rep.system.channels) {
            g += ch.sigma * ch.sigma.transpose();
            g += ch.varsigma * ch.varsigma.transpose();
        }
        CHECK((g - rep.system.g).cwiseAbs().maxCoeff() <= 1e-14);
    }
    QuantumComparisonParams bad{1.0, 1.0, 1.0, 0.5, -0.1, 0.0};
    CHECK_THROWS_AS(quantum_comparison(bad), DomainError);
}
