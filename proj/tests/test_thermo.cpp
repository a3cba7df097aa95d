#include <doctest.h>

#include <gmpxx.h>

#include <cmath>

#include "rabi/oracle.hpp"
#include "rabi/thermo.hpp"

using namespace rabi;

TEST_CASE("Gaussian moment function examples") {
    CHECK(psi_lambda_pm(SimplexPoint({0.2, 0.6}), 1.0, 0.0, Parity::Plus) == 0.0);
    for (auto s : {Parity::Plus, Parity::Minus}) CHECK(std::abs(psi_lambda_pm(SimplexPoint({0.0}), 1.3, 0.9, s)) < 1e-15);

    // lambda = 1, mu = 1/2, t = 1: the gamma = 1 bracket vanishes and the gamma = 0 one
    // is e^{1/2} - e^{-1/2}. Exponents are tracked as exact rationals t(1/2 - mu).
    const mpq_class t(1), mu0(0), mu1(1, 2), half(1, 2);
    double bracket = 0.0;
    for (const auto& [gamma, m] : {std::pair{0, mu0}, std::pair{1, mu1}}) {
        const mpq_class a = t * (half - m), b = t * (m - half);
        const double term = std::exp(a.get_d()) - std::exp(b.get_d());
        bracket += gamma % 2 ? -term : term;
    }
    for (double g : {0.5, 1.0, 1.7}) {
        const double expect = 2 * g * g * std::exp(-1.0) / (1 - std::exp(-2.0)) * bracket * bracket;
        CHECK(psi_lambda_pm(SimplexPoint({0.5}), 1.0, g, Parity::Minus) == doctest::Approx(expect).epsilon(1e-14));
        // (e^{1/2} - e^{-1/2})^2 / sinh 1 = 2 tanh(1/2)
        CHECK(expect == doctest::Approx(2 * g * g * std::tanh(0.5)).epsilon(1e-14));
    }
}

TEST_CASE("closed-form limits") {
    for (double beta : {0.5, 1.0, 2.0}) {
        const double g = 0.9, d = 0.6;
        const double geo = 1 - std::exp(-beta);
        const double z0 = partition_function(ThermoPoint(beta, ModelParams(g, 0.0))).value;
        CHECK(z0 == doctest::Approx(2 * std::exp(g * g * beta) / geo).epsilon(1e-14));
        const double zg = partition_function(ThermoPoint(beta, ModelParams(0.0, d))).value;
        CHECK(zg == doctest::Approx(2 * std::cosh(beta * d) / geo).epsilon(1e-9));

        for (auto s : {Parity::Plus, Parity::Minus}) {
            CHECK(parity_partition(ThermoPoint(beta, ModelParams(g, 0.0)), s).value ==
                  doctest::Approx(std::exp(g * g * beta) / geo).epsilon(1e-14));
            // trace of n + s delta (-1)^n by the geometric series
            const double sd = s == Parity::Plus ? d : -d;
            const double trace = (std::exp(-beta * sd) + std::exp(-beta) * std::exp(beta * sd)) / (1 - std::exp(-2 * beta));
            const double closed = std::cosh(beta * d) / geo - (s == Parity::Plus ? 1 : -1) * std::sinh(beta * d) / (1 + std::exp(-beta));
            CHECK(closed == doctest::Approx(trace).epsilon(1e-14));
            CHECK(parity_partition(ThermoPoint(beta, ModelParams(0.0, d)), s).value == doctest::Approx(trace).epsilon(1e-9));
        }
    }
}

TEST_CASE("series against the Fock-space trace") {
    const ModelParams mp(1.0, 0.5);
    CertifiedOracle full(mp, Sector::Full), plus(mp, Sector::ParityPlus), minus(mp, Sector::ParityMinus);
    for (double beta : {0.5, 1.0, 2.0}) {
        const ThermoPoint tp(beta, mp);
        const auto z = partition_function(tp);
        CHECK(z.value == doctest::Approx(full.partition(beta).value).epsilon(1e-4));
        CHECK_FALSE(z.capped);
        const auto zp = parity_partition(tp, Parity::Plus), zm = parity_partition(tp, Parity::Minus);
        CHECK(zp.value == doctest::Approx(plus.partition(beta).value).epsilon(1e-4));
        CHECK(zm.value == doctest::Approx(minus.partition(beta).value).epsilon(1e-4));
        const double tol = z.quad_error + zp.quad_error + zm.quad_error + z.tail_bound + zp.tail_bound + zm.tail_bound;
        CHECK(std::abs(zp.value + zm.value - z.value) <= 5 * tol + 1e-12 * z.value);
    }
}

TEST_CASE("ordering in beta follows the oracle") {
    const ModelParams mp(0.5, 0.5);
    CertifiedOracle o(mp, Sector::Full);
    double prev = 0.0, prev_o = 0.0;
    for (double beta = 0.2; beta <= 5.0; beta += 0.4) {
        const double z = partition_function(ThermoPoint(beta, mp)).value, zo = o.partition(beta).value;
        if (beta > 0.2) CHECK((z < prev) == (zo < prev_o));
        prev = z;
        prev_o = zo;
    }
}

TEST_CASE("high temperature") {
    const double beta = 0.05;
    const double z = partition_function(ThermoPoint(beta, ModelParams(0.5, 0.5))).value;
    CHECK(std::abs(z * beta / 2 - 1) < 0.05);
}

TEST_CASE("trace of the kernel diagonal") {
    const ModelParams mp(1.0, 0.5);
    const ThermoPoint tp(1.0, mp);
    const auto tr = trace_integral(tp);
    CHECK(tr.value == doctest::Approx(partition_function(tp).value).epsilon(1e-4));
}

TEST_CASE("guards") {
    CHECK_THROWS_AS(ThermoPoint(0.0, ModelParams(1, 1)), ValidationError);
    CHECK_THROWS_AS(ThermoPoint(-1.0, ModelParams(1, 1)), ValidationError);
    CHECK_THROWS_AS(partition_function(ThermoPoint(400.0, ModelParams(3.0, 0.5))), OverflowError);
    CHECK_THROWS_AS(psi_lambda_pm(SimplexPoint{}, 1.0, 1.0, Parity::Plus), ValidationError);
}
