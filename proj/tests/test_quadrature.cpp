#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rabi/quadrature.hpp"

using namespace rabi;

namespace {
const SimplexRule kRules[] = {SimplexRule::nested(16), SimplexRule::qmc(1 << 14, 3), SimplexRule::mapped_qmc(1 << 14, 3)};
}

TEST_CASE("constant integrand gives the simplex volume") {
    for (const auto& rule : kRules)
        for (int lambda = 1; lambda <= 5; ++lambda) {
            const auto r = simplex_integrate([](const SimplexPoint&) { return 1.0; }, lambda, rule);
            CHECK(r.value == doctest::Approx(1.0 / factorial(lambda)).epsilon(1e-12));
        }
    const auto r = simplex_integrate([](const SimplexPoint&) { return 1.0; }, 9, SimplexRule::mapped_qmc(1 << 12));
    CHECK(r.value == doctest::Approx(1.0 / factorial(9)).epsilon(1e-12));
}

TEST_CASE("product of coordinates, lambda = 3") {
    auto f = [](const SimplexPoint& p) { return p.mu(1) * p.mu(2) * p.mu(3); };
    CHECK(simplex_integrate(f, 3, SimplexRule::nested(12)).value == doctest::Approx(1.0 / 48).epsilon(1e-13));
    for (const auto& rule : {SimplexRule::qmc(1 << 16), SimplexRule::mapped_qmc(1 << 16)}) {
        const auto r = simplex_integrate(f, 3, rule);
        CHECK(std::abs(r.value - 1.0 / 48) < std::max(5.0 * r.error, 1e-6));
    }
}

TEST_CASE("exponential in one dimension") {
    auto f = [](const SimplexPoint& p) { return std::exp(p.mu(1)); };
    for (const auto& rule : kRules) {
        const auto r = simplex_integrate(f, 1, rule);
        CHECK(std::abs(r.value - (std::numbers::e - 1.0)) <= std::max(5.0 * r.error, 1e-13));
    }
}

TEST_CASE("points are ordered") {
    for (const auto& rule : kRules)
        simplex_integrate(
            [](const SimplexPoint& p) {
                for (int i = 1; i < p.lambda(); ++i) REQUIRE(p.mu(i) <= p.mu(i + 1));
                REQUIRE(p.mu(1) >= 0.0);
                REQUIRE(p.mu(p.lambda()) <= 1.0);
                return 0.0;
            },
            4, rule);
}

TEST_CASE("qmc is reproducible for a fixed seed and varies with the seed") {
    auto f = [](const SimplexPoint& p) { return std::cos(3 * p.mu(1)) * std::exp(p.mu(6) - p.mu(2)); };
    const auto a = simplex_integrate(f, 7, SimplexRule::mapped_qmc(1 << 12, 5));
    const auto b = simplex_integrate(f, 7, SimplexRule::mapped_qmc(1 << 12, 5));
    const auto c = simplex_integrate(f, 7, SimplexRule::mapped_qmc(1 << 12, 6));
    CHECK(a.value == b.value);
    CHECK(a.error == b.error);
    CHECK(a.value != c.value);
}

TEST_CASE("nested rule converges under refinement") {
    auto f = [](const SimplexPoint& p) { return std::exp(-2.0 * p.mu(1) + p.mu(2) * p.mu(3)); };
    const double fine = simplex_integrate(f, 3, SimplexRule::nested(40)).value;
    const double e8 = std::abs(simplex_integrate(f, 3, SimplexRule::nested(4)).value - fine);
    const double e16 = std::abs(simplex_integrate(f, 3, SimplexRule::nested(8)).value - fine);
    CHECK(e16 < e8);
    CHECK(e16 < 1e-9);
}

TEST_CASE("config picks nested then qmc") {
    QuadConfig q;
    CHECK(q.rule_for(3).mode == QuadMode::NestedGauss);
    CHECK(q.rule_for(kNestedMaxLambda + 1).mode == QuadMode::MappedQmc);
    q.qmc_mode = QuadMode::SortedQmc;
    CHECK(q.rule_for(8).mode == QuadMode::SortedQmc);
}

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
    const auto& gr = gauss_legendre01(10);
    double s = 0.0;
    for (std::size_t i = 0; i < gr.x.size(); ++i) s += gr.w[i] * std::pow(gr.x[i], 19);
    CHECK(s == doctest::Approx(1.0 / 20).epsilon(1e-14));
}

TEST_CASE("validation") {
    auto f = [](const SimplexPoint&) { return 1.0; };
    CHECK_THROWS_AS(simplex_integrate(f, 6, SimplexRule::nested(8)), ValidationError);
    CHECK_THROWS_AS(simplex_integrate(f, 2, SimplexRule::qmc(1000)), ValidationError);
}
