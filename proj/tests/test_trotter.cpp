#include <doctest.h>

#include <cmath>
#include <random>

#include "rabi/oracle.hpp"
#include "rabi/quadrature.hpp"
#include "rabi/trotter.hpp"

using namespace rabi;

TEST_CASE("Chebyshev values") {
    for (double u : {0.2, 0.5, 0.9}) {
        CHECK(chebyshev_u_at(0, u) == doctest::Approx(1.0));
        CHECK(chebyshev_u_at(1, u) == doctest::Approx(-(1 + u * u) / u));
        for (int n = 0; n <= 30; ++n)
            CHECK(chebyshev_u_at(n, u) == doctest::Approx(chebyshev_u_recurrence(n, u)).epsilon(1e-10));
    }
}

TEST_CASE("tridiagonal inverse and determinant") {
    for (int N : {2, 3, 7, 12})
        for (double u : {0.3, 0.8}) {
            const TridiagState a(N, u);
            const Eigen::MatrixXd m = a.matrix();
            CHECK(a.det() == doctest::Approx(m.determinant()).epsilon(1e-12));
            const Eigen::MatrixXd inv = m.inverse();
            for (int i = 1; i < N; ++i)
                for (int j = 1; j < N; ++j) REQUIRE(a.inv(i, j) == doctest::Approx(inv(i - 1, j - 1)).epsilon(1e-12));
            CHECK((a.inverse() - inv).cwiseAbs().maxCoeff() < 1e-12);
        }
}

TEST_CASE("complement flips the linear exponent and keeps the quadratic one") {
    std::mt19937_64 rng(2);
    for (int N = 1; N <= 8; ++N)
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << N); ++m) {
            const auto s = BitString::from_mask(N, m);
            const auto c = s.complemented();
            REQUIRE(i_n_linear_exponent(0.4, -1.1, 0.7, c, 0.8) ==
                    doctest::Approx(-i_n_linear_exponent(0.4, -1.1, 0.7, s, 0.8)).epsilon(1e-13));
            REQUIRE(i_n_quadratic_exponent(0.7, c, 0.8) ==
                    doctest::Approx(i_n_quadratic_exponent(0.7, s, 0.8)).epsilon(1e-13));
        }
}

TEST_CASE("word matrices agree with the ordered product") {
    for (int k = 1; k <= 10; ++k)
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) {
            const auto s = BitString::from_mask(k, m);
            REQUIRE(max_abs_diff(g_n_matrix(0.6, s, 0.7), g_n_product(0.6, s, 0.7)) < 1e-13);
        }
}

TEST_CASE("N = 1 is the one-step kernel") {
    const ModelParams mp(0.8, 0.6);
    for (double x : {-1.0, 0.2, 1.5})
        for (double y : {-0.5, 0.9}) {
            const EvalPoint p(x, y, 0.7);
            CHECK(max_abs_diff(d_n_kernel(p, 1, mp), single_step_kernel(p, mp)) < 1e-14);
        }
}

// D_N as the composition of N one-step kernels, integrated numerically over the intermediate points
TEST_CASE("N = 2 and N = 3 against direct Gaussian quadrature") {
    const ModelParams mp(0.7, 0.5);
    const double t = 1.0;
    const auto& gr = gauss_legendre01(120);
    const double L = 9.0;
    std::vector<double> z, w;
    for (std::size_t i = 0; i < gr.x.size(); ++i) {
        z.push_back(2 * L * gr.x[i] - L);
        w.push_back(2 * L * gr.w[i]);
    }
    for (auto [x, y] : {std::pair{0.3, -0.4}, std::pair{1.2, 0.5}, std::pair{-1.0, -1.3}}) {
        Kernel2x2 d2;
        for (std::size_t i = 0; i < z.size(); ++i)
            d2 += w[i] * (single_step_kernel(EvalPoint(x, z[i], t / 2), mp) *
                          single_step_kernel(EvalPoint(z[i], y, t / 2), mp));
        const auto a2 = d_n_kernel(EvalPoint(x, y, t), 2, mp);
        CHECK(max_abs_diff(a2, d2) < 1e-8 * a2.max_abs());

        Kernel2x2 d3;
        for (std::size_t i = 0; i < z.size(); ++i) {
            const auto left = single_step_kernel(EvalPoint(x, z[i], t / 3), mp);
            for (std::size_t j = 0; j < z.size(); ++j)
                d3 += (w[i] * w[j]) * (left * single_step_kernel(EvalPoint(z[i], z[j], t / 3), mp) *
                                       single_step_kernel(EvalPoint(z[j], y, t / 3), mp));
        }
        const auto a3 = d_n_kernel(EvalPoint(x, y, t), 3, mp);
        CHECK(max_abs_diff(a3, d3) < 1e-8 * a3.max_abs());
    }
}

TEST_CASE("fast path walk matches the plain double loop") {
    const ModelParams mp(1.0, 0.5);
    for (int N : {2, 5, 9}) {
        const EvalPoint p(0.4, -0.8, 1.0);
        const auto a = d_n_kernel(p, N, mp), b = d_n_kernel_bruteforce(p, N, mp);
        CHECK(max_abs_diff(a, b) < 1e-12 * a.max_abs());
    }
}

TEST_CASE("g = 0: every N gives Mehler times the diagonal exponentials") {
    const ModelParams mp(0.0, 0.6);
    const EvalPoint p(0.5, -0.3, 1.2);
    const double m = mehler_k0(p, 0.0);
    for (int N : {1, 2, 4, 8}) {
        const auto k = d_n_kernel(p, N, mp);
        CHECK(k.k11 == doctest::Approx(m * std::exp(-1.2 * 0.6)).epsilon(1e-12));
        CHECK(k.k22 == doctest::Approx(m * std::exp(1.2 * 0.6)).epsilon(1e-12));
        CHECK(std::abs(k.k12) < 1e-14);
    }
}

TEST_CASE("closed form against the Fock-space Trotter product") {
    const ModelParams mp(1.0, 0.5);
    const int n_cut = 80;
    for (int N : {1, 2, 4}) {
        const auto P = trotter_matrix_product(mp, n_cut, 1.0, N);
        for (double x : {-1.0, 0.0, 1.0})
            for (double y : {-0.5, 1.5}) {
                const auto a = d_n_kernel(EvalPoint(x, y, 1.0), N, mp);
                CHECK(max_abs_diff(a, position_kernel(P, n_cut, x, y)) < 1e-6);
            }
    }
}

TEST_CASE("step count limits") {
    CHECK_THROWS_AS(d_n_kernel(EvalPoint(0, 0, 1), 0, ModelParams(1, 1)), ValidationError);
    CHECK_THROWS_AS(d_n_kernel(EvalPoint(0, 0, 1), kTrotterMaxSteps + 1, ModelParams(1, 1)), ValidationError);
}
