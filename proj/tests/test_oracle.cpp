#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

#include "rabi/oracle.hpp"
#include "rabi/quadrature.hpp"

using namespace rabi;

TEST_CASE("Hermite functions") {
    CHECK(hermite_phi(0, 0.0) == doctest::Approx(std::pow(std::numbers::pi, -0.25)).epsilon(1e-15));
    CHECK(hermite_phi(1, 0.0) == 0.0);
    const auto& gr = gauss_legendre01(400);
    const double L = 14.0;
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(21, 21);
    for (std::size_t i = 0; i < gr.x.size(); ++i) {
        const double x = 2 * L * gr.x[i] - L;
        const auto h = hermite_all(20, x);
        for (int n = 0; n <= 20; ++n)
            for (int m = 0; m <= 20; ++m) G(n, m) += 2 * L * gr.w[i] * h[n] * h[m];
    }
    CHECK((G - Eigen::MatrixXd::Identity(21, 21)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("eigensolver agrees with Eigen's") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> N01;
    for (int n : {1, 2, 5, 40}) {
        Eigen::MatrixXd A(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) A(i, j) = A(j, i) = N01(rng);
        const auto mine = symmetric_eigen(A);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(A);
        CHECK((mine.values - ref.eigenvalues()).cwiseAbs().maxCoeff() < 1e-11);
        CHECK(mine.residual < 1e-10);
        CHECK((mine.vectors.transpose() * mine.vectors - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <
              1e-12);
    }
}

TEST_CASE("Hamiltonian is symmetric") {
    const auto H = build_hamiltonian(ModelParams(1.0, 0.7), 30, Sector::Full);
    CHECK((H - H.transpose()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(H.rows() == 62);
    CHECK(build_hamiltonian(ModelParams(1.0, 0.7), 30, Sector::ParityPlus).rows() == 31);
}

TEST_CASE("spectrum limits") {
    const double g = 0.8;
    const auto m0 = build_model(ModelParams(g, 0.0), 80, Sector::Full);
    CHECK(m0.energies(0) == doctest::Approx(-g * g).epsilon(1e-10));
    CHECK(m0.energies(1) == doctest::Approx(-g * g).epsilon(1e-10));
    CHECK(m0.energies(2) == doctest::Approx(1 - g * g).epsilon(1e-10));

    const auto m1 = build_model(ModelParams(0.0, 0.3), 20, Sector::Full);
    std::vector<double> expect;
    for (int n = 0; n <= 20; ++n) {
        expect.push_back(n - 0.3);
        expect.push_back(n + 0.3);
    }
    std::sort(expect.begin(), expect.end());
    for (std::size_t i = 0; i < expect.size(); ++i) CHECK(m1.energies(i) == doctest::Approx(expect[i]).epsilon(1e-12));
}

TEST_CASE("cutoff doubling leaves the low spectrum unchanged") {
    const auto a = build_model(ModelParams(1.0, 1.0), 40, Sector::Full);
    const auto b = build_model(ModelParams(1.0, 1.0), 80, Sector::Full);
    for (int i = 0; i < 10; ++i) CHECK(std::abs(a.energies(i) - b.energies(i)) < 1e-8);
}

TEST_CASE("oracle kernel limits and symmetry") {
    const auto free = build_model(ModelParams(0.0, 0.0), 120, Sector::Full);
    for (double x : {-1.0, 0.5})
        for (double y : {0.0, 1.2}) {
            const EvalPoint p(x, y, 1.0);
            const auto k = oracle_heat_kernel(free, p);
            CHECK(k.k11 == doctest::Approx(mehler_k0(p, 0.0)).epsilon(1e-10));
            CHECK(k.k22 == doctest::Approx(mehler_k0(p, 0.0)).epsilon(1e-10));
            CHECK(std::abs(k.k12) < 1e-14);
        }
    const auto m = build_model(ModelParams(1.0, 0.5), 80, Sector::Full);
    for (double x : {-1.5, 0.3})
        for (double y : {-0.2, 1.0}) {
            const auto a = oracle_heat_kernel(m, EvalPoint(x, y, 0.7));
            const auto b = oracle_heat_kernel(m, EvalPoint(y, x, 0.7));
            CHECK(max_abs_diff(a, b.transposed()) < 1e-12);
        }
}

TEST_CASE("long times project onto the ground state") {
    // the gap stays below 1, so t = 16 puts the first excited state below 1e-6
    const auto m = build_model(ModelParams(0.2, 2.0), 80, Sector::Full);
    const double t = 16.0;
    REQUIRE(std::exp(-t * (m.energies(1) - m.energies(0))) < 1e-6);
    const double e0 = m.energies(0);
    for (double x : {-0.5, 0.4})
        for (double y : {0.1, 0.8}) {
            const auto k = oracle_heat_kernel(m, EvalPoint(x, y, t));
            // ground-state spinor (psi_up(x), psi_down(x))
            auto psi = [&](double z) {
                const auto h = hermite_all(m.n_cut, z);
                double up = 0, dn = 0;
                for (int n = 0; n <= m.n_cut; ++n) {
                    up += m.vectors(n, 0) * h[n];
                    dn += m.vectors(m.n_cut + 1 + n, 0) * h[n];
                }
                return std::pair{up, dn};
            };
            const auto [ux, dx] = psi(x);
            const auto [uy, dy] = psi(y);
            const double s = std::exp(-t * e0);
            CHECK(k.k11 / (s * ux * uy) == doctest::Approx(1.0).epsilon(1e-6));
            CHECK(k.k22 / (s * dx * dy) == doctest::Approx(1.0).epsilon(1e-6));
        }
}

TEST_CASE("partition function limits and parity decomposition") {
    const double beta = 1.3;
    const auto z0 = oracle_partition(build_model(ModelParams(0.9, 0.0), 120, Sector::Full), beta);
    CHECK(z0 == doctest::Approx(2 * std::exp(0.81 * beta) / (1 - std::exp(-beta))).epsilon(1e-10));
    const auto zg = oracle_partition(build_model(ModelParams(0.0, 0.4), 120, Sector::Full), beta);
    CHECK(zg == doctest::Approx(2 * std::cosh(beta * 0.4) / (1 - std::exp(-beta))).epsilon(1e-12));

    const ModelParams mp(1.0, 0.7);
    const double full = oracle_partition(build_model(mp, 60, Sector::Full), beta);
    const double plus = oracle_partition(build_model(mp, 60, Sector::ParityPlus), beta);
    const double minus = oracle_partition(build_model(mp, 60, Sector::ParityMinus), beta);
    CHECK(full == doctest::Approx(plus + minus).epsilon(1e-10));
}

TEST_CASE("parity conjugation block-diagonalizes the Hamiltonian") {
    const int n_cut = 30;
    const auto H = build_hamiltonian(ModelParams(1.0, 0.6), n_cut, Sector::Full);
    const auto P = parity_operator(n_cut);
    CHECK((H * P - P * H).cwiseAbs().maxCoeff() < 1e-12);
    const auto T = parity_transform(n_cut);
    const Eigen::MatrixXd B = T * H * T.transpose();
    const int h = n_cut + 1;
    CHECK(B.topRightCorner(h, h).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(B.bottomLeftCorner(h, h).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("semigroup and the Trotter product") {
    const ModelParams mp(0.8, 0.5);
    const auto m = build_model(mp, 40, Sector::Full);
    const auto a = heat_semigroup_matrix(m, 0.4), b = heat_semigroup_matrix(m, 0.6), c = heat_semigroup_matrix(m, 1.0);
    CHECK((a * b - c).cwiseAbs().maxCoeff() < 1e-12);

    // delta = 0: the two factors commute and the product is exact
    const ModelParams md(0.8, 0.0);
    const auto m0 = build_model(md, 40, Sector::Full);
    for (int N : {1, 3})
        CHECK(spectral_norm(trotter_matrix_product(md, 40, 1.0, N) - heat_semigroup_matrix(m0, 1.0)) < 1e-10);

    // N = 1 position kernel is the one-step kernel
    const int n_cut = 120;
    const auto P1 = trotter_matrix_product(mp, n_cut, 1.0, 1);
    for (double x : {-1.0, 0.5})
        for (double y : {0.0, 1.0})
            CHECK(max_abs_diff(position_kernel(P1, n_cut, x, y), single_step_kernel(EvalPoint(x, y, 1.0), mp)) < 1e-8);
}

TEST_CASE("certified oracle") {
    CertifiedOracle o(ModelParams(1.0, 0.5), Sector::Full, 40);
    const auto k = o.kernel(EvalPoint(0.5, -0.5, 1.0));
    CHECK(k.cutoff_delta < 1e-9);
    const auto z = o.partition(1.0);
    CHECK(z.cutoff_delta < 1e-12 * z.value);
}
