#include <doctest.h>

#include <gmpxx.h>

#include <random>
#include <set>

#include "rabi/combinatorics.hpp"

using namespace rabi;

namespace {
BitString with_bit(const BitString& r, int v) { return r.concat(BitString{v}); }
}

TEST_CASE("ones-position function examples") {
    CHECK(varphi(BitString(5)) == 0);
    CHECK(varphi(BitString{1, 0, 1}) == 2);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        const int k = 1 + static_cast<int>(rng() % 16);
        const auto r = BitString::from_mask(k, rng() & ((std::uint64_t{1} << k) - 1));
        CHECK(varphi_t(r, mpq_class(1)) == varphi(r));
    }
}

TEST_CASE("q-analogue transformation rules hold exactly") {
    const mpq_class ts[] = {mpq_class(3, 10), mpq_class(7, 10), mpq_class(13, 10)};
    for (const auto& t : ts)
        for (int k = 1; k <= 10; ++k)
            for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) {
                const auto r = BitString::from_mask(k, m);
                const mpq_class f = varphi_t(r, t);
                // appending a bit
                for (int v : {0, 1}) {
                    const mpq_class lhs = varphi_t(with_bit(r, v), t);
                    const mpq_class rhs = v * qnum(k + 1, t) + (v ? -f : f);
                    REQUIRE(lhs == rhs);
                }
                // signed suffix-parity sum
                mpq_class s(0), p(1);
                for (int i = 1; i <= k; ++i) {
                    int par = 0;
                    for (int j = i; j <= k; ++j) par ^= r.at(j);
                    s += par ? mpq_class(-p) : p;
                    p *= t;
                }
                REQUIRE(s == qnum(k, t) - 2 * f);
                // the alternative representations
                REQUIRE(varphi_t_ones(r, t) == f);
                REQUIRE(varphi_t_product(r, t) == f);
            }
}

TEST_CASE("Fourier transform of the ones-position function") {
    for (int k = 1; k <= 10; ++k) {
        std::vector<double> f(std::size_t{1} << k);
        for (std::uint64_t m = 0; m < f.size(); ++m) f[m] = varphi(BitString::from_mask(k, m));
        walsh_hadamard(f);
        for (std::uint64_t m = 0; m < f.size(); ++m)
            REQUIRE(f[m] == static_cast<double>(varphi_hat(BitString::from_mask(k, m))));
    }
}

TEST_CASE("Walsh-Hadamard transform is its own inverse up to 2^k") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-1, 1);
    std::vector<double> f(256), g;
    for (auto& v : f) v = U(rng);
    g = f;
    walsh_hadamard(g);
    walsh_hadamard(g);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(g[i] / 256.0 == doctest::Approx(f[i]).epsilon(1e-13));
}

TEST_CASE("g function transform") {
    CHECK(g_function(0, 0, 1, 0.4, 0) == doctest::Approx(0.6));
    CHECK(g_function(0, 1, 1, 0.4, 0) == doctest::Approx(1.4));
    CHECK(fourier_g_hat(1, 0, 1, 0.3, BitString{1}) == doctest::Approx(0.0).epsilon(1e-15));
    for (int k = 1; k <= 8; ++k)
        for (int v : {0, 1})
            for (int w : {0, 1}) {
                std::vector<double> f(std::size_t{1} << k);
                for (std::uint64_t s = 0; s < f.size(); ++s) f[s] = g_function(k, v, w, 0.7, s);
                walsh_hadamard(f);
                for (std::uint64_t m = 0; m < f.size(); ++m)
                    REQUIRE(fourier_g_hat(k, v, w, 0.7, BitString::from_mask(k, m)) ==
                            doctest::Approx(f[m]).epsilon(1e-12));
            }
}

TEST_CASE("even graphs on three vertices") {
    auto gv = [](std::initializer_list<int> b) { return GraphVector(3, BitString(b)); };
    const std::vector<GraphVector> expect{gv({0, 0, 0, 0, 0, 0}), gv({0, 0, 0, 1, 1, 1}), gv({0, 1, 1, 0, 0, 1}),
                                          gv({0, 1, 1, 1, 1, 0}), gv({1, 0, 1, 0, 1, 0}), gv({1, 0, 1, 1, 0, 1}),
                                          gv({1, 1, 0, 0, 1, 1}), gv({1, 1, 0, 1, 0, 0})};
    CHECK(enumerate_V0(3) == expect);
    CHECK(enumerate_V0(1) == std::vector<GraphVector>{GraphVector(1, BitString{0})});
}

TEST_CASE("even graph counts and degrees") {
    for (int m = 1; m <= 5; ++m) {
        const auto v0 = enumerate_V0(m);
        CHECK(v0.size() == (std::size_t{1} << (m * (m - 1) / 2)));
        CHECK(v0 == enumerate_V0_bruteforce(m));
        std::set<std::uint64_t> edges;
        for (const auto& r : v0) {
            for (int d : r.degrees()) REQUIRE(d % 2 == 0);
            edges.insert(r.p2().mask());
        }
        CHECK(edges.size() == v0.size());
    }
}

TEST_CASE("sigma map") {
    const GraphVector r(3, BitString{0, 1, 1, 1, 1, 0});
    CHECK(sigma_rho(BitString{1, 0, 1}, r).bits() == BitString{1, 1, 0, 1, 1, 0});
    CHECK(sigma_rho(BitString{0, 0, 0}, r) == r);
    for (int m = 1; m <= 4; ++m)
        for (std::uint64_t mr = 0; mr < (std::uint64_t{1} << m); ++mr) {
            const auto rho = BitString::from_mask(m, mr);
            for (const auto& v : enumerate_V(m, rho)) REQUIRE(sigma_rho(rho, sigma_rho(rho, v)) == v);
        }
}

TEST_CASE("weighted sum over even graphs") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int m = 1; m <= 4; ++m)
        for (int rep = 0; rep < 20; ++rep) {
            std::vector<std::vector<double>> a(m + 1, std::vector<double>(m + 1, 0.0));
            for (int i = 0; i <= m; ++i)
                for (int j = std::max(i + 1, 1); j <= m; ++j) a[i][j] = U(rng);
            std::vector<int> v(m);
            for (auto& x : v) x = static_cast<int>(rng() % 2);
            const auto [lhs, rhs] = verify_sum_v0(m, a, v);
            REQUIRE(lhs == doctest::Approx(rhs).epsilon(1e-10));
        }
    std::vector<std::vector<double>> zero(3, std::vector<double>(3, 0.0));
    const auto [l0, r0] = verify_sum_v0(2, zero, {0, 0});
    CHECK(l0 == doctest::Approx(1.0));
    CHECK(r0 == doctest::Approx(1.0));
}

TEST_CASE("f + g subset identity, exact") {
    std::mt19937_64 rng(9);
    for (int k = 1; k <= 8; ++k)
        for (int vw : {0, 1}) {
            std::vector<mpq_class> A(k);
            for (auto& a : A) {
                a = mpq_class(static_cast<long>(rng() % 41) - 20, 20);
                a.canonicalize();
            }
            const mpq_class tau(1, 2);
            const auto [lhs, rhs] = verify_sum_fg(k, tau, A, vw);
            REQUIRE(lhs == rhs);
            const auto [f, g] = fg_bruteforce(tau, A);
            const auto [fr, gr] = fg_recurrence(tau, A);
            REQUIRE(f == fr);
            REQUIRE(g == gr);
            // g(tau) = tau^{k+1} f(1/tau)
            REQUIRE(g == ipow(tau, k + 1) * fg_bruteforce(mpq_class(mpq_class(1) / tau), A).first);
        }
    const std::vector<mpq_class> A0{mpq_class(0)};
    const auto [l, r] = verify_sum_fg(1, mpq_class(1, 3), A0, 1);
    // only rho = 0 survives: f = 1, g = tau^2
    CHECK(l == mpq_class(8, 9));
    CHECK(r == l);
}

TEST_CASE("exponential sum over fixed-norm strings") {
    const auto [l, r] = verify_sumexp(12, 3, 0.4, 0.6);
    CHECK(l == doctest::Approx(r).epsilon(1e-10));
    const auto [l0, r0] = verify_sumexp(6, 2, 0.0, 0.0);
    CHECK(l0 == doctest::Approx(r0).epsilon(1e-14));
}

TEST_CASE("partition sets cover Z_2^N exactly once") {
    for (int N = 1; N <= 8; ++N) {
        std::vector<int> hits(std::size_t{1} << N, 0);
        for (int k = 1; k <= N; ++k)
            for (int i : {0, 1})
                for (int j : {0, 1})
                    for (const auto& s : partition_set(N, k, i, j)) ++hits[s.mask()];
        for (int h : hits) REQUIRE(h == 1);
    }
}
