#include "rabi/combinatorics.hpp"

#include <algorithm>
#include <cmath>

namespace rabi {

int varphi(const BitString& rho) {
    const auto j = rho.ones_positions();
    const int n = static_cast<int>(j.size());
    int acc = 0;
    for (int i = 1; i <= n; ++i) acc += (i % 2 ? 1 : -1) * j[n - i];
    return acc;
}

std::vector<int> varphi_poly(const BitString& rho) {
    const int k = static_cast<int>(rho.size());
    std::vector<int> c(k, 0);
    int suffix = 0;
    for (int i = k - 1; i >= 0; --i) {
        suffix ^= rho[i];
        c[i] = suffix;
    }
    return c;
}

long long varphi_hat(const BitString& rho) {
    const int k = static_cast<int>(rho.size());
    if (k == 0) return 0;
    const long long half = 1LL << (k - 1);
    if (rho.norm() == 0) return k * half;
    // rho = 0_i (+) 1_{k-i}: a non-empty block of trailing ones
    const auto j = rho.ones_positions();
    if (j.back() == k && j.front() == k - static_cast<int>(j.size()) + 1) return -half;
    return 0;
}

void walsh_hadamard(std::vector<double>& f) {
    const std::size_t n = f.size();
    for (std::size_t h = 1; h < n; h <<= 1)
        for (std::size_t i = 0; i < n; i += h << 1)
            for (std::size_t j = i; j < i + h; ++j) {
                const double a = f[j], b = f[j + h];
                f[j] = a + b;
                f[j + h] = a - b;
            }
}

double g_function(int k, int v, int w, double tau, std::uint64_t s) {
    if (k == 0) return 1.0 + ((v + w) % 2 ? -tau : tau);
    auto bit = [&](int pos) { return static_cast<int>((s >> (pos - 1)) & 1u); };
    auto fac = [&](int e) { return 1.0 + (e % 2 ? -tau : tau); };
    double r = fac(v + bit(1)) * fac(w + bit(k));
    for (int i = 1; i < k; ++i) r *= fac(bit(i) + bit(i + 1));
    return std::ldexp(r, -k);
}

double fourier_g_hat(int k, int v, int w, double tau, const BitString& rho) {
    const int ph = varphi(rho);
    const double val = std::pow(tau, ph) + ((v + w) % 2 ? -1.0 : 1.0) * std::pow(tau, k + 1 - ph);
    return (v * rho.norm()) % 2 ? -val : val;
}

int edge_index(int m, int i, int j) {
    int idx = m;
    for (int a = 1; a < i; ++a) idx += m - a;
    return idx + (j - i - 1);
}

GraphVector::GraphVector(int m, BitString r) : m_(m), r_(std::move(r)) {
    if (static_cast<int>(r_.size()) != length(m)) throw ValidationError("graph vector has wrong length");
}

int GraphVector::edge(int i, int j) const { return r_[static_cast<std::size_t>(edge_index(m_, i, j))]; }

std::vector<int> GraphVector::degrees() const {
    std::vector<int> d(m_, 0);
    for (int i = 1; i <= m_; ++i) d[i - 1] += loop(i);
    for (int i = 1; i <= m_; ++i)
        for (int j = i + 1; j <= m_; ++j)
            if (edge(i, j)) {
                ++d[i - 1];
                ++d[j - 1];
            }
    return d;
}

bool GraphVector::even() const {
    for (int d : degrees())
        if (d % 2) return false;
    return true;
}

namespace {
BitString slice(const BitString& r, std::size_t from, std::size_t len) {
    BitString out(len);
    for (std::size_t i = 0; i < len; ++i) out.set(i, r[from + i]);
    return out;
}
}  // namespace

BitString GraphVector::p1() const { return slice(r_, 0, m_); }
BitString GraphVector::p2() const { return slice(r_, m_, m_ * (m_ - 1) / 2); }
BitString GraphVector::q1() const { return slice(r_, m_, m_ > 0 ? m_ - 1 : 0); }
BitString GraphVector::q2() const {
    const std::size_t n = m_ >= 2 ? (m_ - 1) * (m_ - 2) / 2 : 0;
    return slice(r_, r_.size() - n, n);
}

std::vector<GraphVector> enumerate_V(int m, const BitString& rho) {
    if (static_cast<int>(rho.size()) != m) throw ValidationError("parity vector length must equal vertex count");
    const int ne = m * (m - 1) / 2;
    std::vector<GraphVector> out;
    out.reserve(std::size_t{1} << ne);
    for (std::uint64_t e = 0; e < (std::uint64_t{1} << ne); ++e) {
        BitString r(GraphVector::length(m));
        std::vector<int> par(m, 0);
        for (int i = 1, idx = 0; i <= m; ++i)
            for (int j = i + 1; j <= m; ++j, ++idx)
                if ((e >> idx) & 1u) {
                    r.set(m + idx, 1);
                    par[i - 1] ^= 1;
                    par[j - 1] ^= 1;
                }
        // loops fix up the remaining parity
        for (int i = 0; i < m; ++i) r.set(i, par[i] ^ rho[i]);
        out.emplace_back(m, r);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<GraphVector> enumerate_V0(int m) { return enumerate_V(m, BitString(m)); }

std::vector<GraphVector> enumerate_V0_bruteforce(int m) {
    const int len = GraphVector::length(m);
    std::vector<GraphVector> out;
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << len); ++b) {
        // lexicographic order on bit vectors: position 1 is the most significant
        BitString r(len);
        for (int i = 0; i < len; ++i) r.set(i, (b >> (len - 1 - i)) & 1u);
        GraphVector gv(m, r);
        if (gv.even()) out.push_back(gv);
    }
    return out;
}

GraphVector sigma_rho(const BitString& rho, const GraphVector& r) {
    const int m = r.vertices();
    if (static_cast<int>(rho.size()) != m) throw ValidationError("sigma_rho: length mismatch");
    return GraphVector(m, r.bits().plus(rho.concat(BitString(m * (m - 1) / 2))));
}

std::pair<double, double> verify_sum_v0(int m, const std::vector<std::vector<double>>& a,
                                        const std::vector<int>& v) {
    double lhs = 0.0;
    for (const auto& r : enumerate_V0(m)) {
        double term = 1.0;
        for (int i = 1; i <= m; ++i)
            for (int j = i + 1; j <= m; ++j)
                term *= r.edge(i, j) ? std::sinh(a[i][j]) : std::cosh(a[i][j]);
        for (int i = 1; i <= m; ++i) {
            const double s = (v[0] + v[i]) % 2 ? -1.0 : 1.0;
            const double c = std::cosh(a[0][i]), sh = std::sinh(a[0][i]);
            // cosh^{1-r} sinh^{r} (1 + s tanh^{1-2r}) without dividing by sinh
            term *= r.loop(i) ? sh + s * c : c + s * sh;
        }
        lhs += term;
    }
    double ex = 0.0;
    for (int i = 0; i <= m; ++i)
        for (int j = i + 1; j <= m; ++j) ex += ((v[i] + v[j]) % 2 ? -1.0 : 1.0) * a[i][j];
    return {lhs, std::exp(ex)};
}

std::pair<double, double> verify_sumexp(int k, int lambda, double t, double s) {
    double lhs = 0.0, rhs = 0.0;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) {
        const BitString rho = BitString::from_mask(k, m);
        if (rho.norm() != lambda) continue;
        double ex = 0.0, tj = 1.0;
        for (int j = 1; j <= k; ++j) {
            tj *= t;
            ex += tj * varphi_t(rho.prefix(j), s);
        }
        lhs += std::exp(ex);

        std::vector<int> i{0};
        for (int p : rho.ones_positions()) i.push_back(p);
        i.push_back(k + 1);
        double ex2 = 0.0;
        for (int al = 0; al <= lambda; ++al)
            for (int be = al + 1; be <= lambda; be += 2)
                ex2 += ipow(t, i[be]) * ipow(s, i[al]) * qnum(i[al + 1] - i[al], s) *
                       qnum(i[be + 1] - i[be], t);
        rhs += std::exp(ex2);
    }
    return {lhs, rhs};
}

bool in_partition_set(const BitString& s, int k, int i, int j) {
    const int N = static_cast<int>(s.size());
    if (k < 1 || k > N) return false;
    auto all_from = [&](int from, int val) {
        for (int n = from; n <= N; ++n)
            if (s.at(n) != val) return false;
        return true;
    };
    if (k == 1) return i == j && all_from(1, i);
    if (k == 2) return i != j && s.at(1) == i && all_from(2, j);
    return s.at(1) == i && s.at(k - 1) == 1 - j && all_from(k, j);
}

std::vector<BitString> partition_set(int N, int k, int i, int j) {
    std::vector<BitString> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << N); ++m) {
        BitString s = BitString::from_mask(N, m);
        if (in_partition_set(s, k, i, j)) out.push_back(s);
    }
    return out;
}

}  // namespace rabi
