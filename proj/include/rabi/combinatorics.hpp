// combinatorics.hpp - harmonic analysis on Z_2^k: the ones-position function,
// its q-analogue, Fourier transforms, even graphs and the summation identities
// the heat kernel is assembled from.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rabi/core.hpp"

namespace rabi {

// [i]_t = 1 + t + ... + t^{i-1}. The polynomial form covers t = 1 and exact types.
template <class T>
T qnum(int i, const T& t) {
    T acc(0), p(1);
    for (int m = 0; m < i; ++m) {
        acc += p;
        p *= t;
    }
    return acc;
}

template <class T>
T ipow(const T& base, int n) {
    T r(1), b = base;
    if (n < 0) {
        b = T(1) / base;
        n = -n;
    }
    while (n) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

// alternating sum of ones positions, last one first
int varphi(const BitString& rho);

// half the suffix-parity sum; the defining form
template <class T>
T varphi_t(const BitString& rho, const T& t) {
    const int k = static_cast<int>(rho.size());
    T acc(0), p(1);
    int suffix = 0;
    std::vector<int> par(k);
    for (int i = k - 1; i >= 0; --i) {
        suffix ^= rho[i];
        par[i] = suffix;
    }
    for (int i = 0; i < k; ++i) {
        if (par[i]) acc += p;
        p *= t;
    }
    return acc;
}

// sum_i (-1)^{i-1} [j_{|rho|+1-i}]_t
template <class T>
T varphi_t_ones(const BitString& rho, const T& t) {
    const auto j = rho.ones_positions();
    const int n = static_cast<int>(j.size());
    T acc(0);
    for (int i = 1; i <= n; ++i) {
        T q = qnum(j[n - i], t);
        if (i % 2) acc += q;
        else acc -= q;
    }
    return acc;
}

// sum_i [i]_t rho_i prod_{j>i} (1 - 2 rho_j)
template <class T>
T varphi_t_product(const BitString& rho, const T& t) {
    const int k = static_cast<int>(rho.size());
    T acc(0);
    int sign = 1;
    for (int i = k; i >= 1; --i) {
        if (rho.at(i)) {
            T q = qnum(i, t);
            if (sign > 0) acc += q;
            else acc -= q;
            sign = -sign;
        }
    }
    return acc;
}

// 0/1 coefficients of varphi_t as a polynomial in t
std::vector<int> varphi_poly(const BitString& rho);

// Fourier transform of the ones-position function (closed form)
long long varphi_hat(const BitString& rho);

// in-place Walsh-Hadamard transform: out[rho] = sum_s f[s] (-1)^{<s,rho>}
void walsh_hadamard(std::vector<double>& f);

// g_k^{(v,w)}(s) with tau = u^{2 delta}; k = 0 gives 1 + (-1)^{v+w} tau
double g_function(int k, int v, int w, double tau, std::uint64_t s);
double fourier_g_hat(int k, int v, int w, double tau, const BitString& rho);

// Graphs on m vertices with loops: layout r_{0,1..m}, then r_{i,j} (i<j) lexicographic.
class GraphVector {
public:
    GraphVector(int m, BitString r);
    static int length(int m) { return m * (m + 1) / 2; }

    int vertices() const { return m_; }
    const BitString& bits() const { return r_; }
    int loop(int i) const { return r_[static_cast<std::size_t>(i - 1)]; }  // 1-based vertex
    int edge(int i, int j) const;                                           // 1 <= i < j <= m
    std::vector<int> degrees() const;                                       // loops count once
    bool even() const;

    BitString p1() const;  // loops
    BitString p2() const;  // edges
    BitString q1() const;  // edges at vertex 1
    BitString q2() const;  // edges avoiding vertex 1

    bool operator==(const GraphVector& o) const { return m_ == o.m_ && r_ == o.r_; }
    bool operator<(const GraphVector& o) const { return r_ < o.r_; }

private:
    int m_;
    BitString r_;
};

int edge_index(int m, int i, int j);  // 0-based index of r_{i,j}

// all even-degree graphs, lexicographically sorted
std::vector<GraphVector> enumerate_V0(int m);
// the same set by filtering every bit vector; exhaustive oracle
std::vector<GraphVector> enumerate_V0_bruteforce(int m);
// graphs whose degree parities equal rho
std::vector<GraphVector> enumerate_V(int m, const BitString& rho);

GraphVector sigma_rho(const BitString& rho, const GraphVector& r);

// a is (m+1)x(m+1) upper triangular: a[0][i] loop weights, a[i][j] edge weights
std::pair<double, double> verify_sum_v0(int m, const std::vector<std::vector<double>>& a,
                                        const std::vector<int>& v);

// f_k and g_k by the two-term recurrence
template <class T>
std::pair<T, T> fg_recurrence(const T& tau, const std::vector<T>& A) {
    T f(1), g = tau;
    for (const T& a : A) {
        T nf = f + a * g;
        T ng = tau * (g + a * f);
        f = nf;
        g = ng;
    }
    return {f, g};
}

// direct sums over rho of tau^{phi} prod A^rho and tau^{k+1-phi} prod A^rho
template <class T>
std::pair<T, T> fg_bruteforce(const T& tau, const std::vector<T>& A) {
    const int k = static_cast<int>(A.size());
    T f(0), g(0);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) {
        const BitString rho = BitString::from_mask(k, m);
        T w(1);
        for (int i = 0; i < k; ++i)
            if (rho[i]) w *= A[i];
        const int ph = varphi(rho);
        f += ipow(tau, ph) * w;
        g += ipow(tau, k + 1 - ph) * w;
    }
    return {f, g};
}

// (lhs, rhs) of the f + (-1)^{v+w} g subset-sum identity
template <class T>
std::pair<T, T> verify_sum_fg(int k, const T& tau, const std::vector<T>& A, int vw) {
    const auto [f, g] = fg_bruteforce(tau, A);
    const T lhs = (vw % 2) ? T(f - g) : T(f + g);

    T rhs(0);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) {
        // subset {j_1 < ... < j_l} of {1..k}
        std::vector<int> j{0};
        for (int n = 1; n <= k; ++n)
            if ((m >> (n - 1)) & 1u) j.push_back(n);
        const int l = static_cast<int>(j.size()) - 1;
        j.push_back(k);
        T prod(1);
        for (int i = 0; i <= l; ++i) {
            const int sgn = ((vw + l - i) % 2) ? -1 : 1;
            for (int n = j[i] + 1; n <= j[i + 1]; ++n) prod *= (sgn > 0) ? T(T(1) + A[n - 1]) : T(T(1) - A[n - 1]);
        }
        const T outer = ((vw + l) % 2) ? T(T(1) - tau) : T(T(1) + tau);
        rhs += ipow(T(T(1) + tau), k - l) * ipow(T(T(1) - tau), l) * outer * prod;
    }
    rhs /= ipow(T(2), k);
    return {lhs, rhs};
}

// (lhs, rhs) of the exponential sum over strings of fixed norm
std::pair<double, double> verify_sumexp(int k, int lambda, double t, double s);

// A^{i,j}_{k,N} membership; the sets over 1 <= k <= N, i,j partition Z_2^N
bool in_partition_set(const BitString& s, int k, int i, int j);
std::vector<BitString> partition_set(int N, int k, int i, int j);

}  // namespace rabi
