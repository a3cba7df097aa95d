#include "rabi/trotter.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

namespace rabi {

double chebyshev_u_at(int n, double u) {
    const double v = (1.0 - std::pow(u, 2.0 * (n + 1))) / (std::pow(u, n) * (1.0 - u * u));
    return n % 2 ? -v : v;
}

double chebyshev_u_recurrence(int n, double u) {
    const double z = -(1.0 + u * u) / (2.0 * u);
    double prev = 1.0, cur = 2.0 * z;
    if (n == 0) return prev;
    for (int k = 1; k < n; ++k) {
        const double next = 2.0 * z * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

TridiagState::TridiagState(int N, double u) : N_(N), u_(u) {
    if (N < 1) throw ValidationError("step count must be >= 1");
    if (!(u > 0.0 && u < 1.0)) throw ValidationError("u must lie in (0,1)");
}

double TridiagState::det() const { return (1.0 - std::pow(u_, 2 * N_)) / (1.0 - u_ * u_); }

double TridiagState::inv(int i, int j) const {
    if (i > j) std::swap(i, j);
    const double u2 = u_ * u_;
    return std::pow(u_, j - i) * (-std::expm1(i * std::log(u2))) * (-std::expm1((N_ - j) * std::log(u2))) /
           ((-std::expm1(N_ * std::log(u2))) * (1.0 - u2));
}

Eigen::MatrixXd TridiagState::matrix() const {
    const int n = N_ - 1;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        A(i, i) = 1.0 + u_ * u_;
        if (i + 1 < n) A(i, i + 1) = A(i + 1, i) = -u_;
    }
    return A;
}

Eigen::MatrixXd TridiagState::inverse() const {
    const int n = N_ - 1;
    Eigen::MatrixXd B(n, n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) B(i - 1, j - 1) = inv(i, j);
    return B;
}

int eta(const BitString& s, int i) {
    return (s.at(i) ? -1 : 1) + (s.at(i + 1) ? -1 : 1);
}

double lambda_coeff(int j, int N, double u) { return std::pow(u, j - 1) * (1.0 - std::pow(u, 2 * (N - j) + 1)); }

double omega_coeff(int i, int j, int N, double u) {
    if (i > j) std::swap(i, j);
    return std::pow(u, j - i) * (1.0 - std::pow(u, 2 * i)) * (1.0 - std::pow(u, 2 * (N - j)));
}

namespace {
double step_c(double u) { return (1.0 - u) / (1.0 + u); }
double lin_scale(double u, int N, double g) { return std::numbers::sqrt2 * g * (1.0 - u) / (1.0 - std::pow(u, 2 * N)); }
double quad_scale(double u, int N, double g) {
    const double c = step_c(u);
    return g * g * c * c / (2.0 * (1.0 - std::pow(u, 2 * N)));
}
}  // namespace

double i_n_linear_exponent(double x, double y, double u, const BitString& s, double g) {
    const int N = static_cast<int>(s.size());
    double acc = 0.0;
    for (int j = 1; j <= N; ++j)
        acc += (s.at(j) ? -1.0 : 1.0) * (x * lambda_coeff(j, N, u) + y * lambda_coeff(N - j + 1, N, u));
    return lin_scale(u, N, g) * acc;
}

double i_n_quadratic_exponent(double u, const BitString& s, double g) {
    const int N = static_cast<int>(s.size());
    double acc = 0.0;
    for (int i = 1; i < N; ++i) {
        acc += eta(s, i) * eta(s, i) * omega_coeff(i, i, N, u);
        for (int j = i + 1; j < N; ++j) acc += 2.0 * eta(s, i) * eta(s, j) * omega_coeff(i, j, N, u);
    }
    return quad_scale(u, N, g) * acc;
}

double log_i_n_scalar(double x, double y, double u, const BitString& s, double g) {
    const int N = static_cast<int>(s.size());
    const EvalPoint total(x, y, -N * std::log(u));
    return log_mehler_k0(total, g) + i_n_linear_exponent(x, y, u, s, g) + i_n_quadratic_exponent(u, s, g) -
           2.0 * N * g * g * step_c(u);
}

double i_n_scalar(double x, double y, double u, const BitString& s, double g) {
    return std::exp(log_i_n_scalar(x, y, u, s, g));
}

Kernel2x2 word_matrix(int a, int b) {
    if (a == 0 && b == 0) return {1, -1, -1, 1};
    if (a == 1 && b == 1) return {1, 1, 1, 1};
    if (a == 0 && b == 1) return {-1, -1, 1, 1};
    return {-1, 1, -1, 1};
}

double g_k_scalar(double u, const BitString& s, double delta) {
    const int k = static_cast<int>(s.size());
    const double tau = std::pow(u, 2.0 * delta);
    double r = 1.0;
    for (int i = 1; i < k; ++i) r *= s.at(i) == s.at(i + 1) ? 1.0 + tau : 1.0 - tau;
    return std::ldexp(r / std::pow(u, (k - 1) * delta), -k);
}

Kernel2x2 g_n_matrix(double u, const BitString& s, double delta) {
    const int k = static_cast<int>(s.size());
    const Kernel2x2 D = Kernel2x2::diag(std::pow(u, delta), std::pow(u, -delta));
    return g_k_scalar(u, s, delta) * (word_matrix(s.at(1), s.at(k)) * D);
}

Kernel2x2 g_n_product(double u, const BitString& s, double delta) {
    const Kernel2x2 D = Kernel2x2::diag(std::pow(u, delta), std::pow(u, -delta));
    Kernel2x2 P = Kernel2x2::identity();
    for (std::size_t j = 0; j < s.size(); ++j) {
        const double sx = s[j] ? 1.0 : -1.0;  // (-1)^{1-s(j)}
        P = P * (Kernel2x2{0.5, 0.5 * sx, 0.5 * sx, 0.5} * D);
    }
    return P;
}

namespace {

void check_steps(int N) {
    if (N < 1) throw ValidationError("step count must be >= 1");
    if (N > kTrotterMaxSteps)
        throw ValidationError("N=" + std::to_string(N) + " exceeds the path-sum cap of " +
                              std::to_string(kTrotterMaxSteps) + " (would need 2^" + std::to_string(N) + " = " +
                              std::to_string(1ULL << N) + " path evaluations of O(N) each)");
}

struct Compensated {
    long double s = 0.0L, c = 0.0L;
    void add(long double v) {
        const long double t = s + v;
        if (fabsl(s) >= fabsl(v)) c += (s - t) + v;
        else c += (v - t) + s;
        s = t;
    }
    long double value() const { return s + c; }
};

// Sum over the inner bits s(2..N-1) of one endpoint class, walking a Gray code.
class ClassWalker {
public:
    ClassWalker(int N, double u, double x, double y, double g, double tau) : N_(N) {
        const double ls = lin_scale(u, N, g);
        c_.resize(N + 1);
        for (int j = 1; j <= N; ++j) c_[j] = ls * (x * lambda_coeff(j, N, u) + y * lambda_coeff(N - j + 1, N, u));
        const int n = N - 1;
        const double qs = quad_scale(u, N, g);
        om_.assign(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j) om_[(i - 1) * n + (j - 1)] = qs * omega_coeff(i, j, N, u);
        // (1+tau)^{N-1-m} (1-tau)^m for m sign changes
        gpow_.resize(N);
        for (int m = 0; m < N; ++m) gpow_[m] = std::pow(1.0 + tau, N - 1 - m) * std::pow(1.0 - tau, m);
    }

    // sum over Gray indices [lo, hi) of gpow * exp(L + Q)
    long double range(int a, int b, std::uint64_t lo, std::uint64_t hi) const {
        const int n = N_ - 1;
        std::vector<int> sg(N_ + 2);
        std::vector<double> w(n);
        // state at Gray index lo
        const std::uint64_t code = lo ^ (lo >> 1);
        sg[1] = a ? -1 : 1;
        sg[N_] = b ? -1 : 1;
        for (int p = 2; p < N_; ++p) sg[p] = ((code >> (p - 2)) & 1u) ? -1 : 1;
        double L = 0.0;
        for (int j = 1; j <= N_; ++j) L += sg[j] * c_[j];
        std::vector<int> et(n + 1);
        int changes = 0;
        for (int i = 1; i <= n; ++i) {
            et[i] = sg[i] + sg[i + 1];
            changes += sg[i] != sg[i + 1];
        }
        double Q = 0.0;
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += om_[i * n + j] * et[j + 1];
            w[i] = acc;
            Q += et[i + 1] * acc;
        }
        auto shift_eta = [&](int i, int d) {  // eta_i += d
            Q += 2.0 * d * w[i - 1] + d * d * om_[(i - 1) * n + (i - 1)];
            const double* col = &om_[(i - 1) * n];
            for (int r = 0; r < n; ++r) w[r] += d * col[r];
            et[i] += d;
        };

        Compensated acc;
        for (std::uint64_t idx = lo;;) {
            acc.add(static_cast<long double>(gpow_[changes]) * std::exp(static_cast<long double>(L + Q)));
            if (++idx >= hi) break;
            // Gray code flips the lowest set bit of idx
            const int bit = std::countr_zero(idx);
            const int p = bit + 2;
            const int old = sg[p];
            changes -= (sg[p - 1] != old) + (sg[p + 1] != old);
            sg[p] = -old;
            changes += (sg[p - 1] != sg[p]) + (sg[p + 1] != sg[p]);
            L -= 2.0 * old * c_[p];
            shift_eta(p - 1, -2 * old);
            shift_eta(p, -2 * old);
        }
        return acc.value();
    }

private:
    int N_;
    std::vector<double> c_, om_, gpow_;
};

constexpr std::uint64_t kChunk = 1u << 12;

}  // namespace

Kernel2x2 d_n_kernel(const EvalPoint& p, int N, const ModelParams& params) {
    check_steps(N);
    if (N == 1) return single_step_kernel(p, params);
    const double u = std::exp(-p.t / N), g = params.g, delta = params.delta;
    const double tau = std::pow(u, 2.0 * delta);
    const double base = log_mehler_k0(p, g) - 2.0 * N * g * g * step_c(u);
    // g_N = gpow / (u^{(N-1) delta} 2^N), folded into the prefactor
    const double pref_log = base - (N - 1) * delta * std::log(u) - N * std::numbers::ln2;

    const ClassWalker walker(N, u, p.x, p.y, g, tau);
    const std::uint64_t inner = std::uint64_t{1} << (N - 2);
    const std::uint64_t chunks = (inner + kChunk - 1) / kChunk;

    // chunk sums land in fixed slots; the reduction order never depends on threads
    std::vector<long double> part(4 * chunks);
    auto work = [&](std::uint64_t job) {
        const int cls = static_cast<int>(job / chunks);
        const std::uint64_t ch = job % chunks;
        part[job] = walker.range(cls >> 1, cls & 1, ch * kChunk, std::min(inner, (ch + 1) * kChunk));
    };
    const std::uint64_t jobs = 4 * chunks;
    const unsigned nthreads = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), static_cast<unsigned>(jobs)));
    if (nthreads == 1) {
        for (std::uint64_t j = 0; j < jobs; ++j) work(j);
    } else {
        std::vector<std::thread> pool;
        for (unsigned tid = 0; tid < nthreads; ++tid)
            pool.emplace_back([&, tid] {
                for (std::uint64_t j = tid; j < jobs; j += nthreads) work(j);
            });
        for (auto& th : pool) th.join();
    }

    const Kernel2x2 D = Kernel2x2::diag(std::pow(u, delta), std::pow(u, -delta));
    Kernel2x2 out{};
    for (int cls = 0; cls < 4; ++cls) {
        Compensated s;
        for (std::uint64_t ch = 0; ch < chunks; ++ch) s.add(part[cls * chunks + ch]);
        const double val = static_cast<double>(s.value() * expl(static_cast<long double>(pref_log)));
        out += val * (word_matrix(cls >> 1, cls & 1) * D);
    }
    if (!out.finite()) throw OverflowError("d_n_kernel overflow");
    return out;
}

Kernel2x2 d_n_kernel_bruteforce(const EvalPoint& p, int N, const ModelParams& params) {
    check_steps(N);
    const double u = std::exp(-p.t / N);
    Kernel2x2 out{};
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << N); ++m) {
        const BitString s = BitString::from_mask(N, m);
        out += i_n_scalar(p.x, p.y, u, s, params.g) * g_n_matrix(u, s, params.delta);
    }
    return out;
}

}  // namespace rabi
