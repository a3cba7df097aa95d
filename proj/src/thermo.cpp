#include "rabi/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace rabi {

ThermoPoint::ThermoPoint(double beta_, ModelParams params_) : beta(beta_), params(params_) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("beta must be positive and finite");
}

double psi_lambda_pm(std::span<const double> mu, double t, double g, Parity sign) {
    const double s = sign == Parity::Plus ? 1.0 : -1.0;
    const int lambda = static_cast<int>(mu.size());
    double sum = 0.0;
    for (int gamma = 0; gamma <= lambda; ++gamma) {
        const double m = gamma == 0 ? 0.0 : mu[gamma - 1];
        const double v = std::exp(t * (0.5 - m)) + s * std::exp(t * (m - 0.5));
        sum += (gamma % 2) ? -v : v;
    }
    return g * g / std::sinh(t) * sum * sum;
}

double psi_lambda_pm(const SimplexPoint& mu, double t, double g, Parity sign) {
    if (mu.lambda() < 1) throw ValidationError("psi needs lambda >= 1");
    return psi_lambda_pm(std::span<const double>(mu.coords()), t, g, sign);
}

namespace {

// one series over lambda >= 1; even terms carry psi^-, odd terms psi^+,
// each multiplied by its own outer factor (log_even, log_odd)
struct Blocks {
    double even = 0.0, odd = 0.0;  // sums without the outer factors
    double err_even = 0.0, err_odd = 0.0;
    int lambda_used = 0;
    double tail = 0.0;
    bool capped = false;
};

Blocks lambda_series(double beta, const ModelParams& mp, bool want_odd, double log_outer,
                     const TruncationPolicy& policy, const QuadConfig& quad) {
    if (!(policy.tol > 0.0) || policy.lambda_cap < 0) throw ValidationError("invalid truncation policy");
    const double g = mp.g, bd = beta * mp.delta;
    Blocks b;
    if (bd == 0.0) return b;

    // logw <= 2 g^2 tanh(beta/2); |alternating sum| <= 2 * 2cosh(beta/2) for either sign
    const double m = 4.0 * std::cosh(0.5 * beta);
    const double bound = 2.0 * g * g * std::tanh(0.5 * beta) + g * g / std::sinh(beta) * m * m + log_outer;
    auto tail_after = [&](int lambda) {
        const int next = lambda + 1;
        const double ratio = bd / (next + 1);
        if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
        return std::exp(bound + next * std::log(bd) - std::lgamma(next + 1.0) - std::log1p(-ratio));
    };

    for (int lambda = 1; lambda <= policy.lambda_cap; ++lambda) {
        const bool odd = lambda % 2 == 1;
        if (odd && !want_odd) {
            b.tail = tail_after(lambda);
            if (b.tail < policy.tol) break;
            continue;
        }
        const Parity sign = odd ? Parity::Plus : Parity::Minus;
        const double lpow = lambda * std::log(bd);
        SimplexVecFn f = [&](std::span<const double> mu, std::span<double> out) {
            out[0] = std::exp(lpow + log_weight(mu, beta, g) + psi_lambda_pm(mu, beta, g, sign));
        };
        const auto r = simplex_integrate_many(f, lambda, 1, quad.rule_for(lambda))[0];
        if (odd) {
            b.odd += r.value;
            b.err_odd += r.error;
        } else {
            b.even += r.value;
            b.err_even += r.error;
        }
        b.lambda_used = lambda;
        b.tail = tail_after(lambda);
        if (b.tail < policy.tol) break;
        if (lambda == policy.lambda_cap) b.capped = true;
    }
    if (policy.lambda_cap == 0) b.capped = true;
    return b;
}

double checked_exp(double v, const char* what) {
    const double r = std::exp(v);
    if (!std::isfinite(r)) throw OverflowError(std::string(what) + " overflows (beta * g^2 too large)");
    return r;
}

}  // namespace

PartitionResult partition_function(const ThermoPoint& tp, const TruncationPolicy& policy, const QuadConfig& quad) {
    const double beta = tp.beta, g = tp.params.g;
    const double log_outer = std::log(2.0) + g * g * beta - std::log(-std::expm1(-beta));
    const double outer = checked_exp(log_outer, "partition prefactor");
    const auto b = lambda_series(beta, tp.params, false, log_outer, policy, quad);
    PartitionResult r;
    r.value = outer * (1.0 + b.even);
    r.quad_error = outer * b.err_even;
    r.lambda_used = b.lambda_used;
    r.tail_bound = b.tail;
    r.capped = b.capped;
    if (!std::isfinite(r.value)) throw OverflowError("partition function not representable");
    return r;
}

PartitionResult parity_partition(const ThermoPoint& tp, Parity parity, const TruncationPolicy& policy,
                                 const QuadConfig& quad) {
    const double beta = tp.beta, g = tp.params.g;
    const double log_even = g * g * beta - std::log(-std::expm1(-beta));
    const double log_odd = g * g * beta - std::log1p(std::exp(-beta));
    const double even = checked_exp(log_even, "parity partition prefactor");
    const double odd = checked_exp(log_odd, "parity partition prefactor");
    const auto b = lambda_series(beta, tp.params, true, std::max(log_even, log_odd), policy, quad);
    const double s = parity == Parity::Plus ? -1.0 : 1.0;
    PartitionResult r;
    r.value = even * (1.0 + b.even) + s * odd * b.odd;
    r.quad_error = even * b.err_even + odd * b.err_odd;
    r.lambda_used = b.lambda_used;
    r.tail_bound = b.tail;
    r.capped = b.capped;
    if (!std::isfinite(r.value)) throw OverflowError("parity partition function not representable");
    return r;
}

TraceIntegral trace_integral(const ThermoPoint& tp, const TruncationPolicy& policy, const QuadConfig& quad) {
    const double beta = tp.beta;
    auto trace_at = [&](std::span<const std::pair<double, double>> pts) {
        const auto res = heat_kernel_batch(beta, pts, tp.params, policy, quad);
        std::vector<double> tr;
        for (const auto& r : res) tr.push_back(r.value.k11 + r.value.k22);
        return tr;
    };

    // widen until the diagonal trace at the edges is negligible against the centre
    const std::pair<double, double> origin{0.0, 0.0};
    const double centre = std::abs(trace_at(std::span(&origin, 1))[0]);
    double half = 4.0;
    for (;; half += 2.0) {
        const std::pair<double, double> edge[2] = {{half, half}, {-half, -half}};
        const auto tr = trace_at(edge);
        if (std::max(std::abs(tr[0]), std::abs(tr[1])) < 1e-14 * centre) break;
        if (half > 60.0) throw NumericalError("trace integral: kernel diagonal does not decay within |x| <= 60");
    }

    const int nodes = std::max(96, static_cast<int>(std::ceil(12.0 * half)));
    const GaussRule& gr = gauss_legendre01(nodes);
    std::vector<std::pair<double, double>> pts;
    for (double u : gr.x) {
        const double x = half * (2.0 * u - 1.0);
        pts.emplace_back(x, x);
    }
    const auto tr = trace_at(pts);
    TraceIntegral out;
    for (int i = 0; i < nodes; ++i) out.value += 2.0 * half * gr.w[i] * tr[i];
    out.half_width = half;
    out.nodes = nodes;
    return out;
}

}  // namespace rabi
