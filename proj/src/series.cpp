#include "rabi/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace rabi {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

struct TimeConsts {
    double t, sh, ch, coth_half, tanh_half;
    explicit TimeConsts(double t_)
        : t(t_), sh(std::sinh(t_)), ch(std::cosh(t_)), coth_half(1.0 / std::tanh(0.5 * t_)),
          tanh_half(std::tanh(0.5 * t_)) {}
};

inline double F(double mu, double t) { return 2.0 * std::cosh(t * (1.0 - mu)); }
inline double G(double mu, double t) { return 2.0 * std::cosh(t * mu); }

// everything the integrand needs from one mu sample, in O(lambda)
struct Sample {
    ThetaCoeffs theta;
    double logw = 0.0;
};

Sample evaluate_sample(std::span<const double> mu, const TimeConsts& tc, double g) {
    const int lambda = static_cast<int>(mu.size());
    const double t = tc.t;
    auto m = [&](int gamma) { return gamma == 0 ? 0.0 : mu[gamma - 1]; };
    const bool odd = lambda % 2 == 1;
    const double sgn = odd ? -1.0 : 1.0;

    double f_alt = 0.0, g_alt = 0.0;
    for (int gamma = 0; gamma <= lambda; ++gamma) {
        const double s = (gamma % 2 == 0) ? 1.0 : -1.0;
        f_alt += s * F(m(gamma), t);
        g_alt += s * G(m(gamma), t);
    }

    Sample out;
    const double k = kSqrt2 * g;
    out.theta.ax = k * ((odd ? 2.0 * tc.ch / tc.sh : 0.0) - tc.coth_half + sgn * f_alt / tc.sh);
    out.theta.ay = k * ((odd ? -2.0 / tc.sh : 0.0) + tc.coth_half - sgn * g_alt / tc.sh);

    const double c = g * g / tc.sh;
    const double half = 2.0 * std::sinh(0.5 * t * (1.0 - m(lambda)));
    double xi = -c * half * half * sgn * g_alt;
    // pairs alpha < beta with beta - alpha odd, via running parity sums of B_alpha
    double bsum[2] = {0.0, 0.0};
    double pair_sum = 0.0;
    for (int beta = 0; beta < lambda; ++beta) {
        const double a_beta = F(m(beta + 1), t) - F(m(beta), t);
        pair_sum += a_beta * bsum[(beta + 1) % 2];
        bsum[beta % 2] += G(m(beta), t) - G(m(beta + 1), t);
    }
    xi -= c * pair_sum;

    double gate = 0.0;
    if (!odd) gate = 4.0 * g * g * std::cosh(t * (1.0 - m(lambda))) / tc.sh;
    const double pref = -2.0 * g * g * (odd ? tc.tanh_half : tc.coth_half);
    out.logw = pref + gate + xi;
    return out;
}

double max_abs_alpha(double x, double y, const TimeConsts& tc, double g) {
    const double k = kSqrt2 * g;
    const double base = k * std::abs(x - y) * tc.coth_half;
    const double odd = std::abs(k / tc.sh * (2.0 * x * tc.ch - 2.0 * y)) + base;
    return std::max(base, odd);
}

}  // namespace

ThetaCoeffs theta_coeffs(const SimplexPoint& mu, double t, double g) {
    return evaluate_sample(mu.coords(), TimeConsts(t), g).theta;
}

double theta_lambda(const EvalPoint& p, const SimplexPoint& mu, double g) {
    const auto c = theta_coeffs(mu, p.t, g);
    return p.x * c.ax + p.y * c.ay;
}

double xi_lambda(const SimplexPoint& mu, double t, double g) {
    const TimeConsts tc(t);
    const Sample s = evaluate_sample(mu.coords(), tc, g);
    const int lambda = mu.lambda();
    return s.logw - lambda_prefactor_log(lambda, t, g) - gated_cosh_term(mu, t, g);
}

// the displayed double sum taken literally, O(lambda^2)
double xi_lambda_split(const SimplexPoint& mu, double t, double g) {
    const int lambda = mu.lambda();
    const double c = 2.0 * g * g * std::exp(-t) / (1.0 - std::exp(-2.0 * t));
    const double ml = mu.mu(lambda);
    const double sq = std::exp(0.5 * t * (1.0 - ml)) - std::exp(0.5 * t * (ml - 1.0));
    double alt = 0.0;
    for (int gamma = 0; gamma <= lambda; ++gamma)
        alt += ((gamma % 2) ? -1.0 : 1.0) * (std::exp(-t * mu.mu(gamma)) + std::exp(t * mu.mu(gamma)));
    double first = -c * sq * sq * ((lambda % 2) ? -1.0 : 1.0) * alt;
    double second = 0.0;
    for (int beta = 1; beta <= lambda - 1; ++beta)
        for (int alpha = 0; alpha < beta; ++alpha) {
            if ((beta - alpha) % 2 == 0) continue;
            const double b1 = mu.mu(beta + 1), b0 = mu.mu(beta);
            const double a0 = mu.mu(alpha), a1 = mu.mu(alpha + 1);
            const double lhs = (std::exp(t * (1.0 - b1)) + std::exp(t * (b1 - 1.0))) -
                               (std::exp(t * (1.0 - b0)) + std::exp(t * (b0 - 1.0)));
            const double rhs = (std::exp(t * a0) + std::exp(-t * a0)) - (std::exp(t * a1) + std::exp(-t * a1));
            second += lhs * rhs;
        }
    return first - c * second;
}

double split_phi(double s, double t, double g) {
    const double g2 = g * g;
    const double e2 = std::exp(-2.0 * t);
    return -4.0 * g2 * (1.0 + e2) / (1.0 - e2) +
           2.0 * g2 * std::exp(-s * t) * (1.0 + std::exp(t * (2.0 * s - 1.0))) / (1.0 - std::exp(-t)) +
           2.0 * g2 * std::exp(-s * t) * (1.0 - std::exp(t * (s - 1.0))) * (1.0 - std::exp(-s * t)) *
               (1.0 + std::exp(t * (2.0 * s - 1.0))) / (1.0 - e2);
}

double split_sigma(int lambda, double s, double t, double g) {
    const double g2 = g * g;
    const double den = 1.0 - std::exp(-2.0 * t);
    const double sq = std::pow(1.0 - std::exp(t * (s - 1.0)), 2);
    const double odd = (lambda % 2) ? 1.0 : 0.0;
    return -4.0 * g2 * std::exp(-t * s) * sq / den * odd +
           2.0 * g2 * std::exp(-t * s) * sq * (std::exp(t * s) + std::exp(-t * s)) / den;
}

double lambda_prefactor_log(int lambda, double t, double g) {
    const double h = std::tanh(0.5 * t);
    return -2.0 * g * g * ((lambda % 2) ? h : 1.0 / h);
}

double gated_cosh_term(const SimplexPoint& mu, double t, double g) {
    const int lambda = mu.lambda();
    if (lambda % 2) return 0.0;
    return 4.0 * g * g * std::cosh(t * (1.0 - mu.mu(lambda))) / std::sinh(t);
}

double log_weight(const SimplexPoint& mu, double t, double g) {
    return evaluate_sample(mu.coords(), TimeConsts(t), g).logw;
}

double log_weight(std::span<const double> mu, double t, double g) {
    return evaluate_sample(mu, TimeConsts(t), g).logw;
}

namespace {

void check_t(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("t must be positive and finite");
}

// Phi^{+-} times e^{shift_i} at each point
std::vector<PhiPair> phi_scaled(int lambda, double t, double g, std::span<const std::pair<double, double>> xy,
                                std::span<const double> shift, const SimplexRule& rule) {
    check_t(t);
    const TimeConsts tc(t);
    const std::size_t n = xy.size();
    std::vector<PhiPair> out(n);
    if (n == 0) return out;

    if (lambda == 0) {
        const double base = -2.0 * g * g * tc.tanh_half;
        for (std::size_t i = 0; i < n; ++i) {
            const double th = kSqrt2 * g * (xy[i].first + xy[i].second) * tc.tanh_half;
            out[i].plus = std::exp(shift[i] + base + th);
            out[i].minus = std::exp(shift[i] + base - th);
        }
        return out;
    }

    SimplexVecFn f = [&](std::span<const double> mu, std::span<double> vals) {
        const Sample s = evaluate_sample(mu, tc, g);
        for (std::size_t i = 0; i < n; ++i) {
            const double th = xy[i].first * s.theta.ax + xy[i].second * s.theta.ay;
            const double lw = s.logw + shift[i];
            vals[2 * i] = std::exp(lw + th);
            vals[2 * i + 1] = std::exp(lw - th);
        }
    };
    const auto res = simplex_integrate_many(f, lambda, 2 * n, rule);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = {res[2 * i].value, res[2 * i + 1].value, res[2 * i].error, res[2 * i + 1].error};
        if (!std::isfinite(out[i].plus) || !std::isfinite(out[i].minus))
            throw OverflowError("Phi integral overflow at lambda=" + std::to_string(lambda));
    }
    return out;
}

}  // namespace

std::vector<PhiPair> phi_terms(int lambda, double t, double g, std::span<const std::pair<double, double>> xy,
                               const SimplexRule& rule) {
    std::vector<double> zero(xy.size(), 0.0);
    return phi_scaled(lambda, t, g, xy, zero, rule);
}

double phi_lambda_pm(const EvalPoint& p, int lambda, double g, Parity sign, const SimplexRule& rule) {
    const std::pair<double, double> pt{p.x, p.y};
    const auto r = phi_terms(lambda, p.t, g, std::span(&pt, 1), rule);
    return sign == Parity::Plus ? r[0].plus : r[0].minus;
}

double envelope_log(double x, double y, double t, double g) {
    const TimeConsts tc(t);
    const double gate = 2.0 * g * g * tc.tanh_half;  // pref + gate on even lambda; odd is -gate
    const double spread = kSqrt2 * g / tc.sh * 2.0 * tc.ch * (std::abs(x) + std::abs(y));
    return gate + max_abs_alpha(x, y, tc, g) + spread;
}

namespace {

// log of the bound on everything after lambda, given log(e^B K0)
double tail_log(double log_scale, int lambda, double t_delta) {
    const int next = lambda + 1;
    const double ratio = t_delta / (next + 1);
    if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
    return log_scale + next * std::log(t_delta) - std::lgamma(next + 1.0) - std::log1p(-ratio);
}

double tail_value(double log_scale, int lambda, double t_delta) {
    if (t_delta == 0.0) return 0.0;
    return std::exp(tail_log(log_scale, lambda, t_delta));
}

}  // namespace

std::vector<SeriesResult> heat_kernel_batch(double t, std::span<const std::pair<double, double>> xy,
                                            const ModelParams& params, const TruncationPolicy& policy,
                                            const QuadConfig& quad) {
    check_t(t);
    if (!(policy.tol > 0.0) || policy.lambda_cap < 0) throw ValidationError("invalid truncation policy");
    const double g = params.g, td = t * params.delta;
    const std::size_t n = xy.size();
    std::vector<SeriesResult> out(n);
    std::vector<double> logk0(n), scale(n);
    for (std::size_t i = 0; i < n; ++i) {
        const EvalPoint p(xy[i].first, xy[i].second, t);
        logk0[i] = log_mehler_k0(p, g);
        if (!std::isfinite(logk0[i])) throw OverflowError("Mehler kernel not representable");
        scale[i] = logk0[i] + envelope_log(p.x, p.y, t, g);
    }

    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < n; ++i) active.push_back(i);

    for (int lambda = 0; lambda <= policy.lambda_cap && !active.empty(); ++lambda) {
        std::vector<std::pair<double, double>> pts;
        std::vector<double> shifts;
        const double lpow = lambda == 0 ? 0.0 : lambda * std::log(td);
        for (auto i : active) {
            pts.push_back(xy[i]);
            shifts.push_back(logk0[i] + lpow);
        }
        const auto phi = phi_scaled(lambda, t, g, pts, shifts, quad.rule_for(lambda));
        const double sgn = (lambda % 2) ? -1.0 : 1.0;

        std::vector<std::size_t> still;
        for (std::size_t a = 0; a < active.size(); ++a) {
            const std::size_t i = active[a];
            const double C = 0.5 * (phi[a].plus + phi[a].minus);
            const double S = 0.5 * (phi[a].plus - phi[a].minus);
            const Kernel2x2 term{sgn * C, -sgn * S, -S, C};
            auto& r = out[i];
            r.per_term.push_back(term);
            r.value += term;
            r.lambda_used = lambda;
            r.quad_error += phi[a].err_plus + phi[a].err_minus;
            r.tail_bound = tail_value(scale[i], lambda, td);
            if (td == 0.0 || r.tail_bound < policy.tol) continue;
            if (lambda == policy.lambda_cap) {
                r.capped = true;
                continue;
            }
            still.push_back(i);
        }
        active = std::move(still);
    }
    return out;
}

SeriesResult heat_kernel(const EvalPoint& p, const ModelParams& params, const TruncationPolicy& policy,
                         const QuadConfig& quad) {
    const std::pair<double, double> pt{p.x, p.y};
    return heat_kernel_batch(p.t, std::span(&pt, 1), params, policy, quad)[0];
}

std::vector<ScalarSeriesResult> parity_kernel_batch(double t, std::span<const std::pair<double, double>> xy,
                                                    Parity parity, const ModelParams& params,
                                                    const TruncationPolicy& policy, const QuadConfig& quad) {
    check_t(t);
    if (!(policy.tol > 0.0) || policy.lambda_cap < 0) throw ValidationError("invalid truncation policy");
    const double g = params.g, td = t * params.delta;
    const double odd_sign = parity == Parity::Plus ? -1.0 : 1.0;  // the "-+" in front of the odd block
    const std::size_t n = xy.size();
    std::vector<ScalarSeriesResult> out(n);
    std::vector<double> log_even(n), log_odd(n), scale(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto [x, y] = xy[i];
        log_even[i] = log_mehler_k0(EvalPoint(x, y, t), g);
        log_odd[i] = log_mehler_k0(EvalPoint(x, -y, t), g);
        if (!std::isfinite(log_even[i]) || !std::isfinite(log_odd[i]))
            throw OverflowError("Mehler kernel not representable");
        scale[i] = std::max(log_even[i], log_odd[i]) + envelope_log(x, y, t, g);
    }

    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < n; ++i) active.push_back(i);

    for (int lambda = 0; lambda <= policy.lambda_cap && !active.empty(); ++lambda) {
        const bool odd = lambda % 2 == 1;
        std::vector<std::pair<double, double>> pts;
        std::vector<double> shifts;
        const double lpow = lambda == 0 ? 0.0 : lambda * std::log(td);
        for (auto i : active) {
            const auto [x, y] = xy[i];
            pts.emplace_back(x, odd ? -y : y);
            shifts.push_back((odd ? log_odd[i] : log_even[i]) + lpow);
        }
        const auto phi = phi_scaled(lambda, t, g, pts, shifts, quad.rule_for(lambda));

        std::vector<std::size_t> still;
        for (std::size_t a = 0; a < active.size(); ++a) {
            const std::size_t i = active[a];
            const double term = odd ? odd_sign * phi[a].plus : phi[a].minus;
            auto& r = out[i];
            r.per_term.push_back(term);
            r.value += term;
            r.lambda_used = lambda;
            r.quad_error += odd ? phi[a].err_plus : phi[a].err_minus;
            r.tail_bound = tail_value(scale[i], lambda, td);
            if (td == 0.0 || r.tail_bound < policy.tol) continue;
            if (lambda == policy.lambda_cap) {
                r.capped = true;
                continue;
            }
            still.push_back(i);
        }
        active = std::move(still);
    }
    return out;
}

ScalarSeriesResult parity_kernel(const EvalPoint& p, Parity parity, const ModelParams& params,
                                 const TruncationPolicy& policy, const QuadConfig& quad) {
    const std::pair<double, double> pt{p.x, p.y};
    return parity_kernel_batch(p.t, std::span(&pt, 1), parity, params, policy, quad)[0];
}

SignedModel SignedModel::make(double g, double delta) {
    if (!std::isfinite(delta)) throw ValidationError("delta must be finite");
    SignedModel m;
    m.params = ModelParams(g, std::abs(delta));
    m.swapped = delta < 0.0;
    return m;
}

Parity SignedModel::sector(Parity requested) const {
    if (!swapped) return requested;
    return requested == Parity::Plus ? Parity::Minus : Parity::Plus;
}

Kernel2x2 SignedModel::map_kernel(const Kernel2x2& k) const {
    if (!swapped) return k;
    return {k.k22, k.k21, k.k12, k.k11};
}

}  // namespace rabi
