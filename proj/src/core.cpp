#include "rabi/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace rabi {

ModelParams::ModelParams(double g_, double delta_) : g(g_), delta(delta_) {
    if (!std::isfinite(g) || g < 0.0) throw ValidationError("coupling g must be finite and >= 0");
    if (!std::isfinite(delta) || delta < 0.0)
        throw ValidationError("splitting delta must be finite and >= 0");
}

EvalPoint::EvalPoint(double x_, double y_, double t_) : x(x_), y(y_), t(t_) {
    if (!std::isfinite(x) || !std::isfinite(y)) throw ValidationError("positions must be finite");
    if (!std::isfinite(t) || t <= 0.0) throw ValidationError("time t must be finite and > 0");
}

double Kernel2x2::max_abs() const {
    return std::max({std::fabs(k11), std::fabs(k12), std::fabs(k21), std::fabs(k22)});
}

bool Kernel2x2::finite() const {
    return std::isfinite(k11) && std::isfinite(k12) && std::isfinite(k21) && std::isfinite(k22);
}

Kernel2x2& Kernel2x2::operator+=(const Kernel2x2& o) {
    k11 += o.k11;
    k12 += o.k12;
    k21 += o.k21;
    k22 += o.k22;
    return *this;
}

Kernel2x2& Kernel2x2::operator*=(double s) {
    k11 *= s;
    k12 *= s;
    k21 *= s;
    k22 *= s;
    return *this;
}

Kernel2x2 operator+(Kernel2x2 a, const Kernel2x2& b) { return a += b; }
Kernel2x2 operator-(const Kernel2x2& a, const Kernel2x2& b) {
    return {a.k11 - b.k11, a.k12 - b.k12, a.k21 - b.k21, a.k22 - b.k22};
}
Kernel2x2 operator*(double s, Kernel2x2 a) { return a *= s; }
Kernel2x2 operator*(const Kernel2x2& a, const Kernel2x2& b) {
    return {a.k11 * b.k11 + a.k12 * b.k21, a.k11 * b.k12 + a.k12 * b.k22,
            a.k21 * b.k11 + a.k22 * b.k21, a.k21 * b.k12 + a.k22 * b.k22};
}
double max_abs_diff(const Kernel2x2& a, const Kernel2x2& b) { return (a - b).max_abs(); }

BitString::BitString(std::initializer_list<int> b) {
    bits_.reserve(b.size());
    for (int v : b) bits_.push_back(static_cast<std::uint8_t>(v & 1));
}

BitString BitString::from_mask(std::size_t k, std::uint64_t mask) {
    BitString r(k);
    for (std::size_t i = 0; i < k; ++i) r.bits_[i] = (mask >> i) & 1u;
    return r;
}

std::uint64_t BitString::mask() const {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i]) m |= (std::uint64_t{1} << i);
    return m;
}

int BitString::norm() const {
    int n = 0;
    for (auto b : bits_) n += b;
    return n;
}

std::vector<int> BitString::ones_positions() const {
    std::vector<int> j;
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i]) j.push_back(static_cast<int>(i) + 1);
    return j;
}

BitString BitString::prefix(std::size_t j) const {
    BitString r;
    r.bits_.assign(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(j));
    return r;
}

BitString BitString::reversed() const {
    BitString r = *this;
    std::reverse(r.bits_.begin(), r.bits_.end());
    return r;
}

BitString BitString::complemented() const {
    BitString r = *this;
    for (auto& b : r.bits_) b ^= 1u;
    return r;
}

BitString BitString::concat(const BitString& other) const {
    BitString r = *this;
    r.bits_.insert(r.bits_.end(), other.bits_.begin(), other.bits_.end());
    return r;
}

BitString BitString::plus(const BitString& other) const {
    if (other.size() != size()) throw ValidationError("bit strings of different length");
    BitString r = *this;
    for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] ^= other.bits_[i];
    return r;
}

std::string BitString::str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (i) s += ',';
        s += static_cast<char>('0' + bits_[i]);
    }
    return s + ")";
}

SimplexPoint::SimplexPoint(std::vector<double> mu) : mu_(std::move(mu)) {
    double prev = 0.0;
    for (double m : mu_) {
        if (!(m >= prev) || m > 1.0) throw ValidationError("simplex point must satisfy 0 <= mu_1 <= ... <= 1");
        prev = m;
    }
}

double log_cosh(double a) {
    const double b = std::fabs(a);
    return b + std::log1p(std::exp(-2.0 * b)) - std::numbers::ln2;
}

double log_abs_sinh(double a) {
    const double b = std::fabs(a);
    if (b == 0.0) return -std::numeric_limits<double>::infinity();
    if (b < 1.0) return std::log(std::sinh(b));
    return b + std::log1p(-std::exp(-2.0 * b)) - std::numbers::ln2;
}

double log_mehler_k0(const EvalPoint& p, double g) {
    const double t = p.t;
    const double one_m_e2t = -std::expm1(-2.0 * t);
    const double th = std::tanh(0.5 * t);  // (1-u)/(1+u)
    const double s = p.x + p.y, d = p.x - p.y;
    // -(x^2+y^2)/(2 tanh t) + xy/sinh t, regrouped so both pieces are <= 0
    const double q = -0.25 * (d * d / th + s * s * th);
    return g * g * t - 0.5 * std::log(std::numbers::pi * one_m_e2t) + q;
}

double mehler_k0(const EvalPoint& p, double g) {
    const double v = std::exp(log_mehler_k0(p, g));
    if (!std::isfinite(v) || v == 0.0)
        throw OverflowError("mehler_k0 out of range at t=" + std::to_string(p.t));
    return v;
}

namespace {
double signed_exp(double sign, double logmag) {
    if (sign == 0.0) return 0.0;
    const double v = std::exp(logmag);
    if (!std::isfinite(v)) throw OverflowError("kernel entry overflow");
    return sign * v;
}
}  // namespace

Kernel2x2 single_step_kernel(const EvalPoint& p, const ModelParams& params) {
    const double g = params.g, th = std::tanh(0.5 * p.t);
    const double base = log_mehler_k0(p, g) - 2.0 * g * g * th;
    const double a = std::numbers::sqrt2 * g * (p.x + p.y) * th;
    const double lc = log_cosh(a), ls = log_abs_sinh(a);
    const double ss = a > 0 ? -1.0 : (a < 0 ? 1.0 : 0.0);  // sign of -sinh a
    const double td = p.t * params.delta;
    // [[cosh, -sinh], [-sinh, cosh]] * diag(e^{-t delta}, e^{t delta})
    return {signed_exp(1.0, base + lc - td), signed_exp(ss, base + ls + td),
            signed_exp(ss, base + ls - td), signed_exp(1.0, base + lc + td)};
}

Kernel2x2 rot_even(double theta) {
    const double c = std::cosh(theta), s = std::sinh(theta);
    if (!std::isfinite(c)) throw OverflowError("rot_even argument too large");
    return {c, -s, -s, c};
}

Kernel2x2 rot_odd(double theta) {
    const double c = std::cosh(theta), s = std::sinh(theta);
    if (!std::isfinite(c)) throw OverflowError("rot_odd argument too large");
    return {-c, s, -s, c};
}

}  // namespace rabi
