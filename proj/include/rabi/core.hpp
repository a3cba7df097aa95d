// core.hpp - shared types, the displaced Mehler kernel and the one-step kernel

#pragma once

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace rabi {

// error families map onto CLI exit codes 1 and 2
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OverflowError : NumericalError {
    using NumericalError::NumericalError;
};

struct ModelParams {
    double g = 0.0;      // coupling
    double delta = 0.0;  // level splitting

    ModelParams() = default;
    ModelParams(double g_, double delta_);
};

struct EvalPoint {
    double x = 0.0, y = 0.0, t = 1.0;

    EvalPoint(double x_, double y_, double t_);
};

struct Kernel2x2 {
    double k11 = 0.0, k12 = 0.0, k21 = 0.0, k22 = 0.0;

    static Kernel2x2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Kernel2x2 diag(double a, double b) { return {a, 0.0, 0.0, b}; }

    Kernel2x2 transposed() const { return {k11, k21, k12, k22}; }
    double det() const { return k11 * k22 - k12 * k21; }
    double max_abs() const;
    bool finite() const;

    Kernel2x2& operator+=(const Kernel2x2& o);
    Kernel2x2& operator*=(double s);
};

Kernel2x2 operator+(Kernel2x2 a, const Kernel2x2& b);
Kernel2x2 operator-(const Kernel2x2& a, const Kernel2x2& b);
Kernel2x2 operator*(double s, Kernel2x2 a);
Kernel2x2 operator*(const Kernel2x2& a, const Kernel2x2& b);
double max_abs_diff(const Kernel2x2& a, const Kernel2x2& b);

// Element of Z_2^k. Positions are 1-based where the maths uses them.
class BitString {
public:
    BitString() = default;
    explicit BitString(std::size_t k) : bits_(k, 0) {}
    BitString(std::initializer_list<int> b);
    static BitString from_mask(std::size_t k, std::uint64_t mask);  // bit i-1 of mask is position i

    std::size_t size() const { return bits_.size(); }
    int operator[](std::size_t i) const { return bits_[i]; }  // 0-based
    int at(std::size_t pos) const { return bits_[pos - 1]; }  // 1-based
    void set(std::size_t i, int v) { bits_[i] = static_cast<std::uint8_t>(v & 1); }
    std::uint64_t mask() const;

    int norm() const;
    std::vector<int> ones_positions() const;  // j_1 < ... < j_|rho|, 1-based

    BitString prefix(std::size_t j) const;
    BitString reversed() const;
    BitString complemented() const;
    BitString concat(const BitString& other) const;
    BitString plus(const BitString& other) const;  // addition mod 2, equal lengths

    bool operator==(const BitString& o) const { return bits_ == o.bits_; }
    bool operator<(const BitString& o) const { return bits_ < o.bits_; }
    std::string str() const;

private:
    std::vector<std::uint8_t> bits_;
};

// 0 <= mu_1 <= ... <= mu_lambda <= 1; mu(0) is the fixed origin.
class SimplexPoint {
public:
    SimplexPoint() = default;
    explicit SimplexPoint(std::vector<double> mu);

    int lambda() const { return static_cast<int>(mu_.size()); }
    double mu(int gamma) const { return gamma == 0 ? 0.0 : mu_[gamma - 1]; }
    const std::vector<double>& coords() const { return mu_; }

private:
    std::vector<double> mu_;
};

// log-safe hyperbolic helpers
double log_cosh(double a);
double log_abs_sinh(double a);  // -inf at 0

double log_mehler_k0(const EvalPoint& p, double g);
double mehler_k0(const EvalPoint& p, double g);

Kernel2x2 single_step_kernel(const EvalPoint& p, const ModelParams& params);

Kernel2x2 rot_even(double theta);
Kernel2x2 rot_odd(double theta);

}  // namespace rabi
