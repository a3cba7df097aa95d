// trotter.hpp - the exact N-step Trotter kernel D_N as a sum over sign paths

#pragma once

#include <Eigen/Dense>

#include "rabi/core.hpp"

namespace rabi {

constexpr int kTrotterMaxSteps = 22;

// U_n(-(1+u^2)/(2u)), closed form and by recurrence
double chebyshev_u_at(int n, double u);
double chebyshev_u_recurrence(int n, double u);

// A_{N-1}: diagonal 1+u^2, off-diagonal -u
class TridiagState {
public:
    TridiagState(int N, double u);

    int steps() const { return N_; }
    double u() const { return u_; }
    double det() const;
    double inv(int i, int j) const;  // 1-based, closed form
    Eigen::MatrixXd matrix() const;
    Eigen::MatrixXd inverse() const;

private:
    int N_;
    double u_;
};

// notation of the Gaussian path integral; j, i are 1-based
int eta(const BitString& s, int i);
double lambda_coeff(int j, int N, double u);
double omega_coeff(int i, int j, int N, double u);

// scalar part of the path s; u is the per-step factor e^{-t/N}
double log_i_n_scalar(double x, double y, double u, const BitString& s, double g);
double i_n_scalar(double x, double y, double u, const BitString& s, double g);
// the linear and quadratic exponents alone
double i_n_linear_exponent(double x, double y, double u, const BitString& s, double g);
double i_n_quadratic_exponent(double u, const BitString& s, double g);

// word matrices: M_00 = I - sigma_x, M_11 = I + sigma_x, M_01, M_10 from the product
Kernel2x2 word_matrix(int a, int b);
double g_k_scalar(double u, const BitString& s, double delta);
Kernel2x2 g_n_matrix(double u, const BitString& s, double delta);
// (1/2^k) prod_j [I + (-1)^{1-s(j)} sigma_x] u^{delta sigma_z}, evaluated directly
Kernel2x2 g_n_product(double u, const BitString& s, double delta);

Kernel2x2 d_n_kernel(const EvalPoint& p, int N, const ModelParams& params);
// plain double loop over all paths; reference for the fast walk
Kernel2x2 d_n_kernel_bruteforce(const EvalPoint& p, int N, const ModelParams& params);

}  // namespace rabi
