// series.hpp - the heat kernel as a series of simplex integrals, and the
// kernels of the two parity sectors.

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "rabi/core.hpp"
#include "rabi/quadrature.hpp"

namespace rabi {

struct TruncationPolicy {
    double tol = 1e-10;    // absolute bound on the neglected tail
    int lambda_cap = 60;   // hard stop
};

struct SeriesResult {
    Kernel2x2 value;
    int lambda_used = 0;       // highest lambda summed
    double tail_bound = 0.0;   // envelope bound on everything beyond lambda_used
    bool capped = false;       // lambda_cap hit with tail_bound > tol
    double quad_error = 0.0;   // summed quadrature error estimates
    std::vector<Kernel2x2> per_term;
};

struct ScalarSeriesResult {
    double value = 0.0;
    int lambda_used = 0;
    double tail_bound = 0.0;
    bool capped = false;
    double quad_error = 0.0;
    std::vector<double> per_term;
};

enum class Parity { Plus, Minus };

// theta_lambda = x * ax + y * ay; the coefficients depend on mu only
struct ThetaCoeffs {
    double ax = 0.0, ay = 0.0;
};
ThetaCoeffs theta_coeffs(const SimplexPoint& mu, double t, double g);
double theta_lambda(const EvalPoint& p, const SimplexPoint& mu, double g);
double xi_lambda(const SimplexPoint& mu, double t, double g);
// second code path through the proof's phi + sigma split, for lambda <= 2 checks
double xi_lambda_split(const SimplexPoint& mu, double t, double g);
double split_phi(double s, double t, double g);
double split_sigma(int lambda, double s, double t, double g);

// -2 g^2 coth(t/2)^{(-1)^lambda}
double lambda_prefactor_log(int lambda, double t, double g);
// 4 g^2 cosh(t(1 - mu_lambda)) / sinh t on even lambda, zero on odd
double gated_cosh_term(const SimplexPoint& mu, double t, double g);
// log of the scalar weight multiplying e^{+-theta} inside the integral
double log_weight(const SimplexPoint& mu, double t, double g);
double log_weight(std::span<const double> mu, double t, double g);  // unchecked, for integrands

// Phi^+_lambda and Phi^-_lambda at many (x, y) sharing one t
struct PhiPair {
    double plus = 0.0, minus = 0.0;
    double err_plus = 0.0, err_minus = 0.0;
};
std::vector<PhiPair> phi_terms(int lambda, double t, double g, std::span<const std::pair<double, double>> xy,
                               const SimplexRule& rule);
double phi_lambda_pm(const EvalPoint& p, int lambda, double g, Parity sign, const SimplexRule& rule);

// log of e^B in |term_lambda| <= e^B (t delta)^lambda / lambda!, over all entries
double envelope_log(double x, double y, double t, double g);

SeriesResult heat_kernel(const EvalPoint& p, const ModelParams& params, const TruncationPolicy& policy = {},
                         const QuadConfig& quad = {});
std::vector<SeriesResult> heat_kernel_batch(double t, std::span<const std::pair<double, double>> xy,
                                            const ModelParams& params, const TruncationPolicy& policy = {},
                                            const QuadConfig& quad = {});

ScalarSeriesResult parity_kernel(const EvalPoint& p, Parity parity, const ModelParams& params,
                                 const TruncationPolicy& policy = {}, const QuadConfig& quad = {});
std::vector<ScalarSeriesResult> parity_kernel_batch(double t, std::span<const std::pair<double, double>> xy,
                                                    Parity parity, const ModelParams& params,
                                                    const TruncationPolicy& policy = {}, const QuadConfig& quad = {});

// Negative splitting: H(-delta) = sigma_x H(delta) sigma_x, and the parity sectors swap.
struct SignedModel {
    ModelParams params;
    bool swapped = false;
    static SignedModel make(double g, double delta);
    Parity sector(Parity requested) const;
    Kernel2x2 map_kernel(const Kernel2x2& k) const;  // sigma_x k sigma_x when swapped
};

}  // namespace rabi
