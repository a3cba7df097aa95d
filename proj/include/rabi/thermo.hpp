// thermo.hpp - partition functions of the full model and of the two parity sectors

#pragma once

#include <span>

#include "rabi/core.hpp"
#include "rabi/quadrature.hpp"
#include "rabi/series.hpp"

namespace rabi {

struct ThermoPoint {
    double beta = 1.0;
    ModelParams params;

    ThermoPoint(double beta_, ModelParams params_);
};

// (g^2 / sinh t) [sum_gamma (-1)^gamma (e^{t(1/2 - mu_gamma)} +- e^{t(mu_gamma - 1/2)})]^2
double psi_lambda_pm(const SimplexPoint& mu, double t, double g, Parity sign);
double psi_lambda_pm(std::span<const double> mu, double t, double g, Parity sign);

struct PartitionResult {
    double value = 0.0;
    int lambda_used = 0;
    double tail_bound = 0.0;  // absolute
    bool capped = false;
    double quad_error = 0.0;
};

PartitionResult partition_function(const ThermoPoint& tp, const TruncationPolicy& policy = {},
                                   const QuadConfig& quad = {});
PartitionResult parity_partition(const ThermoPoint& tp, Parity parity, const TruncationPolicy& policy = {},
                                 const QuadConfig& quad = {});

// integral over x of the trace of the series heat kernel on the diagonal
struct TraceIntegral {
    double value = 0.0;
    double half_width = 0.0;  // integration range is [-half_width, half_width]
    int nodes = 0;
};
TraceIntegral trace_integral(const ThermoPoint& tp, const TruncationPolicy& policy = {},
                             const QuadConfig& quad = {});

}  // namespace rabi
