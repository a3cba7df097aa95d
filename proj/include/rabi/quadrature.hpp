// quadrature.hpp - integration over the ordered simplex 0 <= mu_1 <= ... <= mu_lambda <= 1

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rabi/core.hpp"

namespace rabi {

// MappedQmc feeds the same points through a measure-preserving product map
// instead of sorting them, and pairs each point with its time reversal.
enum class QuadMode { NestedGauss, SortedQmc, MappedQmc };

struct SimplexRule {
    QuadMode mode = QuadMode::NestedGauss;
    int order = 16;          // points per level (nested) or total samples (qmc)
    std::uint64_t seed = 0;  // digital-shift seed, qmc only

    static SimplexRule nested(int order);
    static SimplexRule qmc(int count, std::uint64_t seed = 0);
    static SimplexRule mapped_qmc(int count, std::uint64_t seed = 0);
    void validate(int lambda) const;
};

// Picks a rule per dimension. Nested up to `crossover`, qmc above it.
struct QuadConfig {
    int nested_order = 16;
    int nested_order_high = 10;  // used at lambda == 5
    int qmc_count = 1 << 16;
    QuadMode qmc_mode = QuadMode::MappedQmc;
    std::uint64_t seed = 0;
    int crossover = 5;
    bool force = false;  // use `forced` for every lambda
    SimplexRule forced{};

    SimplexRule rule_for(int lambda) const;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

constexpr int kNestedMaxLambda = 5;
constexpr int kQmcBatches = 16;

// f receives mu_1..mu_lambda (ascending) and writes nout values
using SimplexVecFn = std::function<void(std::span<const double>, std::span<double>)>;
using SimplexFn = std::function<double(const SimplexPoint&)>;

std::vector<QuadResult> simplex_integrate_many(const SimplexVecFn& f, int lambda, std::size_t nout,
                                               const SimplexRule& rule);
QuadResult simplex_integrate(const SimplexFn& f, int lambda, const SimplexRule& rule);

// Gauss-Legendre on [0,1]
struct GaussRule {
    std::vector<double> x, w;
};
const GaussRule& gauss_legendre01(int n);

double factorial(int n);

}  // namespace rabi
