#include "rabi/quadrature.hpp"

#include <algorithm>
#include <boost/math/special_functions/legendre.hpp>
#include <boost/random/sobol.hpp>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>

namespace rabi {

SimplexRule SimplexRule::nested(int order) { return {QuadMode::NestedGauss, order, 0}; }
SimplexRule SimplexRule::qmc(int count, std::uint64_t seed) { return {QuadMode::SortedQmc, count, seed}; }
SimplexRule SimplexRule::mapped_qmc(int count, std::uint64_t seed) { return {QuadMode::MappedQmc, count, seed}; }

void SimplexRule::validate(int lambda) const {
    if (lambda < 0) throw ValidationError("simplex dimension must be >= 0");
    if (mode == QuadMode::NestedGauss) {
        if (lambda > kNestedMaxLambda) throw ValidationError("nested Gauss rule limited to lambda <= 5");
        if (order < 2) throw ValidationError("nested order must be >= 2");
    } else {
        if (order < kQmcBatches || (order & (order - 1)) != 0)
            throw ValidationError("qmc sample count must be a power of two >= 16");
    }
}

SimplexRule QuadConfig::rule_for(int lambda) const {
    if (force) return forced;
    if (lambda <= std::min(crossover, kNestedMaxLambda))
        return SimplexRule::nested(lambda >= 5 ? nested_order_high : nested_order);
    return SimplexRule{qmc_mode, qmc_count, seed};
}

double factorial(int n) { return std::tgamma(n + 1.0); }

const GaussRule& gauss_legendre01(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) {
        auto r = std::make_unique<GaussRule>();
        const auto zeros = boost::math::legendre_p_zeros<double>(n);  // non-negative half
        std::vector<std::pair<double, double>> nodes;
        for (double z : zeros) {
            const double dp = boost::math::legendre_p_prime(n, z);
            const double w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes.emplace_back(z, w);
            if (z != 0.0) nodes.emplace_back(-z, w);
        }
        std::sort(nodes.begin(), nodes.end());
        for (auto [z, w] : nodes) {
            r->x.push_back(0.5 * (z + 1.0));
            r->w.push_back(0.5 * w);
        }
        slot = std::move(r);
    }
    return *slot;
}

namespace {

struct Neumaier {
    double s = 0.0, c = 0.0;
    void add(double v) {
        const double t = s + v;
        if (std::fabs(s) >= std::fabs(v)) c += (s - t) + v;
        else c += (v - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

[[noreturn]] void report_nonfinite(int lambda, std::span<const double> mu, std::size_t comp) {
    std::ostringstream os;
    os.precision(17);
    os << "non-finite integrand sample (lambda=" << lambda << ", component " << comp << ", mu=(";
    for (std::size_t i = 0; i < mu.size(); ++i) os << (i ? "," : "") << mu[i];
    os << "))";
    throw NumericalError(os.str());
}

// iterated Gauss: mu_lambda = x, mu_{i} = mu_{i+1} x_i, Jacobian prod_{i>=2} mu_i
std::vector<double> nested_sum(const SimplexVecFn& f, int lambda, std::size_t nout, int n) {
    const GaussRule& gr = gauss_legendre01(n);
    std::vector<Neumaier> acc(nout);
    std::vector<int> idx(lambda, 0);
    std::vector<double> mu(lambda), out(nout);
    while (true) {
        double w = 1.0, upper = 1.0;
        for (int lvl = lambda - 1; lvl >= 0; --lvl) {
            mu[lvl] = upper * gr.x[idx[lvl]];
            w *= upper * gr.w[idx[lvl]];
            upper = mu[lvl];
        }
        f(mu, out);
        for (std::size_t c = 0; c < nout; ++c) {
            if (!std::isfinite(out[c])) report_nonfinite(lambda, mu, c);
            acc[c].add(w * out[c]);
        }
        int lvl = 0;
        while (lvl < lambda && ++idx[lvl] == n) idx[lvl++] = 0;
        if (lvl == lambda) break;
    }
    std::vector<double> r(nout);
    for (std::size_t c = 0; c < nout; ++c) r[c] = acc[c].value();
    return r;
}

std::vector<QuadResult> qmc_integrate(const SimplexVecFn& f, int lambda, std::size_t nout,
                                      const SimplexRule& rule) {
    const std::size_t per_batch = static_cast<std::size_t>(rule.order) / kQmcBatches;
    const bool mapped = rule.mode == QuadMode::MappedQmc;
    std::mt19937_64 rng(rule.seed);
    std::vector<std::vector<double>> batch_mean(nout, std::vector<double>(kQmcBatches));
    std::vector<std::uint64_t> raw(lambda), shift(lambda);
    std::vector<double> mu(lambda), rev(lambda), out(nout);
    for (int b = 0; b < kQmcBatches; ++b) {
        for (auto& s : shift) s = rng();
        boost::random::sobol_engine<std::uint64_t, 64> gen(static_cast<std::size_t>(lambda));
        std::vector<Neumaier> acc(nout);
        for (std::size_t i = 0; i < per_batch; ++i) {
            gen.generate(raw.begin(), raw.end());
            for (int d = 0; d < lambda; ++d)
                mu[d] = (static_cast<double>((raw[d] ^ shift[d]) >> 11) + 0.5) * 0x1p-53;
            double w = 1.0;
            if (mapped) {
                // mu_i = mu_{i+1} v_i^{1/i} carries the cube measure onto the simplex
                double upper = 1.0;
                for (int d = lambda - 1; d >= 0; --d) {
                    mu[d] = upper * std::pow(mu[d], 1.0 / (d + 1));
                    upper = mu[d];
                }
            } else {
                std::sort(mu.begin(), mu.end());
            }
            f(mu, out);
            for (std::size_t c = 0; c < nout; ++c) {
                if (!std::isfinite(out[c])) report_nonfinite(lambda, mu, c);
                acc[c].add(w * out[c]);
            }
            if (mapped) {
                // antithetic partner under time reversal mu -> (1 - mu_lambda, ..., 1 - mu_1)
                for (int d = 0; d < lambda; ++d) rev[d] = 1.0 - mu[lambda - 1 - d];
                f(rev, out);
                for (std::size_t c = 0; c < nout; ++c) {
                    if (!std::isfinite(out[c])) report_nonfinite(lambda, rev, c);
                    acc[c].add(w * out[c]);
                }
            }
        }
        const double evals = static_cast<double>(per_batch) * (mapped ? 2.0 : 1.0);
        for (std::size_t c = 0; c < nout; ++c) batch_mean[c][b] = acc[c].value() / evals;
    }
    // sorting folds the cube onto the simplex lambda! times
    const double vol = 1.0 / factorial(lambda);
    std::vector<QuadResult> res(nout);
    for (std::size_t c = 0; c < nout; ++c) {
        Neumaier m;
        for (double v : batch_mean[c]) m.add(v);
        const double mean = m.value() / kQmcBatches;
        double var = 0.0;
        for (double v : batch_mean[c]) var += (v - mean) * (v - mean);
        var /= (kQmcBatches - 1);
        res[c] = {mean * vol, std::sqrt(var / kQmcBatches) * vol};
    }
    return res;
}

}  // namespace

std::vector<QuadResult> simplex_integrate_many(const SimplexVecFn& f, int lambda, std::size_t nout,
                                               const SimplexRule& rule) {
    rule.validate(lambda);
    std::vector<QuadResult> res(nout);
    if (lambda == 0) {
        std::vector<double> out(nout);
        f({}, out);
        for (std::size_t c = 0; c < nout; ++c) {
            if (!std::isfinite(out[c])) report_nonfinite(0, {}, c);
            res[c] = {out[c], 0.0};
        }
        return res;
    }
    if (rule.mode != QuadMode::NestedGauss) return qmc_integrate(f, lambda, nout, rule);

    const auto fine = nested_sum(f, lambda, nout, rule.order);
    const auto coarse = nested_sum(f, lambda, nout, std::max(1, rule.order / 2));
    for (std::size_t c = 0; c < nout; ++c) res[c] = {fine[c], std::fabs(fine[c] - coarse[c])};
    return res;
}

QuadResult simplex_integrate(const SimplexFn& f, int lambda, const SimplexRule& rule) {
    auto wrapped = [&](std::span<const double> mu, std::span<double> out) {
        out[0] = f(SimplexPoint(std::vector<double>(mu.begin(), mu.end())));
    };
    return simplex_integrate_many(wrapped, lambda, 1, rule)[0];
}

}  // namespace rabi
