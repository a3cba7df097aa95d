#include "rabi/verify.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "rabi/combinatorics.hpp"
#include "rabi/core.hpp"
#include "rabi/oracle.hpp"
#include "rabi/series.hpp"
#include "rabi/thermo.hpp"
#include "rabi/trotter.hpp"

namespace rabi {

namespace {

// relative error with a unit floor, so exact zeros on both sides compare cleanly
double rel_err(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0}); }

struct Tracker {
    double worst = 0.0;
    std::size_t n = 0;
    void add(double e) {
        ++n;
        if (!(e <= worst)) worst = std::isnan(e) ? INFINITY : e;
    }
    void flag(bool ok) { add(ok ? 0.0 : 1.0); }
};

class Suite {
public:
    Suite(std::string name) : name_(std::move(name)) {}

    void check(const std::string& what, double tol, const std::function<void(Tracker&)>& body) {
        const auto t0 = std::chrono::steady_clock::now();
        CheckResult r;
        r.suite = name_;
        r.name = what;
        r.tolerance = tol;
        Tracker tr;
        try {
            body(tr);
            r.max_error = tr.worst;
            r.cases = tr.n;
            r.pass = tr.n > 0 && tr.worst < tol;
        } catch (const std::exception& e) {
            r.pass = false;
            r.max_error = INFINITY;
            r.detail = e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out_.push_back(r);
    }
    // runtime budgets are checks too
    void budget(const std::string& what, double limit_seconds) {
        double total = 0.0;
        for (const auto& r : out_) total += r.seconds;
        CheckResult r;
        r.suite = name_;
        r.name = what;
        r.tolerance = limit_seconds;
        r.max_error = total;
        r.cases = 1;
        r.pass = total < limit_seconds;
        r.detail = "seconds";
        out_.push_back(r);
    }
    std::vector<CheckResult> take() { return std::move(out_); }

private:
    std::string name_;
    std::vector<CheckResult> out_;
};

std::vector<CheckResult> combinatorics_suite() {
    Suite s("combinatorics");
    const double tol = 1e-10;

    s.check("fourier transform of g_k vs direct DFT, k <= 12", tol, [](Tracker& tr) {
        for (int k = 0; k <= 12; ++k)
            for (double tau : {0.3, 0.7})
                for (int v = 0; v <= 1; ++v)
                    for (int w = 0; w <= 1; ++w) {
                        const std::uint64_t n = std::uint64_t{1} << k;
                        std::vector<double> g(n);
                        for (std::uint64_t x = 0; x < n; ++x) g[x] = g_function(k, v, w, tau, x);
                        for (std::uint64_t rho = 0; rho < n; ++rho) {
                            double dft = 0.0;
                            for (std::uint64_t x = 0; x < n; ++x)
                                dft += (std::popcount(x & rho) & 1) ? -g[x] : g[x];
                            tr.add(rel_err(dft, fourier_g_hat(k, v, w, tau, BitString::from_mask(k, rho))));
                        }
                    }
    });

    s.check("q-analogue transformation formulas (1)-(4), k <= 10", tol, [](Tracker& tr) {
        for (double t : {0.3, 0.7, 1.3})
            for (int k = 1; k <= 10; ++k)
                for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) {
                    const BitString rho = BitString::from_mask(k, m);
                    const double ph = varphi_t(rho, t);
                    const int nrm = rho.norm();
                    for (int v = 0; v <= 1; ++v) {
                        const double lhs1 = varphi_t(rho.concat(BitString{v}), t);
                        tr.add(rel_err(lhs1, v * qnum(k + 1, t) + (v ? -ph : ph)));
                        const double lhs2 = varphi_t(BitString{v}.concat(rho), t);
                        tr.add(rel_err(lhs2, ph * t + ((v + nrm) % 2 ? 1.0 : 0.0)));
                    }
                    const double lhs3 = varphi_t(rho.reversed(), t);
                    const double rhs3 = (nrm % 2 ? -1.0 : 1.0) * std::pow(t, k) * varphi_t(rho, 1.0 / t) +
                                        (nrm % 2 ? qnum(k + 1, t) : 0.0);
                    tr.add(rel_err(lhs3, rhs3));
                    double lhs4 = 0.0, p = 1.0;
                    int suffix = 0;
                    std::vector<int> par(k);
                    for (int i = k - 1; i >= 0; --i) par[i] = (suffix ^= rho[i]);
                    for (int i = 0; i < k; ++i, p *= t) lhs4 += par[i] ? -p : p;
                    tr.add(rel_err(lhs4, qnum(k, t) - 2.0 * ph));
                    tr.add(rel_err(ph, varphi_t_ones(rho, t)));
                }
    });

    s.check("ones-position function is the t = 1 limit, k <= 12", tol, [](Tracker& tr) {
        for (int k = 0; k <= 12; ++k)
            for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) {
                const BitString rho = BitString::from_mask(k, m);
                tr.add(rel_err(varphi(rho), varphi_t(rho, 1.0)));
            }
    });

    s.check("Fourier inversion and closed-form transform of the ones-position function, k <= 10", tol,
            [](Tracker& tr) {
                for (int k = 1; k <= 10; ++k) {
                    const std::uint64_t n = std::uint64_t{1} << k;
                    std::vector<double> f(n);
                    for (std::uint64_t m = 0; m < n; ++m) f[m] = varphi(BitString::from_mask(k, m));
                    auto h = f;
                    walsh_hadamard(h);
                    for (std::uint64_t m = 0; m < n; ++m)
                        tr.add(rel_err(h[m], static_cast<double>(varphi_hat(BitString::from_mask(k, m)))));
                    walsh_hadamard(h);
                    for (std::uint64_t m = 0; m < n; ++m) tr.add(rel_err(h[m], f[m] * static_cast<double>(n)));
                }
            });

    s.check("mod-2 morphism of the q-analogue, k <= 8", tol, [](Tracker& tr) {
        for (int k = 1; k <= 8; ++k)
            for (std::uint64_t a = 0; a < (std::uint64_t{1} << k); ++a)
                for (std::uint64_t b = 0; b < (std::uint64_t{1} << k); ++b) {
                    const auto ra = BitString::from_mask(k, a), rb = BitString::from_mask(k, b);
                    const auto pa = varphi_poly(ra), pb = varphi_poly(rb), ps = varphi_poly(ra.plus(rb));
                    bool ok = true;
                    for (int i = 0; i < k; ++i) ok = ok && ((pa[i] + pb[i]) % 2 == ps[i]);
                    tr.flag(ok);
                }
    });

    s.check("sum over even graphs, m <= 4", tol, [](Tracker& tr) {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        for (int m = 0; m <= 4; ++m)
            for (int rep = 0; rep < 100; ++rep) {
                std::vector<std::vector<double>> a(m + 1, std::vector<double>(m + 1, 0.0));
                for (int i = 0; i <= m; ++i)
                    for (int j = i + 1; j <= m; ++j) a[i][j] = U(rng);
                std::vector<int> v(m + 1);
                for (auto& b : v) b = static_cast<int>(rng() & 1u);
                const auto [lhs, rhs] = verify_sum_v0(m, a, v);
                tr.add(rel_err(lhs, rhs));
            }
    });

    s.check("f_k + g_k subset-sum identity, k <= 10", tol, [](Tracker& tr) {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        for (int k = 1; k <= 10; ++k)
            for (double tau : {0.3, 0.5, 0.8})
                for (int vw = 0; vw <= 1; ++vw) {
                    std::vector<double> A(k);
                    for (auto& x : A) x = U(rng);
                    const auto [lhs, rhs] = verify_sum_fg(k, tau, A, vw);
                    tr.add(rel_err(lhs, rhs));
                    // g_k(tau) = tau^{k+1} f_k(1/tau)
                    const auto [f, g] = fg_bruteforce(tau, A);
                    const auto [fi, gi] = fg_bruteforce(1.0 / tau, A);
                    tr.add(rel_err(g, std::pow(tau, k + 1) * fi));
                    const auto [fr, gr] = fg_recurrence(tau, A);
                    tr.add(rel_err(f, fr));
                    tr.add(rel_err(g, gr));
                }
    });

    s.check("exponential sum over strings of fixed norm, k <= 12", tol, [](Tracker& tr) {
        for (auto [t, sv] : {std::pair{0.4, 0.6}, std::pair{0.3, 0.8}})
            for (int k = 1; k <= 12; ++k)
                for (int lam = 1; lam <= k; ++lam) {
                    const auto [lhs, rhs] = verify_sumexp(k, lam, t, sv);
                    tr.add(rel_err(lhs, rhs));
                }
    });

    s.check("endpoint classes partition Z_2^N, N <= 12", 0.5, [](Tracker& tr) {
        for (int N = 1; N <= 12; ++N) {
            std::vector<int> hits(std::size_t{1} << N, 0);
            for (int k = 1; k <= N; ++k)
                for (int i = 0; i <= 1; ++i)
                    for (int j = 0; j <= 1; ++j) {
                        const auto set = partition_set(N, k, i, j);
                        if (k >= 3) tr.flag(set.size() == (std::size_t{1} << (k - 3)));
                        for (const auto& b : set) ++hits[b.mask()];
                    }
            for (int h : hits) tr.flag(h == 1);
        }
    });

    s.budget("runtime under 60 s", 60.0);
    return s.take();
}

std::vector<CheckResult> graphs_suite() {
    Suite s("graphs");
    auto gv = [](int m, std::initializer_list<int> bits) { return GraphVector(m, BitString(bits)); };

    s.check("|V0| = 2^{m(m-1)/2} and agrees with filtering, m <= 6", 0.5, [](Tracker& tr) {
        for (int m = 0; m <= 6; ++m) {
            const auto v0 = enumerate_V0(m);
            tr.flag(v0.size() == (std::size_t{1} << (m * (m - 1) / 2)));
            tr.flag(v0 == enumerate_V0_bruteforce(m));
        }
    });

    s.check("the eight even graphs on three vertices", 0.5, [&](Tracker& tr) {
        const std::vector<GraphVector> expect = {
            gv(3, {0, 0, 0, 0, 0, 0}), gv(3, {0, 0, 0, 1, 1, 1}), gv(3, {0, 1, 1, 0, 0, 1}),
            gv(3, {0, 1, 1, 1, 1, 0}), gv(3, {1, 0, 1, 0, 1, 0}), gv(3, {1, 0, 1, 1, 0, 1}),
            gv(3, {1, 1, 0, 0, 1, 1}), gv(3, {1, 1, 0, 1, 0, 0})};
        tr.flag(enumerate_V0(3) == expect);
    });

    s.check("projection structure of V0, items (1)-(5), m <= 5", 0.5, [](Tracker& tr) {
        for (int m = 1; m <= 5; ++m) {
            const auto v0 = enumerate_V0(m);
            // (1) p2 is a bijection onto Z_2^{m(m-1)/2}
            std::set<std::uint64_t> p2s;
            for (const auto& r : v0) p2s.insert(r.p2().mask());
            tr.flag(p2s.size() == v0.size() && p2s.size() == (std::size_t{1} << (m * (m - 1) / 2)));
            // (2) p1 hits exactly the even-norm strings
            std::set<std::uint64_t> p1s;
            for (const auto& r : v0) {
                tr.flag(r.p1().norm() % 2 == 0);
                p1s.insert(r.p1().mask());
            }
            std::size_t evens = 0;
            for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x) evens += std::popcount(x) % 2 == 0;
            tr.flag(p1s.size() == evens);
            // (3) loop-free members project onto V0 of one vertex fewer
            std::set<BitString> proj;
            for (const auto& r : v0)
                if (r.p1().norm() == 0) proj.insert(r.p2());
            std::set<BitString> smaller;
            for (const auto& r : enumerate_V0(m - 1)) smaller.insert(r.bits());
            tr.flag(proj == smaller);
            if (m < 2) continue;
            // (4) and (5) per fibre of q2
            std::map<std::uint64_t, std::vector<GraphVector>> fibre;
            for (const auto& r : v0) fibre[r.q2().mask()].push_back(r);
            tr.flag(fibre.size() == (std::size_t{1} << ((m - 1) * (m - 2) / 2)));
            for (const auto& [key, members] : fibre) {
                std::set<std::uint64_t> p1f, q1f;
                const GraphVector* r0 = nullptr;
                for (const auto& r : members) {
                    tr.flag(r.p1().norm() % 2 == 0);
                    p1f.insert(r.p1().mask());
                    q1f.insert(r.q1().mask());
                    if (r.p1().norm() == 0) {
                        tr.flag(r0 == nullptr);
                        r0 = &r;
                    }
                }
                tr.flag(p1f.size() == evens && p1f.size() == members.size());
                tr.flag(q1f.size() == (std::size_t{1} << (m - 1)) && q1f.size() == members.size());
                tr.flag(r0 != nullptr);
                if (!r0) continue;
                for (const auto& r : members) {
                    BitString loops_tail(static_cast<std::size_t>(m - 1));
                    for (int i = 2; i <= m; ++i) loops_tail.set(i - 2, r.loop(i));
                    tr.flag(r.q1() == r0->q1().plus(loops_tail));
                }
            }
        }
    });

    s.check("projection and degree examples on four vertices", 0.5, [&](Tracker& tr) {
        const auto r = gv(4, {0, 0, 1, 1, 1, 1, 1, 0, 0, 1});
        tr.flag(r.p1() == BitString{0, 0, 1, 1});
        tr.flag(r.p2() == (BitString{1, 1, 1, 0, 0, 1}));
        tr.flag(r.q1() == (BitString{1, 1, 1}));
        tr.flag(r.q2() == (BitString{0, 0, 1}));
        tr.flag(r.degrees() == std::vector<int>{3, 1, 3, 3});
    });

    s.check("sigma_rho maps V0 onto V_rho as an involution, m <= 4", 0.5, [&](Tracker& tr) {
        const BitString rho{1, 0, 1};
        tr.flag(sigma_rho(rho, gv(3, {0, 1, 1, 1, 1, 0})) == gv(3, {1, 1, 0, 1, 1, 0}));
        for (int m = 1; m <= 4; ++m)
            for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x) {
                const BitString rh = BitString::from_mask(m, x);
                const auto vr = enumerate_V(m, rh);
                std::set<BitString> image;
                for (const auto& r : enumerate_V0(m)) {
                    const auto img = sigma_rho(rh, r);
                    tr.flag(sigma_rho(rh, img) == r);
                    image.insert(img.bits());
                    if (rh.norm() % 2 == 0) {
                        std::vector<int> deg = img.degrees();
                        bool ok = true;
                        for (int i = 0; i < m; ++i) ok = ok && (deg[i] % 2 == rh[i]);
                        tr.flag(ok);
                    }
                }
                std::set<BitString> vset;
                for (const auto& r : vr) vset.insert(r.bits());
                tr.flag(image == vset);
            }
    });
    return s.take();
}

std::vector<std::pair<double, double>> grid(double lo, double hi, int n) {
    std::vector<std::pair<double, double>> out;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
            const double y = n == 1 ? lo : lo + (hi - lo) * j / (n - 1);
            out.emplace_back(x, y);
        }
    return out;
}

QuadConfig quad_from(const VerifyOptions& opt) {
    QuadConfig q;
    q.qmc_count = opt.qmc_count;
    q.seed = opt.seed;
    return q;
}

double kernel_scale(const Kernel2x2& k) { return std::max(1.0, k.max_abs()); }

std::vector<CheckResult> limits_suite(const VerifyOptions& opt) {
    Suite s("limits");
    const auto pts = grid(-2.0, 2.0, 5);
    const QuadConfig quad = quad_from(opt);
    TruncationPolicy tight;
    tight.tol = 1e-14;

    s.check("g = 0 kernel is Mehler times diag(e^{-t delta}, e^{t delta})", 1e-10, [&](Tracker& tr) {
        const ModelParams mp(0.0, 0.7);
        for (double t : {0.5, 1.0, 2.0}) {
            const auto res = heat_kernel_batch(t, pts, mp, tight, quad);
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const double k0 = mehler_k0(EvalPoint(pts[i].first, pts[i].second, t), 0.0);
                const Kernel2x2 ref = Kernel2x2::diag(k0 * std::exp(-t * 0.7), k0 * std::exp(t * 0.7));
                tr.add(max_abs_diff(res[i].value, ref) / kernel_scale(ref));
            }
        }
    });

    s.check("delta = 0 kernel is the closed-form lambda = 0 term", 1e-12, [&](Tracker& tr) {
        const double g = 0.8;
        const ModelParams mp(g, 0.0);
        for (double t : {0.5, 1.0, 2.0}) {
            const auto res = heat_kernel_batch(t, pts, mp, {}, quad);
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const auto [x, y] = pts[i];
                const double k0 = mehler_k0(EvalPoint(x, y, t), g);
                const double h = std::tanh(0.5 * t);
                const Kernel2x2 ref = (k0 * std::exp(-2.0 * g * g * h)) * rot_even(std::sqrt(2.0) * g * (x + y) * h);
                tr.add(max_abs_diff(res[i].value, ref) / kernel_scale(ref));
            }
        }
    });

    s.check("Z(delta = 0) = 2 e^{g^2 beta} / (1 - e^{-beta})", 1e-8, [&](Tracker& tr) {
        for (double g : {0.5, 1.0})
            for (double beta : {0.5, 1.0, 2.0}) {
                const double z = partition_function(ThermoPoint(beta, ModelParams(g, 0.0)), {}, quad).value;
                tr.add(rel_err(z, 2.0 * std::exp(g * g * beta) / (1.0 - std::exp(-beta))));
            }
    });

    s.check("Z(g = 0) = 2 cosh(beta delta) / (1 - e^{-beta})", 1e-8, [&](Tracker& tr) {
        for (double d : {0.5, 1.0})
            for (double beta : {0.5, 1.0, 2.0}) {
                const double z = partition_function(ThermoPoint(beta, ModelParams(0.0, d)), tight, quad).value;
                tr.add(std::abs(z - 2.0 * std::cosh(beta * d) / (1.0 - std::exp(-beta))) / z);
            }
    });
    return s.take();
}

const std::vector<std::pair<double, double>> kAcceptParams = {{0.5, 0.5}, {1.0, 0.5}, {1.0, 1.0}};

std::vector<CheckResult> series_suite(const VerifyOptions& opt) {
    Suite s("series");
    const auto pts = grid(-2.0, 2.0, 5);
    const QuadConfig quad = quad_from(opt);

    for (auto [g, d] : kAcceptParams) {
        std::ostringstream name;
        name << "series vs certified oracle, g=" << g << " delta=" << d;
        s.check(name.str(), 1e-5, [&](Tracker& tr) {
            const ModelParams mp(g, d);
            CertifiedOracle oracle(mp, Sector::Full);
            for (double t : {0.5, 1.0, 2.0}) {
                const auto res = heat_kernel_batch(t, pts, mp, {}, quad);
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    const auto o = oracle.kernel(EvalPoint(pts[i].first, pts[i].second, t), 1e-9);
                    if (!(o.cutoff_delta < 1e-9)) throw NumericalError("oracle cutoff not certified");
                    if (res[i].capped) throw NumericalError("series truncation capped");
                    tr.add(max_abs_diff(res[i].value, o.value));
                }
            }
        });
    }
    s.budget("runtime under 10 min", 600.0);
    return s.take();
}

std::vector<CheckResult> thermo_suite(const VerifyOptions& opt) {
    Suite s("thermo");
    const QuadConfig quad = quad_from(opt);
    for (auto [g, d] : kAcceptParams) {
        const ModelParams mp(g, d);
        std::ostringstream tag;
        tag << " g=" << g << " delta=" << d;
        s.check("Z series vs oracle," + tag.str(), 1e-4, [&](Tracker& tr) {
            CertifiedOracle oracle(mp, Sector::Full);
            for (double beta : {0.5, 1.0, 2.0}) {
                const double z = partition_function(ThermoPoint(beta, mp), {}, quad).value;
                const double o = oracle.partition(beta).value;
                tr.add(std::abs(z - o) / o);
            }
        });
        s.check("Z_+ + Z_- = Z," + tag.str(), 1.0, [&](Tracker& tr) {
            for (double beta : {0.5, 1.0, 2.0}) {
                const ThermoPoint tp(beta, mp);
                const auto z = partition_function(tp, {}, quad);
                const auto zp = parity_partition(tp, Parity::Plus, {}, quad);
                const auto zm = parity_partition(tp, Parity::Minus, {}, quad);
                // error in units of the combined tolerance
                const double combined =
                    z.quad_error + zp.quad_error + zm.quad_error + z.tail_bound + 2 * zp.tail_bound + 1e-12 * z.value;
                tr.add(std::abs(zp.value + zm.value - z.value) / combined);
            }
        });
        s.check("integral of the kernel trace = Z," + tag.str(), 1e-4, [&](Tracker& tr) {
            // ~100 diagonal points per beta; 2^14 points keep the QMC part far below 1e-4
            QuadConfig tq = quad;
            tq.qmc_count = std::min(quad.qmc_count, 1 << 14);
            CertifiedOracle oracle(mp, Sector::Full);
            for (double beta : {0.5, 1.0, 2.0}) {
                const double o = oracle.partition(beta).value;
                tr.add(std::abs(trace_integral(ThermoPoint(beta, mp), {}, tq).value - o) / o);
            }
        });
    }
    return s.take();
}

std::vector<CheckResult> trotter_suite(const VerifyOptions& opt) {
    Suite s("trotter");
    const auto pts = grid(-2.0, 2.0, 5);
    const ModelParams mp(1.0, 0.5);
    const double t = 1.0;

    s.check("log-log slope of max deviation over N = 4, 8, 16 within [0.8, 1.2]", 0.2, [&](Tracker& tr) {
        const auto ref = heat_kernel_batch(t, pts, mp, {}, quad_from(opt));
        std::vector<double> dev;
        for (int N : {4, 8, 16}) {
            double m = 0.0;
            for (std::size_t i = 0; i < pts.size(); ++i)
                m = std::max(m, max_abs_diff(d_n_kernel(EvalPoint(pts[i].first, pts[i].second, t), N, mp), ref[i].value));
            dev.push_back(m);
        }
        // least squares slope of log dev against log N
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double Ns[] = {4, 8, 16};
        for (int i = 0; i < 3; ++i) {
            const double lx = std::log(Ns[i]), ly = std::log(dev[i]);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        const double slope = -(3 * sxy - sx * sy) / (3 * sxx - sx * sx);
        tr.add(std::abs(slope - 1.0));
    });

    s.check("closed-form D_N vs Fock-space Trotter product, N <= 8", 1e-6, [&](Tracker& tr) {
        const int n_cut = 80;
        for (int N : {1, 2, 4, 8}) {
            const auto P = trotter_matrix_product(mp, n_cut, t, N);
            for (auto [x, y] : pts)
                tr.add(max_abs_diff(position_kernel(P, n_cut, x, y), d_n_kernel(EvalPoint(x, y, t), N, mp)));
        }
    });
    return s.take();
}

std::vector<CheckResult> parity_suite(const VerifyOptions& opt) {
    Suite s("parity");
    const ModelParams mp(1.0, 0.5);
    const double t = 1.0;
    const auto pts = grid(-2.0, 2.0, 5);
    const QuadConfig quad = quad_from(opt);

    s.check("conjugated oracle kernel has vanishing off-diagonal parity blocks", 1e-6, [&](Tracker& tr) {
        const SpectralModel model = build_model(mp, 120, Sector::Full);
        for (auto [x, y] : pts) {
            const auto b = parity_blocks([&](double a, double c) { return oracle_heat_kernel(model, EvalPoint(a, c, t)); },
                                         x, y);
            tr.add(std::abs(b.off_pm));
            tr.add(std::abs(b.off_mp));
        }
    });

    s.check("parity series kernels vs parity oracles", 1e-5, [&](Tracker& tr) {
        for (auto [par, sec] : {std::pair{Parity::Plus, Sector::ParityPlus}, std::pair{Parity::Minus, Sector::ParityMinus}}) {
            CertifiedOracle oracle(mp, sec);
            const auto res = parity_kernel_batch(t, pts, par, mp, {}, quad);
            for (std::size_t i = 0; i < pts.size(); ++i)
                tr.add(std::abs(res[i].value - oracle.kernel(EvalPoint(pts[i].first, pts[i].second, t)).value.k11));
        }
    });

    s.check("diagonal parity blocks of the full oracle match the parity series", 1e-5, [&](Tracker& tr) {
        const SpectralModel model = build_model(mp, 120, Sector::Full);
        const auto kp = parity_kernel_batch(t, pts, Parity::Plus, mp, {}, quad);
        const auto km = parity_kernel_batch(t, pts, Parity::Minus, mp, {}, quad);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto [x, y] = pts[i];
            const auto b = parity_blocks([&](double a, double c) { return oracle_heat_kernel(model, EvalPoint(a, c, t)); },
                                         x, y);
            tr.add(std::abs(b.plus - kp[i].value));
            tr.add(std::abs(b.minus - km[i].value));
        }
    });

    s.check("reflection Phi^-+(-x,-y) = Phi^+-(x,y), lambda <= 3", 1e-12, [&](Tracker& tr) {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> U(-2.0, 2.0);
        for (int lambda = 0; lambda <= 3; ++lambda)
            for (int rep = 0; rep < 10; ++rep) {
                const double x = U(rng), y = U(rng), tt = 0.5 + 0.25 * (U(rng) + 2.0);
                const std::pair<double, double> pair[2] = {{x, y}, {-x, -y}};
                const auto phi = phi_terms(lambda, tt, mp.g, pair, quad.rule_for(lambda));
                tr.add(rel_err(phi[1].minus, phi[0].plus));
                tr.add(rel_err(phi[1].plus, phi[0].minus));
            }
    });
    return s.take();
}

std::vector<CheckResult> decay_suite(const VerifyOptions& opt) {
    Suite s("decay");
    const ModelParams mp(1.0, 0.5);
    const double t = 1.0;
    const QuadConfig quad = quad_from(opt);

    s.check("fitted Gaussian envelope with b > 0 dominates |K| on |x|,|y| <= 6", 0.5, [&](Tracker& tr) {
        // fit on a coarse grid, then check domination on an interleaved finer grid
        const auto fit_pts = grid(-6.0, 6.0, 13);
        const auto fit = heat_kernel_batch(t, fit_pts, mp, {}, quad);
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < fit_pts.size(); ++i) {
            const double r2 = fit_pts[i].first * fit_pts[i].first + fit_pts[i].second * fit_pts[i].second;
            const double ly = std::log(fit[i].value.max_abs());
            sx += r2;
            sy += ly;
            sxx += r2 * r2;
            sxy += r2 * ly;
        }
        const double n = static_cast<double>(fit_pts.size());
        const double b = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
        tr.flag(b > 0.0);
        double log_a = -INFINITY;
        for (std::size_t i = 0; i < fit_pts.size(); ++i) {
            const double r2 = fit_pts[i].first * fit_pts[i].first + fit_pts[i].second * fit_pts[i].second;
            log_a = std::max(log_a, std::log(fit[i].value.max_abs()) + b * r2);
        }
        log_a += std::log(2.0);  // safety factor for off-grid points
        const auto check_pts = grid(-5.75, 5.75, 24);
        const auto chk = heat_kernel_batch(t, check_pts, mp, {}, quad);
        for (std::size_t i = 0; i < check_pts.size(); ++i) {
            const double r2 = check_pts[i].first * check_pts[i].first + check_pts[i].second * check_pts[i].second;
            tr.flag(chk[i].value.max_abs() <= std::exp(log_a - b * r2));
        }
    });

    s.check("K(x,y) = K(y,x)^T on a 5x5 grid", 1e-8, [&](Tracker& tr) {
        const auto pts = grid(-2.0, 2.0, 5);
        std::vector<std::pair<double, double>> swapped;
        for (auto [x, y] : pts) swapped.emplace_back(y, x);
        for (double tt : {0.5, 1.0, 2.0}) {
            const auto a = heat_kernel_batch(tt, pts, mp, {}, quad);
            const auto b = heat_kernel_batch(tt, swapped, mp, {}, quad);
            for (std::size_t i = 0; i < pts.size(); ++i) tr.add(max_abs_diff(a[i].value, b[i].value.transposed()));
        }
    });
    return s.take();
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"combinatorics", "graphs", "limits", "series",
                                                   "thermo",        "trotter", "parity", "decay"};
    return names;
}

std::vector<CheckResult> run_suite(const std::string& suite, const VerifyOptions& opt) {
    if (suite == "combinatorics") return combinatorics_suite();
    if (suite == "graphs") return graphs_suite();
    if (suite == "limits") return limits_suite(opt);
    if (suite == "series") return series_suite(opt);
    if (suite == "thermo") return thermo_suite(opt);
    if (suite == "trotter") return trotter_suite(opt);
    if (suite == "parity") return parity_suite(opt);
    if (suite == "decay") return decay_suite(opt);
    throw ValidationError("unknown verify suite '" + suite + "'");
}

}  // namespace rabi
