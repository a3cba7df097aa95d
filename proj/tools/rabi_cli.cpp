// rabi - kernel grids, partition scans, Trotter studies and self-checks.
// Exit codes: 0 ok, 1 invalid input, 2 numerical failure, 3 verification failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "rabi/core.hpp"
#include "rabi/oracle.hpp"
#include "rabi/quadrature.hpp"
#include "rabi/series.hpp"
#include "rabi/thermo.hpp"
#include "rabi/trotter.hpp"
#include "rabi/verify.hpp"

namespace {

using rabi::ValidationError;

// a single output cell: number, integer, text or boolean
using Cell = std::variant<double, long long, std::string, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_cell(const Cell& c) {
    if (auto d = std::get_if<double>(&c)) return fmt_double(*d);
    if (auto i = std::get_if<long long>(&c)) return std::to_string(*i);
    if (auto b = std::get_if<bool>(&c)) return *b ? "true" : "false";
    const auto& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

std::string render(const Table& t, const std::string& format) {
    std::ostringstream os;
    if (format == "csv") {
        for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
        os << "\n";
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
            os << "\n";
        }
        return os.str();
    }
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json rec;
        for (std::size_t i = 0; i < row.size(); ++i) {
            const auto& key = t.columns[i];
            std::visit(
                [&](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, double>) {
                        if (std::isfinite(v)) rec[key] = v;
                        else rec[key] = nullptr;
                    } else {
                        rec[key] = v;
                    }
                },
                row[i]);
        }
        arr.push_back(std::move(rec));
    }
    return arr.dump(2) + "\n";
}

// ---------- argument parsing helpers ----------

struct Range {
    double lo = 0.0, hi = 0.0;
    int n = 1;
    std::vector<double> values() const {
        std::vector<double> v;
        for (int i = 0; i < n; ++i) v.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
        return v;
    }
};

double parse_number(const std::string& s, const std::string& what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ValidationError(what + ": '" + s + "' is not a number");
    }
    if (pos != s.size() || !std::isfinite(v)) throw ValidationError(what + ": '" + s + "' is not a finite number");
    return v;
}

long long parse_integer(const std::string& s, const std::string& what) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        throw ValidationError(what + ": '" + s + "' is not an integer");
    }
    if (pos != s.size()) throw ValidationError(what + ": '" + s + "' is not an integer");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

Range parse_range(const std::string& s, const std::string& what) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw ValidationError(what + " must look like a:b:n");
    Range r{parse_number(parts[0], what), parse_number(parts[1], what),
            static_cast<int>(parse_integer(parts[2], what))};
    if (r.n < 1 || r.n > 10000) throw ValidationError(what + ": point count must be in [1, 10000]");
    if (r.hi < r.lo) throw ValidationError(what + ": upper end below lower end");
    if (std::abs(r.lo) > 50.0 || std::abs(r.hi) > 50.0) throw ValidationError(what + ": |x| must be <= 50");
    return r;
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
    std::vector<double> v;
    for (const auto& p : split(s, ',')) v.push_back(parse_number(p, what));
    if (v.empty()) throw ValidationError(what + ": empty list");
    return v;
}

rabi::QuadConfig parse_quad(const std::string& s) {
    rabi::QuadConfig q;
    if (s.empty()) return q;
    const auto parts = split(s, ':');
    const std::string& mode = parts[0];
    if (mode == "nested") {
        if (parts.size() != 2) throw ValidationError("--quad nested:ORDER");
        const long long order = parse_integer(parts[1], "--quad order");
        if (order < 2 || order > 64) throw ValidationError("--quad nested order must be in [2, 64]");
        q.nested_order = q.nested_order_high = static_cast<int>(order);
        return q;
    }
    if (mode == "qmc" || mode == "mapped") {
        if (parts.size() != 3) throw ValidationError("--quad " + mode + ":COUNT:SEED");
        const long long count = parse_integer(parts[1], "--quad count");
        const long long seed = parse_integer(parts[2], "--quad seed");
        if (count < 16 || count > (1LL << 26) || (count & (count - 1)) != 0)
            throw ValidationError("--quad sample count must be a power of two in [16, 2^26]");
        if (seed < 0) throw ValidationError("--quad seed must be >= 0");
        q.qmc_count = static_cast<int>(count);
        q.seed = static_cast<std::uint64_t>(seed);
        q.qmc_mode = mode == "qmc" ? rabi::QuadMode::SortedQmc : rabi::QuadMode::MappedQmc;
        return q;
    }
    throw ValidationError("--quad must be nested:ORDER, qmc:COUNT:SEED or mapped:COUNT:SEED");
}

struct Options {
    std::string g = "0", delta = "0";
    std::string t, beta, x_range = "-2:2:5", y_range = "-2:2:5";
    std::string tol = "1e-10", lambda_cap = "60", quad, fock = "60";
    std::string format = "csv", out;
    std::string steps = "4,8,16";
    std::string suite = "all";
};

struct Resolved {
    rabi::SignedModel model;
    rabi::TruncationPolicy policy;
    rabi::QuadConfig quad;
    int fock = 60;
};

Resolved resolve(const Options& o) {
    Resolved r;
    const double g = parse_number(o.g, "--g");
    const double d = parse_number(o.delta, "--delta");
    if (g < 0.0 || g > 5.0) throw ValidationError("--g must be in [0, 5]");
    if (std::abs(d) > 10.0) throw ValidationError("--delta must be in [-10, 10]");
    r.model = rabi::SignedModel::make(g, d);
    r.policy.tol = parse_number(o.tol, "--tol");
    if (!(r.policy.tol > 0.0) || r.policy.tol > 1.0) throw ValidationError("--tol must be in (0, 1]");
    const long long cap = parse_integer(o.lambda_cap, "--lambda-cap");
    if (cap < 0 || cap > 200) throw ValidationError("--lambda-cap must be in [0, 200]");
    r.policy.lambda_cap = static_cast<int>(cap);
    r.quad = parse_quad(o.quad);
    const long long fock = parse_integer(o.fock, "--fock-cutoff");
    if (fock < 8 || fock > 240) throw ValidationError("--fock-cutoff must be in [8, 240]");
    r.fock = static_cast<int>(fock);
    if (o.format != "csv" && o.format != "json") throw ValidationError("--format must be csv or json");
    return r;
}

std::vector<double> positive_list(const std::string& s, const std::string& what) {
    if (s.empty()) throw ValidationError(what + " is required");
    auto v = parse_list(s, what);
    for (double x : v)
        if (!(x > 0.0) || x > 50.0) throw ValidationError(what + " values must be in (0, 50]");
    return v;
}

std::vector<std::pair<double, double>> grid_points(const Options& o) {
    const auto xs = parse_range(o.x_range, "--x-range").values();
    const auto ys = parse_range(o.y_range, "--y-range").values();
    std::vector<std::pair<double, double>> pts;
    for (double x : xs)
        for (double y : ys) pts.emplace_back(x, y);
    return pts;
}

// ---------- commands ----------

Table cmd_kernel(const Options& o) {
    const auto r = resolve(o);
    const auto ts = positive_list(o.t, "--t");
    const auto pts = grid_points(o);
    Table tab{{"x", "y", "t", "k11", "k12", "k21", "k22", "lambda_used", "tail_bound"}, {}};
    for (double t : ts) {
        const auto res = rabi::heat_kernel_batch(t, pts, r.model.params, r.policy, r.quad);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto k = r.model.map_kernel(res[i].value);
            tab.rows.push_back({pts[i].first, pts[i].second, t, k.k11, k.k12, k.k21, k.k22,
                                static_cast<long long>(res[i].lambda_used), res[i].tail_bound});
        }
    }
    return tab;
}

// the parity kernel as the block diagonal diag(K_+, K_-), same columns as `kernel`
Table cmd_parity_kernel(const Options& o) {
    const auto r = resolve(o);
    const auto ts = positive_list(o.t, "--t");
    const auto pts = grid_points(o);
    Table tab{{"x", "y", "t", "k11", "k12", "k21", "k22", "lambda_used", "tail_bound"}, {}};
    const auto plus_sector = r.model.sector(rabi::Parity::Plus);
    const auto minus_sector = r.model.sector(rabi::Parity::Minus);
    for (double t : ts) {
        const auto kp = rabi::parity_kernel_batch(t, pts, plus_sector, r.model.params, r.policy, r.quad);
        const auto km = rabi::parity_kernel_batch(t, pts, minus_sector, r.model.params, r.policy, r.quad);
        for (std::size_t i = 0; i < pts.size(); ++i)
            tab.rows.push_back({pts[i].first, pts[i].second, t, kp[i].value, 0.0, 0.0, km[i].value,
                                static_cast<long long>(std::max(kp[i].lambda_used, km[i].lambda_used)),
                                std::max(kp[i].tail_bound, km[i].tail_bound)});
    }
    return tab;
}

Table cmd_partition(const Options& o) {
    const auto r = resolve(o);
    const auto betas = positive_list(o.beta, "--beta");
    Table tab{{"beta", "Z", "Z_plus", "Z_minus", "oracle_Z", "rel_err"}, {}};
    rabi::CertifiedOracle oracle(r.model.params, rabi::Sector::Full, r.fock, std::max(240, r.fock));
    for (double beta : betas) {
        const rabi::ThermoPoint tp(beta, r.model.params);
        const double z = rabi::partition_function(tp, r.policy, r.quad).value;
        const double zp = rabi::parity_partition(tp, r.model.sector(rabi::Parity::Plus), r.policy, r.quad).value;
        const double zm = rabi::parity_partition(tp, r.model.sector(rabi::Parity::Minus), r.policy, r.quad).value;
        const double oz = oracle.partition(beta).value;
        tab.rows.push_back({beta, z, zp, zm, oz, std::abs(z - oz) / oz});
    }
    return tab;
}

Table cmd_trotter(const Options& o) {
    const auto r = resolve(o);
    const auto ts = positive_list(o.t, "--t");
    if (ts.size() != 1) throw ValidationError("trotter-study takes a single --t");
    const double t = ts[0];
    std::vector<int> Ns;
    for (double v : parse_list(o.steps, "--steps")) {
        if (v != std::floor(v) || v < 1 || v > rabi::kTrotterMaxSteps)
            throw ValidationError("--steps values must be integers in [1, " + std::to_string(rabi::kTrotterMaxSteps) + "]");
        Ns.push_back(static_cast<int>(v));
    }
    const auto pts = grid_points(o);
    const auto ref = rabi::heat_kernel_batch(t, pts, r.model.params, r.policy, r.quad);
    std::vector<double> dev;
    for (int N : Ns) {
        double m = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto d = rabi::d_n_kernel(rabi::EvalPoint(pts[i].first, pts[i].second, t), N, r.model.params);
            m = std::max(m, rabi::max_abs_diff(r.model.map_kernel(d), r.model.map_kernel(ref[i].value)));
        }
        dev.push_back(m);
    }
    // least squares slope of -log(dev) against log N
    double slope = std::nan("");
    if (Ns.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(Ns.size());
        for (std::size_t i = 0; i < Ns.size(); ++i) {
            const double lx = std::log(static_cast<double>(Ns[i])), ly = std::log(dev[i]);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        const double den = n * sxx - sx * sx;
        if (den != 0.0) slope = -(n * sxy - sx * sy) / den;
    }
    Table tab{{"N", "max_dev", "fitted_slope"}, {}};
    for (std::size_t i = 0; i < Ns.size(); ++i) tab.rows.push_back({static_cast<long long>(Ns[i]), dev[i], slope});
    return tab;
}

Table cmd_verify(const Options& o, bool& all_pass) {
    if (o.format != "csv" && o.format != "json") throw ValidationError("--format must be csv or json");
    rabi::VerifyOptions vo;
    if (!o.quad.empty()) {
        const auto q = parse_quad(o.quad);
        vo.qmc_count = q.qmc_count;
        vo.seed = q.seed;
    }
    std::vector<std::string> suites;
    if (o.suite == "all") suites = rabi::suite_names();
    else {
        for (const auto& s : split(o.suite, ',')) {
            bool known = false;
            for (const auto& n : rabi::suite_names()) known = known || n == s;
            if (!known) throw ValidationError("unknown suite '" + s + "'");
            suites.push_back(s);
        }
    }
    Table tab{{"suite", "check", "pass", "max_error", "tolerance", "cases"}, {}};
    all_pass = true;
    for (const auto& s : suites)
        for (const auto& r : rabi::run_suite(s, vo)) {
            all_pass = all_pass && r.pass;
            std::string name = r.name;
            if (!r.detail.empty() && r.detail != "seconds") name += " (" + r.detail + ")";
            tab.rows.push_back({r.suite, name, r.pass, r.max_error, r.tolerance, static_cast<long long>(r.cases)});
        }
    return tab;
}

void emit(const Table& t, const Options& o) {
    const std::string text = render(t, o.format);
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("cannot open --out path '" + o.out + "'");
    f << text;
    if (!f) throw rabi::NumericalError("write to '" + o.out + "' failed");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heat kernel, partition functions and self-checks for the quantum Rabi model"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* c, bool grid, bool time) {
        c->add_option("--g", o.g, "coupling g >= 0");
        c->add_option("--delta", o.delta, "level splitting (negative swaps the parity sectors)");
        c->add_option("--tol", o.tol, "absolute tail tolerance of the series");
        c->add_option("--lambda-cap", o.lambda_cap, "hard maximum series index");
        c->add_option("--quad", o.quad, "nested:ORDER | qmc:COUNT:SEED | mapped:COUNT:SEED");
        c->add_option("--fock-cutoff", o.fock, "starting Fock cutoff of the oracle");
        c->add_option("--format", o.format, "csv or json");
        c->add_option("--out", o.out, "output path (default stdout)");
        if (grid) {
            c->add_option("--x-range", o.x_range, "a:b:n");
            c->add_option("--y-range", o.y_range, "a:b:n");
        }
        if (time) c->add_option("--t", o.t, "comma-separated times");
    };
    auto* kernel = app.add_subcommand("kernel", "heat kernel on a grid");
    common(kernel, true, true);
    auto* parity = app.add_subcommand("parity-kernel", "parity kernels K_+ (k11) and K_- (k22) on a grid");
    common(parity, true, true);
    auto* partition = app.add_subcommand("partition", "partition functions and the oracle trace");
    common(partition, false, false);
    partition->add_option("--beta", o.beta, "comma-separated inverse temperatures");
    auto* trotter = app.add_subcommand("trotter-study", "deviation of the N-step kernel from the series");
    common(trotter, true, true);
    trotter->add_option("--steps", o.steps, "comma-separated step counts");
    auto* verify = app.add_subcommand("verify", "run self-check suites");
    verify->add_option("--suite", o.suite, "all or a comma list of suite names");
    verify->add_option("--quad", o.quad, "qmc sample count and seed for the series suites");
    verify->add_option("--format", o.format, "csv or json");
    verify->add_option("--out", o.out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (kernel->parsed()) emit(cmd_kernel(o), o);
        else if (parity->parsed()) emit(cmd_parity_kernel(o), o);
        else if (partition->parsed()) emit(cmd_partition(o), o);
        else if (trotter->parsed()) emit(cmd_trotter(o), o);
        else if (verify->parsed()) {
            bool ok = false;
            const Table t = cmd_verify(o, ok);
            emit(t, o);
            return ok ? 0 : 3;
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const rabi::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
