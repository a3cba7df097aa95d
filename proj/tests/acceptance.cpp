// One PASS/FAIL line per acceptance criterion, then the individual checks.
// Tolerances are pinned inside the suites; the QMC sample count is pinned here.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "rabi/verify.hpp"

int main() {
    const std::vector<std::pair<std::string, std::string>> criteria = {
        {"combinatorics", "combinatorial identity suite"},
        {"graphs", "even-graph structure"},
        {"limits", "closed-form limits"},
        {"series", "series vs oracle"},
        {"thermo", "partition consistency"},
        {"trotter", "Trotter convergence"},
        {"parity", "parity decomposition"},
        {"decay", "decay and symmetry"},
    };
    rabi::VerifyOptions opt;
    opt.qmc_count = 1 << 18;
    opt.seed = 0;

    std::vector<std::vector<rabi::CheckResult>> all;
    std::vector<std::string> lines;
    bool ok = true;
    int idx = 1;
    for (const auto& [suite, title] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        auto res = rabi::run_suite(suite, opt);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool pass = !res.empty();
        for (const auto& r : res) pass = pass && r.pass;
        ok = ok && pass;
        char buf[256];
        std::snprintf(buf, sizeof buf, "criterion %d [%s] %s (%zu checks, %.1f s)", idx++, pass ? "PASS" : "FAIL",
                      title.c_str(), res.size(), secs);
        lines.push_back(buf);
        std::printf("%s\n", buf);
        std::fflush(stdout);
        all.push_back(std::move(res));
    }
    std::printf("\n");
    for (const auto& res : all)
        for (const auto& r : res)
            std::printf("  %-4s %-13s %-78s err=%.3e tol=%.1e n=%zu %s\n", r.pass ? "ok" : "FAIL", r.suite.c_str(),
                        r.name.c_str(), r.max_error, r.tolerance, r.cases, r.detail.c_str());
    std::printf("\n");
    for (const auto& l : lines) std::printf("%s\n", l.c_str());
    return ok ? 0 : 1;
}
