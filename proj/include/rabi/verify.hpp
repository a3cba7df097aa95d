// verify.hpp - self-check suites shared by the CLI and the acceptance binary

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rabi {

struct CheckResult {
    std::string suite;
    std::string name;
    bool pass = false;
    double max_error = 0.0;
    double tolerance = 0.0;
    std::size_t cases = 0;
    double seconds = 0.0;
    std::string detail;
};

struct VerifyOptions {
    int qmc_count = 1 << 18;  // series and thermo suites
    std::uint64_t seed = 0;
};

// suite names, in acceptance order
const std::vector<std::string>& suite_names();
std::vector<CheckResult> run_suite(const std::string& suite, const VerifyOptions& opt = {});

}  // namespace rabi
