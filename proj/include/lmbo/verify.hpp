#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lmbo {

struct CheckResult {
    std::string suite;
    std::string name;
    bool pass = false;
    double residual = 0.0;
    double tolerance = 0.0;
};

/// Suites: kernel, evolution, velocity, anisotropy, all. `seed` drives the
/// random fixtures only. Throws ConfigError for an unknown suite.
std::vector<CheckResult> run_verify_suite(const std::string& suite, std::uint64_t seed = 1);

const std::vector<std::string>& verify_suite_names();

/// "PASS|FAIL suite/name residual=... tol=..." per line.
void print_checks(std::ostream& os, const std::vector<CheckResult>& checks);

}  // namespace lmbo
