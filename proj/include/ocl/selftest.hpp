#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ocl {

struct SelftestOptions {
    std::uint64_t seed = 1;
    /// Test hook: flips the sign of one generator off-diagonal entry before
    /// the generator checks run.
    bool corrupt_generator = false;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Cross-oracle checks: closed forms against quadrature, uniformization
/// against ODE integration, generator invariants, table sufficiency against
/// full knowledge sets, and the mixed-variable estimator by Monte Carlo.
std::vector<CheckResult> run_selftest(const SelftestOptions& opts);

void print_report(std::ostream& os, const std::vector<CheckResult>& results);
bool all_passed(const std::vector<CheckResult>& results);

}  // namespace ocl
