#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jbc/jacobi.hpp"

namespace jbc {

struct VerifyOptions {
  double T = 1.0;
  int grid_m = 2001;
  std::uint64_t seed = 0;
};

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  /// "<=" for error measures, ">" for margins that must stay positive, "==" for counts.
  std::string relation = "<=";
  bool passed = false;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  std::vector<std::string> failures() const;
};

/// Every module's invariants on J. The grid-path reconstruction runs on a
/// companion instance with a positive, well-separated spectrum (T = 4)
/// derived from the seed, since its rank test is only meaningful there.
VerifyReport run_verification(const JacobiMatrix& J, const VerifyOptions& options);

/// Fixed-width pass/fail table, one line per check.
std::string format_report(const VerifyReport& report);

}  // namespace jbc
