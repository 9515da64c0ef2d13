#pragma once

// Verification suites shared by the command-line driver and the acceptance runner.

#include <string>
#include <string_view>
#include <vector>

#include "tcm/theta.hpp"

namespace tcm::suites {

struct CheckResult {
  std::string suite;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

/// all, theta, group, order, examples
const std::vector<std::string>& suite_names();

/// Throws Error(UnknownName) for an unknown suite.
std::vector<CheckResult> run_suite(std::string_view name, const PrecisionContext& ctx);

// Individual property checks, also used directly by the acceptance runner.
CheckResult check_quasi_periodicity(const PrecisionContext& ctx, int shifts);
CheckResult check_mobius_composition(Precision prec, int pairs);
CheckResult check_fixed_point_residual(Precision prec);
CheckResult check_rational_roundtrip(Precision prec, int count);

}  // namespace tcm::suites
