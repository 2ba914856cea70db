#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace acv {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  /// Multiplies every numeric tolerance; 0 forces failure.
  double tolerance_scale = 1.0;
  int jobs = 2;
  std::uint64_t master_seed = 20190925;
  /// Run only these criterion ids (empty = all).
  std::vector<int> only;
};

/// Runs the verification criteria. When `log` is set, one pass/fail line per
/// criterion is printed as results come in.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            std::ostream* log = nullptr);

}  // namespace acv
