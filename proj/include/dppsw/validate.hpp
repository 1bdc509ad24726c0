#pragma once

#include <string>
#include <vector>

namespace dppsw {

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct ValidationOptions {
  /// Test hook: name of a deliberately injected fault ("ortho" perturbs a
  /// normalization constant), empty for a clean run.
  std::string inject_fault;
};

/// The invariant suite behind `dppsw validate`: moment identity,
/// biorthonormality, projection/trace, theta->1 and q->1 limits, CD
/// consistency, partition-function and density-form cross-checks.
std::vector<CheckResult> run_validation(const ValidationOptions& opts = {});

}  // namespace dppsw
