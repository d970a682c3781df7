#pragma once

#include <string>
#include <vector>

namespace gscir {

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

struct SelfCheckOptions {
  // Scales the closed-form thresholds inside the prox comparison; exists
  // so tests can confirm the check actually trips on a wrong constant.
  double threshold_scale = 1.0;
};

// Numerical invariants of the solver: closed-form prox vs grid search,
// operator adjoint identities, grouping round trip, per-group objective
// descent. All checks are deterministic.
std::vector<CheckResult> run_self_checks(const SelfCheckOptions& options = {});

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace gscir
