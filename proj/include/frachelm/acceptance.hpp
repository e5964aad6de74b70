#pragma once

#include <functional>
#include <string>
#include <vector>

namespace frachelm {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;   // measured values against their thresholds
  std::string info;     // extra diagnostics that do not gate the result
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

int acceptance_criterion_count();

/// Runs criterion `id` (1-based). Exceptions from the library are caught and
/// reported as failures.
CriterionResult run_acceptance_criterion(int id);

/// Runs the listed criteria (all when empty), calling `on_result` after each.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS  3  name  detail  (1.2 s / 60 s)"
std::string format_result(const CriterionResult& r);

}  // namespace frachelm
