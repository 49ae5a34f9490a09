#pragma once

// The acceptance suite shared by the `verify` subcommand and the acceptance
// test binary.

#include <functional>
#include <string>
#include <vector>

namespace primerec {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
};

struct AcceptanceOptions {
  /// Worker threads for the exponent scan; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

/// Runs criteria 1..8 in order; `on_result` is called as each finishes.
/// A criterion that throws is reported as failed with the error message.
std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& options = {},
    const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS [n] title: detail" or "FAIL [n] title: detail".
std::string format_criterion(const CriterionResult& result);

}  // namespace primerec
