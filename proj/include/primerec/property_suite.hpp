#pragma once

// Randomized containment checks for the ball arithmetic: random rational
// inputs are evaluated exactly (or bracketed by directed rounding at much
// higher precision) and the exact values must lie in the returned balls.

#include <cstdint>
#include <string>
#include <vector>

namespace primerec {

struct PropertyResult {
  std::string operation;
  int cases = 0;
  int failures = 0;
  std::string first_failure;  // empty when failures == 0

  bool passed() const { return failures == 0; }
};

/// add, sub, mul, div, pow_int, root, ln, exp, certified_ceiling and
/// certified_floor, `cases` random inputs each. Deterministic for a seed.
std::vector<PropertyResult> run_enclosure_properties(int cases = 10000,
                                                     std::uint64_t seed = 0x5eed);

}  // namespace primerec
