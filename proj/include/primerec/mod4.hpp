#pragma once

// The chi_4 criterion: with V_n(s) = L(s, chi_4) prod_{k<=n} (1 - chi_4(p_k) p_k^-s),
// V_n(2 p_n) > 1 predicts p_{n+1} = 1 mod 4 and V_n(2 p_n) < 1 predicts 3.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "primerec/ball.hpp"
#include "primerec/recurrence.hpp"

namespace primerec {

struct Mod4Prediction {
  std::size_t n = 0;
  std::int64_t p_n = 0;
  std::int64_t p_next = 0;
  BallReal v_enclosure;
  /// 1 or 3; empty when the enclosure still contains 1 (indeterminate).
  std::optional<int> predicted;
  int actual = 0;  // p_next mod 4
  long precision_bits = 0;
  int escalations = 0;

  bool indeterminate() const { return !predicted; }
  bool matches() const { return predicted && *predicted == actual; }
};

/// V_n(s) with absolute accuracy about 2^-prec. Uses primes[0..n).
BallReal v_function(std::span<const std::int64_t> primes, std::size_t n, const BallReal& s,
                    mpfr_prec_t prec);
/// Same, with the precision sized by `policy` from s and p_n.
BallReal v_function(std::span<const std::int64_t> primes, std::size_t n, const BallReal& s,
                    const PrecisionPolicy& policy);

/// Classifies V_n at the policy's exponent (2 p_n by default), escalating
/// while the enclosure contains 1. Never throws PrecisionExhausted: running
/// out of escalations yields an indeterminate prediction. Requires n >= 1.
Mod4Prediction predict_mod4(std::span<const std::int64_t> primes, std::size_t n,
                            const ExponentPolicy& exponent = {},
                            const PrecisionPolicy& precision = {});

/// Header `n,p_n,p_next,predicted,actual,match`; an indeterminate prediction
/// is written as `indeterminate`.
void write_mod4_csv(std::ostream& out, const std::vector<Mod4Prediction>& rows);

}  // namespace primerec
