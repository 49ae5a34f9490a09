#pragma once

// Arithmetic next-prime formulas built on the truncated Moebius sum
// sum_{d | P_n} mu(d) / (b^d - 1), P_n the product of the first n primes.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "primerec/ball.hpp"

namespace primerec {

struct SquarefreeDivisor {
  std::int64_t d = 1;
  int mu = 1;
};

/// Squarefree divisors d <= d_max of p_1 ... p_n with mu(d) = (-1)^(number
/// of prime factors). Primes must be increasing. The order is a depth-first
/// walk over prime subsets.
class SquarefreeDivisorStream {
 public:
  SquarefreeDivisorStream(std::span<const std::int64_t> primes, std::size_t n, std::int64_t d_max);

  std::optional<SquarefreeDivisor> next();

 private:
  struct Frame {
    std::size_t index;  // next prime to try
    std::int64_t d;
    int mu;
  };
  std::span<const std::int64_t> primes_;
  std::int64_t d_max_;
  std::vector<Frame> stack_;
};

/// Smallest d_max with 2^n / (b^d_max - 1) < 2^-target_bits.
std::int64_t truncation_point(std::size_t n, long b, long target_bits);

/// sum over d | P_n, d <= d_max of mu(d) / (b^d - 1), the dropped divisors
/// accounted for by 2^n / (b^d_max - 1) in the radius (nothing is dropped
/// when d_max >= P_n). Throws DomainError when that bound is not below
/// 2^-prec, std::invalid_argument when b < 2 or d_max < 1.
BallReal mobius_sum(std::span<const std::int64_t> primes, std::size_t n, long b,
                    std::int64_t d_max, mpfr_prec_t prec);
/// Same with d_max = truncation_point(n, b, prec).
BallReal mobius_sum(std::span<const std::int64_t> primes, std::size_t n, long b, mpfr_prec_t prec);

struct ClassicalResult {
  std::int64_t prime = 0;
  /// Gandhi: 2^p (sum - 1/2). Trefeu: the argument of the logarithm.
  BallReal certificate;
  long precision_bits = 0;
  int escalations = 0;
};

/// The unique p with 1 < 2^p (sum_{d | P_n} mu(d) / (2^d - 1) - 1/2) < 2,
/// as 1 + floor(-log2(sum - 1/2)). Requires n >= 1. Throws
/// PrecisionExhausted, and std::logic_error if the window check fails.
ClassicalResult gandhi_next_prime(std::span<const std::int64_t> primes, std::size_t n,
                                  const PrecisionPolicy& precision = {});

/// floor(-log_b((b-1) sum_{d | P_n} mu(d) / (b^d - 1) - (b-1)/b)) + 1.
/// Throws DomainError when the argument is not certainly positive,
/// PrecisionExhausted when the floor stays indeterminate.
ClassicalResult golomb_trefeu_next_prime(std::span<const std::int64_t> primes, std::size_t n,
                                         long b, const PrecisionPolicy& precision = {});

}  // namespace primerec
