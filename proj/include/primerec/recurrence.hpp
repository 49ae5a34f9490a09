#pragma once

// The filtered Dirichlet series D_n(s) = sum over k coprime to p_1...p_n of
// k^-s, the map h(s) = (D_n(s) - 1)^(-1/s), and the next-prime recurrence
// p_{n+1} = ceil(h(2 p_n)).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "primerec/ball.hpp"

namespace primerec {

enum class ExponentMode { proven, conjectural, fixed };

/// Which exponent s the recurrence uses at step n.
struct ExponentPolicy {
  ExponentMode mode = ExponentMode::proven;
  /// Only meaningful for ExponentMode::fixed; must be > 1.
  double fixed_value = 0.0;

  static ExponentPolicy proven() { return {}; }
  static ExponentPolicy conjectural() { return {ExponentMode::conjectural, 0.0}; }
  static ExponentPolicy fixed(double s) { return {ExponentMode::fixed, s}; }

  /// 2 p_n, p_n, or the fixed value; exact.
  BallReal exponent_for(std::int64_t p_n) const;
  double value_for(std::int64_t p_n) const;
  /// "proven", "conjectural" or "fixed=<s>".
  std::string name() const;
};

/// Parses "proven", "conjectural" or "fixed=<s>". Throws std::invalid_argument.
ExponentPolicy parse_exponent_policy(std::string_view text);

/// Per-step record of how a prime was produced.
struct StepInfo {
  std::size_t n = 0;              // the step computed p_{n+1} from p_1..p_n
  double exponent = 0.0;
  long precision_bits = 0;
  double enclosure_width = 0.0;   // 2 * radius of h(s)
  int escalations = 0;
  std::int64_t computed = 0;      // ceil(h(s)) as certified
  std::optional<std::int64_t> oracle;  // set when the chain was verified
  bool matches_oracle() const { return !oracle || *oracle == computed; }
};

struct PrimeChain {
  std::vector<std::int64_t> primes;
  std::vector<StepInfo> steps;  // steps[i] produced primes[i + 1]

  std::size_t size() const { return primes.size(); }
  bool all_steps_match() const;
};

/// Invariant violations of a chain: seed 2, strictly increasing, prime,
/// Bertrand. Empty when the chain is sound.
std::vector<std::string> chain_violations(const PrimeChain& chain);

/// A step failed; `index` is its n. Thrown nested around the original
/// exception, which std::rethrow_if_nested recovers.
class StepError : public std::runtime_error {
 public:
  StepError(std::size_t index, const std::string& what);
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// D_n(s) = zeta(s) prod_{j<=n} (1 - p_j^-s), absolute accuracy about 2^-prec.
/// Uses primes[0..n).
BallReal dirichlet_series_product(std::span<const std::int64_t> primes, std::size_t n,
                                  const BallReal& s, mpfr_prec_t prec);
/// Same, with the precision sized by `policy` from s and p_n.
BallReal dirichlet_series_product(std::span<const std::int64_t> primes, std::size_t n,
                                  const BallReal& s, const PrecisionPolicy& policy);

/// D_n(s) summed directly over k <= cutoff coprime to p_1...p_n, with the
/// tail sum_{k>cutoff} k^-s bounded by cutoff^(1-s)/(s-1). Requires
/// cutoff >= p_n.
BallReal dirichlet_series_direct(std::span<const std::int64_t> primes, std::size_t n,
                                 const BallReal& s, std::int64_t cutoff, mpfr_prec_t prec);
/// D_n(s) - 1 from the direct sum with the k = 1 term left out, so no
/// cancellation occurs.
BallReal dirichlet_series_direct_minus_one(std::span<const std::int64_t> primes, std::size_t n,
                                           const BallReal& s, std::int64_t cutoff,
                                           mpfr_prec_t prec);
/// p_n^2 (or 4 when n = 0).
std::int64_t default_direct_cutoff(std::span<const std::int64_t> primes, std::size_t n);

/// h(s) = (D_n(s) - 1)^(-1/s) = exp(-ln(D_n(s) - 1) / s), from the product
/// form. Throws DomainError when the enclosure of D_n(s) - 1 reaches 0.
BallReal h_of_s(std::span<const std::int64_t> primes, std::size_t n, const BallReal& s,
                mpfr_prec_t prec);
/// h(s) from an enclosure of D_n(s) - 1.
BallReal h_from_excess(const BallReal& excess, const BallReal& s, mpfr_prec_t prec);

/// (m-1)^(1-s)/(s-1), an upper bound on sum_{k>=m} k^-s.
BallReal tail_bound(std::int64_t m, const BallReal& s, mpfr_prec_t prec = 128);

struct NextPrime {
  std::int64_t prime = 0;
  StepInfo info;
};

/// ceil(h(s)) for the policy's exponent, escalating precision while the
/// ceiling is indeterminate. Uses primes[0..n), n >= 1. Throws
/// PrecisionExhausted when escalation runs out.
NextPrime next_prime_effective(std::span<const std::int64_t> primes, std::size_t n,
                               const ExponentPolicy& exponent,
                               const PrecisionPolicy& precision = {});

struct ChainOptions {
  /// Compare each step with trial division. A mismatching step is recorded
  /// in StepInfo and the chain continues from the true prime.
  bool verify = true;
};

/// [2, p_2, ..., p_count] via next_prime_effective. Throws StepError.
PrimeChain generate_chain(std::size_t count, const ExponentPolicy& exponent,
                          const PrecisionPolicy& precision = {}, ChainOptions options = {});

/// Smallest prime > p, by trial division.
std::int64_t next_prime_by_trial(std::int64_t p);

}  // namespace primerec
