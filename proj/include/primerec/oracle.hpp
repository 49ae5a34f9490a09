#pragma once

// Ground-truth primes, independent of the analytic machinery.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace primerec {

/// Sieve of Eratosthenes over [0, limit].
class SieveTable {
 public:
  explicit SieveTable(std::int64_t limit);

  std::int64_t limit() const { return limit_; }
  /// Throws std::out_of_range for k outside [0, limit].
  bool is_prime(std::int64_t k) const;
  std::vector<std::int64_t> primes() const;

 private:
  std::int64_t limit_;
  std::vector<bool> composite_;
};

/// First `count` primes. Throws std::invalid_argument for count == 0.
std::vector<std::int64_t> sieve_primes(std::size_t count);

/// Deterministic trial division. Negative k throws std::invalid_argument.
bool is_prime(std::int64_t k);

}  // namespace primerec
