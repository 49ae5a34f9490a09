#include "primerec/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace primerec {

SieveTable::SieveTable(std::int64_t limit) : limit_(limit) {
  if (limit < 0) throw std::invalid_argument("SieveTable: negative limit");
  composite_.assign(static_cast<std::size_t>(limit) + 1, false);
  composite_[0] = true;
  if (limit >= 1) composite_[1] = true;
  for (std::int64_t p = 2; p * p <= limit; ++p) {
    if (composite_[static_cast<std::size_t>(p)]) continue;
    for (std::int64_t m = p * p; m <= limit; m += p) composite_[static_cast<std::size_t>(m)] = true;
  }
}

bool SieveTable::is_prime(std::int64_t k) const {
  if (k < 0 || k > limit_) {
    throw std::out_of_range("SieveTable::is_prime: " + std::to_string(k) + " outside table");
  }
  return !composite_[static_cast<std::size_t>(k)];
}

std::vector<std::int64_t> SieveTable::primes() const {
  std::vector<std::int64_t> out;
  for (std::int64_t k = 2; k <= limit_; ++k) {
    if (!composite_[static_cast<std::size_t>(k)]) out.push_back(k);
  }
  return out;
}

std::vector<std::int64_t> sieve_primes(std::size_t count) {
  if (count == 0) throw std::invalid_argument("sieve_primes: count must be positive");
  // p_n < n (ln n + ln ln n) for n >= 6
  const double n = static_cast<double>(count);
  std::int64_t limit = 15;
  if (count >= 6) limit = static_cast<std::int64_t>(n * (std::log(n) + std::log(std::log(n)))) + 1;
  for (;;) {
    auto primes = SieveTable(limit).primes();
    if (primes.size() >= count) {
      primes.resize(count);
      return primes;
    }
    limit *= 2;
  }
}

bool is_prime(std::int64_t k) {
  if (k < 0) throw std::invalid_argument("is_prime: negative argument");
  if (k < 2) return false;
  if (k < 4) return true;
  if (k % 2 == 0 || k % 3 == 0) return false;
  for (std::int64_t d = 5; d <= k / d; d += 6) {
    if (k % d == 0 || k % (d + 2) == 0) return false;
  }
  return true;
}

}  // namespace primerec
