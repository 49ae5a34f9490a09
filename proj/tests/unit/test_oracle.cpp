#include <stdexcept>

#include "doctest.h"
#include "primerec/oracle.hpp"

using namespace primerec;

TEST_CASE("sieve_primes") {
  CHECK(sieve_primes(5) == std::vector<std::int64_t>{2, 3, 5, 7, 11});
  CHECK(sieve_primes(1) == std::vector<std::int64_t>{2});
  CHECK(sieve_primes(25).back() == 97);
  CHECK(sieve_primes(120).back() == 659);
  CHECK(sieve_primes(1000).back() == 7919);
  CHECK_THROWS_AS(sieve_primes(0), std::invalid_argument);
}

TEST_CASE("is_prime agrees with the sieve") {
  CHECK_FALSE(is_prime(0));
  CHECK_FALSE(is_prime(1));
  CHECK(is_prime(2));
  CHECK(is_prime(659));
  CHECK_FALSE(is_prime(661 * 659));
  CHECK(is_prime(2147483647));
  CHECK_THROWS_AS(is_prime(-3), std::invalid_argument);
  const SieveTable table(20000);
  for (std::int64_t k = 0; k <= table.limit(); ++k) REQUIRE(table.is_prime(k) == is_prime(k));
  CHECK_THROWS_AS(table.is_prime(20001), std::out_of_range);
}

TEST_CASE("sieve output is strictly increasing primes") {
  const auto primes = sieve_primes(600);
  for (std::size_t i = 0; i < primes.size(); ++i) {
    REQUIRE(is_prime(primes[i]));
    if (i > 0) {
      REQUIRE(primes[i] > primes[i - 1]);
      // Bertrand
      REQUIRE(primes[i] < 2 * primes[i - 1]);
      // nothing skipped
      for (std::int64_t k = primes[i - 1] + 1; k < primes[i]; ++k) REQUIRE_FALSE(is_prime(k));
    }
  }
}
