#include <set>
#include <stdexcept>

#include "doctest.h"
#include "primerec/classical.hpp"
#include "primerec/oracle.hpp"
#include "primerec/recurrence.hpp"

using namespace primerec;

namespace {

const std::vector<std::int64_t>& first_primes() {
  static const std::vector<std::int64_t> primes = sieve_primes(40);
  return primes;
}

std::vector<SquarefreeDivisor> drain(SquarefreeDivisorStream stream) {
  std::vector<SquarefreeDivisor> out;
  while (const auto d = stream.next()) out.push_back(*d);
  return out;
}

}  // namespace

TEST_CASE("squarefree divisor stream") {
  const auto& primes = first_primes();
  SUBCASE("all divisors of 30") {
    const auto divs = drain(SquarefreeDivisorStream(primes, 3, 30));
    std::set<std::int64_t> ds;
    int mu_sum = 0;
    for (const auto& d : divs) {
      ds.insert(d.d);
      mu_sum += d.mu;
    }
    CHECK(ds == std::set<std::int64_t>{1, 2, 3, 5, 6, 10, 15, 30});
    CHECK(divs.size() == 8);
    CHECK(mu_sum == 0);
  }
  SUBCASE("pruned by d_max") {
    const auto divs = drain(SquarefreeDivisorStream(primes, 4, 14));
    std::set<std::int64_t> ds;
    for (const auto& d : divs) {
      ds.insert(d.d);
      const int factors = (d.d % 2 == 0) + (d.d % 3 == 0) + (d.d % 5 == 0) + (d.d % 7 == 0);
      CHECK(d.mu == (factors % 2 == 0 ? 1 : -1));
    }
    CHECK(ds == std::set<std::int64_t>{1, 2, 3, 5, 6, 7, 10, 14});
  }
  SUBCASE("brute force agreement") {
    for (std::size_t n = 0; n <= 6; ++n) {
      for (std::int64_t d_max : {1L, 10L, 100L, 1000L}) {
        std::set<std::int64_t> expected;
        for (std::int64_t d = 1; d <= d_max; ++d) {
          std::int64_t rest = d;
          bool ok = true;
          for (std::size_t j = 0; j < n; ++j) {
            if (rest % primes[j] == 0) rest /= primes[j];
            if (rest % primes[j] == 0) ok = false;
          }
          if (ok && rest == 1) expected.insert(d);
        }
        std::set<std::int64_t> got;
        for (const auto& d : drain(SquarefreeDivisorStream(primes, n, d_max))) got.insert(d.d);
        CHECK(got == expected);
      }
    }
  }
  CHECK(drain(SquarefreeDivisorStream(primes, 3, 0)).empty());
}

TEST_CASE("mobius_sum examples") {
  const auto& primes = first_primes();
  CHECK(mobius_sum(primes, 1, 2, 2, 128).contains(mpq_class(2, 3)));
  CHECK(mobius_sum(primes, 2, 2, 6, 128).contains(mpq_class(34, 63)));
  CHECK(mobius_sum(primes, 0, 2, 1, 128).contains(mpq_class(1)));
  CHECK(mobius_sum(primes, 2, 2, 128).contains(mpq_class(34, 63)));
  CHECK(mobius_sum(primes, 2, 2, 128).radius_double() < 1e-35);
  CHECK_THROWS_AS(mobius_sum(primes, 3, 2, 5, 128), DomainError);
  CHECK_THROWS_AS(mobius_sum(primes, 2, 1, 6, 64), std::invalid_argument);
  CHECK_THROWS_AS(mobius_sum(primes, 2, 2, 0, 64), std::invalid_argument);
}

TEST_CASE("truncation point") {
  // 2^n / (b^d - 1) < 2^-t first holds at d
  for (std::size_t n : {1UL, 5UL, 20UL}) {
    for (long b : {2L, 3L, 10L}) {
      for (long t : {32L, 128L}) {
        const std::int64_t d = truncation_point(n, b, t);
        mpz_class at, below;
        mpz_ui_pow_ui(at.get_mpz_t(), static_cast<unsigned long>(b), static_cast<unsigned long>(d));
        mpz_ui_pow_ui(below.get_mpz_t(), static_cast<unsigned long>(b), static_cast<unsigned long>(d - 1));
        const mpz_class limit = mpz_class(1) << static_cast<mp_bitcnt_t>(n + static_cast<std::size_t>(t));
        CHECK(at - 1 > limit);
        CHECK(below - 1 <= limit);
      }
    }
  }
}

TEST_CASE("truncation soundness") {
  const auto& primes = first_primes();
  for (std::size_t n : {3UL, 8UL, 15UL}) {
    for (long b : {2L, 3L, 10L}) {
      const std::int64_t d = truncation_point(n, b, 96);
      const BallReal coarse = mobius_sum(primes, n, b, d, 96);
      const BallReal fine = mobius_sum(primes, n, b, 2 * d, 96);
      CHECK(overlaps(coarse, fine));
      Float diff(256);
      mpfr_sub(diff.get(), coarse.midpoint().get(), fine.midpoint().get(), MPFR_RNDN);
      mpfr_abs(diff.get(), diff.get(), MPFR_RNDU);
      CHECK(mpfr_cmp(diff.get(), coarse.radius().get()) < 0);
    }
  }
}

TEST_CASE("gandhi_next_prime") {
  const auto& primes = first_primes();
  const ClassicalResult first = gandhi_next_prime(primes, 1);
  CHECK(first.prime == 3);
  CHECK(first.certificate.contains(mpq_class(4, 3)));
  const ClassicalResult second = gandhi_next_prime(primes, 2);
  CHECK(second.prime == 5);
  CHECK(second.certificate.contains(mpq_class(160, 126)));
  for (std::size_t n = 1; n <= 30; ++n) {
    CAPTURE(n);
    const ClassicalResult r = gandhi_next_prime(primes, n);
    CHECK(r.prime == primes[n]);
    CHECK(strictly_inside(r.certificate, 1, 2));
  }
  CHECK_THROWS_AS(gandhi_next_prime(primes, 0), std::invalid_argument);
}

TEST_CASE("golomb_trefeu_next_prime") {
  const auto& primes = first_primes();
  const ClassicalResult first = golomb_trefeu_next_prime(primes, 1, 2);
  CHECK(first.prime == 3);
  CHECK(first.certificate.contains(mpq_class(1, 6)));
  const ClassicalResult second = golomb_trefeu_next_prime(primes, 2, 2);
  CHECK(second.prime == 5);
  CHECK(second.certificate.contains(mpq_class(5, 126)));
  for (long b : {2L, 3L, 10L, 7L}) {
    for (std::size_t n = 1; n <= 30; ++n) {
      CAPTURE(b);
      CAPTURE(n);
      CHECK(golomb_trefeu_next_prime(primes, n, b).prime == primes[n]);
    }
  }
  CHECK_THROWS_AS(golomb_trefeu_next_prime(primes, 1, 1), std::invalid_argument);
}

TEST_CASE("classical and analytic recurrences agree") {
  const auto& primes = first_primes();
  for (std::size_t n = 1; n <= 15; ++n) {
    CAPTURE(n);
    const std::int64_t analytic = next_prime_effective(primes, n, ExponentPolicy::proven()).prime;
    CHECK(analytic == primes[n]);
    CHECK(gandhi_next_prime(primes, n).prime == analytic);
    for (long b : {2L, 3L, 10L}) CHECK(golomb_trefeu_next_prime(primes, n, b).prime == analytic);
  }
}

TEST_CASE("classical formulas signal exhausted precision") {
  const auto& primes = first_primes();
  PrecisionPolicy tight;
  tight.max_bits = 130;
  CHECK_THROWS_AS(gandhi_next_prime(primes, 20, tight), PrecisionExhausted);
  CHECK_THROWS_AS(golomb_trefeu_next_prime(primes, 20, 3, tight), PrecisionExhausted);
}
