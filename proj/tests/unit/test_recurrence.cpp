#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "primerec/oracle.hpp"
#include "primerec/recurrence.hpp"

using namespace primerec;

namespace {

BallReal reference(const char* decimal) {
  Float mid(256);
  mpfr_set_str(mid.get(), decimal, 10, MPFR_RNDN);
  Float rad(64);
  mpfr_set_str(rad.get(), "1e-47", 10, MPFR_RNDU);
  return BallReal::from_mid_rad(mid.get(), rad.get());
}

mpq_class inverse_power(long k, long s) {
  mpz_class pw;
  mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(s));
  return mpq_class(1, pw);
}

const std::vector<std::int64_t>& first_primes() {
  static const std::vector<std::int64_t> primes = sieve_primes(60);
  return primes;
}

}  // namespace

TEST_CASE("D_n(s) reference values") {
  const auto& primes = first_primes();
  CHECK(overlaps(dirichlet_series_product(primes, 1, BallReal::exact(4L), 160),
                 reference("1.0146780316041920545462534655073449088513290174238")));
  CHECK(overlaps(dirichlet_series_product(primes, 2, BallReal::exact(6L), 160),
                 reference("1.0000733495124908981452900019703956423973113289366")));
  CHECK(dirichlet_series_product(primes, 2, BallReal::exact(6L), 160).radius_double() < 1e-40);
  // D_0 is zeta itself
  CHECK(overlaps(dirichlet_series_product(primes, 0, BallReal::exact(2L), 128),
                 reference("1.6449340668482264364724151666460251892189499012068")));
  CHECK_THROWS_AS(dirichlet_series_product(primes, 61, BallReal::exact(2L), 64),
                  std::invalid_argument);
}

TEST_CASE("h(s) reference values") {
  const auto& primes = first_primes();
  CHECK(overlaps(h_of_s(primes, 1, BallReal::exact(4L), 160),
                 reference("2.872982928473201903334471786170952034953330070886")));
  CHECK(overlaps(h_of_s(primes, 1, BallReal::exact(2L), 160),
                 reference("2.0685695747271554865949377182872622804393347209132")));
  CHECK(overlaps(h_of_s(primes, 1, BallReal::exact(1.5), 160),
                 reference("1.2821954249667492526463221391219602620820164562303")));
}

TEST_CASE("direct sum matches an exact partial sum plus bounded tail") {
  const auto& primes = first_primes();
  // n = 2, s = 6, cutoff 49: k in {1, 5, 7, 11, ..., 49}
  mpq_class partial = 0;
  for (long k = 1; k <= 49; ++k) {
    if (k % 2 != 0 && k % 3 != 0) partial += inverse_power(k, 6);
  }
  const mpq_class tail = mpq_class(1, 5) * inverse_power(49, 5);
  const BallReal direct = dirichlet_series_direct(primes, 2, BallReal::exact(6L), 49, 128);
  CHECK(direct.contains(partial));
  CHECK(direct.contains(partial + tail));
  const BallReal excess = dirichlet_series_direct_minus_one(primes, 2, BallReal::exact(6L), 49, 128);
  CHECK(excess.contains(partial - 1));
  CHECK(certainly_positive(excess));
  CHECK_THROWS_AS(dirichlet_series_direct(primes, 3, BallReal::exact(6L), 4, 64),
                  std::invalid_argument);
}

TEST_CASE("product and direct forms agree") {
  const auto& primes = first_primes();
  for (std::size_t n = 0; n <= 10; ++n) {
    const std::int64_t p = n == 0 ? 1 : primes[n - 1];
    for (long s : {4L, 6L, 10L, static_cast<long>(2 * p)}) {
      if (s <= 1) continue;
      CAPTURE(n);
      CAPTURE(s);
      const BallReal sb = BallReal::exact(s);
      const std::int64_t cutoff = default_direct_cutoff(primes, n);
      const BallReal product = dirichlet_series_product(primes, n, sb, 192);
      const BallReal direct = dirichlet_series_direct(primes, n, sb, cutoff, 192);
      CHECK(overlaps(product, direct));
      const BallReal excess = dirichlet_series_direct_minus_one(primes, n, sb, cutoff, 192);
      CHECK(overlaps(sub(product, BallReal::exact(1L), 192), excess));
    }
  }
}

TEST_CASE("h(2 p_n) lies strictly between p_{n+1} - 1 and p_{n+1}") {
  const auto& primes = first_primes();
  const PrecisionPolicy policy;
  for (std::size_t n = 1; n <= 50; ++n) {
    CAPTURE(n);
    const std::int64_t p = primes[n - 1];
    const std::int64_t next = primes[n];
    const long bits = policy.working_bits(2.0 * static_cast<double>(p), p);
    const BallReal h = h_of_s(primes, n, BallReal::exact(static_cast<long>(2 * p)), bits);
    CHECK(strictly_inside(h, static_cast<long>(next - 1), static_cast<long>(next)));
    CHECK(certified_ceiling(h) == next);
  }
}

TEST_CASE("leading term dominates D_n(2 p_n) - 1") {
  const auto& primes = first_primes();
  for (std::size_t n = 1; n <= 3; ++n) {
    CAPTURE(n);
    const std::int64_t p = primes[n - 1];
    const long s = 2 * p;
    const BallReal excess =
        sub(dirichlet_series_product(primes, n, BallReal::exact(s), 256), BallReal::exact(1L), 256);
    const BallReal lead = BallReal::from_rational(inverse_power(primes[n], s), 256);
    const BallReal rest = sub(excess, lead, 256);
    CHECK(certainly_positive(rest));
    CHECK(certainly_less(rest, lead));
  }
}

TEST_CASE("tail_bound") {
  CHECK(tail_bound(2, BallReal::exact(2L)).contains(mpq_class(1)));
  CHECK(tail_bound(3, BallReal::exact(4L)).contains(mpq_class(1, 24)));
  CHECK(tail_bound(5, BallReal::exact(6L)).contains(mpq_class(1, 5120)));
  // sum_{k>=5} k^-6 from a rounded-up sum to 10^4 plus the remainder bound
  Float sum(128);
  Float term(128);
  for (unsigned long k = 5; k <= 10000; ++k) {
    mpfr_set_ui(term.get(), k, MPFR_RNDN);
    mpfr_pow_si(term.get(), term.get(), -6, MPFR_RNDU);
    mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDU);
  }
  mpfr_add_d(sum.get(), sum.get(), 1e-20 / 5 * 1.0000001, MPFR_RNDU);
  CHECK(mpfr_cmp_d(sum.get(), 1.0 / 5120) < 0);
  CHECK_THROWS_AS(tail_bound(1, BallReal::exact(3L)), DomainError);
}

TEST_CASE("next_prime_effective examples") {
  const auto& primes = first_primes();
  const auto proven = ExponentPolicy::proven();
  CHECK(next_prime_effective(primes, 1, proven).prime == 3);
  CHECK(next_prime_effective(primes, 2, proven).prime == 5);
  const NextPrime at25 = next_prime_effective(primes, 25, proven);
  CHECK(at25.prime == 101);
  CHECK(at25.info.exponent == 194.0);
  CHECK(at25.info.escalations == 0);
  CHECK(at25.info.enclosure_width < 1e-10);
  CHECK_THROWS_AS(next_prime_effective(primes, 0, proven), std::invalid_argument);
  CHECK_THROWS_AS(next_prime_effective(primes, 61, proven), std::invalid_argument);
}

TEST_CASE("generate_chain") {
  CHECK(generate_chain(5, ExponentPolicy::proven()).primes ==
        std::vector<std::int64_t>{2, 3, 5, 7, 11});
  const PrimeChain single = generate_chain(1, ExponentPolicy::proven());
  CHECK(single.primes == std::vector<std::int64_t>{2});
  CHECK(single.steps.empty());
  CHECK_THROWS_AS(generate_chain(0, ExponentPolicy::proven()), std::invalid_argument);

  const PrimeChain chain = generate_chain(40, ExponentPolicy::proven());
  const auto expected = sieve_primes(40);
  CHECK(chain.primes == expected);
  CHECK(chain.all_steps_match());
  CHECK(chain_violations(chain).empty());
  REQUIRE(chain.steps.size() == 39);
  for (const auto& step : chain.steps) {
    CHECK(step.oracle.has_value());
    CHECK(step.computed == chain.primes[step.n]);
  }
}

TEST_CASE("generate_chain without verification") {
  ChainOptions options;
  options.verify = false;
  const PrimeChain chain = generate_chain(12, ExponentPolicy::proven(), {}, options);
  CHECK(chain.primes == sieve_primes(12));
  for (const auto& step : chain.steps) CHECK_FALSE(step.oracle.has_value());
}

TEST_CASE("conjectural exponent p_n") {
  const PrimeChain chain = generate_chain(30, ExponentPolicy::conjectural());
  CHECK(chain.primes == sieve_primes(30));
  for (const auto& step : chain.steps) {
    CAPTURE(step.n);
    CHECK(step.matches_oracle());
    CHECK(step.exponent == static_cast<double>(chain.primes[step.n - 1]));
  }
}

TEST_CASE("a fixed exponent that is too small records mismatches") {
  // h_1(1.5) is about 1.28, so the first step yields 2 instead of 3
  const PrimeChain chain = generate_chain(4, ExponentPolicy::fixed(1.5));
  CHECK(chain.primes == std::vector<std::int64_t>{2, 3, 5, 7});
  CHECK_FALSE(chain.all_steps_match());
  CHECK(chain.steps[0].computed == 2);
  CHECK(chain.steps[0].oracle == 3);
}

TEST_CASE("chain_violations") {
  PrimeChain chain;
  CHECK(chain_violations(chain).size() == 1);
  chain.primes = {2, 3, 5, 11, 9};
  const auto v = chain_violations(chain);
  CHECK(v.size() == 3);  // Bertrand at 4, not prime at 5, not increasing at 5
  chain.primes = {3, 5};
  CHECK(chain_violations(chain).size() == 1);
}

TEST_CASE("insufficient precision is reported") {
  const auto& primes = first_primes();
  // D_10(58) - 1 is about 31^-58, far below 2^-64
  CHECK_THROWS_AS(h_of_s(primes, 10, BallReal::exact(58L), 64), DomainError);

  PrecisionPolicy tight;
  tight.max_bits = 200;
  CHECK(next_prime_effective(primes, 3, ExponentPolicy::proven(), tight).prime == 7);
  CHECK_THROWS_AS(next_prime_effective(primes, 10, ExponentPolicy::proven(), tight),
                  PrecisionExhausted);
  try {
    generate_chain(20, ExponentPolicy::proven(), tight);
    FAIL("expected StepError");
  } catch (const StepError& e) {
    CHECK(e.index() > 3);
  }

  PrecisionPolicy invalid;
  invalid.max_escalations = 0;
  CHECK_THROWS_AS(next_prime_effective(primes, 1, ExponentPolicy::proven(), invalid),
                  std::invalid_argument);
}

TEST_CASE("parse_exponent_policy") {
  CHECK(parse_exponent_policy("proven").mode == ExponentMode::proven);
  CHECK(parse_exponent_policy("conjectural").mode == ExponentMode::conjectural);
  const auto fixed = parse_exponent_policy("fixed=3.25");
  CHECK(fixed.mode == ExponentMode::fixed);
  CHECK(fixed.fixed_value == 3.25);
  CHECK(fixed.name() == "fixed=3.25");
  CHECK(ExponentPolicy::proven().value_for(7) == 14.0);
  for (const char* bad : {"", "fixed=", "fixed=1", "fixed=0.5", "fixed=abc", "fixed=2x", "fast"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_exponent_policy(bad), std::invalid_argument);
  }
}
