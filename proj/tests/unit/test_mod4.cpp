#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "primerec/mod4.hpp"
#include "primerec/oracle.hpp"
#include "primerec/special_functions.hpp"

using namespace primerec;

namespace {

BallReal reference(const char* decimal) {
  Float mid(256);
  mpfr_set_str(mid.get(), decimal, 10, MPFR_RNDN);
  Float rad(64);
  mpfr_set_str(rad.get(), "1e-47", 10, MPFR_RNDU);
  return BallReal::from_mid_rad(mid.get(), rad.get());
}

const std::vector<std::int64_t>& first_primes() {
  static const std::vector<std::int64_t> primes = sieve_primes(101);
  return primes;
}

}  // namespace

TEST_CASE("v_function examples") {
  const auto& primes = first_primes();
  CHECK(overlaps(v_function(primes, 2, BallReal::exact(6L), 160),
                 reference("1.0000551607948694634737566188449256258781976936521")));
  CHECK(overlaps(v_function(primes, 0, BallReal::exact(2L), 160),
                 reference("0.91596559417721901505460351493238411077414937428167")));
  for (double s : {1.5, 4.0, 9.25}) {
    CAPTURE(s);
    const BallReal v = v_function(primes, 1, BallReal::exact(s), 128);
    const BallReal l = l_chi4(BallReal::exact(s), 128);
    CHECK(overlaps(v, l));
  }
  CHECK_THROWS_AS(v_function(primes, 102, BallReal::exact(2L), 64), std::invalid_argument);
  CHECK_THROWS_AS(v_function(primes, 1, BallReal::exact(1L), 64), DomainError);
}

TEST_CASE("predict_mod4 examples") {
  const auto& primes = first_primes();
  const Mod4Prediction first = predict_mod4(primes, 1);
  CHECK(first.predicted == 3);
  CHECK(first.actual == 3);
  const Mod4Prediction second = predict_mod4(primes, 2);
  CHECK(second.predicted == 1);
  CHECK(second.actual == 1);
  CHECK(second.matches());
  CHECK_THROWS_AS(predict_mod4(primes, 0), std::invalid_argument);
}

TEST_CASE("predict_mod4 matches the oracle for n <= 100") {
  const auto& primes = first_primes();
  const BallReal one = BallReal::exact(1L);
  for (std::size_t n = 1; n <= 100; ++n) {
    CAPTURE(n);
    const Mod4Prediction p = predict_mod4(primes, n);
    REQUIRE_FALSE(p.indeterminate());
    CHECK(p.matches());
    CHECK(p.actual == primes[n] % 4);
    // V_n(2 p_n) - 1 has the sign of chi_4(p_{n+1})
    const BallReal excess = sub(p.v_enclosure, one, p.precision_bits);
    if (chi4(primes[n]) > 0) {
      CHECK(certainly_positive(excess));
    } else {
      CHECK(certainly_negative(excess));
    }
  }
}

TEST_CASE("predict_mod4 reports indeterminate instead of failing") {
  const auto& primes = first_primes();
  PrecisionPolicy tight;
  tight.max_bits = 150;
  const Mod4Prediction p = predict_mod4(primes, 20, ExponentPolicy::proven(), tight);
  CHECK(p.indeterminate());
  CHECK_FALSE(p.matches());
}

TEST_CASE("mod4 CSV") {
  const auto& primes = first_primes();
  std::vector<Mod4Prediction> rows{predict_mod4(primes, 1), predict_mod4(primes, 2)};
  rows.push_back(Mod4Prediction{});
  rows.back().n = 3;
  std::ostringstream out;
  write_mod4_csv(out, rows);
  CHECK(out.str() ==
        "n,p_n,p_next,predicted,actual,match\n"
        "1,2,3,3,3,true\n"
        "2,3,5,1,1,true\n"
        "3,0,0,indeterminate,0,false\n");
}
