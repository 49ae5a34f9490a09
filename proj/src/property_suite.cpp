#include "primerec/property_suite.hpp"

#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>

#include "primerec/ball.hpp"

namespace primerec {

namespace {

mpq_class rational_of(mpfr_srcptr v) {
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), v);
  return q;
}

struct Sample {
  mpq_class point;
  BallReal ball;
  // points inside the ball that every result must cover
  std::vector<mpq_class> probes;
};

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  mpq_class rational(long max_num = 2000, long max_den = 997) {
    std::uniform_int_distribution<long> num(-max_num, max_num);
    std::uniform_int_distribution<long> den(1, max_den);
    mpq_class q(num(rng_), den(rng_));
    q.canonicalize();
    return q;
  }

  mpq_class positive_rational() {
    // keep clear of 0 so widened balls stay positive
    return abs(rational()) + mpq_class(1, 100);
  }

  // A ball of random precision containing q, optionally widened.
  Sample ball_around(const mpq_class& q) {
    std::uniform_int_distribution<long> prec(20, 220);
    BallReal b = BallReal::from_rational(q, prec(rng_));
    if (std::bernoulli_distribution(0.5)(rng_)) {
      std::uniform_int_distribution<long> shift(8, 120);
      Float extra(BallReal::kRadiusBits);
      mpfr_set_ui_2exp(extra.get(), 1, -shift(rng_), MPFR_RNDU);
      mpfr_add(extra.get(), extra.get(), b.radius().get(), MPFR_RNDU);
      b = BallReal::from_mid_rad(b.midpoint().get(), extra.get());
    }
    const mpq_class mid = rational_of(b.midpoint().get());
    const mpq_class rad = rational_of(b.radius().get());
    return {q, b, {q, mid - rad, mid + rad}};
  }

  long precision() { return std::uniform_int_distribution<long>(24, 256)(rng_); }
  long exponent() { return std::uniform_int_distribution<long>(-7, 9)(rng_); }
  unsigned long degree() { return std::uniform_int_distribution<unsigned long>(1, 7)(rng_); }

 private:
  std::mt19937_64 rng_;
};

mpq_class pow_q(const mpq_class& x, long e) {
  mpq_class out = 1;
  const mpq_class base = e < 0 ? mpq_class(1) / x : x;
  for (long i = 0; i < std::labs(e); ++i) out *= base;
  return out;
}

// Runs `body` for each case; body returns an empty string on success.
PropertyResult run(const std::string& name, int cases,
                   const std::function<std::string(int)>& body) {
  PropertyResult result{name, cases, 0, {}};
  for (int i = 0; i < cases; ++i) {
    std::string failure;
    try {
      failure = body(i);
    } catch (const std::exception& e) {
      failure = std::string("unexpected exception: ") + e.what();
    }
    if (!failure.empty()) {
      if (result.failures == 0) result.first_failure = "case " + std::to_string(i) + ": " + failure;
      ++result.failures;
    }
  }
  return result;
}

std::string describe(const char* what, const mpq_class& x, const BallReal& r) {
  std::ostringstream out;
  out << what << " of " << x.get_str() << " not in " << r.to_string(20);
  return out.str();
}

}  // namespace

std::vector<PropertyResult> run_enclosure_properties(int cases, std::uint64_t seed) {
  std::vector<PropertyResult> results;
  Generator gen(seed);

  results.push_back(run("add/sub/mul/div", cases, [&](int) -> std::string {
    const Sample a = gen.ball_around(gen.rational());
    const Sample b = gen.ball_around(gen.rational());
    const long prec = gen.precision();
    const BallReal s = add(a.ball, b.ball, prec);
    const BallReal d = sub(a.ball, b.ball, prec);
    const BallReal p = mul(a.ball, b.ball, prec);
    for (const auto& x : a.probes) {
      for (const auto& y : b.probes) {
        if (!s.contains(x + y)) return describe("sum", x, s);
        if (!d.contains(x - y)) return describe("difference", x, d);
        if (!p.contains(x * y)) return describe("product", x, p);
      }
    }
    // division needs a divisor enclosure clear of 0
    if (certainly_positive(a.ball) || certainly_negative(a.ball)) {
      const BallReal q = div(b.ball, a.ball, prec);
      for (const auto& x : a.probes) {
        for (const auto& y : b.probes) {
          if (!q.contains(y / x)) return describe("quotient", y, q);
        }
      }
    }
    return {};
  }));

  results.push_back(run("pow_int", cases, [&](int) -> std::string {
    const Sample a = gen.ball_around(gen.rational(40, 17));
    const long e = gen.exponent();
    if (e < 0 && !certainly_positive(a.ball) && !certainly_negative(a.ball)) return {};
    const BallReal r = pow_int(a.ball, e, gen.precision());
    for (const auto& x : a.probes) {
      if (!r.contains(pow_q(x, e))) return describe("power", x, r);
    }
    return {};
  }));

  results.push_back(run("root", cases, [&](int) -> std::string {
    const Sample a = gen.ball_around(gen.positive_rational());
    const unsigned long k = gen.degree();
    const BallReal r = root(a.ball, k, gen.precision());
    // lo^k <= x <= hi^k, checked in exact rationals
    const mpq_class lo = rational_of(r.lower().get());
    const mpq_class hi = rational_of(r.upper().get());
    if (lo < 0) return describe("root lower end", a.point, r);
    for (const auto& x : a.probes) {
      if (pow_q(lo, static_cast<long>(k)) > x || pow_q(hi, static_cast<long>(k)) < x) {
        return describe("root", x, r);
      }
    }
    return {};
  }));

  results.push_back(run("ln", cases, [&](int) -> std::string {
    const Sample a = gen.ball_around(gen.positive_rational());
    const long prec = gen.precision();
    const BallReal l = ln(a.ball, prec);
    // exp(lo) <= x <= exp(hi), with outward-rounded exp at high precision
    Float e_lo(prec + 128);
    Float e_hi(prec + 128);
    mpfr_exp(e_lo.get(), l.lower().get(), MPFR_RNDU);
    mpfr_exp(e_hi.get(), l.upper().get(), MPFR_RNDD);
    for (const auto& x : a.probes) {
      if (rational_of(e_lo.get()) > x || rational_of(e_hi.get()) < x) return describe("ln", x, l);
    }
    return {};
  }));

  results.push_back(run("exp", cases, [&](int) -> std::string {
    const Sample b = gen.ball_around(gen.rational(3000, 400));
    const long prec = gen.precision();
    const BallReal e = exp(b.ball, prec);
    if (!certainly_positive(e)) return describe("exp sign", b.point, e);
    Float l_lo(prec + 128);
    Float l_hi(prec + 128);
    mpfr_log(l_lo.get(), e.lower().get(), MPFR_RNDU);
    mpfr_log(l_hi.get(), e.upper().get(), MPFR_RNDD);
    for (const auto& x : b.probes) {
      if (rational_of(l_lo.get()) > x || rational_of(l_hi.get()) < x) return describe("exp", x, e);
    }
    return {};
  }));

  int determinate = 0;
  PropertyResult ceiling = run("certified_ceiling/floor", cases, [&](int i) -> std::string {
    // mix in exact integers and values a hair away from integers
    mpq_class q = gen.rational(5000, 50);
    if (i % 5 == 0) q = mpq_class(q.get_num());
    if (i % 7 == 0) q += mpq_class(1, mpz_class(1) << 70);
    const Sample a = gen.ball_around(q);
    mpz_class expected_ceil;
    mpz_cdiv_q(expected_ceil.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    mpz_class expected_floor;
    mpz_fdiv_q(expected_floor.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    if (const auto c = certified_ceiling(a.ball)) {
      ++determinate;
      if (*c != expected_ceil.get_si()) return describe("ceiling", q, a.ball);
    }
    if (const auto f = certified_floor(a.ball)) {
      if (*f != expected_floor.get_si()) return describe("floor", q, a.ball);
    }
    return {};
  });
  // a ceiling that always abstains would pass trivially
  if (determinate <= cases / 2 && ceiling.failures == 0) {
    ceiling.failures = 1;
    ceiling.first_failure = "only " + std::to_string(determinate) + " determinate ceilings";
  }
  results.push_back(ceiling);
  return results;
}

}  // namespace primerec
