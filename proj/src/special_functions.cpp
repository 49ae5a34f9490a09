#include "primerec/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

namespace primerec {

namespace {

void require_above_one(const BallReal& s, const char* what) {
  if (!certainly_positive(sub(s, BallReal::exact(1L), s.precision() + 66))) {
    throw DomainError(std::string(what) + ": s enclosure must lie strictly above 1");
  }
}

double lower_double(const BallReal& x) { return mpfr_get_d(x.lower().get(), MPFR_RNDD); }
double upper_double(const BallReal& x) { return mpfr_get_d(x.upper().get(), MPFR_RNDU); }

long bit_length(std::int64_t v) {
  long bits = 0;
  while (v > 0) {
    ++bits;
    v >>= 1;
  }
  return bits;
}

// Ball [0, u] or [-u, 0] where u is an upper bound on |t|, as a centred ball.
BallReal one_sided(const BallReal& t, int sign) {
  Float u(BallReal::kRadiusBits);
  Float hi = t.upper();
  Float lo = t.lower();
  mpfr_abs(lo.get(), lo.get(), MPFR_RNDU);
  mpfr_max(u.get(), hi.get(), lo.get(), MPFR_RNDU);
  mpfr_div_2ui(u.get(), u.get(), 1, MPFR_RNDU);
  Float mid(BallReal::kRadiusBits);
  mpfr_set(mid.get(), u.get(), MPFR_RNDN);
  if (sign < 0) mpfr_neg(mid.get(), mid.get(), MPFR_RNDN);
  return BallReal::from_parts(std::move(mid), std::move(u));
}

// Largest magnitude in the enclosure, rounded up.
Float magnitude_upper(const BallReal& t) {
  Float u(BallReal::kRadiusBits);
  mpfr_abs(u.get(), t.midpoint().get(), MPFR_RNDU);
  mpfr_add(u.get(), u.get(), t.radius().get(), MPFR_RNDU);
  return u;
}

BallReal widen(const BallReal& x, mpfr_srcptr extra) {
  Float rad(BallReal::kRadiusBits);
  mpfr_add(rad.get(), x.radius().get(), extra, MPFR_RNDU);
  return BallReal::from_parts(x.midpoint(), std::move(rad));
}

struct EmPlan {
  long base = 0;   // N (or a)
  long terms = 0;  // M
  double cost = std::numeric_limits<double>::infinity();
};

constexpr long kMaxEmTerms = 1500;
// Direct summation beyond this many terms is refused.
constexpr std::int64_t kMaxDirectTerms = std::int64_t{1} << 22;

// Smallest integer base N (>= min_base) for which some correction term
// t_j = |B_2j|/(2j)! (s)_{2j-1} N^{-s-2j+1} drops below 2^-(prec+4).
EmPlan plan_euler_maclaurin(double s_lo, double s_hi, long prec, double min_base) {
  const double log2_2pi = std::log2(2.0 * std::numbers::pi);
  const double target = -static_cast<double>(prec) - 4.0;
  const double lg_s = std::lgamma(s_hi);
  double base = std::max(4.0, std::ceil(min_base));
  for (int attempt = 0; attempt < 200; ++attempt) {
    const double log2_base = std::log2(base);
    double previous = std::numeric_limits<double>::infinity();
    for (long j = 1; j <= kMaxEmTerms; ++j) {
      const double tj = 1.72 - 2.0 * static_cast<double>(j) * log2_2pi +
                        (std::lgamma(s_hi + 2.0 * j - 1.0) - lg_s) / std::numbers::ln2 -
                        (s_lo + 2.0 * j - 1.0) * log2_base;
      if (tj < target) {
        EmPlan plan;
        plan.base = static_cast<long>(base);
        plan.terms = j;
        plan.cost = base + 3.0 * static_cast<double>(j);
        return plan;
      }
      if (tj > previous) break;
      previous = tj;
    }
    base = std::ceil(base * 1.25) + 1.0;
  }
  return {};
}

double direct_cost(double s_lo, long prec) {
  const std::int64_t k = direct_truncation_point(s_lo, prec);
  return k < 0 ? std::numeric_limits<double>::infinity() : static_cast<double>(k);
}

BallReal em_tail(const BallReal& s, const BallReal& base, long terms, mpfr_prec_t wp) {
  const BallReal one = BallReal::exact(1L);
  const BallReal log_base = ln(base, wp + 16);
  const BallReal inv_base = div(one, base, wp);
  const BallReal inv_base_sq = mul(inv_base, inv_base, wp);
  const BallReal s_minus_one = sub(s, one, wp);

  const BallReal base_pow = exp(neg(mul(s, log_base, wp + 16)), wp);  // a^-s
  BallReal sum = div(mul(base_pow, base, wp), s_minus_one, wp);       // a^(1-s)/(s-1)
  sum = add(sum, mul_2si(base_pow, -1), wp);                           // + a^-s / 2

  const auto coeffs = bernoulli_over_factorial(static_cast<std::size_t>(terms) + 1);
  BallReal rising = s;                              // (s)_{2j-1}
  BallReal power = mul(base_pow, inv_base, wp);     // a^{-s-2j+1}
  BallReal last;
  for (long j = 1; j <= terms; ++j) {
    if (j > 1) {
      const BallReal f1 = add(s, BallReal::exact(2 * j - 3), wp);
      const BallReal f2 = add(s, BallReal::exact(2 * j - 2), wp);
      rising = mul(rising, mul(f1, f2, wp), wp);
      power = mul(power, inv_base_sq, wp);
    }
    const BallReal c = BallReal::from_rational(coeffs[static_cast<std::size_t>(j)], wp);
    last = mul(c, mul(rising, power, wp), wp);
    sum = add(sum, last, wp);
  }
  // remainder <= |last correction term|
  const Float bound = magnitude_upper(last);
  return widen(sum, bound.get());
}

}  // namespace

std::vector<mpq_class> bernoulli_over_factorial(std::size_t count) {
  static std::mutex mutex;
  static std::vector<mpq_class> bernoulli{mpq_class(1)};  // B_0, B_1, ...
  static std::vector<mpq_class> ratios{mpq_class(1)};     // B_2j/(2j)!

  std::lock_guard lock(mutex);
  const std::size_t needed = 2 * count;
  while (bernoulli.size() <= needed) {
    // B_m = -1/(m+1) sum_{k<m} C(m+1,k) B_k
    const unsigned long m = bernoulli.size();
    mpz_class binom = 1;  // C(m+1, 0)
    mpq_class acc = 0;
    for (unsigned long k = 0; k < m; ++k) {
      acc += binom * bernoulli[k];
      binom = binom * (m + 1 - k) / (k + 1);
    }
    bernoulli.push_back(-acc / (m + 1));
  }
  while (ratios.size() < count) {
    const unsigned long j = ratios.size();
    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), 2 * j);
    mpq_class r = bernoulli[2 * j] / fact;
    r.canonicalize();
    ratios.push_back(r);
  }
  return {ratios.begin(), ratios.begin() + static_cast<std::ptrdiff_t>(count)};
}

BallReal integral_tail_bound(std::int64_t m, const BallReal& s, mpfr_prec_t prec) {
  if (m < 2) throw DomainError("integral_tail_bound: m must be at least 2");
  require_above_one(s, "integral_tail_bound");
  const BallReal one = BallReal::exact(1L);
  const BallReal base = BallReal::exact(static_cast<long>(m - 1));
  const BallReal numerator = pow(base, sub(one, s, prec + 8), prec + 8);
  return div(numerator, sub(s, one, prec + 8), prec);
}

std::int64_t direct_truncation_point(double s_lower, long bits) {
  if (!(s_lower > 1.0)) return -1;
  // K^(1-s)/(s-1) < 2^-bits  <=>  log2 K > (bits - log2(s-1)) / (s-1)
  const double log2_k = (static_cast<double>(bits) - std::log2(s_lower - 1.0)) / (s_lower - 1.0);
  if (!(log2_k < 62.0)) return -1;
  return std::max<std::int64_t>(2, static_cast<std::int64_t>(std::floor(std::exp2(log2_k))) + 1);
}

std::vector<BallReal> inverse_powers(std::int64_t count, const BallReal& s, mpfr_prec_t prec) {
  std::vector<BallReal> out(static_cast<std::size_t>(count) + 1);
  if (count < 1) return out;
  std::vector<std::int64_t> spf(static_cast<std::size_t>(count) + 1, 0);
  for (std::int64_t p = 2; p <= count; ++p) {
    if (spf[static_cast<std::size_t>(p)] != 0) continue;
    for (std::int64_t m = p; m <= count; m += p) {
      if (spf[static_cast<std::size_t>(m)] == 0) spf[static_cast<std::size_t>(m)] = p;
    }
  }
  const BallReal minus_s = neg(s);
  out[1] = BallReal::exact(1L);
  for (std::int64_t k = 2; k <= count; ++k) {
    const std::int64_t p = spf[static_cast<std::size_t>(k)];
    if (p == k) {
      out[static_cast<std::size_t>(k)] = pow(BallReal::exact(static_cast<long>(k)), minus_s, prec);
    } else {
      out[static_cast<std::size_t>(k)] =
          mul(out[static_cast<std::size_t>(p)], out[static_cast<std::size_t>(k / p)], prec);
    }
  }
  return out;
}

BallReal zeta_direct(const BallReal& s, mpfr_prec_t prec) {
  require_above_one(s, "zeta_direct");
  const std::int64_t cutoff = direct_truncation_point(lower_double(s), prec);
  if (cutoff < 0 || cutoff > kMaxDirectTerms) {
    throw DomainError("zeta_direct: truncation point out of range for this s");
  }
  const mpfr_prec_t wp = prec + 16 + bit_length(cutoff);
  const auto powers = inverse_powers(cutoff, s, wp);
  BallReal sum;
  for (std::int64_t k = cutoff; k >= 1; --k) sum = add(sum, powers[static_cast<std::size_t>(k)], wp);
  const BallReal tail = integral_tail_bound(cutoff + 1, s, 64);
  return add(sum, one_sided(tail, +1), prec);
}

BallReal zeta_euler_maclaurin(const BallReal& s, mpfr_prec_t prec) {
  require_above_one(s, "zeta_euler_maclaurin");
  const EmPlan plan = plan_euler_maclaurin(lower_double(s), upper_double(s), prec, 4.0);
  if (plan.terms == 0) throw DomainError("zeta_euler_maclaurin: no usable truncation");
  const mpfr_prec_t wp = prec + 24 + bit_length(plan.base + plan.terms);
  const auto powers = inverse_powers(plan.base - 1, s, wp);
  BallReal sum;
  for (long k = plan.base - 1; k >= 1; --k) sum = add(sum, powers[static_cast<std::size_t>(k)], wp);
  sum = add(sum, em_tail(s, BallReal::exact(plan.base), plan.terms, wp), wp);
  return add(sum, BallReal(), prec);
}

BallReal zeta_real(const BallReal& s, mpfr_prec_t prec) {
  require_above_one(s, "zeta_real");
  const double lo = lower_double(s);
  const EmPlan plan = plan_euler_maclaurin(lo, upper_double(s), prec, 4.0);
  if (direct_cost(lo, prec) <= plan.cost) return zeta_direct(s, prec);
  return zeta_euler_maclaurin(s, prec);
}

BallReal hurwitz_euler_maclaurin(const BallReal& s, const BallReal& a, mpfr_prec_t prec) {
  require_above_one(s, "hurwitz_euler_maclaurin");
  if (!certainly_positive(a)) throw DomainError("hurwitz_euler_maclaurin: a must be positive");
  const double a_lo = lower_double(a);
  const EmPlan plan = plan_euler_maclaurin(lower_double(s), upper_double(s), prec, a_lo);
  if (plan.terms == 0) throw DomainError("hurwitz_euler_maclaurin: no usable truncation");
  const mpfr_prec_t wp = prec + 24 + bit_length(plan.base + plan.terms);
  // shift a up to the planned base with explicit terms
  const long shift = std::max<long>(0, static_cast<long>(std::ceil(plan.base - a_lo)));
  const BallReal minus_s = neg(s);
  BallReal sum;
  for (long j = 0; j < shift; ++j) {
    sum = add(sum, pow(add(a, BallReal::exact(j), wp), minus_s, wp), wp);
  }
  sum = add(sum, em_tail(s, add(a, BallReal::exact(shift), wp), plan.terms, wp), wp);
  return add(sum, BallReal(), prec);
}

BallReal l_chi4_alternating(const BallReal& s, mpfr_prec_t prec) {
  require_above_one(s, "l_chi4_alternating");
  // first omitted odd integer k = 2J+1 must satisfy k^-s < 2^-prec
  const double log2_k = static_cast<double>(prec) / lower_double(s);
  if (!(std::exp2(log2_k) < static_cast<double>(kMaxDirectTerms))) {
    throw DomainError("l_chi4_alternating: truncation point out of range");
  }
  const std::int64_t terms = static_cast<std::int64_t>(std::floor(std::exp2(log2_k) / 2.0)) + 1;
  const std::int64_t last_odd = 2 * terms - 1;
  const mpfr_prec_t wp = prec + 16 + bit_length(last_odd);
  const auto powers = inverse_powers(last_odd + 2, s, wp);
  BallReal sum;
  for (std::int64_t k = last_odd; k >= 1; k -= 2) {
    const BallReal& term = powers[static_cast<std::size_t>(k)];
    sum = chi4(k) > 0 ? add(sum, term, wp) : sub(sum, term, wp);
  }
  // remainder lies between 0 and the first omitted term, which has sign chi4(2J+1)
  const std::int64_t omitted = last_odd + 2;
  return add(sum, one_sided(powers[static_cast<std::size_t>(omitted)], chi4(omitted)), prec);
}

BallReal l_chi4_euler_maclaurin(const BallReal& s, mpfr_prec_t prec) {
  require_above_one(s, "l_chi4_euler_maclaurin");
  // L = sum_{k<N} chi(k) k^-s + 4^-s (H(s, (N+1)/4) - H(s, (N+3)/4)), N = 4q
  const EmPlan plan = plan_euler_maclaurin(lower_double(s), upper_double(s), prec + 2, 4.0);
  if (plan.terms == 0) throw DomainError("l_chi4_euler_maclaurin: no usable truncation");
  const long q = plan.base;
  const long n = 4 * q;
  const mpfr_prec_t wp = prec + 24 + bit_length(n + plan.terms);
  const auto powers = inverse_powers(n, s, wp);
  BallReal sum;
  for (long k = n - 1; k >= 1; k -= 2) {
    const BallReal& term = powers[static_cast<std::size_t>(k)];
    sum = chi4(k) > 0 ? add(sum, term, wp) : sub(sum, term, wp);
  }
  const BallReal h1 = hurwitz_euler_maclaurin(s, BallReal::from_rational(mpq_class(4 * q + 1, 4), wp), wp);
  const BallReal h3 = hurwitz_euler_maclaurin(s, BallReal::from_rational(mpq_class(4 * q + 3, 4), wp), wp);
  const BallReal scale = pow(BallReal::exact(4L), neg(s), wp);
  sum = add(sum, mul(scale, sub(h1, h3, wp), wp), wp);
  return add(sum, BallReal(), prec);
}

BallReal l_chi4(const BallReal& s, mpfr_prec_t prec) {
  require_above_one(s, "l_chi4");
  const double lo = lower_double(s);
  const double log2_k = static_cast<double>(prec) / lo;
  const double alternating = log2_k < 62.0 ? std::exp2(log2_k) : std::numeric_limits<double>::infinity();
  const EmPlan plan = plan_euler_maclaurin(lo, upper_double(s), prec + 2, 4.0);
  if (alternating <= 4.0 * plan.cost) return l_chi4_alternating(s, prec);
  return l_chi4_euler_maclaurin(s, prec);
}

}  // namespace primerec
