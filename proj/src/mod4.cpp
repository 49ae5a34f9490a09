#include "primerec/mod4.hpp"

#include <stdexcept>

#include "primerec/special_functions.hpp"

namespace primerec {

BallReal v_function(std::span<const std::int64_t> primes, std::size_t n, const BallReal& s,
                    mpfr_prec_t prec) {
  if (n > primes.size()) throw std::invalid_argument("v_function: fewer than n primes supplied");
  const mpfr_prec_t wp = prec + 16;
  BallReal v = l_chi4(s, wp);
  const BallReal minus_s = neg(s);
  for (std::size_t j = 0; j < n; ++j) {
    const int c = chi4(primes[j]);
    if (c == 0) continue;
    const BallReal term = pow(BallReal::exact(static_cast<long>(primes[j])), minus_s, wp);
    const BallReal factor =
        c > 0 ? sub(BallReal::exact(1L), term, wp) : add(BallReal::exact(1L), term, wp);
    v = mul(v, factor, wp);
  }
  return add(v, BallReal(), prec);
}

BallReal v_function(std::span<const std::int64_t> primes, std::size_t n, const BallReal& s,
                    const PrecisionPolicy& policy) {
  if (n > primes.size()) throw std::invalid_argument("v_function: fewer than n primes supplied");
  const std::int64_t p_n = n == 0 ? 1 : primes[n - 1];
  return v_function(primes, n, s,
                    policy.working_bits(mpfr_get_d(s.upper().get(), MPFR_RNDU), p_n));
}

Mod4Prediction predict_mod4(std::span<const std::int64_t> primes, std::size_t n,
                            const ExponentPolicy& exponent, const PrecisionPolicy& precision) {
  if (n == 0) throw std::invalid_argument("predict_mod4: n must be at least 1");
  if (n > primes.size()) throw std::invalid_argument("predict_mod4: fewer than n primes supplied");
  precision.validate();
  Mod4Prediction out;
  out.n = n;
  out.p_n = primes[n - 1];
  out.p_next = n < primes.size() ? primes[n] : next_prime_by_trial(out.p_n);
  out.actual = static_cast<int>(out.p_next % 4);
  const BallReal s = exponent.exponent_for(out.p_n);
  const BallReal one = BallReal::exact(1L);
  long bits = precision.working_bits(exponent.value_for(out.p_n), out.p_n);
  for (int escalation = 0; escalation <= precision.max_escalations; ++escalation) {
    if (bits > precision.max_bits) break;
    out.v_enclosure = v_function(primes, n, s, bits);
    out.precision_bits = bits;
    out.escalations = escalation;
    if (certainly_less(one, out.v_enclosure)) {
      out.predicted = 1;
      return out;
    }
    if (certainly_less(out.v_enclosure, one)) {
      out.predicted = 3;
      return out;
    }
    bits = precision.escalate(bits);
  }
  return out;
}

void write_mod4_csv(std::ostream& out, const std::vector<Mod4Prediction>& rows) {
  out << "n,p_n,p_next,predicted,actual,match\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.p_n << ',' << r.p_next << ',';
    if (r.predicted) {
      out << *r.predicted;
    } else {
      out << "indeterminate";
    }
    out << ',' << r.actual << ',' << (r.matches() ? "true" : "false") << '\n';
  }
}

}  // namespace primerec
