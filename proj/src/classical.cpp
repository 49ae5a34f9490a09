#include "primerec/classical.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace primerec {

namespace {

mpz_class power_minus_one(long b, std::int64_t d) {
  mpz_class v;
  mpz_ui_pow_ui(v.get_mpz_t(), static_cast<unsigned long>(b), static_cast<unsigned long>(d));
  return v - 1;
}

void require_chain(std::span<const std::int64_t> primes, std::size_t n, const char* what) {
  if (n == 0) throw std::invalid_argument(std::string(what) + ": n must be at least 1");
  if (n > primes.size()) throw std::invalid_argument(std::string(what) + ": fewer than n primes supplied");
}

// Precision for the sum: its relevant part is about b^-p_{n+1} > b^-(2 p_n).
long sum_bits(const PrecisionPolicy& precision, std::int64_t p_n, long b) {
  return precision.bits_for_scale(2.0 * static_cast<double>(p_n) * std::log2(static_cast<double>(b)));
}

// 1 + floor(-ln(x) / ln(b)), or nullopt when the floor is indeterminate.
std::optional<std::int64_t> one_plus_floor_neg_log(const BallReal& x, long b, mpfr_prec_t prec) {
  const BallReal y = neg(div(ln(x, prec), ln(BallReal::exact(b), prec), prec));
  const auto f = certified_floor(y);
  if (!f) return std::nullopt;
  return *f + 1;
}

}  // namespace

SquarefreeDivisorStream::SquarefreeDivisorStream(std::span<const std::int64_t> primes,
                                                 std::size_t n, std::int64_t d_max)
    : primes_(primes.first(std::min(n, primes.size()))), d_max_(d_max) {
  if (n > primes.size()) throw std::invalid_argument("SquarefreeDivisorStream: fewer than n primes");
  if (d_max >= 1) stack_.push_back({0, 1, 1});
}

std::optional<SquarefreeDivisor> SquarefreeDivisorStream::next() {
  if (stack_.empty()) return std::nullopt;
  const Frame top = stack_.back();
  stack_.pop_back();
  // children: extend by each later prime while the product stays <= d_max
  for (std::size_t i = primes_.size(); i-- > top.index;) {
    if (primes_[i] > d_max_ / top.d) continue;
    stack_.push_back({i + 1, top.d * primes_[i], -top.mu});
  }
  return SquarefreeDivisor{top.d, top.mu};
}

std::int64_t truncation_point(std::size_t n, long b, long target_bits) {
  if (b < 2) throw std::invalid_argument("base must be at least 2");
  // b^d - 1 >= b^(d-1), so d - 1 > (n + target) / log2 b suffices; step down
  // while the exact test still holds
  const double need = static_cast<double>(n) + static_cast<double>(target_bits);
  auto d = static_cast<std::int64_t>(std::ceil(need / std::log2(static_cast<double>(b)))) + 2;
  const mpz_class bound = mpz_class(1) << static_cast<mp_bitcnt_t>(need);
  while (d > 1 && power_minus_one(b, d - 1) > bound) --d;
  return d;
}

BallReal mobius_sum(std::span<const std::int64_t> primes, std::size_t n, long b,
                    std::int64_t d_max, mpfr_prec_t prec) {
  if (b < 2) throw std::invalid_argument("mobius_sum: base must be at least 2");
  if (d_max < 1) throw std::invalid_argument("mobius_sum: d_max must be at least 1");
  if (n > primes.size()) throw std::invalid_argument("mobius_sum: fewer than n primes supplied");

  bool complete = true;  // every divisor of P_n is <= d_max
  {
    std::int64_t product = 1;
    for (std::size_t j = 0; j < n && complete; ++j) {
      if (primes[j] > d_max / product) complete = false;
      else product *= primes[j];
    }
  }
  BallReal truncation;
  if (!complete) {
    // 2^n / (b^d_max - 1) < 2^-prec
    const mpq_class bound(mpz_class(1) << static_cast<mp_bitcnt_t>(n), power_minus_one(b, d_max));
    const mpq_class target(1, mpz_class(1) << static_cast<mp_bitcnt_t>(prec));
    if (bound >= target) {
      throw DomainError("mobius_sum: d_max = " + std::to_string(d_max) +
                        " too small for " + std::to_string(prec) + " bits");
    }
    Float rad(BallReal::kRadiusBits);
    mpfr_set_q(rad.get(), bound.get_mpq_t(), MPFR_RNDU);
    truncation = BallReal::from_parts(Float(BallReal::kRadiusBits), std::move(rad));
  }

  const mpfr_prec_t wp = prec + 32;
  BallReal sum = truncation;
  SquarefreeDivisorStream divisors(primes, n, d_max);
  while (const auto div = divisors.next()) {
    const mpq_class term(div->mu, power_minus_one(b, div->d));
    sum = add(sum, BallReal::from_rational(term, wp), wp);
  }
  return add(sum, BallReal(), prec);
}

BallReal mobius_sum(std::span<const std::int64_t> primes, std::size_t n, long b, mpfr_prec_t prec) {
  return mobius_sum(primes, n, b, truncation_point(n, b, prec), prec);
}

ClassicalResult gandhi_next_prime(std::span<const std::int64_t> primes, std::size_t n,
                                  const PrecisionPolicy& precision) {
  require_chain(primes, n, "gandhi_next_prime");
  precision.validate();
  const BallReal half = BallReal::from_rational(mpq_class(1, 2), 64);
  long bits = sum_bits(precision, primes[n - 1], 2);
  for (int escalation = 0; escalation <= precision.max_escalations; ++escalation) {
    const long wp = precision.checked(bits);
    try {
      const BallReal x = sub(mobius_sum(primes, n, 2, wp), half, wp);
      if (!certainly_positive(x)) throw DomainError("sum - 1/2 not separated from 0");
      if (const auto p = one_plus_floor_neg_log(x, 2, wp)) {
        ClassicalResult out;
        out.prime = *p;
        out.certificate = mul_2si(x, static_cast<long>(*p));
        out.precision_bits = bits;
        out.escalations = escalation;
        if (!strictly_inside(out.certificate, 1, 2)) {
          throw std::logic_error("gandhi_next_prime: 2^p (sum - 1/2) outside (1, 2) for p = " +
                                 std::to_string(*p));
        }
        return out;
      }
    } catch (const DomainError&) {
      // enclosure too wide at this precision
    }
    bits = precision.escalate(bits);
  }
  throw PrecisionExhausted("gandhi_next_prime: floor indeterminate after " +
                           std::to_string(precision.max_escalations) + " escalations (n = " +
                           std::to_string(n) + ")");
}

ClassicalResult golomb_trefeu_next_prime(std::span<const std::int64_t> primes, std::size_t n,
                                         long b, const PrecisionPolicy& precision) {
  require_chain(primes, n, "golomb_trefeu_next_prime");
  if (b < 2) throw std::invalid_argument("golomb_trefeu_next_prime: base must be at least 2");
  precision.validate();
  const BallReal b_minus_one = BallReal::exact(b - 1);
  long bits = sum_bits(precision, primes[n - 1], b);
  for (int escalation = 0; escalation <= precision.max_escalations; ++escalation) {
    const long wp = precision.checked(bits);
    const BallReal subtrahend = BallReal::from_rational(mpq_class(b - 1, b), wp + 16);
    const BallReal arg =
        sub(mul(b_minus_one, mobius_sum(primes, n, b, wp), wp), subtrahend, wp);
    if (certainly_negative(arg) || exact_integer(arg) == 0) {
      throw DomainError("golomb_trefeu_next_prime: logarithm argument is not positive (n = " +
                        std::to_string(n) + ", b = " + std::to_string(b) + ")");
    }
    if (certainly_positive(arg)) {
      if (const auto p = one_plus_floor_neg_log(arg, b, wp)) {
        ClassicalResult out;
        out.prime = *p;
        out.certificate = arg;
        out.precision_bits = bits;
        out.escalations = escalation;
        return out;
      }
    }
    bits = precision.escalate(bits);
  }
  throw PrecisionExhausted("golomb_trefeu_next_prime: floor indeterminate after " +
                           std::to_string(precision.max_escalations) + " escalations (n = " +
                           std::to_string(n) + ", b = " + std::to_string(b) + ")");
}

}  // namespace primerec
