#include "primerec/recurrence.hpp"

#include <cmath>
#include <exception>
#include <sstream>

#include "primerec/oracle.hpp"
#include "primerec/special_functions.hpp"

namespace primerec {

namespace {

long bit_length(std::uint64_t v) {
  long bits = 0;
  while (v > 0) {
    ++bits;
    v >>= 1;
  }
  return bits;
}

void require_prefix(std::span<const std::int64_t> primes, std::size_t n, const char* what) {
  if (n > primes.size()) {
    throw std::invalid_argument(std::string(what) + ": fewer than n primes supplied");
  }
}

std::int64_t last_prime(std::span<const std::int64_t> primes, std::size_t n) {
  return n == 0 ? 1 : primes[n - 1];
}

double upper_double(const BallReal& x) { return mpfr_get_d(x.upper().get(), MPFR_RNDU); }

// Ball covering [0, u] where u bounds `t` from above.
BallReal zero_to(const BallReal& t) {
  Float u(BallReal::kRadiusBits);
  mpfr_set(u.get(), t.upper().get(), MPFR_RNDU);
  mpfr_div_2ui(u.get(), u.get(), 1, MPFR_RNDU);
  Float mid(BallReal::kRadiusBits);
  mpfr_set(mid.get(), u.get(), MPFR_RNDN);
  return BallReal::from_parts(std::move(mid), std::move(u));
}

BallReal coprime_sum(std::span<const std::int64_t> primes, std::size_t n, const BallReal& s,
                     std::int64_t cutoff, mpfr_prec_t prec, bool include_one) {
  require_prefix(primes, n, "dirichlet_series_direct");
  if (cutoff < last_prime(primes, n) || cutoff < 2) {
    throw std::invalid_argument("dirichlet_series_direct: cutoff must be at least p_n");
  }
  const auto size = static_cast<std::size_t>(cutoff) + 1;
  // smallest prime factor; k is kept iff spf(k) > p_n
  std::vector<std::int64_t> spf(size, 0);
  for (std::int64_t p = 2; p <= cutoff; ++p) {
    if (spf[static_cast<std::size_t>(p)] != 0) continue;
    for (std::int64_t m = p; m <= cutoff; m += p) {
      if (spf[static_cast<std::size_t>(m)] == 0) spf[static_cast<std::size_t>(m)] = p;
    }
  }
  const std::int64_t sieved_up_to = last_prime(primes, n);
  const mpfr_prec_t wp = prec + 16 + bit_length(static_cast<std::uint64_t>(cutoff));
  const BallReal minus_s = neg(s);
  std::vector<BallReal> powers(size);
  BallReal sum = include_one ? BallReal::exact(1L) : BallReal();
  for (std::int64_t k = 2; k <= cutoff; ++k) {
    const std::int64_t p = spf[static_cast<std::size_t>(k)];
    if (n > 0 && p <= sieved_up_to) continue;
    auto& slot = powers[static_cast<std::size_t>(k)];
    if (p == k) {
      slot = pow(BallReal::exact(static_cast<long>(k)), minus_s, wp);
    } else {
      slot = mul(powers[static_cast<std::size_t>(p)], powers[static_cast<std::size_t>(k / p)], wp);
    }
    sum = add(sum, slot, wp);
  }
  // the coprime tail is at most the full tail
  const BallReal tail = integral_tail_bound(cutoff + 1, s, 64);
  return add(sum, zero_to(tail), prec);
}

}  // namespace

// ---------------------------------------------------------------------------
// ExponentPolicy

BallReal ExponentPolicy::exponent_for(std::int64_t p_n) const {
  switch (mode) {
    case ExponentMode::proven:
      return BallReal::exact(static_cast<long>(2 * p_n));
    case ExponentMode::conjectural:
      return BallReal::exact(static_cast<long>(p_n));
    case ExponentMode::fixed:
      if (!(fixed_value > 1.0)) throw std::invalid_argument("fixed exponent must exceed 1");
      return BallReal::exact(fixed_value);
  }
  throw std::logic_error("unknown exponent mode");
}

double ExponentPolicy::value_for(std::int64_t p_n) const {
  switch (mode) {
    case ExponentMode::proven:
      return 2.0 * static_cast<double>(p_n);
    case ExponentMode::conjectural:
      return static_cast<double>(p_n);
    case ExponentMode::fixed:
      return fixed_value;
  }
  throw std::logic_error("unknown exponent mode");
}

std::string ExponentPolicy::name() const {
  switch (mode) {
    case ExponentMode::proven:
      return "proven";
    case ExponentMode::conjectural:
      return "conjectural";
    case ExponentMode::fixed: {
      std::ostringstream out;
      out << "fixed=" << fixed_value;
      return out.str();
    }
  }
  throw std::logic_error("unknown exponent mode");
}

ExponentPolicy parse_exponent_policy(std::string_view text) {
  if (text == "proven") return ExponentPolicy::proven();
  if (text == "conjectural") return ExponentPolicy::conjectural();
  constexpr std::string_view prefix = "fixed=";
  if (text.starts_with(prefix)) {
    const std::string value(text.substr(prefix.size()));
    std::size_t used = 0;
    double s = 0.0;
    try {
      s = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty() || !(s > 1.0) || !std::isfinite(s)) {
      throw std::invalid_argument("fixed exponent must be a real number > 1: " + value);
    }
    return ExponentPolicy::fixed(s);
  }
  throw std::invalid_argument("unknown exponent mode: " + std::string(text));
}

// ---------------------------------------------------------------------------
// chains

bool PrimeChain::all_steps_match() const {
  for (const auto& step : steps) {
    if (!step.matches_oracle()) return false;
  }
  return true;
}

std::vector<std::string> chain_violations(const PrimeChain& chain) {
  std::vector<std::string> out;
  if (chain.primes.empty()) {
    out.emplace_back("empty chain");
    return out;
  }
  if (chain.primes.front() != 2) out.emplace_back("chain does not start at 2");
  for (std::size_t i = 0; i < chain.primes.size(); ++i) {
    const std::int64_t p = chain.primes[i];
    if (p < 0 || !is_prime(p)) out.push_back("element " + std::to_string(i + 1) + " is not prime");
    if (i > 0) {
      const std::int64_t prev = chain.primes[i - 1];
      if (p <= prev) out.push_back("not increasing at " + std::to_string(i + 1));
      if (p >= 2 * prev) out.push_back("Bertrand bound violated at " + std::to_string(i + 1));
    }
  }
  return out;
}

StepError::StepError(std::size_t index, const std::string& what)
    : std::runtime_error("step " + std::to_string(index) + ": " + what), index_(index) {}

std::int64_t next_prime_by_trial(std::int64_t p) {
  std::int64_t k = std::max<std::int64_t>(p + 1, 2);
  while (!is_prime(k)) ++k;
  return k;
}

// ---------------------------------------------------------------------------
// D_n(s) and h(s)

BallReal dirichlet_series_product(std::span<const std::int64_t> primes, std::size_t n,
                                  const BallReal& s, mpfr_prec_t prec) {
  require_prefix(primes, n, "dirichlet_series_product");
  const mpfr_prec_t wp = prec + 8 + bit_length(n);
  BallReal d = zeta_real(s, wp);
  const BallReal one = BallReal::exact(1L);
  const BallReal minus_s = neg(s);
  for (std::size_t j = 0; j < n; ++j) {
    const BallReal term = pow(BallReal::exact(static_cast<long>(primes[j])), minus_s, wp);
    d = mul(d, sub(one, term, wp), wp);
  }
  return add(d, BallReal(), prec);
}

BallReal dirichlet_series_product(std::span<const std::int64_t> primes, std::size_t n,
                                  const BallReal& s, const PrecisionPolicy& policy) {
  require_prefix(primes, n, "dirichlet_series_product");
  return dirichlet_series_product(primes, n, s,
                                  policy.working_bits(upper_double(s), last_prime(primes, n)));
}

BallReal dirichlet_series_direct(std::span<const std::int64_t> primes, std::size_t n,
                                 const BallReal& s, std::int64_t cutoff, mpfr_prec_t prec) {
  return coprime_sum(primes, n, s, cutoff, prec, true);
}

BallReal dirichlet_series_direct_minus_one(std::span<const std::int64_t> primes, std::size_t n,
                                           const BallReal& s, std::int64_t cutoff,
                                           mpfr_prec_t prec) {
  return coprime_sum(primes, n, s, cutoff, prec, false);
}

std::int64_t default_direct_cutoff(std::span<const std::int64_t> primes, std::size_t n) {
  require_prefix(primes, n, "default_direct_cutoff");
  const std::int64_t p = last_prime(primes, n);
  return std::max<std::int64_t>(4, p * p);
}

BallReal h_from_excess(const BallReal& excess, const BallReal& s, mpfr_prec_t prec) {
  if (!certainly_positive(excess)) {
    throw DomainError("h(s): enclosure of D_n(s) - 1 reaches 0; precision too low");
  }
  const mpfr_prec_t wp = prec + 16;
  return exp(neg(div(ln(excess, wp), s, wp)), prec);
}

BallReal h_of_s(std::span<const std::int64_t> primes, std::size_t n, const BallReal& s,
                mpfr_prec_t prec) {
  const BallReal d = dirichlet_series_product(primes, n, s, prec);
  return h_from_excess(sub(d, BallReal::exact(1L), prec), s, prec);
}

BallReal tail_bound(std::int64_t m, const BallReal& s, mpfr_prec_t prec) {
  return integral_tail_bound(m, s, prec);
}

// ---------------------------------------------------------------------------
// the recurrence

NextPrime next_prime_effective(std::span<const std::int64_t> primes, std::size_t n,
                               const ExponentPolicy& exponent, const PrecisionPolicy& precision) {
  if (n == 0) throw std::invalid_argument("next_prime_effective: n must be at least 1");
  require_prefix(primes, n, "next_prime_effective");
  precision.validate();
  const std::int64_t p_n = primes[n - 1];
  const BallReal s = exponent.exponent_for(p_n);
  long bits = precision.working_bits(exponent.value_for(p_n), p_n);
  for (int escalation = 0; escalation <= precision.max_escalations; ++escalation) {
    try {
      const BallReal h = h_of_s(primes, n, s, precision.checked(bits));
      if (const auto c = certified_ceiling(h)) {
        NextPrime out;
        out.prime = *c;
        out.info.n = n;
        out.info.exponent = exponent.value_for(p_n);
        out.info.precision_bits = bits;
        out.info.enclosure_width = 2.0 * h.radius_double();
        out.info.escalations = escalation;
        out.info.computed = *c;
        return out;
      }
    } catch (const DomainError&) {
      // D_n(s) - 1 not separated from 0 at this precision
    }
    bits = precision.escalate(bits);
  }
  throw PrecisionExhausted("next_prime_effective: ceiling of h(s) still indeterminate after " +
                           std::to_string(precision.max_escalations) + " escalations (n = " +
                           std::to_string(n) + ")");
}

PrimeChain generate_chain(std::size_t count, const ExponentPolicy& exponent,
                          const PrecisionPolicy& precision, ChainOptions options) {
  if (count == 0) throw std::invalid_argument("generate_chain: count must be at least 1");
  PrimeChain chain;
  chain.primes.reserve(count);
  chain.primes.push_back(2);
  while (chain.primes.size() < count) {
    const std::size_t n = chain.primes.size();
    NextPrime next;
    try {
      next = next_prime_effective(chain.primes, n, exponent, precision);
    } catch (const std::exception& e) {
      std::throw_with_nested(StepError(n, e.what()));
    }
    std::int64_t value = next.prime;
    if (options.verify) {
      const std::int64_t truth = next_prime_by_trial(chain.primes.back());
      next.info.oracle = truth;
      value = truth;
    }
    chain.primes.push_back(value);
    chain.steps.push_back(next.info);
  }
  return chain;
}

}  // namespace primerec
