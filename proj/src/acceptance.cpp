#include "primerec/acceptance.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "primerec/classical.hpp"
#include "primerec/exponent_scan.hpp"
#include "primerec/mod4.hpp"
#include "primerec/oracle.hpp"
#include "primerec/property_suite.hpp"
#include "primerec/recurrence.hpp"

namespace primerec {

namespace {

mpq_class rational_of(mpfr_srcptr v) {
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), v);
  return q;
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

CriterionResult recurrence_chain() {
  CriterionResult r{1, "chain of 100 primes at exponent 2 p_n equals the sieve", false, {}};
  const PrimeChain chain = generate_chain(100, ExponentPolicy::proven());
  const auto oracle = sieve_primes(100);
  std::size_t mismatches = 0;
  for (const auto& step : chain.steps) mismatches += step.matches_oracle() ? 0 : 1;
  const auto violations = chain_violations(chain);
  long max_bits = 0;
  for (const auto& step : chain.steps) max_bits = std::max(max_bits, step.precision_bits);
  r.passed = chain.primes == oracle && mismatches == 0 && violations.empty();
  r.detail = std::to_string(chain.size()) + " primes, last " + std::to_string(chain.primes.back()) +
             ", " + std::to_string(mismatches) + " mismatches, peak precision " +
             std::to_string(max_bits) + " bits";
  return r;
}

CriterionResult exponent_scan(const AcceptanceOptions& options) {
  CriterionResult r{2, "minimal exponents for n <= 120", false, {}};
  const auto primes = sieve_primes(121);
  ScanOptions scan;
  scan.threads = options.threads;
  const auto records = scan_range(primes, 1, 120, scan);
  bool hard = records.size() == 120;
  std::size_t above_conjecture = 0;
  std::size_t uncertified = 0;
  double sum = 0.0;
  int counted = 0;
  double max_ratio = 0.0;
  for (const auto& rec : records) {
    if (!(rec.s_n <= 2.0 * static_cast<double>(rec.p_n))) hard = false;
    if (rec.ratio > 1.0) ++above_conjecture;
    if (!verify_bracket(primes, rec)) ++uncertified;
    max_ratio = std::max(max_ratio, rec.ratio);
    if (rec.n >= 60) {
      sum += rec.ratio;
      ++counted;
    }
  }
  const double mean = counted > 0 ? sum / counted : 0.0;
  const bool shape = mean >= 0.2 && mean <= 0.45;
  r.passed = hard && uncertified == 0 && shape;
  r.detail = "s_n <= 2 p_n " + std::string(hard ? "holds" : "FAILS") + "; " +
             std::to_string(uncertified) + " uncertified brackets; s_n <= p_n " +
             (above_conjecture == 0 ? std::string("holds")
                                    : "fails for " + std::to_string(above_conjecture) + " n (report-only)") +
             ", max ratio " + fixed3(max_ratio) + "; mean ratio over 60..120 " + fixed3(mean) +
             " (window [0.2, 0.45])";
  return r;
}

CriterionResult h_sandwich() {
  CriterionResult r{3, "h(2 p_n) strictly inside (p_{n+1} - 1, p_{n+1}) for n <= 50", false, {}};
  const auto primes = sieve_primes(51);
  const PrecisionPolicy policy;
  std::vector<std::size_t> failing;
  for (std::size_t n = 1; n <= 50; ++n) {
    const std::int64_t p = primes[n - 1];
    const long bits = policy.working_bits(2.0 * static_cast<double>(p), p);
    const BallReal h = h_of_s(primes, n, BallReal::exact(static_cast<long>(2 * p)), bits);
    if (!strictly_inside(h, static_cast<long>(primes[n] - 1), static_cast<long>(primes[n]))) {
      failing.push_back(n);
    }
  }
  r.passed = failing.empty();
  r.detail = std::to_string(50 - failing.size()) + "/50 enclosures inside";
  return r;
}

CriterionResult product_direct() {
  CriterionResult r{4, "product and direct forms of D_n(s) intersect", false, {}};
  const auto primes = sieve_primes(10);
  int pairs = 0;
  int disjoint = 0;
  for (std::size_t n = 1; n <= 10; ++n) {
    const std::int64_t p = primes[n - 1];
    for (long s : {4L, 6L, 10L, static_cast<long>(2 * p)}) {
      const BallReal sb = BallReal::exact(s);
      const BallReal product = dirichlet_series_product(primes, n, sb, 192);
      const BallReal direct =
          dirichlet_series_direct(primes, n, sb, default_direct_cutoff(primes, n), 192);
      ++pairs;
      if (!overlaps(product, direct)) ++disjoint;
    }
  }
  r.passed = disjoint == 0;
  r.detail = std::to_string(pairs - disjoint) + "/" + std::to_string(pairs) +
             " (n, s) pairs overlap for n <= 10, s in {4, 6, 10, 2 p_n}";
  return r;
}

CriterionResult tail_soundness() {
  CriterionResult r{5, "tail bound dominates the true remainder", false, {}};
  // remainder = zeta(s) - sum_{k<m} k^-s, bounded above with MPFR's zeta
  // rounded up; compared with the lower end of the bound
  int checked = 0;
  int violated = 0;
  for (long s : {2L, 4L, 6L}) {
    Float z(512);
    mpfr_zeta_ui(z.get(), static_cast<unsigned long>(s), MPFR_RNDU);
    for (long m : {3L, 5L, 10L}) {
      mpq_class partial = 0;
      for (long k = 1; k < m; ++k) {
        mpz_class pw;
        mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(s));
        partial += mpq_class(1, pw);
      }
      const mpq_class remainder = rational_of(z.get()) - partial;
      const BallReal bound = tail_bound(m, BallReal::exact(s), 128);
      ++checked;
      if (remainder > rational_of(bound.lower().get())) ++violated;
    }
  }
  r.passed = violated == 0;
  r.detail = std::to_string(checked - violated) + "/" + std::to_string(checked) +
             " (m, s) pairs for m in {3, 5, 10}, s in {2, 4, 6}";
  return r;
}

CriterionResult mod4_criterion() {
  CriterionResult r{6, "sign of V_n(2 p_n) - 1 predicts p_{n+1} mod 4 for n <= 100", false, {}};
  const auto primes = sieve_primes(101);
  int correct = 0;
  int indeterminate = 0;
  for (std::size_t n = 1; n <= 100; ++n) {
    const Mod4Prediction p = predict_mod4(primes, n);
    if (p.indeterminate()) ++indeterminate;
    if (p.matches()) ++correct;
  }
  r.passed = correct == 100 && indeterminate == 0;
  r.detail = std::to_string(correct) + "/100 correct, " + std::to_string(indeterminate) +
             " indeterminate";
  return r;
}

CriterionResult classical_formulas() {
  CriterionResult r{7, "Moebius-sum formulas match the sieve for n <= 15", false, {}};
  const auto primes = sieve_primes(16);
  int gandhi_ok = 0;
  int window_ok = 0;
  int trefeu_ok = 0;
  for (std::size_t n = 1; n <= 15; ++n) {
    const ClassicalResult g = gandhi_next_prime(primes, n);
    if (g.prime == primes[n]) ++gandhi_ok;
    if (strictly_inside(g.certificate, 1, 2)) ++window_ok;
    for (long b : {2L, 3L, 10L}) {
      if (golomb_trefeu_next_prime(primes, n, b).prime == primes[n]) ++trefeu_ok;
    }
  }
  r.passed = gandhi_ok == 15 && window_ok == 15 && trefeu_ok == 45;
  r.detail = "power-of-two window " + std::to_string(gandhi_ok) + "/15 (window in (1, 2): " +
             std::to_string(window_ok) + "/15), base-b logarithm " + std::to_string(trefeu_ok) +
             "/45 for b in {2, 3, 10}";
  return r;
}

CriterionResult enclosure_properties() {
  CriterionResult r{8, "randomized enclosure soundness", false, {}};
  const auto results = run_enclosure_properties(10000);
  int failures = 0;
  std::ostringstream detail;
  for (const auto& p : results) {
    failures += p.failures;
    if (!p.passed()) detail << p.operation << ": " << p.first_failure << "; ";
  }
  r.passed = failures == 0;
  detail << results.size() << " operations x 10000 cases, " << failures << " failures";
  r.detail = detail.str();
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& options, const std::function<void(const CriterionResult&)>& on_result) {
  const std::vector<std::pair<int, std::function<CriterionResult()>>> criteria{
      {1, recurrence_chain},
      {2, [&] { return exponent_scan(options); }},
      {3, h_sandwich},
      {4, product_direct},
      {5, tail_soundness},
      {6, mod4_criterion},
      {7, classical_formulas},
      {8, enclosure_properties},
  };
  std::vector<CriterionResult> results;
  for (const auto& [id, run] : criteria) {
    CriterionResult result;
    try {
      result = run();
    } catch (const std::exception& e) {
      result = {id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what()};
    }
    if (on_result) on_result(result);
    results.push_back(std::move(result));
  }
  return results;
}

std::string format_criterion(const CriterionResult& result) {
  return std::string(result.passed ? "PASS" : "FAIL") + " [" + std::to_string(result.id) + "] " +
         result.title + ": " + result.detail;
}

}  // namespace primerec
