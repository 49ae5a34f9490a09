#pragma once

// Riemann zeta and the Dirichlet L-function of the non-principal character
// mod 4, for real s > 1, with certified truncation error.
//
// `prec` is the target: the truncation error is pushed below 2^-prec and the
// arithmetic runs at slightly more than `prec` bits. The returned radius
// covers both.

#include <cstdint>
#include <vector>

#include "primerec/ball.hpp"

namespace primerec {

/// chi_4(k): 0 for even k, +1 for k = 1 mod 4, -1 for k = 3 mod 4.
constexpr int chi4(std::int64_t k) {
  const std::int64_t r = ((k % 4) + 4) % 4;
  return r == 1 ? 1 : (r == 3 ? -1 : 0);
}

/// Upper bound (m-1)^(1-s) / (s-1) on sum_{k>=m} k^-s. Requires m >= 2 and
/// s > 1 (DomainError otherwise). The upper endpoint of the returned ball is
/// a certified upper bound.
BallReal integral_tail_bound(std::int64_t m, const BallReal& s, mpfr_prec_t prec);

/// Smallest K with K^(1-s) / (s-1) < 2^-bits, or a negative value when that K
/// would not fit in 62 bits.
std::int64_t direct_truncation_point(double s_lower, long bits);

/// k^-s for k = 0..count (entry 0 is unused and holds 0).
std::vector<BallReal> inverse_powers(std::int64_t count, const BallReal& s, mpfr_prec_t prec);

/// zeta(s), picking the cheaper of the two routes below.
BallReal zeta_real(const BallReal& s, mpfr_prec_t prec);
/// Dirichlet sum up to K plus the integral tail K^(1-s)/(s-1).
BallReal zeta_direct(const BallReal& s, mpfr_prec_t prec);
/// Euler-Maclaurin summation; practical for s close to 1.
BallReal zeta_euler_maclaurin(const BallReal& s, mpfr_prec_t prec);

/// sum_{j>=0} (a + j)^-s for a > 0, by Euler-Maclaurin at base a. The
/// remainder is bounded by the magnitude of the last correction term used.
BallReal hurwitz_euler_maclaurin(const BallReal& s, const BallReal& a, mpfr_prec_t prec);

/// L(s, chi_4), picking the cheaper route.
BallReal l_chi4(const BallReal& s, mpfr_prec_t prec);
/// Alternating series 1 - 3^-s + 5^-s - ..., remainder bounded by the first
/// omitted term.
BallReal l_chi4_alternating(const BallReal& s, mpfr_prec_t prec);
/// Split into two Hurwitz tails of step 4, each by Euler-Maclaurin.
BallReal l_chi4_euler_maclaurin(const BallReal& s, mpfr_prec_t prec);

/// B_{2j} / (2j)! for j = 0..count-1, exact.
std::vector<mpq_class> bernoulli_over_factorial(std::size_t count);

}  // namespace primerec
