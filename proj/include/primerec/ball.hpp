#pragma once

// Midpoint-radius ("ball") arithmetic on top of MPFR.
//
// A BallReal stands for the closed interval [mid - rad, mid + rad]. Every
// operation returns a ball that contains f(x) for every x in the input
// ball(s); rounding error of the midpoint is folded into the radius, and all
// radius arithmetic is rounded upward.

#include <mpfr.h>
#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace primerec {

/// Raised when an enclosure touches the invalid region of an operation
/// (log of an interval reaching 0, division by a ball containing 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when precision escalation gives up.
class PrecisionExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Owning handle to an mpfr_t.
class Float {
 public:
  explicit Float(mpfr_prec_t prec);
  Float(const Float& other);
  Float(Float&& other) noexcept;
  Float& operator=(const Float& other);
  Float& operator=(Float&& other) noexcept;
  ~Float();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

 private:
  mpfr_t value_;
};

class BallReal {
 public:
  /// Bits carried by the radius. The radius is only an error magnitude.
  static constexpr mpfr_prec_t kRadiusBits = 64;

  /// Exact zero.
  BallReal();

  static BallReal exact(long value);
  /// The binary value of `value`, radius 0. Throws DomainError on NaN/inf.
  static BallReal exact(double value);
  static BallReal exact(const mpz_class& value);
  /// Ball of precision `prec` containing `value`.
  static BallReal from_rational(const mpq_class& value, mpfr_prec_t prec);
  /// Ball with the given midpoint (copied exactly) and radius (rounded up).
  static BallReal from_mid_rad(mpfr_srcptr mid, mpfr_srcptr rad);
  /// Takes ownership of both parts. `rad` must be >= 0; it is rounded up to
  /// kRadiusBits if it carries more.
  static BallReal from_parts(Float mid, Float rad);

  const Float& midpoint() const { return mid_; }
  const Float& radius() const { return rad_; }
  mpfr_prec_t precision() const { return mid_.precision(); }
  bool is_exact() const { return mpfr_zero_p(rad_.get()) != 0; }

  /// Lower / upper endpoint, rounded outward.
  Float lower() const;
  Float upper() const;

  /// Midpoint rounded to nearest double.
  double mid_double() const;
  /// Radius rounded up to a double.
  double radius_double() const;

  /// Exact containment test: value in [mid - rad, mid + rad].
  bool contains(const mpq_class& value) const;
  /// True when `other` lies entirely inside this ball.
  bool contains(const BallReal& other) const;

  /// Decimal rendering "mid +/- rad" with `digits` significant digits.
  std::string to_string(int digits = 20) const;

 private:
  BallReal(Float mid, Float rad);

  Float mid_;
  Float rad_;
};

// Arithmetic. `prec` is the midpoint precision of the result in bits.
BallReal add(const BallReal& a, const BallReal& b, mpfr_prec_t prec);
BallReal sub(const BallReal& a, const BallReal& b, mpfr_prec_t prec);
BallReal neg(const BallReal& a);
BallReal mul(const BallReal& a, const BallReal& b, mpfr_prec_t prec);
/// Throws DomainError when `b` contains 0.
BallReal div(const BallReal& a, const BallReal& b, mpfr_prec_t prec);
/// Exact scaling by 2^exponent.
BallReal mul_2si(const BallReal& a, long exponent);
/// Negative exponents go through a division; x^0 = 1 exactly.
BallReal pow_int(const BallReal& x, long exponent, mpfr_prec_t prec);
/// Requires the whole ball to be > 0.
BallReal ln(const BallReal& x, mpfr_prec_t prec);
BallReal exp(const BallReal& x, mpfr_prec_t prec);
/// k-th root, k >= 1. Requires the whole ball to be > 0.
BallReal root(const BallReal& x, unsigned long k, mpfr_prec_t prec);
/// x^y. Exact integer y is dispatched to pow_int; otherwise x must be > 0
/// and the result is exp(y * ln x).
BallReal pow(const BallReal& x, const BallReal& y, mpfr_prec_t prec);

/// The whole enclosure is > 0 (resp. < 0).
bool certainly_positive(const BallReal& x);
bool certainly_negative(const BallReal& x);
/// a < b for every pair of points.
bool certainly_less(const BallReal& a, const BallReal& b);
bool overlaps(const BallReal& a, const BallReal& b);
/// Strictly inside the open interval (lo, hi).
bool strictly_inside(const BallReal& x, long lo, long hi);

/// Exact integer value of `x`, if `x` is a zero-radius integer fitting a long.
std::optional<long> exact_integer(const BallReal& x);

/// n when the enclosure lies within (n-1, n]; nullopt (indeterminate) when it
/// reaches an integer boundary from both sides. Throws DomainError when the
/// result does not fit in 64 bits.
std::optional<std::int64_t> certified_ceiling(const BallReal& x);
/// n when the enclosure lies within [n, n+1).
std::optional<std::int64_t> certified_floor(const BallReal& x);

/// Rules for sizing working precision and escalating it.
struct PrecisionPolicy {
  long base_bits = 128;
  long guard_bits = 64;
  double escalation_factor = 2.0;
  int max_escalations = 8;
  /// Hard ceiling on any working precision; exceeding it is treated as
  /// exhaustion.
  long max_bits = 1L << 26;

  /// Throws std::invalid_argument on a malformed policy.
  void validate() const;

  /// max(base_bits, ceil(log2_scale) + guard_bits).
  long bits_for_scale(double log2_scale) const;

  /// Precision for evaluating D_n(s) - 1 at exponent `s` once p_n is known:
  /// the unknown next prime is below 2 p_n, so D_n(s) - 1 > (2 p_n)^(-s).
  long working_bits(double s, std::int64_t p_n) const;

  /// Precision after one escalation step.
  long escalate(long bits) const;

  /// Throws PrecisionExhausted when `bits` exceeds max_bits.
  long checked(long bits) const;
};

}  // namespace primerec
