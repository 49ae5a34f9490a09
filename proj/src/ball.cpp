#include "primerec/ball.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace primerec {

// ---------------------------------------------------------------------------
// Float

Float::Float(mpfr_prec_t prec) {
  mpfr_init2(value_, std::max<mpfr_prec_t>(prec, MPFR_PREC_MIN));
  mpfr_set_zero(value_, 1);
}

Float::Float(const Float& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Float::Float(Float&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Float& Float::operator=(const Float& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Float& Float::operator=(Float&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Float::~Float() { mpfr_clear(value_); }

// ---------------------------------------------------------------------------
// helpers

namespace {

constexpr mpfr_prec_t kRad = BallReal::kRadiusBits;

void require_finite(mpfr_srcptr v, const char* what) {
  if (!mpfr_number_p(v)) {
    throw DomainError(std::string(what) + ": non-finite value");
  }
}

// rad += ulp(mid) when the midpoint was rounded.
void add_rounding_error(mpfr_ptr rad, mpfr_srcptr mid, int ternary) {
  if (ternary == 0 || !mpfr_regular_p(mid)) return;
  Float ulp(kRad);
  mpfr_set_ui_2exp(ulp.get(), 1, mpfr_get_exp(mid) - mpfr_get_prec(mid),
                   MPFR_RNDU);
  mpfr_add(rad, rad, ulp.get(), MPFR_RNDU);
}

// rad += |a| * |b|, rounded up.
void add_abs_product(mpfr_ptr rad, mpfr_srcptr a, mpfr_srcptr b) {
  if (mpfr_zero_p(a) || mpfr_zero_p(b)) return;
  Float t(kRad);
  mpfr_mul(t.get(), a, b, MPFR_RNDA);
  mpfr_abs(t.get(), t.get(), MPFR_RNDN);
  mpfr_add(rad, rad, t.get(), MPFR_RNDU);
}

mpq_class to_rational(mpfr_srcptr v) {
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), v);
  return q;
}

}  // namespace

// ---------------------------------------------------------------------------
// BallReal

BallReal::BallReal() : mid_(MPFR_PREC_MIN), rad_(kRad) {}

BallReal::BallReal(Float mid, Float rad) : mid_(std::move(mid)), rad_(std::move(rad)) {}

BallReal BallReal::exact(long value) {
  Float mid(64);
  mpfr_set_si(mid.get(), value, MPFR_RNDN);
  return BallReal(std::move(mid), Float(kRad));
}

BallReal BallReal::exact(double value) {
  if (!std::isfinite(value)) throw DomainError("BallReal::exact: non-finite double");
  Float mid(53);
  mpfr_set_d(mid.get(), value, MPFR_RNDN);
  return BallReal(std::move(mid), Float(kRad));
}

BallReal BallReal::exact(const mpz_class& value) {
  const auto bits = static_cast<mpfr_prec_t>(mpz_sizeinbase(value.get_mpz_t(), 2));
  Float mid(std::max<mpfr_prec_t>(bits, MPFR_PREC_MIN));
  mpfr_set_z(mid.get(), value.get_mpz_t(), MPFR_RNDN);
  return BallReal(std::move(mid), Float(kRad));
}

BallReal BallReal::from_rational(const mpq_class& value, mpfr_prec_t prec) {
  Float mid(prec);
  Float rad(kRad);
  const int t = mpfr_set_q(mid.get(), value.get_mpq_t(), MPFR_RNDN);
  add_rounding_error(rad.get(), mid.get(), t);
  return BallReal(std::move(mid), std::move(rad));
}

BallReal BallReal::from_mid_rad(mpfr_srcptr mid, mpfr_srcptr rad) {
  require_finite(mid, "from_mid_rad");
  require_finite(rad, "from_mid_rad");
  if (mpfr_sgn(rad) < 0) throw DomainError("from_mid_rad: negative radius");
  Float m(mpfr_get_prec(mid));
  mpfr_set(m.get(), mid, MPFR_RNDN);
  Float r(kRad);
  mpfr_set(r.get(), rad, MPFR_RNDU);
  return BallReal(std::move(m), std::move(r));
}

BallReal BallReal::from_parts(Float mid, Float rad) {
  require_finite(mid.get(), "from_parts");
  require_finite(rad.get(), "from_parts");
  if (mpfr_sgn(rad.get()) < 0) throw DomainError("from_parts: negative radius");
  if (rad.precision() != kRad) {
    Float r(kRad);
    mpfr_set(r.get(), rad.get(), MPFR_RNDU);
    return BallReal(std::move(mid), std::move(r));
  }
  return BallReal(std::move(mid), std::move(rad));
}

Float BallReal::lower() const {
  Float lo(std::max(precision(), kRad));
  mpfr_sub(lo.get(), mid_.get(), rad_.get(), MPFR_RNDD);
  return lo;
}

Float BallReal::upper() const {
  Float hi(std::max(precision(), kRad));
  mpfr_add(hi.get(), mid_.get(), rad_.get(), MPFR_RNDU);
  return hi;
}

double BallReal::mid_double() const { return mpfr_get_d(mid_.get(), MPFR_RNDN); }

double BallReal::radius_double() const { return mpfr_get_d(rad_.get(), MPFR_RNDU); }

bool BallReal::contains(const mpq_class& value) const {
  const mpq_class diff = abs(value - to_rational(mid_.get()));
  return diff <= to_rational(rad_.get());
}

bool BallReal::contains(const BallReal& other) const {
  const mpq_class mid = to_rational(mid_.get());
  const mpq_class rad = to_rational(rad_.get());
  const mpq_class omid = to_rational(other.mid_.get());
  const mpq_class orad = to_rational(other.rad_.get());
  return omid - orad >= mid - rad && omid + orad <= mid + rad;
}

std::string BallReal::to_string(int digits) const {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg +/- %.3Re", digits, mid_.get(), rad_.get());
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

// ---------------------------------------------------------------------------
// arithmetic

BallReal add(const BallReal& a, const BallReal& b, mpfr_prec_t prec) {
  Float mid(prec);
  Float rad(kRad);
  const int t = mpfr_add(mid.get(), a.midpoint().get(), b.midpoint().get(), MPFR_RNDN);
  mpfr_add(rad.get(), a.radius().get(), b.radius().get(), MPFR_RNDU);
  add_rounding_error(rad.get(), mid.get(), t);
  return BallReal::from_parts(std::move(mid), std::move(rad));
}

BallReal sub(const BallReal& a, const BallReal& b, mpfr_prec_t prec) {
  Float mid(prec);
  Float rad(kRad);
  const int t = mpfr_sub(mid.get(), a.midpoint().get(), b.midpoint().get(), MPFR_RNDN);
  mpfr_add(rad.get(), a.radius().get(), b.radius().get(), MPFR_RNDU);
  add_rounding_error(rad.get(), mid.get(), t);
  return BallReal::from_parts(std::move(mid), std::move(rad));
}

BallReal neg(const BallReal& a) {
  Float mid(a.precision());
  mpfr_neg(mid.get(), a.midpoint().get(), MPFR_RNDN);
  return BallReal::from_parts(std::move(mid), a.radius());
}

BallReal mul(const BallReal& a, const BallReal& b, mpfr_prec_t prec) {
  Float mid(prec);
  Float rad(kRad);
  const int t = mpfr_mul(mid.get(), a.midpoint().get(), b.midpoint().get(), MPFR_RNDN);
  add_abs_product(rad.get(), a.midpoint().get(), b.radius().get());
  add_abs_product(rad.get(), b.midpoint().get(), a.radius().get());
  add_abs_product(rad.get(), a.radius().get(), b.radius().get());
  add_rounding_error(rad.get(), mid.get(), t);
  return BallReal::from_parts(std::move(mid), std::move(rad));
}

BallReal div(const BallReal& a, const BallReal& b, mpfr_prec_t prec) {
  if (mpfr_cmpabs(b.midpoint().get(), b.radius().get()) <= 0) {
    throw DomainError("div: divisor enclosure contains 0");
  }
  Float mid(prec);
  Float rad(kRad);
  const int t = mpfr_div(mid.get(), a.midpoint().get(), b.midpoint().get(), MPFR_RNDN);
  if (!a.is_exact() || !b.is_exact()) {
    // |a/b - ma/mb| <= (ra |mb| + |ma| rb) / (|mb| (|mb| - rb))
    Float num(kRad);
    add_abs_product(num.get(), a.radius().get(), b.midpoint().get());
    add_abs_product(num.get(), a.midpoint().get(), b.radius().get());
    Float den(kRad);
    mpfr_abs(den.get(), b.midpoint().get(), MPFR_RNDD);
    mpfr_sub(den.get(), den.get(), b.radius().get(), MPFR_RNDD);
    mpfr_mul(den.get(), den.get(), b.midpoint().get(), MPFR_RNDZ);
    mpfr_abs(den.get(), den.get(), MPFR_RNDN);
    mpfr_div(rad.get(), num.get(), den.get(), MPFR_RNDU);
  }
  add_rounding_error(rad.get(), mid.get(), t);
  return BallReal::from_parts(std::move(mid), std::move(rad));
}

BallReal mul_2si(const BallReal& a, long exponent) {
  Float mid(a.precision());
  Float rad(kRad);
  mpfr_mul_2si(mid.get(), a.midpoint().get(), exponent, MPFR_RNDN);
  mpfr_mul_2si(rad.get(), a.radius().get(), exponent, MPFR_RNDU);
  return BallReal::from_parts(std::move(mid), std::move(rad));
}

BallReal pow_int(const BallReal& x, long exponent, mpfr_prec_t prec) {
  if (exponent == 0) return BallReal::exact(1L);
  if (exponent < 0) {
    // Extra bits absorb the ulp of the intermediate power.
    return div(BallReal::exact(1L), pow_int(x, -exponent, prec + 8), prec);
  }
  const auto e = static_cast<unsigned long>(exponent);
  Float mid(prec);
  Float rad(kRad);
  const int t = mpfr_pow_ui(mid.get(), x.midpoint().get(), e, MPFR_RNDN);
  require_finite(mid.get(), "pow_int");
  if (!x.is_exact()) {
    // |x^e - m^e| <= e (|m| + r)^(e-1) r
    Float bound(kRad);
    mpfr_abs(bound.get(), x.midpoint().get(), MPFR_RNDU);
    mpfr_add(bound.get(), bound.get(), x.radius().get(), MPFR_RNDU);
    mpfr_pow_ui(bound.get(), bound.get(), e - 1, MPFR_RNDU);
    mpfr_mul_ui(bound.get(), bound.get(), e, MPFR_RNDU);
    mpfr_mul(rad.get(), bound.get(), x.radius().get(), MPFR_RNDU);
  }
  add_rounding_error(rad.get(), mid.get(), t);
  return BallReal::from_parts(std::move(mid), std::move(rad));
}

BallReal ln(const BallReal& x, mpfr_prec_t prec) {
  if (!certainly_positive(x)) throw DomainError("ln: enclosure reaches 0 or below");
  Float mid(prec);
  Float rad(kRad);
  const int t = mpfr_log(mid.get(), x.midpoint().get(), MPFR_RNDN);
  if (!x.is_exact()) {
    // |ln x - ln m| <= r / (m - r)
    Float lo(kRad);
    mpfr_sub(lo.get(), x.midpoint().get(), x.radius().get(), MPFR_RNDD);
    mpfr_div(rad.get(), x.radius().get(), lo.get(), MPFR_RNDU);
  }
  add_rounding_error(rad.get(), mid.get(), t);
  return BallReal::from_parts(std::move(mid), std::move(rad));
}

BallReal exp(const BallReal& x, mpfr_prec_t prec) {
  Float mid(prec);
  Float rad(kRad);
  const int t = mpfr_exp(mid.get(), x.midpoint().get(), MPFR_RNDN);
  if (!mpfr_regular_p(mid.get())) throw DomainError("exp: result out of range");
  if (!x.is_exact()) {
    // |e^x - e^m| <= e^m (e^r - 1)
    Float scale(kRad);
    mpfr_exp(scale.get(), x.midpoint().get(), MPFR_RNDU);
    Float grow(kRad);
    mpfr_expm1(grow.get(), x.radius().get(), MPFR_RNDU);
    mpfr_mul(rad.get(), scale.get(), grow.get(), MPFR_RNDU);
  }
  add_rounding_error(rad.get(), mid.get(), t);
  return BallReal::from_parts(std::move(mid), std::move(rad));
}

BallReal root(const BallReal& x, unsigned long k, mpfr_prec_t prec) {
  if (k == 0) throw DomainError("root: degree 0");
  if (!certainly_positive(x)) throw DomainError("root: enclosure reaches 0 or below");
  Float mid(prec);
  Float rad(kRad);
  const int t = mpfr_rootn_ui(mid.get(), x.midpoint().get(), k, MPFR_RNDN);
  if (!x.is_exact()) {
    // derivative (1/k) x^(1/k - 1) is largest at the lower endpoint
    Float lo(kRad);
    mpfr_sub(lo.get(), x.midpoint().get(), x.radius().get(), MPFR_RNDD);
    Float r(kRad);
    mpfr_rootn_ui(r.get(), lo.get(), k, MPFR_RNDU);
    Float den(kRad);
    mpfr_div(den.get(), lo.get(), r.get(), MPFR_RNDD);
    mpfr_mul_ui(den.get(), den.get(), k, MPFR_RNDD);
    mpfr_div(rad.get(), x.radius().get(), den.get(), MPFR_RNDU);
  }
  add_rounding_error(rad.get(), mid.get(), t);
  return BallReal::from_parts(std::move(mid), std::move(rad));
}

BallReal pow(const BallReal& x, const BallReal& y, mpfr_prec_t prec) {
  if (const auto e = exact_integer(y)) return pow_int(x, *e, prec);
  if (!certainly_positive(x)) throw DomainError("pow: base enclosure reaches 0 or below");
  // exp amplifies the absolute error of y ln x into relative error; carry
  // enough extra bits to cover |y ln x|.
  long extra = 16;
  if (mpfr_regular_p(y.midpoint().get())) extra += std::max<long>(0, mpfr_get_exp(y.midpoint().get()));
  const BallReal log_x = ln(x, prec + extra + 8);
  if (mpfr_regular_p(log_x.midpoint().get())) {
    extra += std::max<long>(0, mpfr_get_exp(log_x.midpoint().get()));
  }
  return exp(mul(y, log_x, prec + extra), prec);
}

// ---------------------------------------------------------------------------
// comparisons

bool certainly_positive(const BallReal& x) {
  return mpfr_sgn(x.midpoint().get()) > 0 &&
         mpfr_cmpabs(x.midpoint().get(), x.radius().get()) > 0;
}

bool certainly_negative(const BallReal& x) {
  return mpfr_sgn(x.midpoint().get()) < 0 &&
         mpfr_cmpabs(x.midpoint().get(), x.radius().get()) > 0;
}

bool certainly_less(const BallReal& a, const BallReal& b) {
  // a.mid + a.rad < b.mid - b.rad
  Float radii(kRad);
  mpfr_add(radii.get(), a.radius().get(), b.radius().get(), MPFR_RNDU);
  Float gap(std::max(a.precision(), b.precision()) + 2);
  mpfr_sub(gap.get(), b.midpoint().get(), a.midpoint().get(), MPFR_RNDD);
  return mpfr_cmp(gap.get(), radii.get()) > 0;
}

bool overlaps(const BallReal& a, const BallReal& b) {
  const mpq_class gap = abs(to_rational(a.midpoint().get()) - to_rational(b.midpoint().get()));
  return gap <= to_rational(a.radius().get()) + to_rational(b.radius().get());
}

bool strictly_inside(const BallReal& x, long lo, long hi) {
  const mpfr_prec_t p = x.precision() + 66;
  Float above(p);
  mpfr_sub_si(above.get(), x.midpoint().get(), lo, MPFR_RNDD);
  Float below(p);
  mpfr_si_sub(below.get(), hi, x.midpoint().get(), MPFR_RNDD);
  return mpfr_cmp(above.get(), x.radius().get()) > 0 &&
         mpfr_cmp(below.get(), x.radius().get()) > 0;
}

std::optional<long> exact_integer(const BallReal& x) {
  if (!x.is_exact()) return std::nullopt;
  mpfr_srcptr m = x.midpoint().get();
  if (!mpfr_integer_p(m) || !mpfr_fits_slong_p(m, MPFR_RNDN)) return std::nullopt;
  return mpfr_get_si(m, MPFR_RNDN);
}

namespace {

std::int64_t to_int64(const mpz_class& z) {
  if (!z.fits_slong_p()) throw DomainError("certified rounding: result exceeds 64 bits");
  return z.get_si();
}

}  // namespace

std::optional<std::int64_t> certified_ceiling(const BallReal& x) {
  require_finite(x.midpoint().get(), "certified_ceiling");
  const Float lo = x.lower();
  const Float hi = x.upper();
  mpz_class c;
  mpfr_get_z(c.get_mpz_t(), hi.get(), MPFR_RNDU);
  const mpz_class below = c - 1;
  if (mpfr_cmp_z(lo.get(), below.get_mpz_t()) <= 0) return std::nullopt;
  return to_int64(c);
}

std::optional<std::int64_t> certified_floor(const BallReal& x) {
  require_finite(x.midpoint().get(), "certified_floor");
  const Float lo = x.lower();
  const Float hi = x.upper();
  mpz_class f;
  mpfr_get_z(f.get_mpz_t(), lo.get(), MPFR_RNDD);
  const mpz_class above = f + 1;
  if (mpfr_cmp_z(hi.get(), above.get_mpz_t()) >= 0) return std::nullopt;
  return to_int64(f);
}

// ---------------------------------------------------------------------------
// PrecisionPolicy

void PrecisionPolicy::validate() const {
  if (base_bits < MPFR_PREC_MIN) throw std::invalid_argument("base_bits must be positive");
  if (guard_bits < 1) throw std::invalid_argument("guard_bits must be positive");
  if (!(escalation_factor > 1.0)) throw std::invalid_argument("escalation_factor must exceed 1");
  if (max_escalations < 1) throw std::invalid_argument("max_escalations must be positive");
  if (max_bits < base_bits) throw std::invalid_argument("max_bits must be at least base_bits");
}

long PrecisionPolicy::bits_for_scale(double log2_scale) const {
  const double needed = std::ceil(std::max(0.0, log2_scale)) + static_cast<double>(guard_bits);
  return std::max(base_bits, static_cast<long>(needed));
}

long PrecisionPolicy::working_bits(double s, std::int64_t p_n) const {
  const double bound = 2.0 * static_cast<double>(std::max<std::int64_t>(p_n, 1));
  return bits_for_scale(s * std::log2(bound));
}

long PrecisionPolicy::escalate(long bits) const {
  return static_cast<long>(std::ceil(static_cast<double>(bits) * escalation_factor));
}

long PrecisionPolicy::checked(long bits) const {
  if (bits > max_bits) {
    throw PrecisionExhausted("working precision of " + std::to_string(bits) +
                             " bits exceeds the limit of " + std::to_string(max_bits));
  }
  return bits;
}

}  // namespace primerec
