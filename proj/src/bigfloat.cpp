#include "tcm/bigfloat.hpp"

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <stdexcept>

namespace tcm {
namespace {

thread_local Precision g_default_precision = 256;

Precision wider(const Real& a, const Real& b) { return std::max(a.precision(), b.precision()); }

// Grows the precision of `x` so that in-place ops keep the wider operand's bits.
void widen(Real& x, Precision prec) {
  if (x.precision() < prec) {
    mpfr_prec_round(x.raw(), prec, MPFR_RNDN);
  }
}

struct MpfrString {
  char* ptr = nullptr;
  ~MpfrString() {
    if (ptr != nullptr) mpfr_free_str(ptr);
  }
};

}  // namespace

Precision default_precision() { return g_default_precision; }

void set_default_precision(Precision bits) {
  if (bits < MPFR_PREC_MIN || bits > MPFR_PREC_MAX) {
    throw std::invalid_argument("precision out of range");
  }
  g_default_precision = bits;
}

PrecisionScope::PrecisionScope(Precision bits) : saved_(g_default_precision) { set_default_precision(bits); }
PrecisionScope::~PrecisionScope() { g_default_precision = saved_; }

Real::Real() {
  mpfr_init2(value_, g_default_precision);
  mpfr_set_zero(value_, 1);
}

Real::Real(long value, Precision prec) {
  mpfr_init2(value_, prec);
  mpfr_set_si(value_, value, MPFR_RNDN);
}

Real::Real(double value, Precision prec) {
  mpfr_init2(value_, prec);
  mpfr_set_d(value_, value, MPFR_RNDN);
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  // Steal the limbs; leave `other` as a valid minimal-precision zero.
  *value_ = *other.value_;
  mpfr_init2(other.value_, MPFR_PREC_MIN);
  mpfr_set_zero(other.value_, 1);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this != &other) {
    mpfr_swap(value_, other.value_);
  }
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

Real Real::parse(std::string_view text, Precision prec) {
  std::string s(text);
  Real r(0L, prec);
  char* end = nullptr;
  if (!s.empty()) mpfr_strtofr(r.value_, s.c_str(), &end, 10, MPFR_RNDN);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw std::invalid_argument("not a decimal number: '" + s + "'");
  }
  return r;
}

Real Real::from_rational(const mpq_class& q, Precision prec) {
  Real r(0L, prec);
  mpfr_set_q(r.value_, q.get_mpq_t(), MPFR_RNDN);
  return r;
}

Real Real::from_integer(const mpz_class& z, Precision prec) {
  Real r(0L, prec);
  mpfr_set_z(r.value_, z.get_mpz_t(), MPFR_RNDN);
  return r;
}

Real Real::pi(Precision prec) {
  Real r(0L, prec);
  mpfr_const_pi(r.value_, MPFR_RNDN);
  return r;
}

void Real::set_precision(Precision prec) { mpfr_prec_round(value_, prec, MPFR_RNDN); }

Real Real::with_precision(Precision prec) const {
  Real r(0L, prec);
  mpfr_set(r.value_, value_, MPFR_RNDN);
  return r;
}

long Real::exponent2() const {
  if (!mpfr_regular_p(value_)) return mpfr_zero_p(value_) ? -(1L << 40) : (1L << 40);
  return mpfr_get_exp(value_);
}

mpq_class Real::to_rational() const {
  if (!is_finite()) throw std::domain_error("non-finite value has no rational form");
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), value_);
  return q;
}

mpz_class Real::floor_integer() const {
  if (!is_finite()) throw std::domain_error("non-finite value has no integer part");
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), value_, MPFR_RNDD);
  return z;
}

std::string Real::to_string(int digits) const {
  if (digits <= 0) {
    digits = static_cast<int>(static_cast<double>(precision()) * 0.30103) + 1;
  }
  MpfrString buf;
  mpfr_asprintf(&buf.ptr, "%.*Re", digits - 1, value_);
  return std::string(buf.ptr);
}

std::string Real::to_fixed(int fraction_digits) const {
  MpfrString buf;
  mpfr_asprintf(&buf.ptr, "%.*Rf", fraction_digits, value_);
  return std::string(buf.ptr);
}

Real& Real::operator+=(const Real& o) {
  widen(*this, o.precision());
  mpfr_add(value_, value_, o.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator-=(const Real& o) {
  widen(*this, o.precision());
  mpfr_sub(value_, value_, o.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator*=(const Real& o) {
  widen(*this, o.precision());
  mpfr_mul(value_, value_, o.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator/=(const Real& o) {
  widen(*this, o.precision());
  mpfr_div(value_, value_, o.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator*=(long k) {
  mpfr_mul_si(value_, value_, k, MPFR_RNDN);
  return *this;
}

Real& Real::operator/=(long k) {
  mpfr_div_si(value_, value_, k, MPFR_RNDN);
  return *this;
}

Real Real::operator-() const {
  Real r(*this);
  mpfr_neg(r.value_, r.value_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

Real abs(const Real& x) {
  Real r(x);
  mpfr_abs(r.raw(), r.raw(), MPFR_RNDN);
  return r;
}

Real sqrt(const Real& x) {
  Real r(0L, x.precision());
  mpfr_sqrt(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real root(const Real& x, unsigned long k) {
  Real r(0L, x.precision());
#if MPFR_VERSION >= MPFR_VERSION_NUM(4, 0, 0)
  mpfr_rootn_ui(r.raw(), x.raw(), k, MPFR_RNDN);
#else
  mpfr_root(r.raw(), x.raw(), k, MPFR_RNDN);
#endif
  return r;
}

Real exp(const Real& x) {
  Real r(0L, x.precision());
  mpfr_exp(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real log(const Real& x) {
  Real r(0L, x.precision());
  mpfr_log(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real sin(const Real& x) {
  Real r(0L, x.precision());
  mpfr_sin(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real cos(const Real& x) {
  Real r(0L, x.precision());
  mpfr_cos(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real atan2(const Real& y, const Real& x) {
  Real r(0L, wider(y, x));
  mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real pow(const Real& x, long n) {
  Real r(0L, x.precision());
  mpfr_pow_si(r.raw(), x.raw(), n, MPFR_RNDN);
  return r;
}

Real ldexp(const Real& x, long e) {
  Real r(0L, x.precision());
  mpfr_mul_2si(r.raw(), x.raw(), e, MPFR_RNDN);
  return r;
}

Real max(const Real& a, const Real& b) { return (a < b) ? b : a; }
Real min(const Real& a, const Real& b) { return (b < a) ? b : a; }

Real epsilon_bits(long bits, Precision prec) { return ldexp(Real(1L, prec), -bits); }

// ---------------------------------------------------------------------------

Complex::Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {
  const Precision p = std::max(re_.precision(), im_.precision());
  widen(re_, p);
  widen(im_, p);
}

Complex::Complex(const Real& re) : re_(re), im_(0L, re.precision()) {}

Complex Complex::polar(const Real& modulus, const Real& angle) {
  Real s(0L, angle.precision());
  Real c(0L, angle.precision());
  mpfr_sin_cos(s.raw(), c.raw(), angle.raw(), MPFR_RNDN);
  return Complex(modulus * c, modulus * s);
}

Complex Complex::unit_root(long k, long n, Precision prec) {
  // Reduce k mod n so the angle stays in [0, 2 pi).
  long r = k % n;
  if (r < 0) r += n;
  Real angle = Real::pi(prec + 8) * (2 * r) / n;
  Complex z = polar(Real(1L, prec + 8), angle);
  z.set_precision(prec);
  return z;
}

Complex Complex::parse(std::string_view text, Precision prec) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) {
    throw std::invalid_argument("complex number must be written as re,im");
  }
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  return Complex(Real::parse(trim(text.substr(0, comma)), prec), Real::parse(trim(text.substr(comma + 1)), prec));
}

Precision Complex::precision() const { return std::max(re_.precision(), im_.precision()); }

void Complex::set_precision(Precision prec) {
  re_.set_precision(prec);
  im_.set_precision(prec);
}

Complex& Complex::operator+=(const Complex& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

Complex& Complex::operator-=(const Complex& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

Complex& Complex::operator*=(const Complex& o) {
  ComplexScratch s(std::max(precision(), o.precision()));
  Complex out(std::max(precision(), o.precision()));
  mul_into(out, *this, o, s);
  *this = std::move(out);
  return *this;
}

Complex& Complex::operator/=(const Complex& o) {
  const Real d = norm(o);
  Complex num = *this * conj(o);
  re_ = num.re_ / d;
  im_ = num.im_ / d;
  return *this;
}

Complex& Complex::operator*=(const Real& r) {
  re_ *= r;
  im_ *= r;
  return *this;
}

Complex& Complex::operator/=(const Real& r) {
  re_ /= r;
  im_ /= r;
  return *this;
}

Complex& Complex::operator*=(long k) {
  re_ *= k;
  im_ *= k;
  return *this;
}

Complex& Complex::operator/=(long k) {
  re_ /= k;
  im_ /= k;
  return *this;
}

std::string Complex::to_string(int digits) const { return re_.to_string(digits) + "," + im_.to_string(digits); }

Complex conj(const Complex& z) { return Complex(z.re(), -z.im()); }

Real norm(const Complex& z) { return z.re() * z.re() + z.im() * z.im(); }

Real abs(const Complex& z) {
  Real r(0L, z.precision());
  mpfr_hypot(r.raw(), z.re().raw(), z.im().raw(), MPFR_RNDN);
  return r;
}

Real arg(const Complex& z) { return atan2(z.im(), z.re()); }

Complex exp(const Complex& z) { return Complex::polar(exp(z.re()), z.im()); }

Complex sqrt(const Complex& z) {
  const Precision p = z.precision();
  if (z.re().is_zero() && z.im().is_zero()) return Complex(p);
  const Real m = abs(z);
  // sqrt((|z| + re)/2) is well conditioned for re >= 0; otherwise go through the imaginary part.
  if (z.re().sign() >= 0) {
    Real a = sqrt((m + z.re()) / 2L);
    return Complex(a, z.im() / (a * 2L));
  }
  Real b = sqrt((m - z.re()) / 2L);
  if (z.im().sign() < 0) b = -b;
  return Complex(z.im() / (b * 2L), b);
}

Complex pow(const Complex& z, long n) {
  if (n < 0) return Complex(Real(1L, z.precision())) / pow(z, -n);
  Complex result(Real(1L, z.precision()));
  Complex base = z;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

void mul_into(Complex& out, const Complex& a, const Complex& b, ComplexScratch& s) {
  // (ar + i ai)(br + i bi); `out` may alias `a` or `b`, so stage through scratch.
  // The final swap exchanges limbs with the scratch, so both must share a precision.
  mpfr_mul(s.t1.raw(), a.re().raw(), b.re().raw(), MPFR_RNDN);
  mpfr_mul(s.t2.raw(), a.im().raw(), b.im().raw(), MPFR_RNDN);
  mpfr_sub(s.t1.raw(), s.t1.raw(), s.t2.raw(), MPFR_RNDN);
  mpfr_mul(s.t2.raw(), a.re().raw(), b.im().raw(), MPFR_RNDN);
  mpfr_fma(out.im().raw(), a.im().raw(), b.re().raw(), s.t2.raw(), MPFR_RNDN);
  mpfr_swap(out.re().raw(), s.t1.raw());
}

}  // namespace tcm
