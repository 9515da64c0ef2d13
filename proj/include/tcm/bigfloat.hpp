#pragma once

// Arbitrary-precision real and complex numbers on top of MPFR.
//
// Every Real carries its own precision in bits. Binary operations produce a
// result at the larger of the two operand precisions; all rounding is to
// nearest. A thread-local default precision is used only when a value is
// created without an explicit precision.

#include <mpfr.h>
#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>

namespace tcm {

using Precision = mpfr_prec_t;

Precision default_precision();
void set_default_precision(Precision bits);

/// Sets the thread-local default precision for the lifetime of the scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(Precision bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  Precision saved_;
};

class Real {
 public:
  Real();
  Real(long value, Precision prec = default_precision());
  Real(int value, Precision prec = default_precision()) : Real(static_cast<long>(value), prec) {}
  Real(double value, Precision prec = default_precision());
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  static Real zero(Precision prec) { return Real(0L, prec); }
  /// Parses a decimal literal ("-0.2884e-3"); throws std::invalid_argument.
  static Real parse(std::string_view text, Precision prec);
  static Real from_rational(const mpq_class& q, Precision prec);
  static Real from_integer(const mpz_class& z, Precision prec);
  static Real pi(Precision prec);

  Precision precision() const { return mpfr_get_prec(value_); }
  /// Rounds the stored value to a new precision.
  void set_precision(Precision prec);
  Real with_precision(Precision prec) const;

  mpfr_ptr raw() { return value_; }
  mpfr_srcptr raw() const { return value_; }

  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }
  /// Binary exponent e with 0.5 <= |x| / 2^e < 1; very negative for zero.
  long exponent2() const;

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  /// Exact conversion of the stored binary value to a rational.
  mpq_class to_rational() const;
  mpz_class floor_integer() const;
  /// Scientific notation with the given number of significant digits.
  std::string to_string(int digits = 0) const;
  /// Fixed-point notation with the given number of fractional digits.
  std::string to_fixed(int fraction_digits) const;

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);
  Real& operator*=(long k);
  Real& operator/=(long k);
  Real operator-() const;

  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }
  friend Real operator*(Real a, long k) { return a *= k; }
  friend Real operator*(long k, Real a) { return a *= k; }
  friend Real operator/(Real a, long k) { return a /= k; }

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);

 private:
  mpfr_t value_;
};

Real abs(const Real& x);
Real sqrt(const Real& x);
Real root(const Real& x, unsigned long k);
Real exp(const Real& x);
Real log(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real atan2(const Real& y, const Real& x);
Real pow(const Real& x, long n);
Real ldexp(const Real& x, long e);
Real max(const Real& a, const Real& b);
Real min(const Real& a, const Real& b);
/// 2^-bits at the given precision.
Real epsilon_bits(long bits, Precision prec);

class Complex {
 public:
  Complex() = default;
  explicit Complex(Precision prec) : re_(0L, prec), im_(0L, prec) {}
  Complex(Real re, Real im);
  Complex(const Real& re);  // NOLINT: real numbers embed implicitly
  Complex(long re, Precision prec) : re_(re, prec), im_(0L, prec) {}

  static Complex i(Precision prec) { return Complex(Real(0L, prec), Real(1L, prec)); }
  static Complex polar(const Real& modulus, const Real& angle);
  /// exp(2 pi i k / n).
  static Complex unit_root(long k, long n, Precision prec);
  /// Parses "re,im" (decimal, no spaces required); throws std::invalid_argument.
  static Complex parse(std::string_view text, Precision prec);

  const Real& re() const { return re_; }
  const Real& im() const { return im_; }
  Real& re() { return re_; }
  Real& im() { return im_; }
  Precision precision() const;
  void set_precision(Precision prec);

  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);
  Complex& operator*=(const Real& r);
  Complex& operator/=(const Real& r);
  Complex& operator*=(long k);
  Complex& operator/=(long k);
  Complex operator-() const { return Complex(-re_, -im_); }

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  friend Complex operator*(Complex a, const Real& b) { return a *= b; }
  friend Complex operator*(const Real& b, Complex a) { return a *= b; }
  friend Complex operator/(Complex a, const Real& b) { return a /= b; }
  friend Complex operator*(Complex a, long k) { return a *= k; }
  friend Complex operator*(long k, Complex a) { return a *= k; }
  friend Complex operator/(Complex a, long k) { return a /= k; }

  /// "re,im" with the given number of significant digits per component.
  std::string to_string(int digits = 0) const;

 private:
  Real re_;
  Real im_;
};

Complex conj(const Complex& z);
/// |z|^2
Real norm(const Complex& z);
Real abs(const Complex& z);
Real arg(const Complex& z);
Complex exp(const Complex& z);
/// Principal square root (branch cut on the negative real axis).
Complex sqrt(const Complex& z);
Complex pow(const Complex& z, long n);

/// out = a * b using caller-provided scratch to avoid allocation; out may alias a or b.
struct ComplexScratch {
  explicit ComplexScratch(Precision prec) : t1(0L, prec), t2(0L, prec) {}
  Real t1, t2;
};
void mul_into(Complex& out, const Complex& a, const Complex& b, ComplexScratch& s);

}  // namespace tcm
