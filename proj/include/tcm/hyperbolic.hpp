#pragma once

// 2x2 complex matrices acting by Moebius transformations on the period disc
// D = {u : |u|^2 < -w} and on the upper half-plane H, the named group
// elements of the (3,3,5) triangle group, and the transport D <-> H.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tcm/bigfloat.hpp"
#include "tcm/exactfield.hpp"

namespace tcm {

/// Marker for an infinite triangle exponent.
inline constexpr long kInfinity = 0;

class Mat2C {
 public:
  Mat2C() = default;
  Mat2C(Complex a, Complex b, Complex c, Complex d) : e_{std::move(a), std::move(b), std::move(c), std::move(d)} {}
  static Mat2C identity(Precision prec);
  static Mat2C diagonal(const Complex& a, const Complex& d);

  const Complex& a() const { return e_[0]; }
  const Complex& b() const { return e_[1]; }
  const Complex& c() const { return e_[2]; }
  const Complex& d() const { return e_[3]; }
  /// Row-major entry (i, j), 0-based.
  const Complex& at(int i, int j) const { return e_[2 * i + j]; }
  Complex& at(int i, int j) { return e_[2 * i + j]; }
  Precision precision() const { return e_[0].precision(); }

  Complex det() const;
  Complex trace() const;
  Mat2C inverse() const;
  /// Divides by a square root of the determinant.
  Mat2C normalized() const;
  /// Largest entry modulus.
  Real max_abs() const;

  Mat2C& operator*=(const Mat2C& o);
  friend Mat2C operator*(Mat2C x, const Mat2C& y) { return x *= y; }
  friend Mat2C operator*(const Complex& s, const Mat2C& m);
  friend Mat2C operator+(const Mat2C& x, const Mat2C& y);
  friend Mat2C operator-(const Mat2C& x, const Mat2C& y);

  std::string to_string(int digits = 20) const;

 private:
  std::array<Complex, 4> e_;
};

Mat2C pow(const Mat2C& m, long n);
/// Entrywise |x - y| < tol * max(1, max|x|).
bool approx_equal(const Mat2C& x, const Mat2C& y, const Real& tol);
/// Equality up to a nonzero complex scalar, after normalizing the largest entry of x to 1.
bool projectively_equal(const Mat2C& x, const Mat2C& y, const Real& tol);
/// Default comparison tolerance 2^(-prec/2).
Real matrix_tolerance(Precision prec);

enum class Domain { Disc, HalfPlane };

struct Point {
  Complex value;
  Domain domain = Domain::Disc;
};

/// -w = (sqrt5 - 1)/2, the squared radius of D.
Real disc_radius_squared(Precision prec);
/// Strict membership with the given safety margin.
bool in_domain(const Complex& z, Domain domain, const Real& margin);

/// (a z + b)/(c z + d); throws Error(PoleHit) when c z + d vanishes within tolerance.
Complex mobius_act(const Mat2C& m, const Complex& z);
Point mobius_act(const Mat2C& m, const Point& z);

enum class Provenance {
  Printed,        // closed form exactly as displayed
  Composed,       // product of printed matrices as prescribed
  Reconstructed,  // printed form fails its checks; replaced by a verified equivalent
};

struct NamedMatrix {
  std::string name;
  Provenance provenance;
  Domain frame;
  std::string note;
};

/// The names accepted by builtin_matrix.
const std::vector<NamedMatrix>& builtin_catalog();
const NamedMatrix& builtin_info(std::string_view name);
/// Throws Error(UnknownName).
Mat2C builtin_matrix(std::string_view name, Precision prec);
/// The displayed closed form for names whose builtin value is reconstructed
/// (h45, hn45, th34, thn45); std::nullopt otherwise.
std::optional<Mat2C> printed_matrix(std::string_view name, Precision prec);

enum class Direction { DtoH, HtoD };
/// DtoH: M_hd m M_hd^-1; HtoD: M_hd^-1 m M_hd.
Mat2C transport(const Mat2C& m, Direction direction);

/// Roots of c z^2 + (d - a) z - b = 0 strictly inside the domain (margin 2^(-prec/4)).
/// Throws Error(ScalarMatrix) for scalar m and Error(NoInteriorRoot) if both roots qualify.
std::vector<Point> fixed_points(const Mat2C& m, Domain domain);

struct HGEParams {
  Rational a, b, c;
};
struct ExponentTriple {
  long p, q, r;  // kInfinity for infinity
};
/// p = 1/|1-c|, q = 1/|c-a-b|, r = 1/|a-b|; throws Error(ConditionStarViolated).
ExponentTriple pqr_from_abc(const HGEParams& params);

/// Least n <= 120 with m^n scalar; throws Error(NotElliptic) or Error(OrderOverflow).
long order_of_elliptic(const Mat2C& m);

}  // namespace tcm
