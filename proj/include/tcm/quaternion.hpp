#pragma once

// The quaternion algebra B = (a,b / F) over F = Q(sqrt5), its 2x2 embedding,
// the maximal-order basis BG1..BG4, and the Takeuchi (a,b) formulas.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tcm/bigfloat.hpp"
#include "tcm/exactfield.hpp"
#include "tcm/hyperbolic.hpp"

namespace tcm {

/// Sorted exponents; kInfinity (0) stands for infinity and sorts last.
struct TriangleSignature {
  std::array<long, 3> e{};

  TriangleSignature() = default;
  TriangleSignature(long e1, long e2, long e3);
  /// "(2,3,inf)" or "2,3,inf".
  static TriangleSignature parse(std::string_view text);

  bool is_hyperbolic() const;
  std::string to_string() const;
  friend bool operator==(const TriangleSignature&, const TriangleSignature&) = default;
};

struct QuaternionAlgebra {
  QuadRat a;
  QuadRat b;

  /// (-3, sqrt5), the class VIII table entry.
  static QuaternionAlgebra tabulated();
  /// (-sqrt5*wbar, wbar), recovered from the generator matrices.
  static QuaternionAlgebra calibrated();

  /// a < 0 < b under the identity embedding and a, b both negative under the conjugate one.
  bool satisfies_cd() const;
  friend bool operator==(const QuaternionAlgebra&, const QuaternionAlgebra&) = default;
};

/// x1*M1 + x2*Mx + x3*My + x4*Mz.
struct QuatElem {
  std::array<QuadRat, 4> x{QuadRat(0), QuadRat(0), QuadRat(0), QuadRat(0)};

  QuatElem() = default;
  QuatElem(QuadRat x1, QuadRat x2, QuadRat x3, QuadRat x4) : x{std::move(x1), std::move(x2), std::move(x3), std::move(x4)} {}
  static QuatElem one() { return {QuadRat(1), QuadRat(0), QuadRat(0), QuadRat(0)}; }
  static QuatElem mx() { return {QuadRat(0), QuadRat(1), QuadRat(0), QuadRat(0)}; }
  static QuatElem my() { return {QuadRat(0), QuadRat(0), QuadRat(1), QuadRat(0)}; }
  static QuatElem mz() { return {QuadRat(0), QuadRat(0), QuadRat(0), QuadRat(1)}; }
  /// Four comma-separated field elements.
  static QuatElem parse(std::string_view text);

  const QuadRat& operator[](int i) const { return x[i]; }
  QuadRat& operator[](int i) { return x[i]; }
  bool is_integral() const;
  std::string to_string() const;

  friend QuatElem operator+(const QuatElem& u, const QuatElem& v);
  friend QuatElem operator-(const QuatElem& u, const QuatElem& v);
  friend QuatElem operator*(const QuadRat& s, const QuatElem& u);
  friend bool operator==(const QuatElem&, const QuatElem&) = default;
};

QuatElem quat_mul(const QuaternionAlgebra& alg, const QuatElem& x, const QuatElem& y);
QuatElem quat_conj(const QuatElem& x);
/// (Trd, Nrd).
std::pair<QuadRat, QuadRat> trd_nrd(const QuaternionAlgebra& alg, const QuatElem& x);
/// x1 I + x2 [[0,a],[1,0]] + x3 diag(sqrt b, -sqrt b) + x4 Mx My, with sqrt b > 0.
Mat2C embed_matrix(const QuaternionAlgebra& alg, const QuatElem& x, Precision prec);

struct OrderBasis {
  std::array<QuatElem, 4> bg;
  bool calibrated = false;
  QuaternionAlgebra algebra;
};

/// BG1 = M1, BG2 = M1 + (w/2)My + (1/2)Mz, BG3 = (1/2 - w/2)M1 + (w/2)Mx, BG4 = M1 + w My.
std::array<QuatElem, 4> printed_basis_coordinates();
/// The printed coordinates over the tabulated algebra; calibrated = false.
OrderBasis printed_order_basis();
/// The basis that passes the integrity checks, calibrating the algebra when the
/// printed one fails. Throws Error(CalibrationFailed).
OrderBasis order_basis();

/// Recovers (a, b) from the transported generator matrices h34 and rot_Vc.
/// Throws Error(CalibrationFailed).
QuaternionAlgebra calibrate_algebra(Precision prec = 256);

/// c with x = sum c_i BG_i; throws Error(SingularBasis).
std::array<QuadRat, 4> order_coords(const QuatElem& x, const OrderBasis& basis);
QuatElem from_order_coords(const std::array<QuadRat, 4>& c, const OrderBasis& basis);
/// det(Trd(BG_i BG_j)).
QuadRat gram_trace_det(const OrderBasis& basis);
/// Every BG_i BG_j has O_F-integral coordinates.
bool is_closed_order(const OrderBasis& basis);

// ------------------------------------------------------------------ Takeuchi

struct TakeuchiClass {
  std::string name;  // roman numeral
  std::string field;
  std::string disc;
  std::string norm1, unit, normalizer;
  std::string a_expr, b_expr;
  std::optional<std::string> b_as_printed;
  std::vector<TriangleSignature> members;
};

const std::vector<TakeuchiClass>& takeuchi_table();
/// The class whose member list contains sig, if any.
const TakeuchiClass* takeuchi_class_of(const TriangleSignature& sig);

struct TakeuchiAB {
  std::optional<QuadRat> a_exact, b_exact;
  Real a, b;
  const TakeuchiClass* row = nullptr;
};

/// a = t2^2(t2^2 - 4), b = t2^2 t3^2 (t1^2 + t2^2 + t3^2 + t1 t2 t3 - 4), t = 2cos(pi/e).
/// Throws Error(NotArithmetic).
TakeuchiAB takeuchi_ab(const TriangleSignature& sig, Precision prec = 128);

/// Evaluates a table expression: numbers, sqrt, cos, pi, + - * / ^ and parentheses.
Real eval_expression(std::string_view text, Precision prec);

}  // namespace tcm
