#pragma once

// CM points of the (3,3,5) unit group: generator search in the maximal order,
// fixed points, singular values and recognition of exact outputs.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "tcm/bigfloat.hpp"
#include "tcm/exactfield.hpp"
#include "tcm/hyperbolic.hpp"
#include "tcm/quaternion.hpp"
#include "tcm/theta.hpp"

namespace tcm {

/// M = F(sqrt(-delta)).
struct CMParameter {
  QuadRat delta;

  /// Throws Error(DomainViolation) unless delta is totally positive.
  static CMParameter make(const QuadRat& delta);
};

struct CMEmbedding {
  /// O_F coefficients over the order basis.
  std::array<QuadRat, 4> coords;
  QuatElem element;
  Mat2C matrix;
  Point fixed_point;

  /// p1, q1, ..., p4, q4 with coords[i] = p + q w.
  std::array<long, 8> integers() const;
  std::string to_string() const;
};

/// Builds the embedding for explicit order coordinates at the given precision.
/// Throws Error(NoInteriorRoot) when the element has no fixed point in D.
CMEmbedding make_embedding(const std::array<QuadRat, 4>& coords, Precision prec);

/// All G = sum c_i BG_i with c_i = p + q w, |p|, |q| <= bound, Trd G = 0, Nrd G = delta,
/// one representative per pair +-G, in lexicographic order of the integer vector.
std::vector<CMEmbedding> search_generators(const CMParameter& delta, long bound, Precision prec = 128);

/// Fixed point in D of the transported embedding, recomputed at ctx.prec.
Point fixed_point_of(const CMEmbedding& g, const PrecisionContext& ctx);

struct SingularValue {
  Complex phi, phi_tilde, phi2, phi_tilde2;
  /// Point actually fed to the theta series (an orbit point closer to 0).
  Complex evaluated_at;
};

/// Moves u towards the origin with h34, hn45, hn412, rot_Vc and their inverses.
Complex reduce_towards_origin(const Complex& u);

SingularValue singular_value(const Complex& u0, const PrecisionContext& ctx);
SingularValue singular_value(const CMEmbedding& g, const PrecisionContext& ctx);

struct RationalRecognition {
  Rational value;
  /// Partial quotients of the accepted convergent.
  std::vector<Integer> partial_quotients;
  /// The quotient that triggered the cut, absent when the expansion ran out.
  std::optional<Integer> cut_quotient;
};

inline const Integer kDefaultThreshold{"1000000000000"};
inline constexpr int kMaxContinuedFractionTerms = 200;

std::optional<RationalRecognition> recognize_rational(const Real& x, const Integer& threshold = kDefaultThreshold,
                                                      int max_terms = kMaxContinuedFractionTerms);

struct MinimalPolynomial {
  /// Monic, constant term first.
  std::vector<Rational> rational;
  /// rational times the LCM of its denominators.
  std::vector<Integer> integral;
};

/// prod (t - scale v) over the values. Throws Error(RecognitionFailed).
MinimalPolynomial min_poly_from_values(const std::vector<Complex>& values, const Rational& scale,
                                       const Integer& threshold = kDefaultThreshold);

/// Y = c / (alpha t + beta) when reciprocal, else Y = c (alpha t + beta).
struct Substitution {
  bool reciprocal = true;
  Rational alpha{1};
  Rational beta{0};

  std::string describe(const Rational& c) const;
};

struct IntegralModel {
  Rational scale;
  Substitution substitution;
  /// Monic, constant term first.
  std::vector<Integer> coeffs;
  Integer discriminant;
};

/// Throws Error(NotClearable) when the substituted polynomial is not integral.
IntegralModel integral_model(const std::vector<Rational>& poly, const Rational& c, const Substitution& sub = {});
/// Smallest c built from primes of the coefficients (exponents <= 12) that clears the model.
IntegralModel integral_model_search(const std::vector<Rational>& poly, const Substitution& sub = {});

/// Constant term first.
Integer discriminant(const std::vector<Integer>& poly);
/// Durand-Kerner; constant term first.
std::vector<Complex> polynomial_roots(const std::vector<Rational>& poly, Precision prec);

/// Exact: sqrt(m) lies in F(sqrt(-delta)) iff m or -delta m is a square in F.
bool sqrt_in_cm_field(const Rational& m, const QuadRat& delta);

/// x^2 - trd x + nrd = 0 generates F(sqrt(-delta)): trd^2 - 4 nrd is -delta times a square in F.
bool generates_cm_field(const QuadRat& trd, const QuadRat& nrd, const QuadRat& delta);

struct ClassFieldConfig {
  PrecisionContext ctx = PrecisionContext::with_bits(256);
  long bound = 8;
  Integer threshold = kDefaultThreshold;
  int degree = 1;
  Rational scale{1};
  std::optional<Rational> model_scale;
  Substitution substitution;
  /// Explicit generators, any trace; the search runs when empty.
  std::vector<std::array<QuadRat, 4>> generators;
};

struct ClassFieldReport {
  QuadRat delta;
  std::vector<CMEmbedding> embeddings;
  /// Index into embeddings of the generators whose singular values were used.
  std::vector<std::size_t> used;
  std::vector<SingularValue> values;
  Precision prec = 0;
  std::optional<RationalRecognition> phi2, phi_tilde2;
  std::optional<Integer> kernel;
  std::optional<MinimalPolynomial> min_poly;
  std::optional<IntegralModel> model;
  std::string description;
};

/// Throws Error(NothingRecognized) or propagates evaluation errors.
ClassFieldReport class_field_report(const CMParameter& delta, const ClassFieldConfig& config);

nlohmann::json to_json(const ClassFieldReport& report);
nlohmann::json rational_json(const Rational& r);

struct TriangleClassRecord {
  int id;
  TriangleSignature signature;
  std::string field;
  std::string cm_field;
  /// Exact rho where it lies in F, otherwise only the tag.
  std::optional<QuadRat> rho;
  std::string rho_tag;
};

const std::vector<TriangleClassRecord>& triangle_class_records();

}  // namespace tcm
