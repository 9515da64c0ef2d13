#pragma once

// Exact arithmetic in Q and in F = Q(sqrt 5), written in the basis {1, w}
// with w = (1 - sqrt 5)/2. The ring of integers of F is exactly Z + Z w.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <gmpxx.h>

#include "tcm/bigfloat.hpp"

namespace tcm {

using Integer = mpz_class;
/// Always canonical: gcd(|num|, den) = 1, den >= 1.
using Rational = mpq_class;

Rational make_rational(const Integer& num, const Integer& den);
std::string to_string(const Rational& r);
/// Accepts "p", "-p/q"; throws Error(Parse).
Rational parse_rational(std::string_view text);
bool is_integer(const Rational& r);

/// p + q w, w^2 = w + 1.
class QuadRat {
 public:
  QuadRat() = default;
  QuadRat(Rational p, Rational q = 0) : p_(std::move(p)), q_(std::move(q)) {}
  QuadRat(long p) : p_(p), q_(0) {}  // NOLINT: integers embed implicitly

  static QuadRat w() { return QuadRat(0, 1); }
  /// w-bar = 1 - w = (1 + sqrt 5)/2.
  static QuadRat wbar() { return QuadRat(1, -1); }
  /// sqrt 5 = 1 - 2w.
  static QuadRat sqrt5() { return QuadRat(1, -2); }
  /// r + s sqrt 5.
  static QuadRat from_sqrt5_basis(const Rational& r, const Rational& s);
  /// Parses the canonical text form, e.g. "7", "6 - 2*w", "1/2 + 3/4*w"; throws Error(Parse).
  static QuadRat parse(std::string_view text);

  const Rational& p() const { return p_; }
  const Rational& q() const { return q_; }

  bool is_zero() const { return p_ == 0 && q_ == 0; }
  bool is_rational() const { return q_ == 0; }
  /// Membership in O_F = Z[w].
  bool is_integral() const { return is_integer(p_) && is_integer(q_); }

  QuadRat& operator+=(const QuadRat& o);
  QuadRat& operator-=(const QuadRat& o);
  QuadRat& operator*=(const QuadRat& o);
  QuadRat& operator/=(const QuadRat& o);
  QuadRat operator-() const { return QuadRat(-p_, -q_); }

  friend QuadRat operator+(QuadRat a, const QuadRat& b) { return a += b; }
  friend QuadRat operator-(QuadRat a, const QuadRat& b) { return a -= b; }
  friend QuadRat operator*(QuadRat a, const QuadRat& b) { return a *= b; }
  friend QuadRat operator/(QuadRat a, const QuadRat& b) { return a /= b; }
  friend bool operator==(const QuadRat& a, const QuadRat& b) { return a.p_ == b.p_ && a.q_ == b.q_; }

  /// Canonical text: "p/q + r/s*w" with zero terms dropped.
  std::string to_string() const;

 private:
  Rational p_{0};
  Rational q_{0};
};

enum class Embedding { Identity, Conjugate };

QuadRat qs_mul(const QuadRat& x, const QuadRat& y);
/// Galois conjugation w -> 1 - w.
QuadRat qs_conj(const QuadRat& x);
/// (N_{F/Q}(x), Tr_{F/Q}(x)).
std::pair<Rational, Rational> qs_norm_trace(const QuadRat& x);
/// Real value of x under one of the two embeddings; identity sends w to (1 - sqrt 5)/2.
Real qs_embed_real(const QuadRat& x, Embedding which, Precision prec);
/// Both embeddings are strictly positive.
bool is_totally_positive(const QuadRat& x);
/// y in F with y^2 = x, if one exists.
std::optional<QuadRat> qs_sqrt(const QuadRat& x);
std::optional<Rational> rational_sqrt(const Rational& x);

struct FactoredRational {
  int sign = 1;
  /// prime -> exponent; negative exponents are denominator primes.
  std::map<Integer, long> factors;

  Rational value() const;
  /// e.g. "-1 * 7 * 19^2 * 2^-2 * 3^-2"
  std::string to_string() const;
};

/// Trial division up to 10^6, then Pollard rho with Miller-Rabin.
/// Throws Error(NonzeroRequired) for 0 and Error(FactorizationTooLarge) when a
/// cofactor left after trial division exceeds 2^128.
FactoredRational factor_rational(const Rational& r);

struct SquarefreeSplit {
  Integer kernel;   // squarefree, carries the sign
  Rational square;  // r = kernel * square^2, square > 0
};
SquarefreeSplit squarefree_split(const Rational& r);

bool is_probable_prime(const Integer& n);

}  // namespace tcm
