#include "doctest.h"

#include <random>

#include "tcm/errors.hpp"
#include "tcm/hyperbolic.hpp"
#include "tcm/theta.hpp"

using namespace tcm;

namespace {

constexpr Precision kPrec = 128;

PrecisionContext ctx(Precision prec = kPrec) { return PrecisionContext::with_bits(prec); }

Real w_value(Precision prec) { return (Real(1L, prec) - sqrt(Real(5L, prec))) / 2L; }

Complex random_point(std::mt19937_64& rng, double radius, Precision prec = kPrec) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (;;) {
    double x = d(rng) * radius, y = d(rng) * radius;
    if (x * x + y * y <= radius * radius) return Complex(Real(x, prec), Real(y, prec));
  }
}

Real rel_err(const Complex& x, const Complex& y) { return abs(x - y) / max(Real(1L, x.precision()), abs(y)); }

SiegelPoint scalar_point(const Complex& diag) {
  SiegelPoint s;
  Precision p = diag.precision();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s(i, j) = i == j ? diag : Complex(p);
  return s;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an exception");
  return ErrorKind::Parse;
}

}  // namespace

TEST_CASE("omega_of") {
  SiegelPoint o = omega_of(Complex(kPrec), ctx());
  for (auto [i, j] : {std::pair{0, 1}, {1, 2}, {0, 3}, {2, 3}}) CHECK(abs(o(i, j)).is_zero());
  CHECK(!abs(o(0, 0)).is_zero());

  SiegelPoint p = omega_of(Complex(Real(-0.2, kPrec), Real(-0.07, kPrec)), ctx());
  CHECK(p.has_positive_imaginary_part());
  CHECK(p.min_imaginary_eigenvalue() > 0);

  std::mt19937_64 rng(41);
  for (int k = 0; k < 20; ++k) {
    SiegelPoint s = omega_of(random_point(rng, 0.75), ctx());
    CHECK(s.is_symmetric(matrix_tolerance(kPrec)));
    CHECK(s.has_positive_imaginary_part());
  }

  CHECK(kind_of([] { omega_of(Complex(Real(0.8, kPrec), Real(0L, kPrec)), ctx()); }) == ErrorKind::DomainViolation);
  CHECK(kind_of([] { omega_of(Complex(Real(0L, kPrec), Real(-0.79, kPrec)), ctx()); }) == ErrorKind::DomainViolation);
}

TEST_CASE("min_imaginary_eigenvalue") {
  SiegelPoint s = scalar_point(Complex(Real(0L, kPrec), Real(3L, kPrec)));
  s(0, 1) = s(1, 0) = Complex(Real(0L, kPrec), Real(1L, kPrec));
  // Im block [[3,1],[1,3]] has eigenvalues 2 and 4.
  CHECK(abs(s.min_imaginary_eigenvalue() - 2L) < epsilon_bits(100, kPrec));
}

TEST_CASE("theta_const: zero characteristic at i*I") {
  Precision prec = 256;
  SiegelPoint s = scalar_point(Complex::i(prec));
  Complex t = theta_const(ThetaCharacteristic::zero(), s, ctx(prec));
  Real one_dim(1L, prec);
  Real pi = Real::pi(prec);
  for (long n = 1; n <= 20; ++n) one_dim += 2L * exp(-pi * Real(n * n, prec));
  Real expect = pow(one_dim, 4);
  CHECK(abs(t - Complex(expect)) / expect < Real(1e-30, prec));
  CHECK(abs(t.im()) < Real(1e-30, prec));
}

TEST_CASE("theta_const: integer shifts of the characteristic") {
  std::mt19937_64 rng(43);
  SiegelPoint o = omega_of(random_point(rng, 0.5), ctx());
  Real pi = Real::pi(kPrec);
  for (const auto& base : {ThetaCharacteristic::a11(), ThetaCharacteristic::a19()}) {
    Complex t = theta_const(base, o, ctx());
    std::uniform_int_distribution<long> d(-2, 2);
    for (int k = 0; k < 4; ++k) {
      ThetaCharacteristic sh = base;
      Rational dot = 0;
      for (int i = 0; i < 4; ++i) {
        long m = d(rng), n = d(rng);
        sh.a[i] += m;
        sh.b[i] += n;
        dot += base.a[i] * n;
      }
      Complex phase = Complex::polar(Real(1L, kPrec), 2L * pi * Real::from_rational(dot, kPrec));
      CHECK(rel_err(theta_const(sh, o, ctx()), phase * t) < epsilon_bits(100, kPrec));
    }
  }
}

TEST_CASE("theta_const: truncation stability and continuity") {
  std::mt19937_64 rng(47);
  SiegelPoint o = omega_of(random_point(rng, 0.6), ctx());
  PrecisionContext c = ctx();
  long R = truncation_radius(o, ThetaCharacteristic::a11(), kPrec);
  Complex t = theta_const(ThetaCharacteristic::a11(), o, c);
  c.radius = 2 * R;
  Complex t2 = theta_const(ThetaCharacteristic::a11(), o, c);
  CHECK(abs(t - t2) < ctx().tolerance());

  SiegelPoint q = o;
  Real eps = matrix_tolerance(kPrec);
  q(1, 2) += Complex(eps);
  q(2, 1) = q(1, 2);
  Complex tq = theta_const(ThetaCharacteristic::a11(), q, ctx());
  CHECK(abs(tq - t) < eps * 1000L);
  CHECK(abs(tq - t) > 0);

  PrecisionContext tight = ctx();
  tight.max_radius = 3;
  CHECK(kind_of([&] { theta_const(ThetaCharacteristic::a11(), o, tight); }) == ErrorKind::TruncationBudgetExceeded);
}

TEST_CASE("lambda_of: special values") {
  Precision p = kPrec;
  Real tol(1e-20, p);
  LambdaValue l0 = lambda_of(Complex(p), ctx());
  CHECK(!l0.infinite);
  CHECK(abs(l0.value - Complex(1L, p)) < tol);

  Real w = w_value(p);
  LambdaValue lw = lambda_of(Complex(w), ctx());
  CHECK(lw.infinite);
  CHECK(abs(lw.inverse) < tol);
  CHECK(abs(lw.theta19) < tol);

  // The zero of lambda sits at w e^{-i pi/5}; w e^{-2 pi i/5} = h34^{-1}(w) is a pole.
  LambdaValue lz = lambda_of(Complex(w) * Complex::unit_root(-1, 10, p), ctx());
  CHECK(!lz.infinite);
  CHECK(abs(lz.value) < tol);
  LambdaValue lp = lambda_of(Complex(w) * Complex::unit_root(-1, 5, p), ctx());
  CHECK(lp.infinite);
}

TEST_CASE("lambda_of: invariance under the (5,5,5) generators") {
  std::mt19937_64 rng(53);
  for (const char* name : {"h34", "hn45", "hn412"}) {
    Mat2C g = builtin_matrix(name, kPrec);
    for (int k = 0; k < 5; ++k) {
      INFO(name);
      Complex u = random_point(rng, 0.35);
      Complex gu = mobius_act(g, u);
      LambdaValue a = lambda_of(u, ctx()), b = lambda_of(gu, ctx());
      REQUIRE(!a.infinite);
      CHECK(rel_err(b.value, a.value) < matrix_tolerance(kPrec));
    }
  }
}

TEST_CASE("Phi o lambda is invariant under rot_Vc") {
  std::mt19937_64 rng(59);
  Mat2C r = builtin_matrix("rotvc", kPrec);
  for (int k = 0; k < 5; ++k) {
    Complex u = random_point(rng, 0.3);
    Complex ru = mobius_act(r, u);
    Complex a = big_phi(lambda_of(u, ctx()));
    Complex b = big_phi(lambda_of(ru, ctx()));
    CHECK(rel_err(b, a) < matrix_tolerance(kPrec));
  }
}

TEST_CASE("big_phi") {
  Precision p = kPrec;
  Complex z = Complex::unit_root(1, 6, p);
  CHECK(abs(big_phi(z) - z) < epsilon_bits(120, p));
  CHECK(abs(big_phi(Complex(2L, p)) - Complex(Real(0.5, p))) < epsilon_bits(120, p));

  std::mt19937_64 rng(61);
  for (int k = 0; k < 50; ++k) {
    Complex l = random_point(rng, 3.0, p);
    if (abs(l) < Real(0.01, p) || abs(l - Complex(1L, p)) < Real(0.01, p)) continue;
    Complex l2 = Complex(1L, p) / (Complex(1L, p) - l);
    CHECK(rel_err(big_phi(l2), big_phi(l)) < epsilon_bits(100, p));
  }

  CHECK(kind_of([&] { big_phi(Complex(p)); }) == ErrorKind::PoleAtLambda);
  CHECK(kind_of([&] { big_phi(Complex(1L, p)); }) == ErrorKind::PoleAtLambda);
  LambdaValue inf;
  inf.infinite = true;
  CHECK(kind_of([&] { big_phi(inf); }) == ErrorKind::PoleAtLambda);
}

TEST_CASE("phi at the order-3 vertex") {
  Mat2C r = builtin_matrix("rotvc", kPrec);
  auto fp = fixed_points(r, Domain::Disc);
  REQUIRE(fp.size() == 1);
  PhiValues v = phi_values(fp[0].value, ctx());
  Complex one(1L, kPrec);
  CHECK((abs(v.phi - one) < Real(1e-15, kPrec) || abs(v.phi + one) < Real(1e-15, kPrec)));
  Complex s3 = Complex(Real(0L, kPrec), sqrt(Real(3L, kPrec)));
  CHECK(abs(v.phi_tilde - s3 * v.phi / 2L) < epsilon_bits(100, kPrec));
}

TEST_CASE("phi~ and phi at the example fixed points") {
  // Six-digit fixed point of the sqrt(-7) generator.
  Complex u1 = Complex::parse("-0.205396,-0.0667372", kPrec);
  Complex t = phi_tilde_of(u1, ctx());
  CHECK(abs(t * t + Complex(Real::from_rational(Rational(2527, 36), kPrec))) < Real(1e-3, kPrec));

  Precision p = 256;
  Complex u3 = Complex::parse(
      "-0.2884031937082062430429292960544310724595352385781433875628704276940,"
      "0.2095371854415799547791501532228242020959121464954639149713389790753",
      p);
  Complex phi = phi_of(u3, ctx(p));
  Real printed = Real::parse("-0.16717727965490681624739779831313980904", p);
  Real exact = -Real::from_rational(Rational(13 * 29 * 29 * 79 * 79, 256L * 1594323L), p);
  CHECK(abs((phi * phi).re() - printed) < Real(1e-36, p));
  CHECK(abs((phi * phi).re() - exact) < Real(1e-40, p));
  CHECK(abs((phi * phi).im()) < Real(1e-40, p));
}
