#include "tcm/theta.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "tcm/errors.hpp"

namespace tcm {

namespace {

constexpr Precision kThetaGuardBits = 40;

Real im_entry(const SiegelPoint& s, int i, int j) { return s(i, j).im(); }

Real leading_minor(const SiegelPoint& s, int k) {
  // Gaussian elimination on the leading k x k block of Im(Omega).
  std::vector<std::vector<Real>> m;
  for (int i = 0; i < k; ++i) {
    m.emplace_back();
    for (int j = 0; j < k; ++j) m.back().push_back(im_entry(s, i, j));
  }
  Real det(1L, s.precision());
  for (int c = 0; c < k; ++c) {
    if (m[c][c].is_zero()) return Real(0L, s.precision());
    det *= m[c][c];
    for (int r = c + 1; r < k; ++r) {
      Real f = m[r][c] / m[c][c];
      for (int j = c; j < k; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return det;
}

Rational reduce_half(const Rational& a) {
  Rational shifted = a + Rational(1, 2);
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  Rational r = a - Rational(fl);
  r.canonicalize();
  return r;
}

std::array<Rational, 4> reduced_a(const ThetaCharacteristic& ch) {
  std::array<Rational, 4> out;
  for (int i = 0; i < 4; ++i) out[i] = reduce_half(ch.a[i]);
  return out;
}

double max_abs(const std::array<Rational, 4>& a) {
  double m = 0;
  for (const auto& v : a) m = std::max(m, std::fabs(v.get_d()));
  return m;
}

}  // namespace

// ------------------------------------------------------------ SiegelPoint

bool SiegelPoint::is_symmetric(const Real& tol) const {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
  return true;
}

bool SiegelPoint::has_positive_imaginary_part() const {
  for (int k = 1; k <= 4; ++k)
    if (leading_minor(*this, k).sign() <= 0) return false;
  return true;
}

Real SiegelPoint::min_imaginary_eigenvalue() const {
  Precision p = precision();
  std::array<std::array<Real, 4>, 4> m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i][j] = (im_entry(*this, i, j) + im_entry(*this, j, i)) / 2L;
  Real eps = epsilon_bits(p - 4, p);
  for (int sweep = 0; sweep < 64; ++sweep) {
    Real off(0L, p), diag(0L, p);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) (i == j ? diag : off) += m[i][j] * m[i][j];
    if (off <= eps * eps * diag) break;
    for (int pi = 0; pi < 3; ++pi) {
      for (int q = pi + 1; q < 4; ++q) {
        if (m[pi][q].is_zero()) continue;
        Real theta = (m[q][q] - m[pi][pi]) / (2L * m[pi][q]);
        Real t = Real(theta.sign() >= 0 ? 1L : -1L, p) / (abs(theta) + sqrt(theta * theta + 1L));
        Real c = Real(1L, p) / sqrt(t * t + 1L), s = t * c;
        for (int k = 0; k < 4; ++k) {
          Real mkp = m[k][pi], mkq = m[k][q];
          m[k][pi] = c * mkp - s * mkq;
          m[k][q] = s * mkp + c * mkq;
        }
        for (int k = 0; k < 4; ++k) {
          Real mpk = m[pi][k], mqk = m[q][k];
          m[pi][k] = c * mpk - s * mqk;
          m[q][k] = s * mpk + c * mqk;
        }
      }
    }
  }
  Real best = m[0][0];
  for (int i = 1; i < 4; ++i) best = min(best, m[i][i]);
  return best;
}

// ----------------------------------------------------- characteristics

ThetaCharacteristic ThetaCharacteristic::zero() { return {{0, 0, 0, 0}, {0, 0, 0, 0}}; }

ThetaCharacteristic ThetaCharacteristic::a11() {
  auto r = [](long n) { return Rational(n, 10); };
  ThetaCharacteristic c{{r(1), r(1), r(1), r(1)}, {r(-2), r(-2), r(-1), r(-1)}};
  for (auto& v : c.a) v.canonicalize();
  for (auto& v : c.b) v.canonicalize();
  return c;
}

ThetaCharacteristic ThetaCharacteristic::a19() {
  auto r = [](long n) { return Rational(n, 10); };
  ThetaCharacteristic c{{r(1), r(9), r(1), r(9)}, {r(-2), r(-8), r(-1), r(-9)}};
  for (auto& v : c.a) v.canonicalize();
  for (auto& v : c.b) v.canonicalize();
  return c;
}

Real PrecisionContext::tolerance() const { return epsilon_bits(prec - 8, prec); }

// ---------------------------------------------------------------- Omega

SiegelPoint omega_of(const Complex& u, const PrecisionContext& ctx) {
  Precision wp = ctx.prec + 32;
  Complex z = u;
  z.set_precision(wp);
  if (norm(z) >= disc_radius_squared(wp)) throw Error(ErrorKind::DomainViolation, "u = " + u.to_string(12) + " is outside the disc");

  auto e5 = [&](long k) { return Complex::unit_root(k, 5, wp); };
  Complex one(1L, wp);
  Complex u2 = z * z;
  Complex den = u2 - (one + e5(1)) * e5(-2);
  if (abs(den) < epsilon_bits(ctx.prec / 2, wp)) throw Error(ErrorKind::DegenerateDenominator, "leading factor of Omega(u) vanishes");

  SiegelPoint s;
  auto set = [&](int i, int j, const Complex& v) {
    s(i, j) = v / den;
    s(j, i) = s(i, j);
  };
  set(0, 0, (e5(-2) - one) * (u2 + one));
  set(0, 1, (one - e5(2)) * z);
  set(1, 1, (e5(2) - one) * (u2 - e5(-2)));
  set(0, 2, e5(-2) * ((one + e5(1)) * u2 + one));
  set(1, 2, (one - e5(-2)) * z);
  set(0, 3, (e5(-2) - e5(1)) * z);
  set(1, 3, (e5(1) + e5(2)) * (u2 - e5(-2) * (one + e5(2))));
  set(2, 2, -e5(2) * (u2 - (one + e5(1))));
  set(2, 3, (e5(-1) - e5(1)) * z);
  set(3, 3, -e5(-2) * (u2 - (one + e5(-1))));
  for (auto& v : s.omega) v.set_precision(ctx.prec);

  if (!s.has_positive_imaginary_part()) throw Error(ErrorKind::DomainViolation, "Im Omega(u) is not positive definite");
  return s;
}

// ---------------------------------------------------------------- theta

long truncation_radius(const SiegelPoint& omega, const ThetaCharacteristic& ch, Precision prec) {
  double lam = omega.min_imaginary_eigenvalue().to_double();
  if (!(lam > 0)) throw Error(ErrorKind::DomainViolation, "Im Omega is not positive definite");
  double r = std::sqrt((static_cast<double>(prec) * std::log(2.0) + 16.0) / (M_PI * lam));
  return static_cast<long>(std::ceil(r + 1.0 + max_abs(reduced_a(ch))));
}

Complex theta_const(const ThetaCharacteristic& ch, const SiegelPoint& omega, const PrecisionContext& ctx) {
  long R = ctx.radius > 0 ? ctx.radius : truncation_radius(omega, ch, ctx.prec);
  if (R > ctx.max_radius)
    throw Error(ErrorKind::TruncationBudgetExceeded,
                "truncation radius " + std::to_string(R) + " exceeds the budget " + std::to_string(ctx.max_radius));

  Precision wp = ctx.prec + kThetaGuardBits;
  std::array<Rational, 4> a = reduced_a(ch);
  double amax = max_abs(a);

  // Enumeration bounds in double precision: v'Yv = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2.
  double Y[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) Y[i][j] = 0.5 * (omega(i, j).im().to_double() + omega(j, i).im().to_double());
  double lam = omega.min_imaginary_eigenvalue().to_double();
  double rr = std::max(0.0, static_cast<double>(R) - 1.0 - amax);
  double budget = lam * rr * rr * (1.0 + 1e-9) + 1e-12;

  double q[4][4] = {};
  {
    // Upper Cholesky factor U with Y = U'U, then q_ii = U_ii^2 and q_ij = U_ij / U_ii.
    double U[4][4] = {};
    for (int i = 0; i < 4; ++i) {
      double s = Y[i][i];
      for (int k = 0; k < i; ++k) s -= U[k][i] * U[k][i];
      if (s <= 0) throw Error(ErrorKind::DomainViolation, "Im Omega is not positive definite");
      U[i][i] = std::sqrt(s);
      for (int j = i + 1; j < 4; ++j) {
        double t = Y[i][j];
        for (int k = 0; k < i; ++k) t -= U[k][i] * U[k][j];
        U[i][j] = t / U[i][i];
      }
    }
    for (int i = 0; i < 4; ++i) {
      q[i][i] = U[i][i] * U[i][i];
      for (int j = i + 1; j < 4; ++j) q[i][j] = U[i][j] / U[i][i];
    }
  }
  double ad[4];
  for (int i = 0; i < 4; ++i) ad[i] = a[i].get_d();

  // Working-precision constants.
  Real pi = Real::pi(wp);
  Complex ipi(Real(0L, wp), pi);
  std::array<Complex, 16> W;  // pi i Omega
  for (int k = 0; k < 16; ++k) {
    Complex o = omega.omega[k];
    o.set_precision(wp);
    W[k] = ipi * o;
  }
  std::array<Complex, 4> B;  // 2 pi i b
  for (int i = 0; i < 4; ++i) B[i] = 2L * ipi * Complex(Real::from_rational(ch.b[i], wp));
  std::array<Real, 4> A;
  for (int i = 0; i < 4; ++i) A[i] = Real::from_rational(a[i], wp);
  Complex step = exp(2L * W[0]);  // ratio of consecutive ratios along n0

  // Double-precision copies for lines whose terms sit below 2^-(wp-50).
  using cd = std::complex<double>;
  std::array<cd, 16> Wd;
  for (int k = 0; k < 16; ++k) Wd[k] = cd(W[k].re().to_double(), W[k].im().to_double());
  std::array<cd, 4> Bd;
  for (int i = 0; i < 4; ++i) Bd[i] = cd(B[i].re().to_double(), B[i].im().to_double());
  cd step_d = std::exp(2.0 * Wd[0]);
  cd tail = 0;
  const double low_bits = static_cast<double>(wp) - 50.0;

  Complex sum(wp), term(wp), ratio(wp);
  ComplexScratch scratch(wp);
  std::array<Real, 4> x;
  for (auto& v : x) v = Real(0L, wp);

  auto range = [&](int i, double center, double rem, long& lo, long& hi) {
    double half = std::sqrt(std::max(0.0, rem) / q[i][i]);
    lo = std::max(-R, static_cast<long>(std::ceil(center - half - ad[i])));
    hi = std::min(R, static_cast<long>(std::floor(center + half - ad[i])));
  };

  // Walks outward from the line's largest term so the start never underflows.
  auto line_double = [&](long lo, long hi, double c0, double x1, double x2, double x3) {
    long mid = std::clamp(static_cast<long>(std::lround(c0 - ad[0])), lo, hi);
    auto start = [&](long n0, cd& t, cd& s) {
      double xs[4] = {n0 + ad[0], x1, x2, x3};
      cd e = 0;
      for (int i = 0; i < 4; ++i) {
        cd row = Wd[4 * i + i] * xs[i];
        for (int j = i + 1; j < 4; ++j) row += 2.0 * Wd[4 * i + j] * xs[j];
        e += row * xs[i] + Bd[i] * xs[i];
      }
      t = std::exp(e);
      s = Wd[0] * (2.0 * xs[0] + 1.0) + Bd[0];
      for (int j = 1; j < 4; ++j) s += 2.0 * Wd[j] * xs[j];
    };
    cd t, s;
    start(mid, t, s);
    cd r = std::exp(s);
    for (long n0 = mid; n0 <= hi; ++n0) {
      tail += t;
      t *= r;
      r *= step_d;
    }
    if (mid == lo) return;
    start(mid - 1, t, s);
    r = std::exp(-(s - 2.0 * Wd[0]));
    for (long n0 = mid - 1; n0 >= lo; --n0) {
      tail += t;
      t *= r;
      r *= step_d;
    }
  };

  auto line = [&](long lo, long hi) {
    // Starting exponent pi i x'Omega x + 2 pi i x'b at n0 = lo.
    x[0] = A[0] + lo;
    Complex e(wp);
    for (int i = 0; i < 4; ++i) {
      Complex row = W[4 * i + i] * x[i];
      for (int j = i + 1; j < 4; ++j) row += 2L * W[4 * i + j] * x[j];
      e += row * x[i] + B[i] * x[i];
    }
    term = exp(e);
    Complex s = W[0] * (2L * x[0] + 1L) + B[0];
    for (int j = 1; j < 4; ++j) s += 2L * W[j] * x[j];
    ratio = exp(s);
    for (long n0 = lo; n0 <= hi; ++n0) {
      sum += term;
      if (n0 == hi) break;
      mul_into(term, term, ratio, scratch);
      mul_into(ratio, ratio, step, scratch);
    }
  };

  long lo3, hi3;
  range(3, 0.0, budget, lo3, hi3);
  for (long n3 = lo3; n3 <= hi3; ++n3) {
    double x3 = n3 + ad[3];
    double rem3 = budget - q[3][3] * x3 * x3;
    if (rem3 < 0) continue;
    double c2 = -q[2][3] * x3;
    long lo2, hi2;
    range(2, c2, rem3, lo2, hi2);
    for (long n2 = lo2; n2 <= hi2; ++n2) {
      double x2 = n2 + ad[2];
      double rem2 = rem3 - q[2][2] * (x2 - c2) * (x2 - c2);
      if (rem2 < 0) continue;
      double c1 = -(q[1][2] * x2 + q[1][3] * x3);
      long lo1, hi1;
      range(1, c1, rem2, lo1, hi1);
      for (long n1 = lo1; n1 <= hi1; ++n1) {
        double x1 = n1 + ad[1];
        double rem1 = rem2 - q[1][1] * (x1 - c1) * (x1 - c1);
        if (rem1 < 0) continue;
        double c0 = -(q[0][1] * x1 + q[0][2] * x2 + q[0][3] * x3);
        long lo0, hi0;
        range(0, c0, rem1, lo0, hi0);
        if (lo0 > hi0) continue;
        // Every term on this line has modulus at most exp(-pi (budget - rem1)).
        double drop_bits = M_PI * (budget - rem1) / std::log(2.0);
        if (drop_bits >= low_bits && drop_bits < 900.0) {
          line_double(lo0, hi0, c0, x1, x2, x3);
          continue;
        }
        x[1] = A[1] + n1;
        x[2] = A[2] + n2;
        x[3] = A[3] + n3;
        line(lo0, hi0);
      }
    }
  }
  sum += Complex(Real(tail.real(), wp), Real(tail.imag(), wp));
  sum.set_precision(ctx.prec);
  return sum;
}

// --------------------------------------------------------------- lambda

LambdaValue lambda_of(const Complex& u, const PrecisionContext& ctx) {
  SiegelPoint omega = omega_of(u, ctx);
  LambdaValue out;
  out.theta11 = theta_const(ThetaCharacteristic::a11(), omega, ctx);
  out.theta19 = theta_const(ThetaCharacteristic::a19(), omega, ctx);
  Real tol = epsilon_bits(ctx.prec / 2, ctx.prec);
  Real m11 = abs(out.theta11), m19 = abs(out.theta19);
  if (m11 < tol && m19 < tol) throw Error(ErrorKind::Indeterminate, "theta11 and theta19 both vanish at u = " + u.to_string(12));
  out.infinite = m19 < tol * max(Real(1L, ctx.prec), m11);
  if (!out.infinite) out.value = pow(out.theta11 / out.theta19, 5);
  if (!m11.is_zero()) out.inverse = pow(out.theta19 / out.theta11, 5);
  return out;
}

Complex big_phi(const Complex& lambda) {
  Precision prec = lambda.precision();
  Real tol = epsilon_bits(prec / 2, prec);
  if (abs(lambda) < tol || abs(lambda - Complex(1L, prec)) < tol)
    throw Error(ErrorKind::PoleAtLambda, "Phi has a pole at lambda = " + lambda.to_string(12));
  Complex l2 = lambda * lambda;
  return (l2 * lambda - 3L * lambda + Complex(1L, prec)) / (3L * lambda * (lambda - Complex(1L, prec)));
}

Complex big_phi(const LambdaValue& lambda) {
  if (lambda.infinite) throw Error(ErrorKind::PoleAtLambda, "Phi has a pole at lambda = infinity");
  return big_phi(lambda.value);
}

PhiValues phi_values(const Complex& u, const PrecisionContext& ctx) {
  PhiValues v;
  v.big_phi = big_phi(lambda_of(u, ctx));
  Precision p = v.big_phi.precision();
  v.phi_tilde = v.big_phi - Complex(Real(1L, p) / 2L);
  // 2/sqrt(-3) = -2i/sqrt3
  v.phi = v.phi_tilde * Complex(Real(0L, p), Real(-2L, p) / sqrt(Real(3L, p)));
  return v;
}

Complex phi_of(const Complex& u, const PrecisionContext& ctx) { return phi_values(u, ctx).phi; }

Complex phi_tilde_of(const Complex& u, const PrecisionContext& ctx) { return phi_values(u, ctx).phi_tilde; }

}  // namespace tcm
