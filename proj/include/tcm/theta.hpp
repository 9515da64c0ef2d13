#pragma once

// Genus-4 theta constants on the image of the disc in the Siegel space,
// lambda(u) = (theta11/theta19)^5, and the modular functions Phi, phi, phi~.

#include <array>
#include <optional>

#include "tcm/bigfloat.hpp"
#include "tcm/exactfield.hpp"
#include "tcm/hyperbolic.hpp"

namespace tcm {

struct SiegelPoint {
  std::array<Complex, 16> omega;

  const Complex& operator()(int i, int j) const { return omega[4 * i + j]; }
  Complex& operator()(int i, int j) { return omega[4 * i + j]; }
  Precision precision() const { return omega[0].precision(); }

  bool is_symmetric(const Real& tol) const;
  /// All leading principal minors of Im(Omega) positive.
  bool has_positive_imaginary_part() const;
  /// Smallest eigenvalue of Im(Omega) (Jacobi rotations).
  Real min_imaginary_eigenvalue() const;
};

struct ThetaCharacteristic {
  std::array<Rational, 4> a;
  std::array<Rational, 4> b;

  static ThetaCharacteristic zero();
  /// (1/10)[1,1,1,1; -2,-2,-1,-1]
  static ThetaCharacteristic a11();
  /// (1/10)[1,9,1,9; -2,-8,-1,-9]
  static ThetaCharacteristic a19();
};

struct PrecisionContext {
  Precision prec = 128;
  /// Truncation radius; 0 selects it from the tail bound.
  long radius = 0;
  long max_radius = 160;

  static PrecisionContext with_bits(Precision prec) { return PrecisionContext{prec, 0, 160}; }
  /// 2^(-prec+8).
  Real tolerance() const;
};

/// Omega(u) from the displayed matrix with eta2 = u, eta3 = 1.
/// Throws Error(DomainViolation) or Error(DegenerateDenominator).
SiegelPoint omega_of(const Complex& u, const PrecisionContext& ctx);

/// ceil(sqrt((prec ln2 + 16)/(pi lambda_min))) + 1 + max|a|.
long truncation_radius(const SiegelPoint& omega, const ThetaCharacteristic& ch, Precision prec);

/// Sum of exp(pi i v'Omega v + 2 pi i v'b), v = n + a, over |n|_inf <= R inside the
/// ellipsoid pi v'Im(Omega)v <= pi lambda_min (R - 1 - max|a|)^2.
/// Throws Error(TruncationBudgetExceeded) when R > ctx.max_radius.
Complex theta_const(const ThetaCharacteristic& ch, const SiegelPoint& omega, const PrecisionContext& ctx);

struct LambdaValue {
  bool infinite = false;
  /// Meaningful only when !infinite.
  Complex value;
  /// 1/lambda = (theta19/theta11)^5; meaningful only when theta11 is nonzero.
  Complex inverse;
  Complex theta11, theta19;
};

/// Throws Error(Indeterminate) if both theta values vanish within tolerance.
LambdaValue lambda_of(const Complex& u, const PrecisionContext& ctx);

/// (lambda^3 - 3 lambda + 1)/(3 lambda (lambda - 1)); throws Error(PoleAtLambda).
Complex big_phi(const Complex& lambda);
Complex big_phi(const LambdaValue& lambda);

struct PhiValues {
  Complex big_phi;
  Complex phi_tilde;  // Phi - 1/2
  Complex phi;        // (2/sqrt(-3)) phi_tilde
};

PhiValues phi_values(const Complex& u, const PrecisionContext& ctx);
Complex phi_of(const Complex& u, const PrecisionContext& ctx);
Complex phi_tilde_of(const Complex& u, const PrecisionContext& ctx);

}  // namespace tcm
