#include "tcm/hyperbolic.hpp"

#include <map>
#include <sstream>

#include "tcm/errors.hpp"

namespace tcm {

// ------------------------------------------------------------------ Mat2C

Mat2C Mat2C::identity(Precision prec) {
  return Mat2C(Complex(1L, prec), Complex(prec), Complex(prec), Complex(1L, prec));
}

Mat2C Mat2C::diagonal(const Complex& a, const Complex& d) {
  Precision p = std::max(a.precision(), d.precision());
  return Mat2C(a, Complex(p), Complex(p), d);
}

Complex Mat2C::det() const { return a() * d() - b() * c(); }

Complex Mat2C::trace() const { return a() + d(); }

Mat2C Mat2C::inverse() const {
  Complex D = det();
  return Mat2C(d() / D, -b() / D, -c() / D, a() / D);
}

Mat2C Mat2C::normalized() const {
  Complex s = sqrt(det());
  return Mat2C(a() / s, b() / s, c() / s, d() / s);
}

Real Mat2C::max_abs() const {
  Real m = abs(e_[0]);
  for (int k = 1; k < 4; ++k) m = max(m, abs(e_[k]));
  return m;
}

Mat2C& Mat2C::operator*=(const Mat2C& o) {
  Mat2C r(a() * o.a() + b() * o.c(), a() * o.b() + b() * o.d(), c() * o.a() + d() * o.c(),
          c() * o.b() + d() * o.d());
  *this = std::move(r);
  return *this;
}

Mat2C operator*(const Complex& s, const Mat2C& m) { return Mat2C(s * m.a(), s * m.b(), s * m.c(), s * m.d()); }

Mat2C operator+(const Mat2C& x, const Mat2C& y) {
  return Mat2C(x.a() + y.a(), x.b() + y.b(), x.c() + y.c(), x.d() + y.d());
}

Mat2C operator-(const Mat2C& x, const Mat2C& y) {
  return Mat2C(x.a() - y.a(), x.b() - y.b(), x.c() - y.c(), x.d() - y.d());
}

std::string Mat2C::to_string(int digits) const {
  std::ostringstream os;
  os << "[[" << a().to_string(digits) << "; " << b().to_string(digits) << "], [" << c().to_string(digits) << "; "
     << d().to_string(digits) << "]]";
  return os.str();
}

Mat2C pow(const Mat2C& m, long n) {
  if (n < 0) return pow(m.inverse(), -n);
  Mat2C result = Mat2C::identity(m.precision());
  Mat2C base = m;
  while (n) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

Real matrix_tolerance(Precision prec) { return epsilon_bits(prec / 2, prec); }

bool approx_equal(const Mat2C& x, const Mat2C& y, const Real& tol) {
  Real scale = max(Real(1L, x.precision()), x.max_abs());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (abs(x.at(i, j) - y.at(i, j)) >= tol * scale) return false;
  return true;
}

bool projectively_equal(const Mat2C& x, const Mat2C& y, const Real& tol) {
  int bi = 0, bj = 0;
  Real best = abs(x.at(0, 0));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (abs(x.at(i, j)) > best) {
        best = abs(x.at(i, j));
        bi = i;
        bj = j;
      }
  if (best.is_zero()) return false;
  if (abs(y.at(bi, bj)) < tol * best) return false;
  Complex sx = Complex(1L, x.precision()) / x.at(bi, bj);
  Complex sy = Complex(1L, y.precision()) / y.at(bi, bj);
  return approx_equal(sx * x, sy * y, tol);
}

// ------------------------------------------------------------ the domains

Real disc_radius_squared(Precision prec) { return (sqrt(Real(5L, prec)) - 1L) / 2L; }

bool in_domain(const Complex& z, Domain domain, const Real& margin) {
  if (domain == Domain::HalfPlane) return z.im() > margin;
  return norm(z) < disc_radius_squared(z.precision()) - margin;
}

Complex mobius_act(const Mat2C& m, const Complex& z) {
  Complex den = m.c() * z + m.d();
  Real scale = abs(m.c()) * abs(z) + abs(m.d());
  Precision p = std::max(m.precision(), z.precision());
  if (abs(den) <= scale * matrix_tolerance(p))
    throw Error(ErrorKind::PoleHit, "Moebius denominator vanishes at " + z.to_string(12));
  return (m.a() * z + m.b()) / den;
}

Point mobius_act(const Mat2C& m, const Point& z) { return Point{mobius_act(m, z.value), z.domain}; }

// ---------------------------------------------------------- named matrices

namespace {

struct Constants {
  Precision prec;
  Real s5, w, wb;
  Complex i;
  explicit Constants(Precision p)
      : prec(p),
        s5(sqrt(Real(5L, p))),
        w((Real(1L, p) - s5) / 2L),
        wb((Real(1L, p) + s5) / 2L),
        i(Complex::i(p)) {}
  Complex c(const Real& r) const { return Complex(r); }
  Complex c(long v) const { return Complex(v, prec); }
  /// (-1)^(k/5) = e^(i pi k / 5)
  Complex root_m1(long k) const { return Complex::unit_root(k, 10, prec); }
};

Mat2C g34(const Constants& k) { return Mat2C::diagonal(Complex::unit_root(1, 20, k.prec), Complex::unit_root(-1, 20, k.prec)); }

Mat2C h34(const Constants& k) { return Mat2C::diagonal(Complex::unit_root(1, 10, k.prec), Complex::unit_root(-1, 10, k.prec)); }

Mat2C h45_printed(const Constants& k) {
  const Complex& I = k.i;
  Real d = k.s5 - 3L;
  Real q1 = sqrt(Real(50L, k.prec) - k.s5 * 10L);
  Real q2 = sqrt(Real(10L, k.prec) - k.s5 * 2L);
  Complex a = (k.c(k.s5 * 6L - 6L) + I * q1 + I * q2) / (d * 4L);
  Complex b = k.c(Real(2L, k.prec) / d);
  Complex c = -(I * (-4L * I + k.c(q1 + q2 * 3L))) / (d * 4L);
  Complex dd = (k.c(k.s5 - 7L) - I * q2) / (d * 2L);
  return Mat2C(a, b, c, dd);
}

Mat2C h312(const Constants& k) {
  const Complex& I = k.i;
  Real d = k.s5 - 3L;
  Real d2 = d * d * 2L;
  Real q1 = sqrt(Real(50L, k.prec) - k.s5 * 10L);
  Real q2 = sqrt(Real(10L, k.prec) - k.s5 * 2L);
  Complex a = (k.c(k.s5 * 2L - 2L) - I * q1 + 3L * I * q2) / d2;
  Complex b = (k.c(Real(20L, k.prec) - k.s5 * 8L) - 3L * I * q1 + 7L * I * q2) / d2;
  Complex c = I * q2 / d;
  Complex dd = (k.c(Real(8L, k.prec) - k.s5 * 4L) - I * q1 + I * q2) / d2;
  return Mat2C(a, b, c, dd);
}

Mat2C hn312(const Constants& k) { return Complex::unit_root(-2, 5, k.prec) * h312(k); }

Mat2C hn412(const Constants& k) {
  Mat2C g = g34(k);
  return g * hn312(k) * g.inverse();
}

Mat2C hbeta(const Constants& k) {
  Complex s = k.i * k.wb;
  return s * Mat2C(k.c(-1L), k.c(k.w), k.c(1L), k.c(1L));
}

Mat2C hvck(const Constants& k) {
  Complex rho = Complex::unit_root(1, 5, k.prec);
  return Mat2C(k.wb * rho, k.c(1L), k.c(k.wb), k.wb / rho);
}

Mat2C mmc(const Constants& k) { return Mat2C::diagonal(k.c(sqrt(k.s5 * k.wb)), k.c(1L)); }

Mat2C mmr(const Constants& k) {
  Real r = sqrt(-k.w);
  return Mat2C(k.i, k.i * r, k.c(-1L), k.c(r));
}

Mat2C mhd(const Constants& k) { return mmc(k) * mmr(k); }

Mat2C rotvc(const Constants& k) {
  Mat2C h = h34(k);
  return h * hvck(k) * h.inverse();
}

Mat2C rotvcp(const Constants& k) {
  Mat2C g = g34(k);
  return g * rotvc(k) * g.inverse();
}

// Rotation of order 5 about w e^(-i pi/5), the image of 0 under rot_Vc.
Mat2C hn45(const Constants& k) {
  Mat2C r = rotvc(k);
  return (r * h34(k) * r.inverse()).normalized();
}

Mat2C h45(const Constants& k) { return Complex::unit_root(1, 10, k.prec) * hn45(k); }

Mat2C th34(const Constants& k) {
  return Mat2C(k.c(k.wb / 2L), k.c(k.s5 / 2L), k.c(k.w / 2L), k.c(k.wb / 2L));
}

Mat2C th34_printed(const Constants& k) {
  Real c = k.wb;
  Real r1 = sqrt(c), r5 = sqrt(c * 5L);
  Real diag = (Real(1L, k.prec) + k.s5) / 4L;
  return Mat2C(k.c(diag), k.c((r1 * 5L - r5) / 4L), k.c((r1 - r5) / 4L), k.c(diag));
}

Mat2C thn45_printed(const Constants& k) {
  Real d = k.s5 - 3L;
  Complex r1 = k.root_m1(1), r2 = k.root_m1(2), r3 = k.root_m1(3), r4 = k.root_m1(4);
  Complex a = r4 * (k.c(1L) + 2L * r2 - k.c(k.s5)) / d;
  Complex b = -((k.c(1L) + r3) * k.c(k.s5 - 1L)) / d;
  Complex c = 2L * (r2 - k.c(1L)) / d;
  Complex dd = r1 * (k.c(-1L) + 2L * r3 + k.c(k.s5)) / d;
  return Mat2C(a, b, c, dd);
}

Mat2C thn412(const Constants& k) {
  const Complex& I = k.i;
  const Precision p = k.prec;
  Real s5 = k.s5;
  Real f4 = root(Real(5L, p), 4);
  Real d = s5 - 3L;
  Real d2 = d * d;
  auto sq = [&](const Real& x) { return sqrt(x); };
  Real q1 = sq(Real(50L, p) - s5 * 10L);
  Real q2 = sq(Real(10L, p) - s5 * 2L);
  Real m1 = sq(s5 * 6L - 10L);   // sqrt(-10 + 6 sqrt5)
  Real m2 = sq(s5 * 30L - 50L);  // sqrt(-50 + 30 sqrt5)

  Complex a11 = (k.c(Real(8L, p) - s5 * 4L) + 8L * I * f4 - 4L * I * (f4 * f4 * f4) + 3L * I * m1 - I * m2) / (d2 * 2L);

  Real n21 = -sq(Real(50L, p) - s5 * 20L) + sq(Real(25L, p) - s5 * 5L) * 2L + sq(Real(10L, p) - s5 * 4L) * 3L -
             sq(Real(5L, p) - s5) * 4L - sq(s5 * 3L - 5L) + sq((s5 * 3L - 5L) * 5L);
  Complex a21 = k.c(n21 / (sqrt(Real(2L, p)) * f4 * d2));

  Real n12 = f4 * (f4 * (-8L) + f4 * f4 * f4 * 4L - q1 + q2 + m1 * 3L - m2);
  Complex a12 = k.c(n12 / (d2 * sq((s5 - 1L) * 2L)));

  Complex inner = k.c(sq(Real(50L, p) - s5 * 20L)) +
                  k.c((s5 - 2L) * 2L) * (k.c(sq(Real(5L, p) - s5)) + I * sq(s5 - 1L));
  Complex a22 = (-3L * I * sq(Real(10L, p) - s5 * 4L) + I * inner) / (d2 * sq(s5 - 1L));
  return Mat2C(a11, a12, a21, a22);
}

Mat2C thn45(const Constants& k) { return transport(hn45(k), Direction::DtoH); }

using Builder = Mat2C (*)(const Constants&);

const std::map<std::string, Builder, std::less<>>& builders() {
  static const std::map<std::string, Builder, std::less<>> table = {
      {"g34", g34},   {"h34", h34},     {"h45", h45},     {"hn45", hn45},     {"h312", h312},
      {"hn312", hn312}, {"hn412", hn412}, {"hbeta", hbeta}, {"hvck", hvck},     {"mmc", mmc},
      {"mmr", mmr},   {"mhd", mhd},     {"th34", th34},   {"thn45", thn45},   {"thn412", thn412},
      {"rotvc", rotvc}, {"rotvcp", rotvcp},
  };
  return table;
}

constexpr Precision kGuardBits = 32;

Mat2C rounded(Mat2C m, Precision prec) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.at(i, j).set_precision(prec);
  return m;
}

}  // namespace

const std::vector<NamedMatrix>& builtin_catalog() {
  static const std::vector<NamedMatrix> catalog = {
      {"g34", Provenance::Printed, Domain::Disc, "diag(e^(i pi/10), e^(-i pi/10))"},
      {"h34", Provenance::Printed, Domain::Disc, "g34^2, rotation of order 5 about 0"},
      {"h45", Provenance::Reconstructed, Domain::Disc,
       "e^(i pi/5) hn45; the displayed closed form is not of order 5"},
      {"hn45", Provenance::Reconstructed, Domain::Disc,
       "rotvc h34 rotvc^-1, rotation of order 5 about w e^(-i pi/5)"},
      {"h312", Provenance::Printed, Domain::Disc, "displayed closed form"},
      {"hn312", Provenance::Composed, Domain::Disc, "e^(-4 pi i/5) h312"},
      {"hn412", Provenance::Composed, Domain::Disc, "g34 hn312 g34^-1, rotation of order 5 about w"},
      {"hbeta", Provenance::Printed, Domain::Disc, "i wbar [[-1, w], [1, 1]], exchanges 0 and w"},
      {"hvck", Provenance::Printed, Domain::Disc, "[[wbar rho, 1], [wbar, wbar/rho]], rho = e^(2 pi i/5)"},
      {"mmc", Provenance::Printed, Domain::Disc, "diag(sqrt(sqrt5 wbar), 1)"},
      {"mmr", Provenance::Printed, Domain::Disc, "[[i, i sqrt(-w)], [-1, sqrt(-w)]]"},
      {"mhd", Provenance::Composed, Domain::Disc, "mmc mmr, maps D onto H"},
      {"th34", Provenance::Reconstructed, Domain::HalfPlane,
       "transport of h34 = [[wbar/2, sqrt5/2], [w/2, wbar/2]]; the displayed form is a diagonal conjugate"},
      {"thn45", Provenance::Reconstructed, Domain::HalfPlane, "transport of hn45"},
      {"thn412", Provenance::Printed, Domain::HalfPlane, "displayed closed form (sum of the two blocks)"},
      {"rotvc", Provenance::Composed, Domain::Disc, "h34 hvck h34^-1, rotation of order 3"},
      {"rotvcp", Provenance::Composed, Domain::Disc, "g34 rotvc g34^-1, rotation of order 3"},
  };
  return catalog;
}

const NamedMatrix& builtin_info(std::string_view name) {
  for (const auto& entry : builtin_catalog())
    if (entry.name == name) return entry;
  throw Error(ErrorKind::UnknownName, "unknown matrix name '" + std::string(name) + "'");
}

Mat2C builtin_matrix(std::string_view name, Precision prec) {
  auto it = builders().find(name);
  if (it == builders().end()) throw Error(ErrorKind::UnknownName, "unknown matrix name '" + std::string(name) + "'");
  Constants k(prec + kGuardBits);
  return rounded(it->second(k), prec);
}

std::optional<Mat2C> printed_matrix(std::string_view name, Precision prec) {
  Constants k(prec + kGuardBits);
  if (name == "h45") return rounded(h45_printed(k), prec);
  if (name == "hn45") return rounded(Complex::unit_root(-1, 10, k.prec) * h45_printed(k), prec);
  if (name == "th34") return rounded(th34_printed(k), prec);
  if (name == "thn45") return rounded(thn45_printed(k), prec);
  builtin_info(name);
  return std::nullopt;
}

Mat2C transport(const Mat2C& m, Direction direction) {
  Constants k(m.precision() + kGuardBits);
  Mat2C t = mhd(k);
  Mat2C r = direction == Direction::DtoH ? t * m * t.inverse() : t.inverse() * m * t;
  return rounded(std::move(r), m.precision());
}

// ----------------------------------------------------------- fixed points

std::vector<Point> fixed_points(const Mat2C& m, Domain domain) {
  const Precision p = m.precision();
  Real tol = matrix_tolerance(p) * max(Real(1L, p), m.max_abs());
  if (abs(m.b()) < tol && abs(m.c()) < tol && abs(m.a() - m.d()) < tol)
    throw Error(ErrorKind::ScalarMatrix, "scalar matrix has no isolated fixed points");

  // c z^2 + (d - a) z - b = 0
  Complex B = m.d() - m.a();
  Complex disc = sqrt(B * B + 4L * m.b() * m.c());
  // q = -(B + s disc)/2 with the sign that avoids cancellation
  Complex plus = B + disc, minus = B - disc;
  Complex q = (norm(plus) >= norm(minus) ? plus : minus) / (-2L);
  std::vector<Complex> roots;
  if (abs(m.c()) >= tol) roots.push_back(q / m.c());
  if (abs(q) >= tol) roots.push_back(-m.b() / q);

  Real margin = epsilon_bits(p / 4, p);
  std::vector<Point> out;
  for (auto& z : roots)
    if (in_domain(z, domain, margin)) out.push_back(Point{z, domain});
  if (out.size() > 1) throw Error(ErrorKind::NoInteriorRoot, "both fixed points lie inside the domain");
  return out;
}

// ------------------------------------------------------ exponent triples

ExponentTriple pqr_from_abc(const HGEParams& params) {
  Rational x = abs(1 - params.c);
  Rational y = abs(params.c - params.a - params.b);
  Rational z = abs(params.a - params.b);
  if (!(x + y + z < 1))
    throw Error(ErrorKind::ConditionStarViolated, "|1-c| + |c-a-b| + |a-b| must be < 1");
  auto exponent = [](const Rational& v) -> long {
    if (v == 0) return kInfinity;
    if (v.get_num() != 1 || !v.get_den().fits_slong_p())
      throw Error(ErrorKind::ConditionStarViolated, "exponent 1/" + v.get_str() + " is not an integer");
    return v.get_den().get_si();
  };
  return {exponent(x), exponent(y), exponent(z)};
}

// -------------------------------------------------------- elliptic order

long order_of_elliptic(const Mat2C& m) {
  const Precision p = m.precision();
  Mat2C n = m.normalized();
  Complex t = n.trace();
  Real tol = matrix_tolerance(p);
  if (abs(t.im()) > tol || abs(t.re()) >= Real(2L, p) - tol)
    throw Error(ErrorKind::NotElliptic, "trace " + t.to_string(12) + " is not elliptic");
  Mat2C power = n;
  for (long k = 1; k <= 120; ++k) {
    Real scale = max(Real(1L, p), power.max_abs());
    if (abs(power.b()) < tol * scale && abs(power.c()) < tol * scale && abs(power.a() - power.d()) < tol * scale)
      return k;
    power *= n;
  }
  throw Error(ErrorKind::OrderOverflow, "no scalar power up to 120");
}

}  // namespace tcm
