#include "tcm/cmfield.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tcm/errors.hpp"

namespace tcm {

namespace {

// Element p + q w of O_F with machine integers.
struct Zw {
  long p = 0, q = 0;
};

Zw operator+(Zw a, Zw b) { return {a.p + b.p, a.q + b.q}; }
Zw operator-(Zw a, Zw b) { return {a.p - b.p, a.q - b.q}; }
Zw operator*(Zw a, Zw b) { return {a.p * b.p + a.q * b.q, a.p * b.q + a.q * b.p + a.q * b.q}; }
bool operator==(Zw a, Zw b) { return a.p == b.p && a.q == b.q; }

Zw to_zw(const QuadRat& x) {
  if (!x.is_integral()) throw Error(ErrorKind::SingularBasis, "order form coefficient not integral: " + x.to_string());
  return {x.p().get_num().get_si(), x.q().get_num().get_si()};
}

QuadRat from_zw(Zw z) { return QuadRat(Rational(z.p), Rational(z.q)); }

Rational rpow(const Rational& x, long n) {
  Rational r = 1;
  for (long i = 0; i < n; ++i) r *= x;
  return r;
}

Real to_real(const Rational& r, Precision prec) { return Real::from_rational(r, prec); }

int decimal_digits(Precision prec) { return static_cast<int>(std::ceil(prec * 0.30103)) + 1; }

}  // namespace

CMParameter CMParameter::make(const QuadRat& delta) {
  if (!is_totally_positive(delta))
    throw Error(ErrorKind::DomainViolation, "delta must be totally positive: " + delta.to_string());
  return CMParameter{delta};
}

std::array<long, 8> CMEmbedding::integers() const {
  std::array<long, 8> v{};
  for (int i = 0; i < 4; ++i) {
    v[2 * i] = coords[i].p().get_num().get_si();
    v[2 * i + 1] = coords[i].q().get_num().get_si();
  }
  return v;
}

std::string CMEmbedding::to_string() const {
  std::string s = "(";
  for (int i = 0; i < 4; ++i) s += (i ? ", " : "") + coords[i].to_string();
  return s + ")";
}

CMEmbedding make_embedding(const std::array<QuadRat, 4>& coords, Precision prec) {
  const OrderBasis& basis = order_basis();
  CMEmbedding g;
  g.coords = coords;
  g.element = from_order_coords(coords, basis);
  g.matrix = embed_matrix(basis.algebra, g.element, prec);
  auto fp = fixed_points(transport(g.matrix, Direction::HtoD), Domain::Disc);
  if (fp.size() != 1) throw Error(ErrorKind::NoInteriorRoot, "no fixed point in the disc for " + g.to_string());
  g.fixed_point = fp[0];
  return g;
}

std::vector<CMEmbedding> search_generators(const CMParameter& delta, long bound, Precision prec) {
  std::vector<CMEmbedding> out;
  if (bound < 1 || !delta.delta.is_integral()) return out;
  const OrderBasis& basis = order_basis();
  const QuaternionAlgebra& alg = basis.algebra;

  std::array<Zw, 4> tr{}, nr{};
  std::array<std::array<Zw, 4>, 4> cross{};
  for (int i = 0; i < 4; ++i) {
    auto [t, n] = trd_nrd(alg, basis.bg[i]);
    tr[i] = to_zw(t);
    nr[i] = to_zw(n);
    for (int j = i + 1; j < 4; ++j)
      cross[i][j] = to_zw(trd_nrd(alg, quat_mul(alg, basis.bg[i], quat_conj(basis.bg[j]))).first);
  }

  // Solve Trd = 0 for a coordinate whose trace is a unit.
  int pivot = -1;
  Zw inv;
  for (int i = 0; i < 4 && pivot < 0; ++i) {
    long n = tr[i].p * tr[i].p + tr[i].p * tr[i].q - tr[i].q * tr[i].q;
    if (n == 1 || n == -1) {
      pivot = i;
      // (p + q w)^-1 = (p + q - q w) / N
      inv = {(tr[i].p + tr[i].q) * n, -tr[i].q * n};
    }
  }
  if (pivot < 0) throw Error(ErrorKind::SingularBasis, "no unit trace in the order basis");
  std::array<int, 3> free{};
  for (int i = 0, k = 0; i < 4; ++i)
    if (i != pivot) free[k++] = i;

  const Zw target = to_zw(delta.delta);
  const long side = 2 * bound + 1;
  auto digit = [&](long idx) { return Zw{idx % side - bound, idx / side - bound}; };
  const long span = side * side;

  std::vector<std::array<Zw, 4>> found;
  std::array<Zw, 4> c{};
  for (long i0 = 0; i0 < span; ++i0) {
    c[free[0]] = digit(i0);
    Zw s0 = c[free[0]] * tr[free[0]];
    for (long i1 = 0; i1 < span; ++i1) {
      c[free[1]] = digit(i1);
      Zw s1 = s0 + c[free[1]] * tr[free[1]];
      for (long i2 = 0; i2 < span; ++i2) {
        c[free[2]] = digit(i2);
        Zw s2 = s1 + c[free[2]] * tr[free[2]];
        Zw cp = Zw{} - s2 * inv;
        if (std::labs(cp.p) > bound || std::labs(cp.q) > bound) continue;
        c[pivot] = cp;
        Zw n{};
        for (int a = 0; a < 4; ++a) {
          n = n + c[a] * c[a] * nr[a];
          for (int b = a + 1; b < 4; ++b) n = n + c[a] * c[b] * cross[a][b];
        }
        if (!(n == target)) continue;
        bool positive = false;
        for (int a = 0; a < 4; ++a) {
          long first = c[a].p != 0 ? c[a].p : c[a].q;
          if (first != 0) {
            positive = first > 0;
            break;
          }
        }
        if (positive) found.push_back(c);
      }
    }
  }

  std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) {
    for (int a = 0; a < 4; ++a) {
      if (x[a].p != y[a].p) return x[a].p < y[a].p;
      if (x[a].q != y[a].q) return x[a].q < y[a].q;
    }
    return false;
  });
  for (const auto& v : found) {
    std::array<QuadRat, 4> coords;
    for (int a = 0; a < 4; ++a) coords[a] = from_zw(v[a]);
    CMEmbedding g = make_embedding(coords, prec);
    auto [t, n] = trd_nrd(alg, g.element);
    if (!t.is_zero() || !(n == delta.delta)) throw Error(ErrorKind::SingularBasis, "search form disagrees with exact Nrd");
    out.push_back(std::move(g));
  }
  return out;
}

Point fixed_point_of(const CMEmbedding& g, const PrecisionContext& ctx) {
  return make_embedding(g.coords, ctx.prec).fixed_point;
}

Complex reduce_towards_origin(const Complex& u) {
  Precision prec = u.precision();
  std::vector<Mat2C> gens;
  for (const char* name : {"h34", "hn45", "hn412", "rotvc"}) {
    Mat2C g = builtin_matrix(name, prec);
    gens.push_back(g);
    gens.push_back(g.inverse());
  }
  Complex z = u;
  Real r = abs(z);
  Real gain = Real(1L, prec) - epsilon_bits(40, prec);
  for (int it = 0; it < 200; ++it) {
    std::optional<Complex> best;
    Real best_r = r * gain;
    for (const Mat2C& g : gens) {
      Complex gz = mobius_act(g, z);
      Real gr = abs(gz);
      if (gr < best_r) {
        best_r = gr;
        best = gz;
      }
    }
    if (!best) break;
    z = *best;
    r = best_r;
  }
  return z;
}

SingularValue singular_value(const Complex& u0, const PrecisionContext& ctx) {
  Complex u = u0;
  u.set_precision(ctx.prec);
  SingularValue s;
  s.evaluated_at = reduce_towards_origin(u);
  PhiValues v = phi_values(s.evaluated_at, ctx);
  s.phi = v.phi;
  s.phi_tilde = v.phi_tilde;
  s.phi2 = v.phi * v.phi;
  s.phi_tilde2 = v.phi_tilde * v.phi_tilde;
  return s;
}

SingularValue singular_value(const CMEmbedding& g, const PrecisionContext& ctx) {
  return singular_value(fixed_point_of(g, ctx).value, ctx);
}

// ----------------------------------------------------------- recognition

std::optional<RationalRecognition> recognize_rational(const Real& x, const Integer& threshold, int max_terms) {
  if (!x.is_finite()) return std::nullopt;
  const Precision prec = x.precision();
  const Real noise = ldexp(max(Real(1L, prec), abs(x)), -(prec - 8));
  // Convergents are trusted while q^2 stays below the fraction bits of x.
  const long fraction_bits = prec - std::max(0L, x.exponent2());
  if (fraction_bits < 48) return std::nullopt;
  Integer qlimit;
  mpz_ui_pow_ui(qlimit.get_mpz_t(), 2, static_cast<unsigned long>(fraction_bits - 24));

  RationalRecognition rec;
  Integer p1 = 1, q1 = 0, p2 = 0, q2 = 1;  // convergents k-1 and k-2
  Real r = x;
  bool accepted = false;
  for (int k = 0; k < max_terms; ++k) {
    Integer a = r.floor_integer();
    if (k > 0 && a > threshold) {
      rec.cut_quotient = a;
      accepted = q1 * q1 <= qlimit;
      break;
    }
    rec.partial_quotients.push_back(a);
    Integer p = a * p1 + p2, q = a * q1 + q2;
    p2 = p1;
    q2 = q1;
    p1 = p;
    q1 = q;
    Real frac = r - Real::from_integer(a, prec);
    bool small_q = q * q <= qlimit;
    if (frac.is_zero()) {
      accepted = small_q;
      break;
    }
    if (small_q && abs(x - to_real(make_rational(p, q), prec)) <= noise) {
      accepted = true;
      break;
    }
    r = Real(1L, prec) / frac;
  }
  if (!accepted) return std::nullopt;
  rec.value = make_rational(p1, q1);
  if (!(abs(to_real(rec.value, prec) - x) < ldexp(Real(1L, prec), -(prec / 2)))) return std::nullopt;
  return rec;
}

MinimalPolynomial min_poly_from_values(const std::vector<Complex>& values, const Rational& scale,
                                       const Integer& threshold) {
  if (values.empty() || values.size() > 4)
    throw Error(ErrorKind::RecognitionFailed, "min_poly_from_values takes 1 to 4 values");
  Precision prec = values[0].precision();
  Complex s(to_real(scale, prec));
  std::vector<Complex> c{Complex(1L, prec)};  // constant first
  for (const Complex& v : values) {
    Complex root = s * v;
    std::vector<Complex> next(c.size() + 1, Complex(prec));
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= root * c[i];
    }
    c = std::move(next);
  }
  MinimalPolynomial mp;
  Integer lcm = 1;
  for (std::size_t i = 0; i < c.size(); ++i) {
    Real tol = ldexp(max(Real(1L, prec), abs(c[i])), -(prec / 2));
    if (!(abs(c[i].im()) < tol))
      throw Error(ErrorKind::RecognitionFailed, "coefficient " + std::to_string(i) + " is not real");
    auto r = recognize_rational(c[i].re(), threshold);
    if (!r) throw Error(ErrorKind::RecognitionFailed, "coefficient " + std::to_string(i) + " not recognized");
    mp.rational.push_back(r->value);
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), r->value.get_den_mpz_t());
  }
  for (const Rational& r : mp.rational) mp.integral.push_back(Integer(r * lcm));
  return mp;
}

// ------------------------------------------------------------ integral model

std::string Substitution::describe(const Rational& c) const {
  std::string inner = "t";
  if (alpha != 1) inner = tcm::to_string(alpha) + "*t";
  if (beta != 0) inner += (beta > 0 ? " + " : " - ") + tcm::to_string(abs(beta));
  if (alpha != 1 || beta != 0) inner = "(" + inner + ")";
  return reciprocal ? "Y = " + tcm::to_string(c) + "/" + inner : "Y = " + tcm::to_string(c) + "*" + inner;
}

namespace {

// Monic Q(s) = alpha^n P((s - beta)/alpha), constant first.
std::vector<Rational> shift_poly(const std::vector<Rational>& poly, const Substitution& sub) {
  if (poly.size() < 2 || poly.back() == 0) throw Error(ErrorKind::NotClearable, "polynomial must have degree >= 1");
  if (sub.alpha == 0) throw Error(ErrorKind::NotClearable, "substitution with alpha = 0");
  std::vector<Rational> p = poly;
  Rational lead = p.back();
  for (Rational& x : p) x /= lead;
  std::vector<Rational> lin{-sub.beta / sub.alpha, Rational(1) / sub.alpha};
  std::vector<Rational> q{p.back()};
  for (std::size_t k = p.size() - 1; k-- > 0;) {
    std::vector<Rational> next(q.size() + 1, Rational(0));
    for (std::size_t i = 0; i < q.size(); ++i) {
      next[i] += q[i] * lin[0];
      next[i + 1] += q[i] * lin[1];
    }
    next[0] += p[k];
    q = std::move(next);
  }
  Rational lq = q.back();
  for (Rational& x : q) x /= lq;
  return q;
}

// Coefficient of Y^k before the scale is applied, and the power of c it carries.
std::vector<std::pair<Rational, long>> model_terms(const std::vector<Rational>& q, const Substitution& sub) {
  const long n = static_cast<long>(q.size()) - 1;
  std::vector<std::pair<Rational, long>> terms(q.size());
  if (sub.reciprocal) {
    if (q[0] == 0) throw Error(ErrorKind::NotClearable, "reciprocal substitution needs a nonzero constant term");
    for (long k = 0; k <= n; ++k) terms[k] = {q[n - k] / q[0], n - k};
  } else {
    for (long k = 0; k <= n; ++k) terms[k] = {q[k], n - k};
  }
  return terms;
}

long padic_valuation(Integer x, const Integer& p) {
  long v = 0;
  while (x != 0 && mpz_divisible_p(x.get_mpz_t(), p.get_mpz_t())) {
    x /= p;
    ++v;
  }
  return v;
}

}  // namespace

IntegralModel integral_model(const std::vector<Rational>& poly, const Rational& c, const Substitution& sub) {
  if (c == 0) throw Error(ErrorKind::NotClearable, "scale must be nonzero");
  auto terms = model_terms(shift_poly(poly, sub), sub);
  IntegralModel m;
  m.scale = c;
  m.substitution = sub;
  for (const auto& [coef, power] : terms) {
    Rational v = coef * rpow(c, power);
    if (!is_integer(v))
      throw Error(ErrorKind::NotClearable, sub.describe(c) + " leaves coefficient " + tcm::to_string(v));
    m.coeffs.push_back(v.get_num());
  }
  m.discriminant = discriminant(m.coeffs);
  return m;
}

IntegralModel integral_model_search(const std::vector<Rational>& poly, const Substitution& sub) {
  auto terms = model_terms(shift_poly(poly, sub), sub);
  std::map<Integer, long> need;
  for (const auto& [coef, power] : terms) {
    if (coef == 0 || is_integer(coef)) continue;
    if (power == 0) throw Error(ErrorKind::NotClearable, "unscaled coefficient " + tcm::to_string(coef));
    for (const auto& [prime, e] : factor_rational(Rational(coef.get_den())).factors) {
      long have = padic_valuation(coef.get_num(), prime);
      long deficit = e - have;
      if (deficit > 0) need[prime] = std::max(need[prime], (deficit + power - 1) / power);
    }
  }
  Integer c = 1;
  for (const auto& [prime, e] : need) {
    if (e > 12) throw Error(ErrorKind::NotClearable, "scale exponent of " + prime.get_str() + " exceeds 12");
    Integer pe;
    mpz_pow_ui(pe.get_mpz_t(), prime.get_mpz_t(), static_cast<unsigned long>(e));
    c *= pe;
  }
  return integral_model(poly, Rational(c), sub);
}

Integer discriminant(const std::vector<Integer>& poly) {
  const long n = static_cast<long>(poly.size()) - 1;
  if (n < 1 || poly.back() == 0) throw Error(ErrorKind::NotClearable, "discriminant needs degree >= 1");
  if (n == 1) return 1;
  // Sylvester matrix of f and f', size (2n - 1).
  const long m = n - 1, size = n + m;
  std::vector<Rational> d(n);
  for (long i = 1; i <= n; ++i) d[i - 1] = Rational(poly[i] * i);
  std::vector<std::vector<Rational>> a(size, std::vector<Rational>(size, Rational(0)));
  for (long r = 0; r < m; ++r)
    for (long i = 0; i <= n; ++i) a[r][r + i] = Rational(poly[n - i]);
  for (long r = 0; r < n; ++r)
    for (long i = 0; i <= m; ++i) a[m + r][r + i] = d[m - i];
  Rational det = 1;
  for (long col = 0; col < size; ++col) {
    long piv = col;
    while (piv < size && a[piv][col] == 0) ++piv;
    if (piv == size) return 0;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (long r = col + 1; r < size; ++r) {
      if (a[r][col] == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (long k = col; k < size; ++k) a[r][k] -= f * a[col][k];
    }
  }
  Rational disc = det / Rational(poly[n]);
  if ((n * (n - 1) / 2) % 2) disc = -disc;
  return disc.get_num();
}

std::vector<Complex> polynomial_roots(const std::vector<Rational>& poly, Precision prec) {
  const long n = static_cast<long>(poly.size()) - 1;
  if (n < 1 || poly.back() == 0) return {};
  Precision wp = prec + 32;
  std::vector<Complex> c;
  for (const Rational& r : poly) c.emplace_back(to_real(r / poly.back(), wp));
  Real bound(1L, wp);
  for (long i = 0; i < n; ++i) bound = max(bound, Real(1L, wp) + abs(c[i]));
  std::vector<Complex> z;
  Complex seed(Real(0.4, wp), Real(0.9, wp));
  Complex cur = Complex(bound);
  for (long i = 0; i < n; ++i) {
    cur *= seed;
    z.push_back(cur);
  }
  Real tol = ldexp(bound, -(prec + 8));
  for (int it = 0; it < 1000; ++it) {
    Real change(0L, wp);
    for (long i = 0; i < n; ++i) {
      Complex num = c[n];
      for (long k = n - 1; k >= 0; --k) num = num * z[i] + c[k];
      Complex den(1L, wp);
      for (long j = 0; j < n; ++j)
        if (j != i) den *= z[i] - z[j];
      Complex step = num / den;
      z[i] -= step;
      change = max(change, abs(step));
    }
    if (change < tol) break;
  }
  for (Complex& x : z) x.set_precision(prec);
  return z;
}

bool sqrt_in_cm_field(const Rational& m, const QuadRat& delta) {
  if (m == 0) return true;
  return qs_sqrt(QuadRat(m)).has_value() || qs_sqrt(-delta * QuadRat(m)).has_value();
}

bool generates_cm_field(const QuadRat& trd, const QuadRat& nrd, const QuadRat& delta) {
  if (delta.is_zero()) return false;
  QuadRat ratio = (QuadRat(4) * nrd - trd * trd) / delta;
  return !ratio.is_zero() && qs_sqrt(ratio).has_value();
}

// ------------------------------------------------------------- the report

namespace {

std::string poly_string(const std::vector<Integer>& coeffs, const char* var) {
  std::string s;
  for (long k = static_cast<long>(coeffs.size()) - 1; k >= 0; --k) {
    const Integer& c = coeffs[k];
    if (c == 0) continue;
    Integer a = abs(c);
    s += s.empty() ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
    bool unit = a == 1 && k > 0;
    if (!unit) s += a.get_str();
    if (k > 0) s += std::string(unit ? "" : "*") + var + (k > 1 ? "^" + std::to_string(k) : "");
  }
  return s.empty() ? "0" : s;
}

std::vector<Complex> distinct_with_conjugates(const std::vector<Complex>& in, const Real& tol) {
  std::vector<Complex> out;
  auto add = [&](const Complex& z) {
    for (const Complex& w : out)
      if (abs(w - z) < tol * max(Real(1L, z.precision()), abs(z))) return;
    out.push_back(z);
  };
  for (const Complex& z : in) {
    add(z);
    add(conj(z));
  }
  return out;
}

}  // namespace

ClassFieldReport class_field_report(const CMParameter& delta, const ClassFieldConfig& config) {
  const Precision prec = config.ctx.prec;
  ClassFieldReport rep;
  rep.delta = delta.delta;
  rep.prec = prec;

  if (config.generators.empty()) {
    rep.embeddings = search_generators(delta, config.bound, prec);
  } else {
    const OrderBasis& basis = order_basis();
    for (const auto& coords : config.generators) {
      CMEmbedding g = make_embedding(coords, prec);
      auto [t, n] = trd_nrd(basis.algebra, g.element);
      if (!generates_cm_field(t, n, delta.delta))
        throw Error(ErrorKind::DomainViolation, "generator " + g.to_string() + " with Trd " + t.to_string() +
                                                    ", Nrd " + n.to_string() + " does not generate F(sqrt(-delta))");
      rep.embeddings.push_back(std::move(g));
    }
  }
  if (rep.embeddings.empty())
    throw Error(ErrorKind::NothingRecognized, "no embedding of F(sqrt(-delta)) within the search bound");

  if (config.degree <= 1) {
    std::vector<std::size_t> order(rep.embeddings.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return abs(rep.embeddings[x].fixed_point.value) < abs(rep.embeddings[y].fixed_point.value);
    });
    Real tol = ldexp(Real(1L, prec), -(prec / 2));
    auto real_rational = [&](const Complex& z) -> std::optional<RationalRecognition> {
      if (!(abs(z.im()) < tol * max(Real(1L, prec), abs(z)))) return std::nullopt;
      return recognize_rational(z.re(), config.threshold);
    };
    std::vector<Complex> seen;
    for (std::size_t idx : order) {
      SingularValue v = singular_value(rep.embeddings[idx].fixed_point.value, config.ctx);
      bool repeat = false;
      for (const Complex& z : seen)
        if (abs(z - v.phi_tilde2) < tol * max(Real(1L, prec), abs(z))) repeat = true;
      rep.used.push_back(idx);
      rep.values.push_back(v);
      if (repeat) continue;
      seen.push_back(v.phi_tilde2);
      rep.phi_tilde2 = real_rational(v.phi_tilde2);
      rep.phi2 = real_rational(v.phi2);
      if (rep.phi_tilde2 || rep.phi2) break;
    }
    if (!rep.phi_tilde2 && !rep.phi2)
      throw Error(ErrorKind::NothingRecognized, "neither phi^2 nor phi~^2 is a recognizable rational");
    Rational r = rep.phi_tilde2 ? rep.phi_tilde2->value : Rational(-3, 4) * rep.phi2->value;
    if (r == 0) {
      rep.kernel = 0;
      rep.description = "C(M) = M";
    } else {
      rep.kernel = squarefree_split(r).kernel;
      rep.description = sqrt_in_cm_field(Rational(*rep.kernel), delta.delta)
                            ? "C(M) = M"
                            : "C(M) = M(sqrt(" + rep.kernel->get_str() + "))";
    }
    return rep;
  }

  for (std::size_t i = 0; i < rep.embeddings.size(); ++i) {
    rep.used.push_back(i);
    rep.values.push_back(singular_value(rep.embeddings[i].fixed_point.value, config.ctx));
  }
  Real tol = ldexp(Real(1L, prec), -(prec / 4));
  std::string source;
  for (bool tilde : {true, false}) {
    std::vector<Complex> raw;
    for (const SingularValue& v : rep.values) raw.push_back(tilde ? v.phi_tilde2 : v.phi2);
    std::vector<Complex> vals = distinct_with_conjugates(raw, tol);
    if (static_cast<int>(vals.size()) != config.degree) continue;
    try {
      rep.min_poly = min_poly_from_values(vals, config.scale, config.threshold);
      source = tilde ? "phi~^2" : "phi^2";
      break;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::RecognitionFailed) throw;
    }
  }
  if (!rep.min_poly)
    throw Error(ErrorKind::NothingRecognized,
                "no polynomial of degree " + std::to_string(config.degree) + " recognized from the singular values");
  rep.description = "C(M) = M(t), " + poly_string(rep.min_poly->integral, "t") + " = 0, t = " +
                    tcm::to_string(config.scale) + "*" + source;
  try {
    rep.model = config.model_scale ? integral_model(rep.min_poly->rational, *config.model_scale, config.substitution)
                                   : integral_model_search(rep.min_poly->rational, config.substitution);
    rep.description += "; " + rep.model->substitution.describe(rep.model->scale) + ": " +
                       poly_string(rep.model->coeffs, "Y") + " = 0";
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotClearable) throw;
  }
  return rep;
}

// ------------------------------------------------------------------- JSON

nlohmann::json rational_json(const Rational& r) {
  return {{"num", r.get_num().get_str()}, {"den", r.get_den().get_str()}};
}

namespace {

nlohmann::json complex_json(const Complex& z) {
  int digits = decimal_digits(z.precision());
  return {{"re", z.re().to_string(digits)}, {"im", z.im().to_string(digits)}, {"prec", z.precision()}};
}

nlohmann::json integers_json(const std::vector<Integer>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (const Integer& x : v) a.push_back(x.get_str());
  return a;
}

nlohmann::json recognition_json(const std::optional<RationalRecognition>& r) {
  if (!r) return nullptr;
  nlohmann::json j = {{"value", rational_json(r->value)}, {"continued_fraction", integers_json(r->partial_quotients)}};
  j["cut_quotient"] = r->cut_quotient ? nlohmann::json(r->cut_quotient->get_str()) : nlohmann::json(nullptr);
  return j;
}

}  // namespace

nlohmann::json to_json(const ClassFieldReport& rep) {
  nlohmann::json j;
  j["delta"] = rep.delta.to_string();
  j["prec"] = rep.prec;
  nlohmann::json emb = nlohmann::json::array();
  for (std::size_t i = 0; i < rep.embeddings.size(); ++i) {
    const CMEmbedding& g = rep.embeddings[i];
    nlohmann::json coords = nlohmann::json::array();
    for (const QuadRat& c : g.coords) coords.push_back(c.to_string());
    emb.push_back({{"coords", coords}, {"fixed_point", complex_json(g.fixed_point.value)}});
  }
  j["embeddings"] = emb;
  nlohmann::json vals = nlohmann::json::array();
  for (std::size_t i = 0; i < rep.values.size(); ++i) {
    const SingularValue& v = rep.values[i];
    vals.push_back({{"embedding", rep.used[i]},
                    {"phi", complex_json(v.phi)},
                    {"phi_tilde", complex_json(v.phi_tilde)},
                    {"phi2", complex_json(v.phi2)},
                    {"phi_tilde2", complex_json(v.phi_tilde2)}});
  }
  j["values"] = vals;
  j["phi2"] = recognition_json(rep.phi2);
  j["phi_tilde2"] = recognition_json(rep.phi_tilde2);
  if (rep.kernel) {
    if (rep.kernel->fits_slong_p())
      j["m"] = rep.kernel->get_si();
    else
      j["m"] = rep.kernel->get_str();
  } else {
    j["m"] = nullptr;
  }
  if (rep.min_poly) {
    nlohmann::json rc = nlohmann::json::array();
    for (const Rational& r : rep.min_poly->rational) rc.push_back(rational_json(r));
    j["min_poly"] = {{"rational", rc}, {"integral", integers_json(rep.min_poly->integral)}};
  } else {
    j["min_poly"] = nullptr;
  }
  if (rep.model) {
    j["integral_model"] = {{"scale", rational_json(rep.model->scale)},
                           {"substitution", rep.model->substitution.describe(rep.model->scale)},
                           {"coeffs", integers_json(rep.model->coeffs)},
                           {"discriminant", rep.model->discriminant.get_str()}};
  } else {
    j["integral_model"] = nullptr;
  }
  j["description"] = rep.description;
  return j;
}

const std::vector<TriangleClassRecord>& triangle_class_records() {
  static const std::vector<TriangleClassRecord> rows = {
      {3, TriangleSignature(3, 3, 4), "Q(sqrt2)", "F(zeta3)", QuadRat(3), "3"},
      {6, TriangleSignature(5, 5, 2), "Q(sqrt5)", "F(zeta5)", std::nullopt, "sin(pi/5)"},
      {7, TriangleSignature(5, 5, 3), "Q(sqrt5)", "F(zeta5)", std::nullopt, "sin(pi/5)"},
      {8, TriangleSignature(3, 3, 5), "Q(sqrt5)", "F(zeta3)", QuadRat(3), "3"},
      {13, TriangleSignature(3, 3, 8), "Q(cos(pi/8))", "F(zeta3)", QuadRat(3), "3"},
      {18, TriangleSignature(5, 5, 4), "Q(sqrt2,sqrt5)", "F(zeta5)", std::nullopt, "sin(pi/5)"},
  };
  return rows;
}

}  // namespace tcm
