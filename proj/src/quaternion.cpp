#include "tcm/quaternion.hpp"

#include <cctype>
#include <mutex>
#include <sstream>

#include "json.hpp"

#include "tcm/errors.hpp"

namespace tcm {

extern const char* const kTakeuchiJson;

// ------------------------------------------------------------ signatures

namespace {

long parse_exponent(std::string_view tok) {
  while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.remove_prefix(1);
  while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.remove_suffix(1);
  if (tok == "inf" || tok == "oo" || tok == "infinity") return kInfinity;
  long v = 0;
  if (tok.empty()) throw Error(ErrorKind::Parse, "empty exponent");
  for (char c : tok) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw Error(ErrorKind::Parse, "bad exponent '" + std::string(tok) + "'");
    v = 10 * v + (c - '0');
    if (v > 1000000) throw Error(ErrorKind::Parse, "exponent too large");
  }
  if (v < 2) throw Error(ErrorKind::Parse, "exponent must be at least 2");
  return v;
}

bool exponent_less(long x, long y) {
  if (x == kInfinity) return false;
  if (y == kInfinity) return true;
  return x < y;
}

}  // namespace

TriangleSignature::TriangleSignature(long e1, long e2, long e3) : e{e1, e2, e3} {
  for (long v : e)
    if (v != kInfinity && v < 2) throw Error(ErrorKind::Parse, "exponent must be at least 2 or infinity");
  std::sort(e.begin(), e.end(), exponent_less);
}

TriangleSignature TriangleSignature::parse(std::string_view text) {
  std::string s(text);
  std::erase_if(s, [](char c) { return c == '(' || c == ')' || std::isspace(static_cast<unsigned char>(c)); });
  std::vector<long> parts;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = s.find(',', start);
    parts.push_back(parse_exponent(std::string_view(s).substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (parts.size() != 3) throw Error(ErrorKind::Parse, "signature needs three exponents: " + std::string(text));
  return TriangleSignature(parts[0], parts[1], parts[2]);
}

bool TriangleSignature::is_hyperbolic() const {
  Rational sum = 0;
  for (long v : e)
    if (v != kInfinity) sum += Rational(1, v);
  return sum < 1;
}

std::string TriangleSignature::to_string() const {
  std::ostringstream os;
  os << '(';
  for (int k = 0; k < 3; ++k) {
    if (k) os << ',';
    if (e[k] == kInfinity)
      os << "inf";
    else
      os << e[k];
  }
  os << ')';
  return os.str();
}

// --------------------------------------------------------------- algebra

QuaternionAlgebra QuaternionAlgebra::tabulated() { return {QuadRat(-3), QuadRat::sqrt5()}; }

QuaternionAlgebra QuaternionAlgebra::calibrated() { return {-(QuadRat::sqrt5() * QuadRat::wbar()), QuadRat::wbar()}; }

bool QuaternionAlgebra::satisfies_cd() const {
  auto sign = [](const QuadRat& x, Embedding e) { return qs_embed_real(x, e, 128).sign(); };
  return sign(a, Embedding::Identity) < 0 && sign(b, Embedding::Identity) > 0 && sign(a, Embedding::Conjugate) < 0 &&
         sign(b, Embedding::Conjugate) < 0;
}

QuatElem QuatElem::parse(std::string_view text) {
  QuatElem r;
  std::size_t start = 0;
  for (int k = 0; k < 4; ++k) {
    std::size_t comma = text.find(',', start);
    if ((k < 3) != (comma != std::string_view::npos)) throw Error(ErrorKind::Parse, "quaternion needs four comma-separated coordinates");
    r.x[k] = QuadRat::parse(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    start = comma + 1;
  }
  return r;
}

bool QuatElem::is_integral() const {
  for (const auto& c : x)
    if (!c.is_integral()) return false;
  return true;
}

std::string QuatElem::to_string() const {
  return x[0].to_string() + ", " + x[1].to_string() + ", " + x[2].to_string() + ", " + x[3].to_string();
}

QuatElem operator+(const QuatElem& u, const QuatElem& v) { return {u[0] + v[0], u[1] + v[1], u[2] + v[2], u[3] + v[3]}; }

QuatElem operator-(const QuatElem& u, const QuatElem& v) { return {u[0] - v[0], u[1] - v[1], u[2] - v[2], u[3] - v[3]}; }

QuatElem operator*(const QuadRat& s, const QuatElem& u) { return {s * u[0], s * u[1], s * u[2], s * u[3]}; }

QuatElem quat_mul(const QuaternionAlgebra& alg, const QuatElem& x, const QuatElem& y) {
  const QuadRat &a = alg.a, &b = alg.b;
  QuadRat ab = a * b;
  return {x[0] * y[0] + a * x[1] * y[1] + b * x[2] * y[2] - ab * x[3] * y[3],
          x[0] * y[1] + x[1] * y[0] - b * x[2] * y[3] + b * x[3] * y[2],
          x[0] * y[2] + x[2] * y[0] + a * x[1] * y[3] - a * x[3] * y[1],
          x[0] * y[3] + x[3] * y[0] + x[1] * y[2] - x[2] * y[1]};
}

QuatElem quat_conj(const QuatElem& x) { return {x[0], -x[1], -x[2], -x[3]}; }

std::pair<QuadRat, QuadRat> trd_nrd(const QuaternionAlgebra& alg, const QuatElem& x) {
  QuadRat nrd = x[0] * x[0] - alg.a * x[1] * x[1] - alg.b * x[2] * x[2] + alg.a * alg.b * x[3] * x[3];
  return {QuadRat(2) * x[0], nrd};
}

Mat2C embed_matrix(const QuaternionAlgebra& alg, const QuatElem& x, Precision prec) {
  Precision wp = prec + 32;
  auto re = [&](const QuadRat& q) { return qs_embed_real(q, Embedding::Identity, wp); };
  Real a = re(alg.a), sb = sqrt(re(alg.b));
  Real x1 = re(x[0]), x2 = re(x[1]), x3 = re(x[2]), x4 = re(x[3]);
  // Mz = Mx My = [[0, -a sqrt b], [sqrt b, 0]]
  Real m11 = x1 + x3 * sb, m22 = x1 - x3 * sb;
  Real m12 = x2 * a - x4 * a * sb, m21 = x2 + x4 * sb;
  auto c = [&](const Real& r) {
    Complex z(r);
    z.set_precision(prec);
    return z;
  };
  return Mat2C(c(m11), c(m12), c(m21), c(m22));
}

// ------------------------------------------------------------ order basis

namespace {

using Mat4 = std::array<std::array<QuadRat, 4>, 4>;

// Solves m * c = rhs by Gaussian elimination; nullopt if singular.
std::optional<std::array<QuadRat, 4>> solve4(Mat4 m, std::array<QuadRat, 4> rhs) {
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    while (piv < 4 && m[piv][col].is_zero()) ++piv;
    if (piv == 4) return std::nullopt;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (int r = 0; r < 4; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      QuadRat f = m[r][col] / m[col][col];
      for (int k = col; k < 4; ++k) m[r][k] -= f * m[col][k];
      rhs[r] -= f * rhs[col];
    }
  }
  std::array<QuadRat, 4> out;
  for (int k = 0; k < 4; ++k) out[k] = rhs[k] / m[k][k];
  return out;
}

QuadRat det4(Mat4 m) {
  QuadRat det(1);
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    while (piv < 4 && m[piv][col].is_zero()) ++piv;
    if (piv == 4) return QuadRat(0);
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (int r = col + 1; r < 4; ++r) {
      if (m[r][col].is_zero()) continue;
      QuadRat f = m[r][col] / m[col][col];
      for (int k = col; k < 4; ++k) m[r][k] -= f * m[col][k];
    }
  }
  return det;
}

bool passes_integrity(const OrderBasis& basis) {
  QuadRat g = gram_trace_det(basis);
  if (abs(qs_norm_trace(g).first) != 25) return false;
  return is_closed_order(basis);
}

}  // namespace

std::array<QuatElem, 4> printed_basis_coordinates() {
  QuadRat half(Rational(1, 2)), w = QuadRat::w(), hw = half * w;
  return {QuatElem::one(), QuatElem(1, 0, hw, half), QuatElem(half - hw, hw, 0, 0), QuatElem(1, 0, w, 0)};
}

OrderBasis printed_order_basis() { return OrderBasis{printed_basis_coordinates(), false, QuaternionAlgebra::tabulated()}; }

std::array<QuadRat, 4> order_coords(const QuatElem& x, const OrderBasis& basis) {
  Mat4 m;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m[r][c] = basis.bg[c][r];
  auto sol = solve4(m, x.x);
  if (!sol) throw Error(ErrorKind::SingularBasis, "order basis is linearly dependent");
  return *sol;
}

QuatElem from_order_coords(const std::array<QuadRat, 4>& c, const OrderBasis& basis) {
  QuatElem r;
  for (int k = 0; k < 4; ++k) r = r + c[k] * basis.bg[k];
  return r;
}

QuadRat gram_trace_det(const OrderBasis& basis) {
  Mat4 g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g[i][j] = trd_nrd(basis.algebra, quat_mul(basis.algebra, basis.bg[i], basis.bg[j])).first;
  return det4(g);
}

bool is_closed_order(const OrderBasis& basis) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      auto c = order_coords(quat_mul(basis.algebra, basis.bg[i], basis.bg[j]), basis);
      for (const auto& v : c)
        if (!v.is_integral()) return false;
    }
  return true;
}

namespace {

struct Recognized {
  QuadRat value;
  bool ok = false;
};

// Finds p + q w with denominators dividing 4 and |q| <= 200 matching v.
Recognized recognize_in_field(const Real& v, const Real& tol) {
  Precision prec = v.precision();
  Real w = qs_embed_real(QuadRat::w(), Embedding::Identity, prec);
  for (long den : {1L, 2L, 4L}) {
    for (long qn = 0; qn <= 200 * den; ++qn) {
      for (long sgn : {1L, -1L}) {
        if (qn == 0 && sgn < 0) continue;
        Rational q(sgn * qn, den);
        q.canonicalize();
        Real p = (v - Real::from_rational(q, prec) * w) * den;
        Real pn = Real::from_integer(p.floor_integer(), prec);
        if (p - pn > Real(0.5, prec)) pn += 1L;
        if (abs(p - pn) < tol * den) {
          Rational pr(pn.floor_integer(), den);
          pr.canonicalize();
          return {QuadRat(pr, q), true};
        }
      }
    }
  }
  return {};
}

bool is_diagonal_pm(const Mat2C& y, const Real& tol, Real& out) {
  if (abs(y.b()) > tol || abs(y.c()) > tol) return false;
  if (abs(y.a().im()) > tol || abs(y.a() + y.d()) > tol) return false;
  if (y.a().re().sign() <= 0) return false;
  out = y.a().re();
  return true;
}

}  // namespace

QuaternionAlgebra calibrate_algebra(Precision prec) {
  Real tol = matrix_tolerance(prec);
  Real w = qs_embed_real(QuadRat::w(), Embedding::Identity, prec);
  Real wb = qs_embed_real(QuadRat::wbar(), Embedding::Identity, prec);
  Mat2C id = Mat2C::identity(prec);
  Complex cw(w), half(Real(1L, prec) / 2L);

  // h34 = (wbar/2) + (w/2) alpha.
  std::optional<Mat2C> mx;
  Real a_val(0L, prec);
  for (long s : {1L, -1L}) {
    Mat2C t = Complex(s, prec) * transport(builtin_matrix("h34", prec), Direction::DtoH).normalized();
    Mat2C x = Complex(Real(2L, prec) / w) * (t - Complex(wb / 2L) * id);
    if (abs(x.a()) < tol && abs(x.d()) < tol && abs(x.c() - Complex(1L, prec)) < tol && abs(x.b().im()) < tol) {
      mx = x;
      a_val = x.b().re();
      break;
    }
  }
  if (!mx) throw Error(ErrorKind::CalibrationFailed, "transported h34 is not of the form (wbar + w alpha)/2");

  // rot_Vc = 1/2 + (-1/2 + w/2) alpha + s (w/2) beta - (1/2) alpha beta.
  Real b_val(0L, prec);
  bool found = false;
  for (const char* name : {"rotvc", "rotvcp"}) {
    Mat2C rot = transport(builtin_matrix(name, prec), Direction::DtoH).normalized();
    for (long s : {1L, -1L}) {
      for (long e : {1L, -1L}) {
        Mat2C r = Complex(s, prec) * rot;
        Mat2C lhs = r - half * id - Complex((w - 1L) / 2L) * *mx;
        Mat2C coef = Complex(e, prec) * (cw / 2L) * id - half * *mx;
        Real y(0L, prec);
        if (is_diagonal_pm(coef.inverse() * lhs, tol, y)) {
          b_val = y * y;
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (found) break;
  }
  if (!found) throw Error(ErrorKind::CalibrationFailed, "transported rot_Vc does not determine beta");

  Recognized ra = recognize_in_field(a_val, tol), rb = recognize_in_field(b_val, tol);
  if (!ra.ok || !rb.ok) throw Error(ErrorKind::CalibrationFailed, "(a, b) not recognized in Q(sqrt5)");
  QuaternionAlgebra alg{ra.value, rb.value};
  if (!alg.satisfies_cd()) throw Error(ErrorKind::CalibrationFailed, "recovered algebra violates (Cd)");
  return alg;
}

OrderBasis order_basis() {
  static const OrderBasis cached = [] {
    OrderBasis printed = printed_order_basis();
    if (passes_integrity(printed)) return printed;
    OrderBasis cal{printed_basis_coordinates(), true, calibrate_algebra()};
    if (!passes_integrity(cal)) throw Error(ErrorKind::CalibrationFailed, "calibrated basis fails the Gram/closure checks");
    // The calibrated basis must contain the generators it was recovered from.
    Precision prec = 192;
    Real tol = matrix_tolerance(prec);
    Mat2C t = transport(builtin_matrix("h34", prec), Direction::DtoH).normalized();
    Mat2C e = embed_matrix(cal.algebra, cal.bg[2], prec);
    if (!approx_equal(t, e, tol) && !approx_equal(Complex(-1L, prec) * t, e, tol))
      throw Error(ErrorKind::CalibrationFailed, "h34 is not BG3 in the calibrated algebra");
    return cal;
  }();
  return cached;
}

// --------------------------------------------------------------- Takeuchi

namespace {

std::vector<TakeuchiClass> load_table() {
  auto j = nlohmann::json::parse(kTakeuchiJson);
  std::vector<TakeuchiClass> out;
  for (const auto& row : j.at("classes")) {
    TakeuchiClass c;
    c.name = row.at("class");
    c.field = row.at("field");
    c.disc = row.at("disc");
    c.norm1 = row.at("norm1");
    c.unit = row.at("unit");
    c.normalizer = row.at("normalizer");
    c.a_expr = row.at("a");
    c.b_expr = row.at("b");
    if (row.contains("b_as_printed")) c.b_as_printed = row.at("b_as_printed").get<std::string>();
    for (const auto& m : row.at("members")) c.members.push_back(TriangleSignature::parse(m.get<std::string>()));
    out.push_back(std::move(c));
  }
  return out;
}

// t^2 = 4cos^2(pi/e) when it lies in Q(sqrt5).
std::optional<QuadRat> t_squared_exact(long e) {
  switch (e) {
    case kInfinity: return QuadRat(4);
    case 2: return QuadRat(0);
    case 3: return QuadRat(1);
    case 4: return QuadRat(2);
    case 5: return QuadRat(2, -1);
    case 6: return QuadRat(3);
    case 10: return QuadRat(3, -1);
    default: return std::nullopt;
  }
}

Real t_numeric(long e, Precision prec) {
  if (e == kInfinity) return Real(2L, prec);
  return 2L * cos(Real::pi(prec) / e);
}

class ExprParser {
 public:
  ExprParser(std::string_view s, Precision prec) : s_(s), prec_(prec) {}

  Real run() {
    Real v = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return v;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  Precision prec_;

  [[noreturn]] void fail(const std::string& what) {
    throw Error(ErrorKind::Parse, what + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  Real expr() {
    Real v = term();
    for (;;) {
      if (eat('+'))
        v += term();
      else if (eat('-'))
        v -= term();
      else
        return v;
    }
  }
  Real term() {
    Real v = unary();
    for (;;) {
      if (eat('*'))
        v *= unary();
      else if (eat('/'))
        v /= unary();
      else
        return v;
    }
  }
  Real unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  Real power() {
    Real base = primary();
    if (!eat('^')) return base;
    Real ex = unary();
    Real rounded = Real::from_integer(ex.floor_integer(), prec_);
    if (rounded == ex) return pow(base, rounded.floor_integer().get_si());
    return exp(ex * log(base));
  }
  Real primary() {
    skip();
    if (eat('(')) {
      Real v = expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      return Real::parse(s_.substr(start, pos_ - start), prec_);
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string_view name = s_.substr(start, pos_ - start);
    if (name == "pi") return Real::pi(prec_);
    if (name == "sqrt" || name == "cos") {
      if (!eat('(')) fail("expected '('");
      Real arg = expr();
      if (!eat(')')) fail("expected ')'");
      return name == "sqrt" ? sqrt(arg) : cos(arg);
    }
    fail(name.empty() ? "unexpected character" : "unknown name '" + std::string(name) + "'");
  }
};

}  // namespace

Real eval_expression(std::string_view text, Precision prec) {
  Precision wp = prec + 32;
  Real v = ExprParser(text, wp).run();
  v.set_precision(prec);
  return v;
}

const std::vector<TakeuchiClass>& takeuchi_table() {
  static const std::vector<TakeuchiClass> table = load_table();
  return table;
}

const TakeuchiClass* takeuchi_class_of(const TriangleSignature& sig) {
  for (const auto& c : takeuchi_table())
    for (const auto& m : c.members)
      if (m == sig) return &c;
  return nullptr;
}

TakeuchiAB takeuchi_ab(const TriangleSignature& sig, Precision prec) {
  const TakeuchiClass* row = takeuchi_class_of(sig);
  if (!row) throw Error(ErrorKind::NotArithmetic, sig.to_string() + " is not an arithmetic triangle signature");
  TakeuchiAB out{std::nullopt, std::nullopt, Real(0L, prec), Real(0L, prec), row};

  Precision wp = prec + 32;
  Real t1 = t_numeric(sig.e[0], wp), t2 = t_numeric(sig.e[1], wp), t3 = t_numeric(sig.e[2], wp);
  Real s1 = t1 * t1, s2 = t2 * t2, s3 = t3 * t3;
  out.a = s2 * (s2 - 4L);
  out.b = s2 * s3 * (s1 + s2 + s3 + t1 * t2 * t3 - 4L);
  out.a.set_precision(prec);
  out.b.set_precision(prec);

  auto q1 = t_squared_exact(sig.e[0]), q2 = t_squared_exact(sig.e[1]), q3 = t_squared_exact(sig.e[2]);
  if (q1 && q2 && q3) {
    auto prod = qs_sqrt(*q1 * *q2 * *q3);
    if (prod) {
      QuadRat t123 = *prod;
      if (qs_embed_real(t123, Embedding::Identity, 64).sign() < 0) t123 = -t123;
      out.a_exact = *q2 * (*q2 - QuadRat(4));
      out.b_exact = *q2 * *q3 * (*q1 + *q2 + *q3 + t123 - QuadRat(4));
    }
  }
  return out;
}

}  // namespace tcm
