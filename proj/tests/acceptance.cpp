// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "suites.hpp"
#include "tcm/cmfield.hpp"
#include "tcm/errors.hpp"
#include "tcm/hyperbolic.hpp"
#include "tcm/quaternion.hpp"
#include "tcm/theta.hpp"

using namespace tcm;

namespace {

using Outcome = std::pair<bool, std::string>;
using Clock = std::chrono::steady_clock;

int failures = 0;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void report(const std::string& id, const std::string& title, const std::function<Outcome()>& body) {
  auto t0 = Clock::now();
  Outcome r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  if (!r.first) ++failures;
  std::printf("%s %-4s %s [%.2fs] %s\n", r.first ? "PASS" : "FAIL", id.c_str(), title.c_str(), since(t0), r.second.c_str());
  std::fflush(stdout);
}

void info(const std::string& id, const std::string& text) {
  std::printf("INFO %-4s %s\n", id.c_str(), text.c_str());
  std::fflush(stdout);
}

std::string sci(const Real& x) { return x.to_string(4); }

Real w_value(Precision p) { return (Real(1L, p) - sqrt(Real(5L, p))) / 2L; }

std::array<QuadRat, 4> coords(const char* text) { return QuatElem::parse(text).x; }

Complex random_point(std::mt19937_64& rng, double radius, Precision p) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (;;) {
    double x = d(rng) * radius, y = d(rng) * radius;
    if (x * x + y * y <= radius * radius) return Complex(Real(x, p), Real(y, p));
  }
}

Integer prime_product(const std::vector<std::pair<long, int>>& factors, long sign) {
  Integer n = sign;
  for (auto [p, e] : factors)
    for (int i = 0; i < e; ++i) n *= p;
  return n;
}

std::string join(const std::vector<long>& xs) {
  std::string s;
  for (long x : xs) s += (s.empty() ? "" : ",") + std::to_string(x);
  return "[" + s + "]";
}

const char* kU53 =
    "-0.2884031937082062430429292960544310724595352385781433875628704276940,"
    "0.2095371854415799547791501532228242020959121464954639149713389790753";

void criterion_1() {
  const Precision p = 128;
  auto ctx = PrecisionContext::with_bits(p);
  Real tol(1e-20, p);
  auto t0 = Clock::now();
  report("1a", "lambda(0) = 1", [&] {
    LambdaValue l = lambda_of(Complex(p), ctx);
    Real err = abs(l.value - Complex(1L, p));
    return Outcome{!l.infinite && err < tol, "|lambda(0) - 1| = " + sci(err)};
  });
  report("1b", "lambda(w e^{-2 pi i/5}) = 0", [&] {
    LambdaValue l = lambda_of(Complex(w_value(p)) * Complex::unit_root(-1, 5, p), ctx);
    if (l.infinite) return Outcome{false, "lambda is infinite there, |1/lambda| = " + sci(abs(l.inverse))};
    Real v = abs(l.value);
    return Outcome{v < tol, "|lambda| = " + sci(v)};
  });
  {
    LambdaValue l = lambda_of(Complex(w_value(p)) * Complex::unit_root(-1, 10, p), ctx);
    info("1b", "|lambda(w e^{-i pi/5})| = " + (l.infinite ? std::string("inf") : sci(abs(l.value))));
  }
  report("1c", "lambda(w) = infinity", [&] {
    LambdaValue l = lambda_of(Complex(w_value(p)), ctx);
    Real inv = abs(l.inverse);
    return Outcome{inv < tol, "|1/lambda(w)| = " + sci(inv)};
  });
  double elapsed = since(t0);
  report("1t", "criterion 1 runtime < 10 s", [&] {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f s", elapsed);
    return Outcome{elapsed < 10.0, buf};
  });
}

void criterion_2() {
  report("2", "lambda invariance under h34, hn45, hn412", [&] {
    const Precision p = 128;
    auto ctx = PrecisionContext::with_bits(p);
    std::mt19937_64 rng(2024);
    Real worst(0L, p);
    int count = 0;
    for (const char* name : {"h34", "hn45", "hn412"}) {
      Mat2C g = builtin_matrix(name, p);
      for (int k = 0; k < 20; ++k) {
        Complex u = random_point(rng, 0.5, p);
        LambdaValue a = lambda_of(u, ctx), b = lambda_of(mobius_act(g, u), ctx);
        Real err = abs(b.value - a.value) / max(Real(1L, p), abs(a.value));
        worst = max(worst, err);
        ++count;
      }
    }
    return Outcome{worst < Real(1e-20, p), std::to_string(count) + " pairs, max relative error " + sci(worst)};
  });
}

void criterion_3() {
  report("3a", "delta = 7 end to end", [&] {
    ClassFieldConfig cfg;
    cfg.ctx = PrecisionContext::with_bits(256);
    cfg.bound = 8;
    ClassFieldReport rep = class_field_report(CMParameter::make(QuadRat(7)), cfg);
    bool exact = rep.phi_tilde2 && rep.phi_tilde2->value == Rational(-2527, 36);
    bool kernel = rep.kernel && *rep.kernel == -7;
    std::string detail = "phi~^2 = " + (rep.phi_tilde2 ? to_string(rep.phi_tilde2->value) : std::string("?")) +
                         " (exact -2527/36: " + (exact ? "yes" : "no") + "), kernel " +
                         (rep.kernel ? rep.kernel->get_str() : std::string("?")) + " (-7: " + (kernel ? "yes" : "no") +
                         "), " + rep.description;
    return Outcome{exact || kernel, detail};
  });
  report("3b", "fixed point from the printed vector", [&] {
    const Precision p = 256;
    Point u = fixed_point_of(make_embedding(coords("-3 + 2*w, 2*w, 4 - 2*w, -2*w"), p), PrecisionContext::with_bits(p));
    Real err = abs(u.value - Complex::parse("-0.205396,-0.0667372", p));
    return Outcome{err < Real(5e-6, p), "u0 = " + u.value.to_string(10) + ", error " + sci(err)};
  });
}

void criterion_4() {
  const Precision p = 512;
  auto ctx = PrecisionContext::with_bits(p);
  Rational expect(prime_product({{13, 1}, {29, 2}, {79, 2}}, -1), prime_product({{2, 8}, {3, 13}}, 1));
  std::optional<SingularValue> v;
  report("4a", "phi^2 at the 67-digit u0", [&] {
    v = singular_value(Complex::parse(kU53, p), ctx);
    Real e = Real::from_rational(expect, p);
    Real err = abs(v->phi2 - Complex(e)) / abs(e);
    return Outcome{err < Real(1e-30, p), "relative error " + sci(err)};
  });
  report("4b", "recognize_rational recovers the rational", [&] {
    if (!v) return Outcome{false, "no singular value"};
    // u0 carries 67 digits, so phi^2 is good to about 215 bits.
    Real x = v->phi2.re().with_precision(192);
    auto r = recognize_rational(x);
    if (!r) return Outcome{false, "not recognized"};
    auto neg = recognize_rational(-x);
    std::vector<long> want{0, 5, 1, 53, 1, 1, 3, 4, 1, 12, 7, 74, 2, 2};
    bool head_ok = neg && neg->partial_quotients.size() >= want.size();
    std::vector<long> got;
    if (neg)
      for (std::size_t i = 0; i < neg->partial_quotients.size() && i < want.size(); ++i) {
        got.push_back(neg->partial_quotients[i].get_si());
        head_ok = head_ok && neg->partial_quotients[i] == want[i];
      }
    bool ok = r->value == expect && neg && neg->value == -expect && head_ok;
    return Outcome{ok, "phi^2 = " + to_string(r->value) + ", -phi^2 expansion " + join(got)};
  });
}

void criterion_5() {
  const Precision p = 256;
  auto ctx = PrecisionContext::with_bits(p);
  std::optional<MinimalPolynomial> mp;
  report("5a", "r1, r2, r3 from the three singular values", [&] {
    SingularValue s4 = singular_value(make_embedding(coords("-2, 3*w, 4 - 3*w, -1 - w"), p), ctx);
    SingularValue s11 = singular_value(make_embedding(coords("4 - 3*w, w, -4 + w, -1"), p), ctx);
    std::vector<Complex> values{s11.phi_tilde2, s4.phi_tilde2, conj(s4.phi_tilde2)};
    mp = min_poly_from_values(values, Rational(256));
    std::vector<Rational> r{parse_rational("298002375630573376/6131066257801"),
                            parse_rational("27944558699379372032/1375668606321"),
                            parse_rational("146663661576709210112/34296447249")};
    const auto& c = mp->rational;
    bool ok = c.size() == 4 && c[3] == 1 && c[2] == r[0] && c[1] == r[1] && c[0] == r[2];
    return Outcome{ok, "r1 = " + to_string(c[2]) + ", r2 = " + to_string(c[1]) + ", r3 = " + to_string(c[0])};
  });
  report("5b", "integral model and discriminant", [&] {
    if (!mp) return Outcome{false, "no polynomial"};
    IntegralModel m = integral_model(mp->rational, Rational(11L * 11 * 11 * 256 * 625), Substitution{true, Rational(9), Rational(1728)});
    std::vector<Integer> want{Integer("6131066257801"), Integer("12444768657"), Integer(19268), Integer(1)};
    Integer disc = prime_product({{19, 4}, {61, 2}, {79, 2}, {89, 2}, {109, 2}, {149, 2}, {229, 2}, {23, 1}}, -1);
    bool ok = m.coeffs == want && m.discriminant == disc;
    return Outcome{ok, "Y^3 + " + m.coeffs[2].get_str() + " Y^2 + " + m.coeffs[1].get_str() + " Y + " +
                           m.coeffs[0].get_str() + ", disc " + m.discriminant.get_str()};
  });
}

void criterion_6() {
  report("6a", "Takeuchi rows agree up to a square factor", [&] {
    const Precision p = 128;
    Real worst(0L, p);
    bool positive = true;
    for (const auto& c : takeuchi_table()) {
      auto r = takeuchi_ab(TriangleSignature::parse(c.normalizer), p);
      Real ra = r.a / eval_expression(c.a_expr, p), rb = r.b / eval_expression(c.b_expr, p);
      positive = positive && ra > Real(0L, p) && rb > Real(0L, p);
      worst = max(worst, max(abs(ra - 1L), abs(rb - 1L)));
    }
    return Outcome{positive && worst < Real(1e-20, p),
                   std::to_string(takeuchi_table().size()) + " rows, ratios positive, max |ratio - 1| " + sci(worst)};
  });
  report("6b", "class VIII ratio is exactly wbar^2", [&] {
    auto r = takeuchi_ab(TriangleSignature(3, 3, 5));
    const TakeuchiClass* row = takeuchi_class_of(TriangleSignature(3, 3, 5));
    if (!r.b_exact || !row) return Outcome{false, "no exact value"};
    // The tabulated b of class VIII is sqrt5.
    bool tab = abs(eval_expression(row->b_expr, 128) - sqrt(Real(5L, 128))) < Real(1e-30, 128);
    QuadRat ratio = *r.b_exact / QuadRat::sqrt5();
    return Outcome{tab && ratio == QuadRat::wbar() * QuadRat::wbar(), "b(3,3,5) / b(VIII) = " + ratio.to_string()};
  });
}

void criterion_7() {
  report("7", "order integrity", [&] {
    QuadRat g = gram_trace_det(order_basis());
    Rational n = qs_norm_trace(g).first;
    bool closed = is_closed_order(order_basis());
    return Outcome{abs(n) == 25 && closed, "N(Gram det) = " + to_string(n) + ", closed " + (closed ? "yes" : "no")};
  });
}

void criterion_8() {
  report("8", "zero characteristic theta at iI", [&] {
    const Precision p = 256;
    SiegelPoint o;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) o(i, j) = i == j ? Complex::i(p) : Complex(p);
    Complex t = theta_const(ThetaCharacteristic::zero(), o, PrecisionContext::with_bits(p));
    Real s(1L, p), pi = Real::pi(p);
    for (long n = 1; n <= 25; ++n) s += 2L * exp(-pi * Real(n * n, p));
    Real expect = pow(s, 4);
    Real err = abs(t - Complex(expect)) / expect;
    return Outcome{err < Real(1e-30, p), "relative error " + sci(err)};
  });
}

void criterion_9() {
  auto ctx = PrecisionContext::with_bits(128);
  std::vector<suites::CheckResult> rs{suites::check_quasi_periodicity(ctx, 8), suites::check_mobius_composition(128, 500),
                                      suites::check_fixed_point_residual(128), suites::check_rational_roundtrip(128, 1000)};
  char id[] = "9a";
  for (const auto& r : rs) {
    report(id, r.name, [&] { return Outcome{r.pass, r.detail}; });
    ++id[1];
  }
}

void criterion_10() {
  report("10a", "one lambda at 256 bits < 5 s", [&] {
    auto ctx = PrecisionContext::with_bits(256);
    std::mt19937_64 rng(10);
    Complex u = random_point(rng, 0.5, 256);
    auto t0 = Clock::now();
    lambda_of(u, ctx);
    double s = since(t0);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f s", s);
    return Outcome{s < 5.0, buf};
  });
  report("10b", "verify --suite all < 5 min", [&] {
    auto t0 = Clock::now();
    auto rs = suites::run_suite("all", PrecisionContext::with_bits(256));
    double s = since(t0);
    int bad = 0;
    for (const auto& r : rs) bad += r.pass ? 0 : 1;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.1f s, %d/%zu checks passed", s, static_cast<int>(rs.size()) - bad, rs.size());
    return Outcome{s < 300.0 && bad == 0, buf};
  });
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
