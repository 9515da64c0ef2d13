#include "suites.hpp"

#include <chrono>
#include <functional>
#include <random>
#include <utility>

#include "tcm/cmfield.hpp"
#include "tcm/errors.hpp"
#include "tcm/hyperbolic.hpp"
#include "tcm/quaternion.hpp"

namespace tcm::suites {

namespace {

using Outcome = std::pair<bool, std::string>;

CheckResult timed(const std::string& suite, const std::string& name, const std::function<Outcome()>& body) {
  CheckResult r;
  r.suite = suite;
  r.name = name;
  auto t0 = std::chrono::steady_clock::now();
  try {
    std::tie(r.pass, r.detail) = body();
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::string sci(const Real& x) { return x.to_string(4); }

Real two_pow(long e, Precision prec) { return ldexp(Real(1L, prec), e); }

Complex random_point(std::mt19937_64& rng, double radius, Precision prec) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (;;) {
    double x = d(rng) * radius, y = d(rng) * radius;
    if (x * x + y * y <= radius * radius) return Complex(Real(x, prec), Real(y, prec));
  }
}

Real rel_err(const Complex& x, const Complex& y) { return abs(x - y) / max(Real(1L, x.precision()), abs(y)); }

Real w_value(Precision prec) { return (Real(1L, prec) - sqrt(Real(5L, prec))) / 2L; }

std::array<QuadRat, 4> coords(const char* text) { return QuatElem::parse(text).x; }

Precision at_least(Precision p, Precision floor) { return p < floor ? floor : p; }

// ------------------------------------------------------------------ theta

std::vector<CheckResult> theta_suite(const PrecisionContext& ctx) {
  const std::string s = "theta";
  const Precision p = ctx.prec;
  std::vector<CheckResult> out;

  out.push_back(timed(s, "zero_characteristic_at_iI", [&] {
    Precision hp = at_least(p, 256);
    SiegelPoint o;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) o(i, j) = i == j ? Complex::i(hp) : Complex(hp);
    Complex t = theta_const(ThetaCharacteristic::zero(), o, PrecisionContext::with_bits(hp));
    Real one_dim(1L, hp), pi = Real::pi(hp);
    for (long n = 1; n <= 25; ++n) one_dim += 2L * exp(-pi * Real(n * n, hp));
    Real expect = pow(one_dim, 4);
    Real err = abs(t - Complex(expect)) / expect;
    return Outcome{err < Real(1e-30, hp), "relative error " + sci(err)};
  }));

  out.push_back(check_quasi_periodicity(ctx, 4));

  out.push_back(timed(s, "omega_symmetric_positive", [&] {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 10; ++k) {
      SiegelPoint o = omega_of(random_point(rng, 0.75, p), ctx);
      if (!o.is_symmetric(matrix_tolerance(p)) || !o.has_positive_imaginary_part())
        return Outcome{false, "point " + std::to_string(k)};
    }
    return Outcome{true, "10 points"};
  }));

  out.push_back(timed(s, "truncation_stability", [&] {
    std::mt19937_64 rng(7);
    SiegelPoint o = omega_of(random_point(rng, 0.5, p), ctx);
    long R = truncation_radius(o, ThetaCharacteristic::a11(), p);
    PrecisionContext wide = ctx;
    wide.radius = 2 * R;
    wide.max_radius = std::max(ctx.max_radius, 2 * R);
    Real err = abs(theta_const(ThetaCharacteristic::a11(), o, ctx) - theta_const(ThetaCharacteristic::a11(), o, wide));
    return Outcome{err < ctx.tolerance(), "R = " + std::to_string(R) + ", |diff| " + sci(err)};
  }));

  Real tol(1e-20, p);
  out.push_back(timed(s, "lambda_at_origin", [&] {
    LambdaValue l = lambda_of(Complex(p), ctx);
    Real err = abs(l.value - Complex(1L, p));
    return Outcome{!l.infinite && err < tol, "|lambda(0) - 1| " + sci(err)};
  }));
  out.push_back(timed(s, "lambda_pole_at_w", [&] {
    LambdaValue l = lambda_of(Complex(w_value(p)), ctx);
    Real inv = abs(l.inverse);
    return Outcome{inv < tol, "|1/lambda(w)| " + sci(inv)};
  }));
  out.push_back(timed(s, "lambda_zero_at_w_exp(-i pi/5)", [&] {
    LambdaValue l = lambda_of(Complex(w_value(p)) * Complex::unit_root(-1, 10, p), ctx);
    Real v = l.infinite ? Real(1L, p) : abs(l.value);
    return Outcome{!l.infinite && v < tol, "|lambda| " + sci(v)};
  }));
  return out;
}

// ------------------------------------------------------------------ group

std::vector<CheckResult> group_suite(const PrecisionContext& ctx) {
  const std::string s = "group";
  const Precision p = ctx.prec;
  std::vector<CheckResult> out;

  out.push_back(timed(s, "generator_orders", [&] {
    std::string detail;
    bool ok = true;
    for (auto [name, order] : std::vector<std::pair<const char*, long>>{{"h34", 5}, {"hn45", 5}, {"hn412", 5}, {"rotvc", 3}}) {
      Mat2C g = builtin_matrix(name, p);
      long n = order_of_elliptic(g);
      bool det_one = abs(g.det() - Complex(1L, p)) < matrix_tolerance(p);
      ok = ok && n == order && det_one;
      detail += std::string(name) + ":" + std::to_string(n) + " ";
    }
    return Outcome{ok, detail};
  }));

  out.push_back(timed(s, "lambda_invariance", [&] {
    std::mt19937_64 rng(11);
    Real worst(0L, p);
    for (const char* name : {"h34", "hn45", "hn412"}) {
      Mat2C g = builtin_matrix(name, p);
      for (int k = 0; k < 2; ++k) {
        Complex u = random_point(rng, 0.45, p);
        LambdaValue a = lambda_of(u, ctx), b = lambda_of(mobius_act(g, u), ctx);
        worst = max(worst, rel_err(b.value, a.value));
      }
    }
    return Outcome{worst < Real(1e-20, p), "max relative error " + sci(worst)};
  }));

  out.push_back(timed(s, "Phi_lambda_invariance_rotvc", [&] {
    std::mt19937_64 rng(13);
    Mat2C r = builtin_matrix("rotvc", p);
    Real worst(0L, p);
    for (int k = 0; k < 2; ++k) {
      Complex u = random_point(rng, 0.3, p);
      worst = max(worst, rel_err(big_phi(lambda_of(mobius_act(r, u), ctx)), big_phi(lambda_of(u, ctx))));
    }
    return Outcome{worst < Real(1e-20, p), "max relative error " + sci(worst)};
  }));

  out.push_back(check_mobius_composition(p, 200));
  out.push_back(check_fixed_point_residual(p));
  return out;
}

// ------------------------------------------------------------------ order

std::vector<CheckResult> order_suite(const PrecisionContext& ctx) {
  const std::string s = "order";
  std::vector<CheckResult> out;
  out.push_back(timed(s, "calibration", [&] {
    QuaternionAlgebra a = calibrate_algebra(at_least(ctx.prec, 256));
    return Outcome{a == QuaternionAlgebra::calibrated() && a.satisfies_cd(),
                   "(a, b) = (" + a.a.to_string() + ", " + a.b.to_string() + ")"};
  }));
  out.push_back(timed(s, "gram_norm_25", [&] {
    QuadRat g = gram_trace_det(order_basis());
    Rational n = qs_norm_trace(g).first;
    return Outcome{abs(n) == 25, "Gram det " + g.to_string() + ", norm " + to_string(n)};
  }));
  out.push_back(timed(s, "closure", [&] {
    const OrderBasis& b = order_basis();
    return Outcome{is_closed_order(b) && b.calibrated, "BG_i BG_j integral over the basis"};
  }));
  out.push_back(timed(s, "printed_algebra_rejected", [&] {
    OrderBasis pb = printed_order_basis();
    return Outcome{!is_closed_order(pb), "tabulated (-3, sqrt5) does not close the printed basis"};
  }));
  out.push_back(timed(s, "takeuchi_rows", [&] {
    Precision tp = 128;
    Real worst(0L, tp);
    for (const auto& c : takeuchi_table()) {
      auto r = takeuchi_ab(TriangleSignature::parse(c.normalizer), tp);
      worst = max(worst, abs(r.a - eval_expression(c.a_expr, tp)));
      worst = max(worst, abs(r.b / eval_expression(c.b_expr, tp) - 1L));
    }
    return Outcome{worst < Real(1e-20, tp), std::to_string(takeuchi_table().size()) + " rows, max deviation " + sci(worst)};
  }));
  out.push_back(timed(s, "takeuchi_class_VIII_ratio", [&] {
    auto r = takeuchi_ab(TriangleSignature(3, 3, 5));
    bool ok = r.a_exact && r.b_exact && *r.a_exact == QuadRat(-3) &&
              *r.b_exact / QuadRat::sqrt5() == QuadRat::wbar() * QuadRat::wbar();
    return Outcome{ok, "b / sqrt5 = " + (r.b_exact ? (*r.b_exact / QuadRat::sqrt5()).to_string() : std::string("?"))};
  }));
  return out;
}

// --------------------------------------------------------------- examples

std::vector<CheckResult> examples_suite(const PrecisionContext& base) {
  const std::string s = "examples";
  PrecisionContext ctx = base;
  ctx.prec = at_least(base.prec, 256);
  const Precision p = ctx.prec;
  std::vector<CheckResult> out;

  out.push_back(timed(s, "5.1_fixed_point", [&] {
    Point u = fixed_point_of(make_embedding(coords("-3 + 2*w, 2*w, 4 - 2*w, -2*w"), p), ctx);
    Real err = abs(u.value - Complex::parse("-0.205396,-0.0667372", p));
    return Outcome{err < Real(5e-6, p), "u0 = " + u.value.to_string(8)};
  }));
  out.push_back(timed(s, "5.1_class_field", [&] {
    ClassFieldConfig cfg;
    cfg.ctx = ctx;
    auto rep = class_field_report(CMParameter::make(QuadRat(7)), cfg);
    bool ok = rep.phi_tilde2 && rep.phi_tilde2->value == Rational(-2527, 36) && rep.kernel && *rep.kernel == -7 &&
              rep.description == "C(M) = M";
    return Outcome{ok, rep.description + ", phi~^2 = " + (rep.phi_tilde2 ? to_string(rep.phi_tilde2->value) : "?")};
  }));
  out.push_back(timed(s, "5.2_fixed_point", [&] {
    Point u = fixed_point_of(make_embedding(coords("3 - 3*w, 1, -4 + 2*w, -1 + w"), p), ctx);
    Real err = abs(u.value - Complex::parse("-0.164894,-0.119803", p));
    return Outcome{err < Real(5e-6, p), "u0 = " + u.value.to_string(8)};
  }));
  out.push_back(timed(s, "5.2_class_field", [&] {
    ClassFieldConfig cfg;
    cfg.ctx = ctx;
    auto rep = class_field_report(CMParameter::make(QuadRat(6, -2)), cfg);
    return Outcome{rep.description == "C(M) = M(sqrt(2))", rep.description};
  }));
  out.push_back(timed(s, "5.3_singular_value", [&] {
    Complex u = Complex::parse(
        "-0.2884031937082062430429292960544310724595352385781433875628704276940,"
        "0.2095371854415799547791501532228242020959121464954639149713389790753",
        p);
    Point fp = fixed_point_of(make_embedding(coords("1 - 2*w, 2, -8 - 2*w, -2*w"), p), ctx);
    SingularValue v = singular_value(u, ctx);
    auto r = recognize_rational(-v.phi2.re());
    Rational expect(Integer(13 * 29 * 29 * 79 * 79), Integer(256L * 1594323L));
    bool ok = abs(fp.value - u) < Real(1e-60, p) && r && r->value == expect;
    return Outcome{ok, "-phi^2 = " + (r ? to_string(r->value) : std::string("unrecognized"))};
  }));
  out.push_back(timed(s, "5.3_class_field", [&] {
    ClassFieldConfig cfg;
    cfg.ctx = ctx;
    auto rep = class_field_report(CMParameter::make(QuadRat(39, 52)), cfg);
    return Outcome{rep.description == "C(M) = M(sqrt(13))", rep.description};
  }));
  out.push_back(timed(s, "5.4_class_polynomial", [&] {
    ClassFieldConfig cfg;
    cfg.ctx = ctx;
    cfg.degree = 3;
    cfg.scale = 256;
    cfg.model_scale = Rational(11L * 11 * 11 * 256 * 625);
    cfg.substitution = Substitution{true, Rational(9), Rational(1728)};
    cfg.generators = {coords("-2, 3*w, 4 - 3*w, -1 - w"), coords("4 - 3*w, w, -4 + w, -1")};
    auto rep = class_field_report(CMParameter::make(QuadRat(23)), cfg);
    std::vector<Integer> expect{Integer("6131066257801"), Integer("12444768657"), Integer(19268), Integer(1)};
    bool ok = rep.model && rep.model->coeffs == expect &&
              rep.model->discriminant == Integer("-7626628694599796659779329196983");
    return Outcome{ok, rep.description};
  }));
  out.push_back(check_rational_roundtrip(128, 1000));
  return out;
}

}  // namespace

// --------------------------------------------------------------- properties

CheckResult check_quasi_periodicity(const PrecisionContext& ctx, int shifts) {
  return timed("theta", "quasi_periodicity", [&] {
    const Precision p = ctx.prec;
    std::mt19937_64 rng(17);
    SiegelPoint o = omega_of(random_point(rng, 0.5, p), ctx);
    Real pi = Real::pi(p), worst(0L, p);
    std::uniform_int_distribution<long> d(-2, 2);
    for (const auto& base : {ThetaCharacteristic::a11(), ThetaCharacteristic::a19()}) {
      Complex t = theta_const(base, o, ctx);
      for (int k = 0; k < shifts; ++k) {
        ThetaCharacteristic sh = base;
        Rational dot = 0;
        for (int i = 0; i < 4; ++i) {
          long m = d(rng), n = d(rng);
          sh.a[i] += m;
          sh.b[i] += n;
          dot += base.a[i] * n;
        }
        Complex phase = Complex::polar(Real(1L, p), 2L * pi * Real::from_rational(dot, p));
        worst = max(worst, rel_err(theta_const(sh, o, ctx), phase * t));
      }
    }
    return Outcome{worst < two_pow(-p / 2, p), std::to_string(2 * shifts) + " shifts, max relative error " + sci(worst)};
  });
}

CheckResult check_mobius_composition(Precision prec, int pairs) {
  return timed("group", "mobius_composition", [&] {
    std::vector<Mat2C> gens;
    for (const char* name : {"h34", "hn45", "hn412", "rotvc", "rotvcp"}) gens.push_back(builtin_matrix(name, prec));
    std::mt19937_64 rng(19);
    std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
    Real worst(0L, prec);
    for (int k = 0; k < pairs; ++k) {
      const Mat2C& a = gens[pick(rng)];
      const Mat2C& b = gens[pick(rng)];
      Complex z = random_point(rng, 0.7, prec);
      worst = max(worst, abs(mobius_act(a * b, z) - mobius_act(a, mobius_act(b, z))));
    }
    return Outcome{worst < two_pow(-prec / 2, prec), std::to_string(pairs) + " pairs, max error " + sci(worst)};
  });
}

CheckResult check_fixed_point_residual(Precision prec) {
  return timed("group", "fixed_point_residual", [&] {
    std::size_t count = 0;
    Real worst(0L, prec);
    for (const char* d : {"7", "6 - 2*w"}) {
      for (const auto& g : search_generators(CMParameter::make(QuadRat::parse(d)), 8, prec)) {
        Mat2C t = transport(g.matrix, Direction::HtoD);
        const Complex& u = g.fixed_point.value;
        if (!in_domain(u, Domain::Disc, Real(0L, prec))) return Outcome{false, "fixed point outside D for " + g.to_string()};
        worst = max(worst, abs(mobius_act(t, u) - u));
        ++count;
      }
    }
    return Outcome{worst < two_pow(-prec / 2, prec), std::to_string(count) + " embeddings, max residual " + sci(worst)};
  });
}

CheckResult check_rational_roundtrip(Precision prec, int count) {
  return timed("examples", "rational_roundtrip", [&] {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<long> den(1, 999999999999999L);
    int failures = 0;
    for (int k = 0; k < count; ++k) {
      long q = den(rng);
      std::uniform_int_distribution<long> num(-q, q);
      Rational planted = make_rational(num(rng), q);
      auto r = recognize_rational(Real::from_rational(planted, prec));
      if (!r || r->value != planted) ++failures;
    }
    return Outcome{failures == 0, std::to_string(count) + " planted, " + std::to_string(failures) + " failures"};
  });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"all", "theta", "group", "order", "examples"};
  return names;
}

std::vector<CheckResult> run_suite(std::string_view name, const PrecisionContext& ctx) {
  if (name == "theta") return theta_suite(ctx);
  if (name == "group") return group_suite(ctx);
  if (name == "order") return order_suite(ctx);
  if (name == "examples") return examples_suite(ctx);
  if (name == "all") {
    std::vector<CheckResult> all;
    for (const char* part : {"order", "theta", "group", "examples"}) {
      auto r = run_suite(part, ctx);
      all.insert(all.end(), r.begin(), r.end());
    }
    return all;
  }
  throw Error(ErrorKind::UnknownName, "unknown suite: " + std::string(name));
}

}  // namespace tcm::suites
