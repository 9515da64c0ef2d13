#include "doctest.h"

#include <random>
#include <set>

#include "tcm/cmfield.hpp"
#include "tcm/errors.hpp"

using namespace tcm;

namespace {

constexpr Precision kPrec = 256;

PrecisionContext ctx(Precision prec = kPrec) { return PrecisionContext::with_bits(prec); }

std::array<QuadRat, 4> coords(const char* text) {
  QuatElem e = QuatElem::parse(text);
  return e.x;
}

Real tol_bits(long bits, Precision prec = kPrec) { return ldexp(Real(1L, prec), -bits); }

std::vector<Integer> ints(std::initializer_list<const char*> xs) {
  std::vector<Integer> v;
  for (const char* x : xs) v.emplace_back(x);
  return v;
}

Rational q(const char* text) { return parse_rational(text); }

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an exception");
  return ErrorKind::Parse;
}

const char* kEx51 = "-3 + 2*w, 2*w, 4 - 2*w, -2*w";
const char* kEx52 = "3 - 3*w, 1, -4 + 2*w, -1 + w";
const char* kEx53 = "1 - 2*w, 2, -8 - 2*w, -2*w";
const char* kEx54a = "-2, 3*w, 4 - 3*w, -1 - w";
const char* kEx54b = "4 - 3*w, w, -4 + w, -1";

const char* kU53 =
    "-0.2884031937082062430429292960544310724595352385781433875628704276940,"
    "0.2095371854415799547791501532228242020959121464954639149713389790753";

std::vector<Rational> ex54_cubic() {
  return {q("146663661576709210112/34296447249"), q("27944558699379372032/1375668606321"),
          q("298002375630573376/6131066257801"), Rational(1)};
}

bool same_up_to_sign(const std::array<QuadRat, 4>& a, const std::array<QuadRat, 4>& b) {
  bool plus = true, minus = true;
  for (int i = 0; i < 4; ++i) {
    plus = plus && a[i] == b[i];
    minus = minus && a[i] == -b[i];
  }
  return plus || minus;
}

}  // namespace

TEST_CASE("CMParameter") {
  CHECK(CMParameter::make(QuadRat(7)).delta == QuadRat(7));
  CHECK(CMParameter::make(QuadRat::parse("6 - 2*w")).delta == QuadRat(6, -2));
  CHECK(kind_of([] { CMParameter::make(QuadRat::w()); }) == ErrorKind::DomainViolation);
  CHECK(kind_of([] { CMParameter::make(QuadRat(-7)); }) == ErrorKind::DomainViolation);
}

TEST_CASE("search_generators: paper vectors") {
  auto d7 = search_generators(CMParameter::make(QuadRat(7)), 8);
  bool found = false;
  for (const auto& g : d7) found = found || same_up_to_sign(g.coords, coords(kEx51));
  CHECK(found);

  auto d52 = search_generators(CMParameter::make(QuadRat::parse("6 - 2*w")), 8);
  found = false;
  for (const auto& g : d52) found = found || same_up_to_sign(g.coords, coords(kEx52));
  CHECK(found);

  CHECK(search_generators(CMParameter::make(QuadRat(7)), 0).empty());
  CHECK(search_generators(CMParameter::make(QuadRat(Rational(7, 2))), 3).empty());
}

TEST_CASE("search_generators: every hit is a square root of -delta") {
  const OrderBasis& b = order_basis();
  QuadRat delta(7);
  auto found = search_generators(CMParameter::make(delta), 8, 128);
  REQUIRE(!found.empty());
  std::set<std::array<long, 8>> seen;
  for (const auto& g : found) {
    for (const QuadRat& c : g.coords) {
      CHECK(c.is_integral());
      CHECK(abs(c.p()) <= 8);
      CHECK(abs(c.q()) <= 8);
    }
    QuatElem sq = quat_mul(b.algebra, g.element, g.element);
    CHECK(sq == QuatElem(-delta, 0, 0, 0));
    Mat2C m2 = g.matrix * g.matrix;
    Mat2C target = Mat2C::identity(128);
    target = Complex(Real(-7L, 128)) * target;
    CHECK(approx_equal(m2, target, matrix_tolerance(128)));
    auto v = g.integers();
    std::array<long, 8> neg;
    for (int i = 0; i < 8; ++i) neg[i] = -v[i];
    CHECK(seen.count(neg) == 0);
    seen.insert(v);
  }
  CHECK(seen.size() == found.size());
}

TEST_CASE("search_generators agrees with a naive enumeration") {
  const OrderBasis& b = order_basis();
  std::map<std::string, std::set<std::array<long, 8>>> naive;
  std::array<long, 8> v{};
  for (long idx = 0; idx < 390625; ++idx) {
    long t = idx;
    for (int i = 0; i < 8; ++i) {
      v[i] = t % 5 - 2;
      t /= 5;
    }
    std::array<QuadRat, 4> c;
    for (int i = 0; i < 4; ++i) c[i] = QuadRat(Rational(v[2 * i]), Rational(v[2 * i + 1]));
    auto [trd, nrd] = trd_nrd(b.algebra, from_order_coords(c, b));
    if (!trd.is_zero() || !is_totally_positive(nrd)) continue;
    long first = 0;
    for (long x : v)
      if (x != 0) {
        first = x;
        break;
      }
    if (first > 0) naive[nrd.to_string()].insert(v);
  }
  REQUIRE(naive.size() >= 3);
  for (const auto& [delta, expected] : naive) {
    INFO(delta);
    std::set<std::array<long, 8>> got;
    for (const auto& g : search_generators(CMParameter::make(QuadRat::parse(delta)), 2, 64)) got.insert(g.integers());
    CHECK(got == expected);
  }
}

TEST_CASE("fixed_point_of: example fixed points") {
  Real six(5e-6, kPrec);
  CMEmbedding g1 = make_embedding(coords(kEx51), 128);
  Point u1 = fixed_point_of(g1, ctx());
  CHECK(u1.domain == Domain::Disc);
  CHECK(abs(u1.value - Complex::parse("-0.205396,-0.0667372", kPrec)) < six);

  Point u2 = fixed_point_of(make_embedding(coords(kEx52), 128), ctx());
  CHECK(abs(u2.value - Complex::parse("-0.164894,-0.119803", kPrec)) < six);

  Point u3 = fixed_point_of(make_embedding(coords(kEx53), 128), ctx());
  CHECK(abs(u3.value - Complex::parse(kU53, kPrec)) < Real(1e-65, kPrec));
}

TEST_CASE("fixed_point_of: residual") {
  for (const auto& g : search_generators(CMParameter::make(QuadRat::parse("6 - 2*w")), 8, 128)) {
    Point u = fixed_point_of(g, ctx());
    Mat2C t = transport(make_embedding(g.coords, kPrec).matrix, Direction::HtoD);
    CHECK(abs(mobius_act(t, u.value) - u.value) < tol_bits(kPrec / 2));
    CHECK(in_domain(u.value, Domain::Disc, Real(0L, kPrec)));
  }
}

TEST_CASE("reduce_towards_origin keeps the singular value") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> d(-0.45, 0.45);
  Precision p = 128;
  Mat2C g = builtin_matrix("hn45", p);
  for (int k = 0; k < 3; ++k) {
    Complex u(Real(d(rng), p), Real(d(rng), p));
    if (abs(u) > Real(0.45, p)) continue;
    Complex gu = mobius_act(g, u);
    Complex r = reduce_towards_origin(gu);
    CHECK(abs(r) <= abs(gu));
    SingularValue a = singular_value(u, ctx(p));
    SingularValue b = singular_value(gu, ctx(p));
    CHECK(abs(a.phi_tilde - b.phi_tilde) < matrix_tolerance(p) * max(Real(1L, p), abs(a.phi_tilde)));
  }
}

TEST_CASE("singular_value: examples") {
  CMEmbedding g1 = make_embedding(coords(kEx51), 128);
  SingularValue s1 = singular_value(g1, ctx());
  Complex expect(Real(0L, kPrec), Real::parse("8.3782124850378702032551165531909913589", kPrec));
  CHECK(abs(s1.phi_tilde2 - expect * expect) < Real(1e-33, kPrec));
  CHECK(abs(s1.phi_tilde2 + Complex(Real::from_rational(Rational(2527, 36), kPrec))) < tol_bits(200));
  Complex s3 = Complex(Real(0L, kPrec), sqrt(Real(3L, kPrec)));
  CHECK(abs(s1.phi_tilde - s3 * s1.phi / 2L) < tol_bits(200));

  SingularValue s11 = singular_value(make_embedding(coords(kEx54b), 128), ctx());
  Complex e11(Real(0L, kPrec), Real::parse("13.719509519930672493059974467190630795700234699440610387", kPrec));
  CHECK(abs(s11.phi_tilde2 - e11 * e11) < Real(1e-50, kPrec));

  SingularValue s4 = singular_value(make_embedding(coords(kEx54a), 128), ctx());
  Complex e4(Real::parse("0.41467884460813106945405483718570037432931049417786518217", kPrec),
             Real::parse("-0.99585830192876518343449922550065726567619225232766421487", kPrec));
  CHECK(abs(s4.phi_tilde - e4) < Real(1e-54, kPrec));

  auto fp = fixed_points(builtin_matrix("rotvc", kPrec), Domain::Disc);
  REQUIRE(fp.size() == 1);
  SingularValue v = singular_value(fp[0].value, ctx());
  CHECK(abs(v.phi2 - Complex(1L, kPrec)) < Real(1e-30, kPrec));
}

TEST_CASE("recognize_rational") {
  auto half = recognize_rational(Real(0.5, 128));
  REQUIRE(half);
  CHECK(half->value == Rational(1, 2));
  CHECK(half->partial_quotients == ints({"0", "2"}));

  CHECK(!recognize_rational(Real::pi(128)));
  CHECK(!recognize_rational(Real::pi(256) * Real(1e10, 256)));
  CHECK(!recognize_rational(sqrt(Real(2L, 512))));

  auto seven = recognize_rational(Real(-7L, 64));
  REQUIRE(seven);
  CHECK(seven->value == Rational(-7));

  Real printed = Real::parse("0.16717727965490681624739779831313980904", 128);
  auto r = recognize_rational(printed);
  REQUIRE(r);
  CHECK(r->value == Rational(68232853, 408146688));
  auto head = ints({"0", "5", "1", "53", "1", "1", "3", "4", "1", "12", "7", "74", "2", "2"});
  CHECK(r->partial_quotients == head);

  Real wide = Real::parse("0.16717727965490681624739779831313980904", 512);
  auto cut = recognize_rational(wide, Integer("1000000000000"));
  CHECK(!cut);
}

TEST_CASE("recognize_rational: planted rationals") {
  std::mt19937_64 rng(73);
  std::uniform_int_distribution<long> den(1, 999999999999999L);
  for (Precision p : {128, 192}) {
    for (int k = 0; k < 300; ++k) {
      long qd = den(rng);
      std::uniform_int_distribution<long> num(-qd, qd);
      Rational planted = make_rational(num(rng), qd);
      auto r = recognize_rational(Real::from_rational(planted, p));
      REQUIRE(r);
      CHECK(r->value == planted);
    }
  }
}

TEST_CASE("min_poly_from_values") {
  Precision p = 128;
  auto mp = min_poly_from_values({Complex(2L, p), Complex(3L, p)}, Rational(1));
  CHECK(mp.integral == ints({"6", "-5", "1"}));

  Real v = sqrt(Real(7L, p)) * 19L / 6L;
  Complex z(Real(0L, p), v);
  auto sq = min_poly_from_values({z * z}, Rational(36, 361));
  CHECK(sq.integral == ints({"7", "1"}));
  CHECK(kind_of([&] { min_poly_from_values({z}, Rational(6, 19)); }) == ErrorKind::RecognitionFailed);
  CHECK(kind_of([&] { min_poly_from_values({Complex(Real::pi(p))}, Rational(1)); }) == ErrorKind::RecognitionFailed);
}

TEST_CASE("min_poly_from_values: root round trip") {
  std::mt19937_64 rng(79);
  std::uniform_int_distribution<long> coef(-30, 30);
  Precision p = 192;
  for (int k = 0; k < 10; ++k) {
    int n = 2 + k % 3;
    std::vector<Rational> poly;
    for (int i = 0; i < n; ++i) poly.push_back(make_rational(coef(rng), 1 + (coef(rng) + 30) % 4));
    poly.push_back(Rational(1));
    if (poly[0] == 0) poly[0] = 1;
    auto roots = polynomial_roots(poly, p);
    REQUIRE(roots.size() == static_cast<std::size_t>(n));
    auto mp = min_poly_from_values(roots, Rational(1));
    CHECK(mp.rational == poly);
    auto again = polynomial_roots(mp.rational, p);
    for (const Complex& r : roots) {
      Real best = abs(r - again[0]);
      for (const Complex& s : again) best = min(best, abs(r - s));
      CHECK(best < tol_bits(p / 4, p));
    }
  }
}

TEST_CASE("integral_model") {
  Substitution j{true, Rational(9), Rational(1728)};
  Rational c(11L * 11 * 11 * 256 * 625);
  IntegralModel m = integral_model(ex54_cubic(), c, j);
  CHECK(m.coeffs == ints({"6131066257801", "12444768657", "19268", "1"}));
  Integer dsc = -1;
  for (auto [pr, e] : std::vector<std::pair<long, int>>{{19, 4}, {61, 2}, {79, 2}, {89, 2}, {109, 2}, {149, 2}, {229, 2}, {23, 1}})
    for (int i = 0; i < e; ++i) dsc *= pr;
  CHECK(m.discriminant == dsc);
  CHECK(m.coeffs[0] == Integer("6131066257801"));
  Integer r3 = 1;
  for (int i = 0; i < 10; ++i) r3 *= 19;
  CHECK(m.coeffs[0] == r3);

  CHECK(integral_model_search(ex54_cubic(), j).scale == c);
  CHECK(kind_of([&] { integral_model(ex54_cubic(), c); }) == ErrorKind::NotClearable);

  IntegralModel lin = integral_model({Rational(-1, 2), Rational(1)}, Rational(2), Substitution{false});
  CHECK(lin.coeffs == ints({"-1", "1"}));
  CHECK(integral_model_search({Rational(-1, 2), Rational(1)}, Substitution{false}).scale == 2);

  CHECK(discriminant(ints({"6", "-5", "1"})) == 1);
  CHECK(discriminant(ints({"1", "1", "0", "1"})) == -31);
  CHECK(discriminant(ints({"-2", "0", "1"})) == 8);
}

TEST_CASE("sqrt_in_cm_field") {
  CHECK(sqrt_in_cm_field(Rational(-7), QuadRat(7)));
  CHECK(!sqrt_in_cm_field(Rational(2), QuadRat(6, -2)));
  CHECK(!sqrt_in_cm_field(Rational(13), QuadRat(39, 52)));
  CHECK(sqrt_in_cm_field(Rational(5), QuadRat(39, 52)));
  CHECK(sqrt_in_cm_field(Rational(-35), QuadRat(7)));
  CHECK(generates_cm_field(QuadRat(1), QuadRat(6), QuadRat(23)));
  CHECK(!generates_cm_field(QuadRat(1), QuadRat(6), QuadRat(7)));
}

TEST_CASE("class_field_report") {
  ClassFieldConfig cfg;
  ClassFieldReport r7 = class_field_report(CMParameter::make(QuadRat(7)), cfg);
  REQUIRE(r7.kernel);
  CHECK(*r7.kernel == -7);
  CHECK(r7.description == "C(M) = M");
  REQUIRE(r7.phi_tilde2);
  CHECK(r7.phi_tilde2->value == Rational(-2527, 36));

  nlohmann::json j = to_json(r7);
  CHECK(j["m"] == -7);
  CHECK(j["phi_tilde2"]["value"]["num"] == "-2527");
  std::string once = j.dump();
  CHECK(nlohmann::json::parse(once).dump() == once);

  ClassFieldReport r52 = class_field_report(CMParameter::make(QuadRat(6, -2)), cfg);
  CHECK(r52.description == "C(M) = M(sqrt(2))");

  ClassFieldConfig c54;
  c54.degree = 3;
  c54.scale = 256;
  c54.substitution = Substitution{true, Rational(9), Rational(1728)};
  c54.generators = {coords(kEx54a), coords(kEx54b)};
  ClassFieldReport r54 = class_field_report(CMParameter::make(QuadRat(23)), c54);
  REQUIRE(r54.min_poly);
  CHECK(r54.min_poly->rational == ex54_cubic());
  REQUIRE(r54.model);
  CHECK(r54.model->coeffs == ints({"6131066257801", "12444768657", "19268", "1"}));

  c54.generators = {coords(kEx51)};
  CHECK(kind_of([&] { class_field_report(CMParameter::make(QuadRat(23)), c54); }) == ErrorKind::DomainViolation);

  ClassFieldConfig none;
  none.bound = 1;
  CHECK(kind_of([&] { class_field_report(CMParameter::make(QuadRat(1000003)), none); }) ==
        ErrorKind::NothingRecognized);
}

TEST_CASE("triangle_class_records") {
  const auto& rows = triangle_class_records();
  CHECK(rows.size() == 6);
  for (const auto& r : rows) {
    INFO(r.id);
    CHECK(takeuchi_class_of(r.signature) != nullptr);
    CHECK((r.signature.e[0] == r.signature.e[1] || r.signature.e[1] == r.signature.e[2]));
    CHECK(r.rho.has_value() == (r.rho_tag == "3"));
  }
  const auto& viii = rows[3];
  CHECK(viii.signature == TriangleSignature(3, 3, 5));
  CHECK(takeuchi_class_of(viii.signature)->name == "VIII");
  CHECK(*viii.rho == QuadRat(3));
}
