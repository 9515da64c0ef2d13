// tcm: command-line driver for the (3,3,5) theta / class-field pipeline.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "suites.hpp"
#include "tcm/cmfield.hpp"
#include "tcm/errors.hpp"
#include "tcm/hyperbolic.hpp"
#include "tcm/quaternion.hpp"
#include "tcm/theta.hpp"

using namespace tcm;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kDomain = 2, kNotFound = 3, kVerifyFailed = 4 };

struct Config {
  long prec = 256;
  long max_radius = 160;
  long bound = 8;
  std::string threshold = "1000000000000";
  bool json = false;
  int digits = 40;

  PrecisionContext ctx() const {
    PrecisionContext c = PrecisionContext::with_bits(prec);
    c.max_radius = max_radius;
    return c;
  }
  Integer threshold_value() const { return Integer(threshold); }
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Complex parse_point(const std::string& text, Precision prec) {
  try {
    return Complex::parse(text, prec);
  } catch (const std::invalid_argument&) {
    throw UsageError("cannot parse complex number '" + text + "' (expected re,im)");
  }
}

std::array<QuadRat, 4> parse_generator(const std::string& text) {
  QuatElem e = QuatElem::parse(text);
  for (const QuadRat& c : e.x)
    if (!c.is_integral()) throw UsageError("generator coordinates must lie in O_F: " + text);
  return e.x;
}

json complex_json(const Complex& z, int digits) {
  return {{"re", z.re().to_string(digits)}, {"im", z.im().to_string(digits)}, {"prec", z.precision()}};
}

void emit(const Config& cfg, const json& j, const std::string& text) {
  if (cfg.json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text << "\n";
}

// ----------------------------------------------------------------- commands

int cmd_lambda(const Config& cfg, const std::string& u_text) {
  PrecisionContext ctx = cfg.ctx();
  Complex u = parse_point(u_text, ctx.prec);
  LambdaValue l = lambda_of(u, ctx);
  int d = cfg.digits;
  bool near_pole = l.infinite || abs(l.inverse) < Real(1e-20, ctx.prec);
  json j = {{"u", complex_json(u, d)}, {"infinite", l.infinite}, {"near_pole", near_pole}};
  j["lambda"] = l.infinite ? json(nullptr) : complex_json(l.value, d);
  j["inverse"] = complex_json(l.inverse, d);
  std::string text = near_pole ? "lambda = Infinity (|1/lambda| = " + abs(l.inverse).to_string(6) + ")"
                               : "lambda = " + l.value.to_string(d);
  emit(cfg, j, text);
  return kOk;
}

int cmd_phi(const Config& cfg, const std::string& u_text, bool tilde) {
  PrecisionContext ctx = cfg.ctx();
  Complex u = parse_point(u_text, ctx.prec);
  SingularValue v = singular_value(u, ctx);
  int d = cfg.digits;
  const Complex& x = tilde ? v.phi_tilde : v.phi;
  const Complex& x2 = tilde ? v.phi_tilde2 : v.phi2;
  const char* name = tilde ? "phi_tilde" : "phi";
  json j = {{"u", complex_json(u, d)}, {name, complex_json(x, d)}, {std::string(name) + "2", complex_json(x2, d)}};
  emit(cfg, j, std::string(name) + " = " + x.to_string(d) + "\n" + name + "^2 = " + x2.to_string(d));
  return kOk;
}

int cmd_search(const Config& cfg, const std::string& delta_text) {
  CMParameter delta = CMParameter::make(QuadRat::parse(delta_text));
  auto found = search_generators(delta, cfg.bound, cfg.prec);
  json arr = json::array();
  std::string text;
  for (const auto& g : found) {
    json coords = json::array();
    for (const QuadRat& c : g.coords) coords.push_back(c.to_string());
    arr.push_back({{"coords", coords}, {"fixed_point", complex_json(g.fixed_point.value, 20)}});
    text += g.to_string() + "  u0 = " + g.fixed_point.value.to_string(12) + "\n";
  }
  text += std::to_string(found.size()) + " embedding(s) with |p|,|q| <= " + std::to_string(cfg.bound);
  emit(cfg, json{{"delta", delta.delta.to_string()}, {"bound", cfg.bound}, {"embeddings", arr}}, text);
  return found.empty() ? kNotFound : kOk;
}

int cmd_fixpoint(const Config& cfg, const std::string& generator) {
  CMEmbedding g = make_embedding(parse_generator(generator), cfg.prec);
  auto [trd, nrd] = trd_nrd(order_basis().algebra, g.element);
  int d = cfg.digits;
  json j = {{"coords", generator}, {"trd", trd.to_string()}, {"nrd", nrd.to_string()},
            {"fixed_point", complex_json(g.fixed_point.value, d)}};
  emit(cfg, j, "Trd = " + trd.to_string() + ", Nrd = " + nrd.to_string() + "\nu0 = " + g.fixed_point.value.to_string(d));
  return kOk;
}

struct ClassFieldOptions {
  std::string delta;
  std::vector<std::string> generators;
  int degree = 1;
  std::string scale = "1";
  std::string model_scale;
  std::string alpha = "1";
  std::string beta = "0";
  bool linear = false;
};

int cmd_classfield(const Config& cfg, const ClassFieldOptions& o) {
  CMParameter delta = CMParameter::make(QuadRat::parse(o.delta));
  ClassFieldConfig cc;
  cc.ctx = cfg.ctx();
  cc.bound = cfg.bound;
  cc.threshold = cfg.threshold_value();
  cc.degree = o.degree;
  cc.scale = parse_rational(o.scale);
  if (!o.model_scale.empty()) cc.model_scale = parse_rational(o.model_scale);
  cc.substitution = Substitution{!o.linear, parse_rational(o.alpha), parse_rational(o.beta)};
  for (const auto& g : o.generators) cc.generators.push_back(parse_generator(g));
  if (cc.generators.empty() && search_generators(delta, cfg.bound, 64).empty())
    throw NotFound("no embedding of F(sqrt(-delta)) with |p|,|q| <= " + std::to_string(cfg.bound));

  ClassFieldReport rep = class_field_report(delta, cc);
  if (cfg.json) {
    std::cout << to_json(rep).dump(2) << "\n";
    return kOk;
  }
  std::cout << "delta = " << rep.delta.to_string() << "  (M = F(sqrt(-delta)))\n";
  std::cout << rep.embeddings.size() << " embedding(s); evaluated " << rep.values.size() << "\n";
  int d = cfg.digits;
  for (std::size_t i = 0; i < rep.values.size(); ++i) {
    const CMEmbedding& g = rep.embeddings[rep.used[i]];
    std::cout << "  G0 = " << g.to_string() << "\n    u0    = " << g.fixed_point.value.to_string(20)
              << "\n    phi~  = " << rep.values[i].phi_tilde.to_string(d) << "\n    phi~^2 = " << rep.values[i].phi_tilde2.to_string(d)
              << "\n";
  }
  if (rep.phi_tilde2) std::cout << "phi~^2 = " << to_string(rep.phi_tilde2->value) << "\n";
  if (rep.phi2) std::cout << "phi^2  = " << to_string(rep.phi2->value) << "\n";
  if (rep.kernel) std::cout << "m = " << rep.kernel->get_str() << "\n";
  if (rep.model) std::cout << "discriminant = " << rep.model->discriminant.get_str() << "\n";
  std::cout << rep.description << "\n";
  return kOk;
}

int cmd_verify(const Config& cfg, const std::string& suite) {
  auto results = suites::run_suite(suite, cfg.ctx());
  bool ok = true;
  json arr = json::array();
  for (const auto& r : results) {
    ok = ok && r.pass;
    arr.push_back({{"suite", r.suite}, {"check", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds}});
    if (!cfg.json) {
      char secs[32];
      std::snprintf(secs, sizeof secs, "%.2fs", r.seconds);
      std::cout << (r.pass ? "PASS " : "FAIL ") << r.suite << "." << r.name << " [" << secs << "] " << r.detail << "\n";
    }
  }
  std::size_t failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  if (cfg.json)
    std::cout << json{{"suite", suite}, {"passed", results.size() - failed}, {"failed", failed}, {"checks", arr}}.dump(2) << "\n";
  else
    std::cout << results.size() - failed << "/" << results.size() << " checks passed\n";
  return ok ? kOk : kVerifyFailed;
}

int cmd_matrix(const Config& cfg, const std::string& name, bool printed) {
  std::optional<Mat2C> m = printed ? printed_matrix(name, cfg.prec) : builtin_matrix(name, cfg.prec);
  if (!m) throw UsageError("no displayed form distinct from the builtin for " + name);
  const NamedMatrix& info = builtin_info(name);
  int d = cfg.digits;
  json entries = json::array();
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) entries.push_back(complex_json(m->at(i, k), d));
  const char* prov = info.provenance == Provenance::Printed ? "printed"
                     : info.provenance == Provenance::Composed ? "composed"
                                                               : "reconstructed";
  json j = {{"name", name}, {"frame", info.frame == Domain::Disc ? "disc" : "half-plane"}, {"provenance", prov},
            {"entries", entries}, {"det", complex_json(m->det(), d)}};
  emit(cfg, j, name + " (" + prov + ")\n" + m->to_string(d) + "\ndet = " + m->det().to_string(d));
  return kOk;
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse:
    case ErrorKind::UnknownName:
      return kUsage;
    case ErrorKind::NothingRecognized:
      return kNotFound;
    default:
      return kDomain;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Theta constants, singular values and class fields for the (3,3,5) triangle group"};
  app.require_subcommand(1);
  app.fallthrough();

  Config cfg;
  if (const char* env = std::getenv("TCM_PREC")) {
    try {
      cfg.prec = std::stol(env);
    } catch (const std::exception&) {
      std::cerr << "error: TCM_PREC must be an integer\n";
      return kUsage;
    }
  }
  app.add_option("--prec", cfg.prec, "Working precision in bits (env TCM_PREC)")->check(CLI::Range(64L, 100000L));
  app.add_option("--max-radius", cfg.max_radius, "Largest theta truncation radius")->check(CLI::PositiveNumber);
  app.add_option("--bound", cfg.bound, "Coefficient bound for the generator search")->check(CLI::NonNegativeNumber);
  app.add_option("--threshold", cfg.threshold, "Continued-fraction cut threshold")->check([](const std::string& s) {
    return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos ? std::string() : "positive integer expected";
  });
  app.add_option("--digits", cfg.digits, "Significant digits in printed values")->check(CLI::Range(1, 100000));
  app.add_flag("--json", cfg.json, "JSON output");

  std::string u, delta, generator, suite = "all", name;
  bool printed = false;
  ClassFieldOptions cf;

  auto* lambda = app.add_subcommand("lambda", "lambda(u) = (theta11/theta19)^5");
  lambda->add_option("--u", u, "Point of the disc as re,im")->required();
  auto* phi = app.add_subcommand("phi", "phi(u) = (2/sqrt(-3)) (Phi(lambda(u)) - 1/2)");
  phi->add_option("--u", u, "Point of the disc as re,im")->required();
  auto* phitilde = app.add_subcommand("phitilde", "phi~(u) = Phi(lambda(u)) - 1/2");
  phitilde->add_option("--u", u, "Point of the disc as re,im")->required();
  auto* search = app.add_subcommand("search", "Trace-zero order elements with Nrd = delta");
  search->add_option("--delta", delta, "Totally positive element of O_F, e.g. '6 - 2*w'")->required();
  auto* fixpoint = app.add_subcommand("fixpoint", "Fixed point in the disc of an order element");
  fixpoint->add_option("--generator", generator, "Four O_F coordinates over the order basis")->required();
  auto* classfield = app.add_subcommand("classfield", "Singular values and class-field description");
  classfield->add_option("--delta", cf.delta, "Totally positive delta, M = F(sqrt(-delta))")->required();
  classfield->add_option("--generators", cf.generators, "Explicit order coordinates (repeatable)");
  classfield->add_option("--degree", cf.degree, "Expected class number h(M)")->check(CLI::Range(1, 4));
  classfield->add_option("--scale", cf.scale, "Scale applied to the singular values");
  classfield->add_option("--model-scale", cf.model_scale, "Scale c of the integral model (searched when absent)");
  classfield->add_option("--alpha", cf.alpha, "Integral model uses Y = c/(alpha t + beta)");
  classfield->add_option("--beta", cf.beta, "Integral model uses Y = c/(alpha t + beta)");
  classfield->add_flag("--linear", cf.linear, "Integral model uses Y = c (alpha t + beta)");
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", suite, "all, theta, group, order or examples")
      ->check(CLI::IsMember(suites::suite_names()));
  auto* matrix = app.add_subcommand("matrix", "Print a named group matrix");
  matrix->add_option("--name", name, "Catalog name, e.g. h34, hn45, rotvc, mhd")->required();
  matrix->add_flag("--printed", printed, "Show the displayed closed form of a reconstructed matrix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*lambda) return cmd_lambda(cfg, u);
    if (*phi) return cmd_phi(cfg, u, false);
    if (*phitilde) return cmd_phi(cfg, u, true);
    if (*search) return cmd_search(cfg, delta);
    if (*fixpoint) return cmd_fixpoint(cfg, generator);
    if (*classfield) return cmd_classfield(cfg, cf);
    if (*verify) return cmd_verify(cfg, suite);
    if (*matrix) return cmd_matrix(cfg, name, printed);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NotFound& e) {
    std::cerr << "not found: " << e.what() << "\n";
    return kNotFound;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
  return kUsage;
}
