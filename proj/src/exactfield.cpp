#include "tcm/exactfield.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <sstream>
#include <vector>

#include "tcm/errors.hpp"

namespace tcm {

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw Error(ErrorKind::NonzeroRequired, "zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

bool is_integer(const Rational& r) { return r.get_den() == 1; }

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  auto valid_int = [](std::string_view t, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && !t.empty() && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num, true) || !valid_int(den, false))
    throw Error(ErrorKind::Parse, "malformed rational: '" + std::string(text) + "'");
  if (num[0] == '+') num.erase(0, 1);
  return make_rational(Integer(num), Integer(den));
}

// ---------------------------------------------------------------- QuadRat

QuadRat QuadRat::from_sqrt5_basis(const Rational& r, const Rational& s) {
  // r + s sqrt5 = r + s (1 - 2w)
  return QuadRat(r + s, -2 * s);
}

QuadRat& QuadRat::operator+=(const QuadRat& o) {
  p_ += o.p_;
  q_ += o.q_;
  return *this;
}

QuadRat& QuadRat::operator-=(const QuadRat& o) {
  p_ -= o.p_;
  q_ -= o.q_;
  return *this;
}

QuadRat& QuadRat::operator*=(const QuadRat& o) {
  Rational qq = q_ * o.q_;
  Rational np = p_ * o.p_ + qq;
  Rational nq = p_ * o.q_ + q_ * o.p_ + qq;
  p_ = std::move(np);
  q_ = std::move(nq);
  return *this;
}

QuadRat& QuadRat::operator/=(const QuadRat& o) {
  auto [n, t] = qs_norm_trace(o);
  if (n == 0) throw Error(ErrorKind::NonzeroRequired, "division by zero in F");
  *this *= qs_conj(o);
  p_ /= n;
  q_ /= n;
  return *this;
}

std::string QuadRat::to_string() const {
  std::string out;
  if (p_ != 0) out = tcm::to_string(p_);
  if (q_ != 0) {
    Rational mag = abs(q_);
    std::string coeff = mag == 1 ? std::string("w") : tcm::to_string(mag) + "*w";
    if (out.empty())
      out = (q_ < 0 ? "-" : "") + coeff;
    else
      out += (q_ < 0 ? " - " : " + ") + coeff;
  }
  return out.empty() ? "0" : out;
}

QuadRat QuadRat::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw Error(ErrorKind::Parse, "empty field element");

  QuadRat result;
  std::size_t i = 0;
  bool first = true;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (!first) {
      throw Error(ErrorKind::Parse, "expected '+' or '-' in '" + std::string(text) + "'");
    }
    first = false;
    std::size_t j = i;
    while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
    std::string term = s.substr(i, j - i);
    i = j;
    if (term.empty()) throw Error(ErrorKind::Parse, "empty term in '" + std::string(text) + "'");

    bool has_w = false;
    std::string coeff = term;
    if (term == "w") {
      has_w = true;
      coeff = "1";
    } else if (term.size() > 2 && term.compare(term.size() - 2, 2, "*w") == 0) {
      has_w = true;
      coeff = term.substr(0, term.size() - 2);
    } else if (term.size() > 2 && term.compare(0, 2, "w*") == 0) {
      has_w = true;
      coeff = term.substr(2);
    }
    Rational c = parse_rational(coeff) * sign;
    if (has_w)
      result += QuadRat(0, c);
    else
      result += QuadRat(c, 0);
  }
  return result;
}

QuadRat qs_mul(const QuadRat& x, const QuadRat& y) { return x * y; }

QuadRat qs_conj(const QuadRat& x) { return QuadRat(x.p() + x.q(), -x.q()); }

std::pair<Rational, Rational> qs_norm_trace(const QuadRat& x) {
  // (p + q w)(p + q - q w) = p^2 + pq - q^2
  Rational n = x.p() * x.p() + x.p() * x.q() - x.q() * x.q();
  Rational t = 2 * x.p() + x.q();
  return {n, t};
}

Real qs_embed_real(const QuadRat& x, Embedding which, Precision prec) {
  Precision work = prec + 16;
  Real s5 = sqrt(Real(5L, work));
  Real w = (which == Embedding::Identity ? Real(1L, work) - s5 : Real(1L, work) + s5) / 2L;
  Real r = Real::from_rational(x.p(), work) + Real::from_rational(x.q(), work) * w;
  r.set_precision(prec);
  return r;
}

bool is_totally_positive(const QuadRat& x) {
  // x = r + s sqrt5 with r = p + q/2, s = -q/2; both embeddings r +- s sqrt5 > 0
  Rational r = x.p() + x.q() / 2;
  Rational s = -x.q() / 2;
  return r > 0 && r * r > 5 * s * s;
}

std::optional<Rational> rational_sqrt(const Rational& x) {
  if (x < 0) return std::nullopt;
  Integer n = x.get_num(), d = x.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
  Integer rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  return make_rational(rn, rd);
}

std::optional<QuadRat> qs_sqrt(const QuadRat& x) {
  // x = P + Q sqrt5; (s + t sqrt5)^2 = s^2 + 5 t^2 + 2 s t sqrt5
  Rational P = x.p() + x.q() / 2;
  Rational Q = -x.q() / 2;
  if (Q == 0) {
    if (auto s = rational_sqrt(P)) return QuadRat(*s);
    if (auto t = rational_sqrt(P / 5)) return QuadRat::from_sqrt5_basis(0, *t);
    return std::nullopt;
  }
  auto r = rational_sqrt(P * P - 5 * Q * Q);
  if (!r) return std::nullopt;
  for (const Rational& s2 : {Rational((P + *r) / 2), Rational((P - *r) / 2)}) {
    auto s = rational_sqrt(s2);
    if (!s || *s == 0) continue;
    Rational t = Q / (2 * *s);
    QuadRat y = QuadRat::from_sqrt5_basis(*s, t);
    if (y * y == x) return y;
  }
  return std::nullopt;
}

// ---------------------------------------------------------- factorization

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

bool miller_rabin_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

bool fits_u64(const Integer& n) { return mpz_sizeinbase(n.get_mpz_t(), 2) <= 64; }

u64 to_u64(const Integer& n) {
  u64 out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, n.get_mpz_t());
  return out;
}

// Brent's variant of Pollard rho on arbitrary-size integers.
Integer pollard_rho(const Integer& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    Integer y = 2, x, ys, q = 1, g = 1, t;
    unsigned long r = 1;
    const unsigned long m = 128;
    auto f = [&](Integer& v) {
      v = v * v + c;
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    while (g == 1) {
      x = y;
      for (unsigned long i = 0; i < r; ++i) f(y);
      unsigned long k = 0;
      while (k < r && g == 1) {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          f(y);
          t = abs(x - y);
          q = q * t;
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      }
      r *= 2;
    }
    if (g == n) {
      do {
        f(ys);
        t = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(const Integer& n, long multiplicity, std::map<Integer, long>& out) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    out[n] += multiplicity;
    return;
  }
  Integer d = pollard_rho(n);
  factor_into(d, multiplicity, out);
  factor_into(n / d, multiplicity, out);
}

const std::vector<unsigned long>& small_primes() {
  static const std::vector<unsigned long> primes = [] {
    const unsigned long limit = 1000000;
    std::vector<bool> sieve(limit + 1, true);
    std::vector<unsigned long> ps;
    for (unsigned long i = 2; i <= limit; ++i) {
      if (!sieve[i]) continue;
      ps.push_back(i);
      for (unsigned long j = i * i; j <= limit; j += i) sieve[j] = false;
    }
    return ps;
  }();
  return primes;
}

void factor_integer(Integer n, long sign_of_exponent, std::map<Integer, long>& out) {
  for (unsigned long p : small_primes()) {
    if (n == 1) return;
    if (Integer(p) * p > n) break;
    long e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      ++e;
    }
    if (e) out[Integer(p)] += sign_of_exponent * e;
  }
  if (n == 1) return;
  if (mpz_sizeinbase(n.get_mpz_t(), 2) > 128)
    throw Error(ErrorKind::FactorizationTooLarge,
                "cofactor " + n.get_str() + " exceeds 2^128 after trial division");
  factor_into(n, sign_of_exponent, out);
}

}  // namespace

bool is_probable_prime(const Integer& n) {
  if (n < 2) return false;
  if (fits_u64(n)) return miller_rabin_u64(to_u64(n));
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

Rational FactoredRational::value() const {
  Integer num = 1, den = 1;
  for (const auto& [p, e] : factors) {
    Integer pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
    if (e > 0)
      num *= pe;
    else
      den *= pe;
  }
  return make_rational(sign * num, den);
}

std::string FactoredRational::to_string() const {
  std::ostringstream os;
  os << (sign < 0 ? "-1" : "1");
  auto emit = [&](bool positive) {
    for (const auto& [p, e] : factors) {
      if ((e > 0) != positive) continue;
      os << " * " << p.get_str();
      if (e != 1) os << "^" << e;
    }
  };
  emit(true);
  emit(false);
  return os.str();
}

FactoredRational factor_rational(const Rational& r) {
  if (r == 0) throw Error(ErrorKind::NonzeroRequired, "cannot factor zero");
  FactoredRational out;
  out.sign = r < 0 ? -1 : 1;
  factor_integer(abs(r.get_num()), 1, out.factors);
  factor_integer(r.get_den(), -1, out.factors);
  return out;
}

SquarefreeSplit squarefree_split(const Rational& r) {
  FactoredRational f = factor_rational(r);
  Integer kernel = f.sign;
  Integer snum = 1, sden = 1;
  for (const auto& [p, e] : f.factors) {
    long odd = ((e % 2) + 2) % 2;
    long half = (e - odd) / 2;
    if (odd) kernel *= p;
    Integer pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(half < 0 ? -half : half));
    if (half > 0)
      snum *= pe;
    else
      sden *= pe;
  }
  return {kernel, make_rational(snum, sden)};
}

}  // namespace tcm
