#include "cyclepoly/grpring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <sstream>

#include "cyclepoly/linprog.hpp"

namespace cyclepoly {

long GroupElement::grade() const {
  long s = 0;
  for (long x : e) s += x;
  return s;
}

bool GroupElement::is_zero() const {
  return std::all_of(e.begin(), e.end(), [](long x) { return x == 0; });
}

GroupElement GroupElement::operator+(const GroupElement& o) const {
  GroupElement r = *this;
  for (size_t i = 0; i < e.size(); ++i) r.e[i] += o.e[i];
  return r;
}

GroupElement GroupElement::operator-(const GroupElement& o) const {
  GroupElement r = *this;
  for (size_t i = 0; i < e.size(); ++i) r.e[i] -= o.e[i];
  return r;
}

GroupElement GroupElement::operator-() const {
  GroupElement r = *this;
  for (long& x : r.e) x = -x;
  return r;
}

bool GradedLex::operator()(const GroupElement& a, const GroupElement& b) const {
  long ga = a.grade(), gb = b.grade();
  if (ga != gb) return ga > gb;
  return a.e < b.e;
}

// ----- Cocharacter -----------------------------------------------------------

Cocharacter Cocharacter::integral_point(const std::vector<long>& vals) {
  std::vector<Rat> v;
  v.reserve(vals.size());
  for (long x : vals) v.emplace_back(x);
  return Cocharacter(std::move(v));
}

bool Cocharacter::integral() const {
  for (const Rat& x : v)
    if (x.get_den() != 1) return false;
  return true;
}

Rat Cocharacter::apply(const GroupElement& g) const {
  Rat s = 0;
  for (size_t i = 0; i < v.size(); ++i) s += v[i] * g.e[i];
  return s;
}

long Cocharacter::apply_integral(const GroupElement& g) const {
  Rat s = apply(g);
  if (s.get_den() != 1) fail("NonIntegralCocharacter", "value is not an integer");
  return s.get_num().get_si();
}

long Cocharacter::clear_denominators(std::vector<long>* out) const {
  Int l = 1;
  for (const Rat& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
  if (!l.fits_slong_p()) fail("NonIntegralCocharacter", "denominator too large");
  if (out) {
    out->clear();
    for (const Rat& x : v) {
      Rat s = x * Rat(l);
      out->push_back(s.get_num().get_si());
    }
  }
  return l.get_si();
}

// ----- UniLaurent ------------------------------------------------------------

UniLaurent UniLaurent::monomial(const Int& c, long exp) {
  UniLaurent p;
  p.add_term(exp, c);
  return p;
}

long UniLaurent::min_exp() const {
  if (coeffs_.empty()) fail("ZeroElement", "zero polynomial has no exponents");
  return coeffs_.begin()->first;
}

long UniLaurent::max_exp() const {
  if (coeffs_.empty()) fail("ZeroElement", "zero polynomial has no exponents");
  return coeffs_.rbegin()->first;
}

void UniLaurent::add_term(long exp, const Int& c) {
  if (c == 0) return;
  auto it = coeffs_.find(exp);
  if (it == coeffs_.end()) {
    coeffs_.emplace(exp, c);
  } else {
    it->second += c;
    if (it->second == 0) coeffs_.erase(it);
  }
}

UniLaurent UniLaurent::operator+(const UniLaurent& o) const {
  UniLaurent r = *this;
  for (const auto& [e, c] : o.coeffs_) r.add_term(e, c);
  return r;
}

UniLaurent UniLaurent::operator-(const UniLaurent& o) const {
  UniLaurent r = *this;
  for (const auto& [e, c] : o.coeffs_) r.add_term(e, -c);
  return r;
}

UniLaurent UniLaurent::operator*(const UniLaurent& o) const {
  UniLaurent r;
  for (const auto& [ea, ca] : coeffs_)
    for (const auto& [eb, cb] : o.coeffs_) r.add_term(ea + eb, ca * cb);
  return r;
}

UniLaurent UniLaurent::compose_power(long c) const {
  UniLaurent r;
  for (const auto& [e, k] : coeffs_) r.add_term(e * c, k);
  return r;
}

std::vector<Int> UniLaurent::cleared_coefficients() const {
  std::vector<Int> c;
  if (coeffs_.empty()) return c;
  long lo = min_exp(), hi = max_exp();
  c.assign(static_cast<size_t>(hi - lo + 1), Int(0));
  for (const auto& [e, k] : coeffs_) c[static_cast<size_t>(e - lo)] = k;
  return c;
}

std::string UniLaurent::to_string(const std::string& var) const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Highest exponent first, like ordinary polynomial notation.
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    const Int& c = it->second;
    Int a = abs(c);
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    long e = it->first;
    if (e == 0) {
      os << a.get_str();
    } else {
      if (a != 1) os << a.get_str() << "*";
      os << var;
      if (e != 1) os << "^" << e;
    }
  }
  return os.str();
}

// ----- GroupRingElement ------------------------------------------------------

GroupRingElement GroupRingElement::one(int rank) {
  return monomial(1, GroupElement::zero(rank));
}

GroupRingElement GroupRingElement::monomial(const Int& c, const GroupElement& g) {
  GroupRingElement r(g.rank());
  r.add_term(g, c);
  return r;
}

Int GroupRingElement::coefficient(const GroupElement& g) const {
  auto it = terms_.find(g);
  return it == terms_.end() ? Int(0) : it->second;
}

void GroupRingElement::add_term(const GroupElement& g, const Int& c) {
  if (c == 0) return;
  if (g.rank() != rank_) fail("RankMismatch", "term rank differs from element rank");
  auto it = terms_.find(g);
  if (it == terms_.end()) {
    terms_.emplace(g, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

GroupRingElement GroupRingElement::operator+(const GroupRingElement& o) const {
  if (rank_ != o.rank_) fail("RankMismatch", "adding elements of different rank");
  GroupRingElement r = *this;
  for (const auto& [g, c] : o.terms_) r.add_term(g, c);
  return r;
}

GroupRingElement GroupRingElement::operator-(const GroupRingElement& o) const {
  if (rank_ != o.rank_) fail("RankMismatch", "subtracting elements of different rank");
  GroupRingElement r = *this;
  for (const auto& [g, c] : o.terms_) r.add_term(g, -c);
  return r;
}

GroupRingElement GroupRingElement::operator*(const GroupRingElement& o) const {
  if (rank_ != o.rank_) fail("RankMismatch", "multiplying elements of different rank");
  GroupRingElement r(rank_);
  for (const auto& [ga, ca] : terms_)
    for (const auto& [gb, cb] : o.terms_) r.add_term(ga + gb, ca * cb);
  return r;
}

bool GroupRingElement::operator==(const GroupRingElement& o) const {
  return rank_ == o.rank_ && terms_ == o.terms_;
}

std::string format_monomial(const GroupElement& g, const std::vector<std::string>& vars) {
  std::ostringstream os;
  bool wrote = false;
  for (size_t i = 0; i < vars.size(); ++i) {
    long e = g.e[i];
    if (e == 0) continue;
    if (wrote) os << "*";
    os << vars[i];
    if (e != 1) os << "^" << e;
    wrote = true;
  }
  if (!wrote) return "1";
  return os.str();
}

std::string GroupRingElement::to_string(const std::vector<std::string>& vars) const {
  if (static_cast<int>(vars.size()) != rank_)
    fail("RankMismatch", "variable list does not match rank");
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [g, c] : terms_) {
    Int a = abs(c);
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    std::string mono = format_monomial(g, vars);
    if (a != 1) {
      os << a.get_str();
      if (mono != "1") os << "*" << mono;
    } else {
      os << mono;
    }
  }
  return os.str();
}

namespace {

// Tokenized term parser for the serialization emitted by to_string.
struct Parser {
  const std::string& s;
  size_t pos = 0;

  explicit Parser(const std::string& text) : s(text) {}

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool consume(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  long parse_long() {
    skip_ws();
    size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) fail("ParseError", "expected integer at position " + std::to_string(start));
    return std::stol(s.substr(start, pos - start));
  }
  Int parse_int() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) fail("ParseError", "expected number at position " + std::to_string(start));
    return Int(s.substr(start, pos - start));
  }
  std::string parse_name() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    if (pos == start) fail("ParseError", "expected name at position " + std::to_string(start));
    return s.substr(start, pos - start);
  }
};

}  // namespace

GroupRingElement GroupRingElement::parse(const std::string& text,
                                         const std::vector<std::string>& vars) {
  int rank = static_cast<int>(vars.size());
  GroupRingElement out(rank);
  Parser p(text);
  if (p.eof()) fail("ParseError", "empty group ring element");
  bool first = true;
  while (!p.eof()) {
    int sign = 1;
    if (p.consume('-')) {
      sign = -1;
    } else if (p.consume('+')) {
      if (first) fail("ParseError", "leading '+'");
    } else if (!first) {
      fail("ParseError", "expected '+' or '-' between terms");
    }
    first = false;
    Int coeff = 1;
    bool have_coeff = false;
    if (std::isdigit(static_cast<unsigned char>(p.peek()))) {
      coeff = p.parse_int();
      have_coeff = true;
    }
    GroupElement g = GroupElement::zero(rank);
    bool expect_factor = !have_coeff || p.consume('*');
    while (expect_factor) {
      std::string name = p.parse_name();
      auto it = std::find(vars.begin(), vars.end(), name);
      if (it == vars.end()) fail("ParseError", "unknown generator '" + name + "'");
      long exp = 1;
      if (p.consume('^')) exp = p.parse_long();
      g.e[it - vars.begin()] += exp;
      expect_factor = p.consume('*');
    }
    if (coeff == 0 && have_coeff && g.is_zero()) {
      // explicit zero term, e.g. "0"
      continue;
    }
    out.add_term(g, sign * coeff);
  }
  return out;
}

// ----- specialization / support ---------------------------------------------

UniLaurent specialize(const GroupRingElement& theta, const Cocharacter& alpha) {
  if (alpha.rank() != theta.rank()) fail("RankMismatch", "cocharacter rank differs");
  if (!alpha.integral()) fail("NonIntegralCocharacter", "specialization needs integral alpha");
  UniLaurent p;
  for (const auto& [g, c] : theta.terms()) p.add_term(alpha.apply_integral(g), c);
  return p;
}

std::vector<GroupElement> support(const GroupRingElement& theta) {
  std::vector<GroupElement> s;
  s.reserve(theta.num_terms());
  for (const auto& [g, c] : theta.terms()) s.push_back(g);
  return s;
}

std::vector<GroupElement> newton_vertices(const GroupRingElement& theta) {
  if (theta.is_zero()) fail("ZeroElement", "Newton polyhedron of zero");
  std::vector<GroupElement> pts = support(theta);
  std::vector<GroupElement> verts;
  for (size_t i = 0; i < pts.size(); ++i) {
    std::vector<std::vector<Rat>> others;
    for (size_t j = 0; j < pts.size(); ++j) {
      if (j == i) continue;
      std::vector<Rat> q;
      for (long x : pts[j].e) q.emplace_back(x);
      others.push_back(std::move(q));
    }
    std::vector<Rat> p;
    for (long x : pts[i].e) p.emplace_back(x);
    if (others.empty() || !in_convex_hull(p, others)) verts.push_back(pts[i]);
  }
  return verts;
}

// ----- house -----------------------------------------------------------------

namespace {

using Cplx = std::complex<long double>;

Cplx horner(const std::vector<Cplx>& c, Cplx x) {
  Cplx v = c.back();
  for (size_t i = c.size() - 1; i-- > 0;) v = v * x + c[i];
  return v;
}

}  // namespace

double house(const UniLaurent& p, double tol) {
  if (p.num_terms() < 2)
    fail("ConstantPolynomial", "house needs a nonconstant polynomial");
  std::vector<Int> ic = p.cleared_coefficients();
  size_t n = ic.size() - 1;  // degree after clearing, >= 1
  std::vector<Cplx> c(ic.size());
  for (size_t i = 0; i < ic.size(); ++i) {
    double d = ic[i].get_d();
    if (!std::isfinite(d)) fail("CoefficientOverflow", "coefficient out of double range");
    c[i] = Cplx(static_cast<long double>(d), 0.0L);
  }
  // Monic normalization.
  Cplx lead = c[n];
  for (auto& x : c) x /= lead;
  // Cauchy radius and Durand-Kerner iteration.
  long double radius = 0.0L;
  for (size_t i = 0; i < n; ++i) radius = std::max(radius, std::abs(c[i]));
  radius += 1.0L;
  std::vector<Cplx> r(n);
  for (size_t i = 0; i < n; ++i) {
    long double ang = 2.0L * M_PIl * static_cast<long double>(i) / static_cast<long double>(n) + 0.7L;
    r[i] = radius * 0.7L * Cplx(std::cos(ang), std::sin(ang));
  }
  const int max_iter = 4000;
  for (int iter = 0; iter < max_iter; ++iter) {
    long double worst = 0.0L;
    for (size_t i = 0; i < n; ++i) {
      Cplx num = horner(c, r[i]);
      Cplx den(1.0L, 0.0L);
      for (size_t j = 0; j < n; ++j)
        if (j != i) den *= (r[i] - r[j]);
      if (std::abs(den) == 0.0L) {
        r[i] += Cplx(1e-6L, 1e-6L);
        worst = 1.0L;
        continue;
      }
      Cplx dx = num / den;
      r[i] -= dx;
      worst = std::max(worst, std::abs(dx) / (1.0L + std::abs(r[i])));
    }
    if (worst < 1e-17L && iter > 4) break;
  }
  long double best = 0.0L;
  for (size_t i = 0; i < n; ++i) best = std::max(best, std::abs(r[i]));
  (void)tol;
  return static_cast<double>(best);
}

double perron_house(const UniLaurent& p, double tol) {
  if (p.num_terms() < 2)
    fail("ConstantPolynomial", "house needs a nonconstant polynomial");
  std::vector<Int> ic = p.cleared_coefficients();
  if (ic.back() < 0)
    for (auto& c : ic) c = -c;

  const mp_bitcnt_t prec = 1024;
  auto eval = [&](const mpf_class& x) {
    mpf_class v(0, prec);
    for (size_t i = ic.size(); i-- > 0;) {
      v *= x;
      v += mpf_class(ic[i], prec);
    }
    return v;
  };

  // Cauchy bound on root moduli.
  mpf_class bound(1, prec);
  for (size_t i = 0; i + 1 < ic.size(); ++i) {
    mpf_class q(abs(ic[i]), prec);
    q /= mpf_class(ic.back(), prec);
    if (q > bound) bound = q;
  }
  bound += 1;

  // Scan down geometrically for the first sign change; the region above the
  // dominant real root is sign-definite, so the first bracket found contains
  // the largest real root.
  mpf_class hi = bound;
  mpf_class lo(0, prec);
  mpf_class ratio(0.98, prec);
  bool found = false;
  mpf_class floor_x(1e-6, prec);
  mpf_class x = hi;
  mpf_class fx = eval(x);
  while (x > floor_x) {
    mpf_class nx = x * ratio;
    mpf_class fnx = eval(nx);
    if (fnx <= 0) {
      hi = x;
      lo = nx;
      found = true;
      break;
    }
    x = nx;
    fx = fnx;
  }
  if (!found) fail("NoRealRoot", "no real root found for Perron bisection");
  for (int i = 0; i < 2000; ++i) {
    mpf_class mid = (hi + lo) / 2;
    mpf_class diff = hi - lo;
    if (diff < mpf_class(tol, prec) / 1024) break;
    if (eval(mid) <= 0)
      lo = mid;
    else
      hi = mid;
  }
  mpf_class mid = (hi + lo) / 2;
  return mid.get_d();
}

}  // namespace cyclepoly
