#pragma once

// Exact arithmetic for free abelian groups G = Z^k written additively, their
// integral group rings ZG (multivariate Laurent polynomials) and the
// univariate integer Laurent polynomials obtained by specialization.

#include <gmpxx.h>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "cyclepoly/error.hpp"

namespace cyclepoly {

using Int = mpz_class;
using Rat = mpq_class;

// An element of G = Z^k. Coordinate i is the exponent of generator i.
struct GroupElement {
  std::vector<long> e;

  GroupElement() = default;
  explicit GroupElement(std::vector<long> exps) : e(std::move(exps)) {}

  static GroupElement zero(int rank) { return GroupElement(std::vector<long>(rank, 0)); }

  int rank() const { return static_cast<int>(e.size()); }
  long grade() const;
  bool is_zero() const;

  GroupElement operator+(const GroupElement& o) const;
  GroupElement operator-(const GroupElement& o) const;
  GroupElement operator-() const;
  bool operator==(const GroupElement& o) const { return e == o.e; }
};

// Graded lexicographic order, higher grade first.  Used as the canonical
// storage/display order so that every dump is deterministic.
struct GradedLex {
  bool operator()(const GroupElement& a, const GroupElement& b) const;
};

// A rational point of Hom(G;R).  `integral()` is true iff all values are
// integers, which is required for specialization.
struct Cocharacter {
  std::vector<Rat> v;

  Cocharacter() = default;
  explicit Cocharacter(std::vector<Rat> vals) : v(std::move(vals)) {}
  static Cocharacter integral_point(const std::vector<long>& vals);

  int rank() const { return static_cast<int>(v.size()); }
  bool integral() const;
  Rat apply(const GroupElement& g) const;
  long apply_integral(const GroupElement& g) const;

  // Least c >= 1 with c*alpha integral, and the scaled integer vector.
  long clear_denominators(std::vector<long>* out) const;
};

// Univariate integer Laurent polynomial in one formal variable x.
class UniLaurent {
public:
  UniLaurent() = default;

  static UniLaurent monomial(const Int& c, long exp);

  bool is_zero() const { return coeffs_.empty(); }
  int num_terms() const { return static_cast<int>(coeffs_.size()); }
  long min_exp() const;
  long max_exp() const;
  const std::map<long, Int>& coeffs() const { return coeffs_; }

  void add_term(long exp, const Int& c);
  UniLaurent operator+(const UniLaurent& o) const;
  UniLaurent operator-(const UniLaurent& o) const;
  UniLaurent operator*(const UniLaurent& o) const;
  bool operator==(const UniLaurent& o) const { return coeffs_ == o.coeffs_; }

  // Substitute x -> x^c (c >= 1).
  UniLaurent compose_power(long c) const;

  // Coefficients of x^{-min_exp} * p, ascending from the constant term.
  std::vector<Int> cleared_coefficients() const;

  std::string to_string(const std::string& var = "x") const;

private:
  std::map<long, Int> coeffs_;  // exponent -> nonzero coefficient
};

// Element of ZG as a finite map from exponent vectors to nonzero integers.
class GroupRingElement {
public:
  explicit GroupRingElement(int rank = 0) : rank_(rank) {}

  static GroupRingElement zero(int rank) { return GroupRingElement(rank); }
  static GroupRingElement one(int rank);
  static GroupRingElement monomial(const Int& c, const GroupElement& g);

  int rank() const { return rank_; }
  bool is_zero() const { return terms_.empty(); }
  int num_terms() const { return static_cast<int>(terms_.size()); }
  const std::map<GroupElement, Int, GradedLex>& terms() const { return terms_; }
  Int coefficient(const GroupElement& g) const;

  void add_term(const GroupElement& g, const Int& c);

  GroupRingElement operator+(const GroupRingElement& o) const;
  GroupRingElement operator-(const GroupRingElement& o) const;
  GroupRingElement operator*(const GroupRingElement& o) const;
  bool operator==(const GroupRingElement& o) const;

  std::string to_string(const std::vector<std::string>& vars) const;
  static GroupRingElement parse(const std::string& text, const std::vector<std::string>& vars);

private:
  int rank_;
  std::map<GroupElement, Int, GradedLex> terms_;
};

// ----- operations -----------------------------------------------------------

// theta |-> sum a_g x^{alpha(g)}.  alpha must be integral of matching rank.
UniLaurent specialize(const GroupRingElement& theta, const Cocharacter& alpha);

// Exponent vectors with nonzero coefficient.
std::vector<GroupElement> support(const GroupRingElement& theta);

// Vertices of the convex hull of Supp(theta), exact rational test.
std::vector<GroupElement> newton_vertices(const GroupRingElement& theta);

// Maximum modulus of the complex roots of p after clearing the monomial
// factor x^{min_exp}; absolute error <= tol.  p must have >= 2 terms.
double house(const UniLaurent& p, double tol = 1e-9);

// Largest real root >= lower of the cleared polynomial, by exact-sign
// bisection on high-precision floats.  Valid as the house for Perron-type
// specializations (cone-interior points), where the maximum-modulus root is
// real, simple and strictly dominant among real roots above it.
double perron_house(const UniLaurent& p, double tol = 1e-9);

std::string format_monomial(const GroupElement& g, const std::vector<std::string>& vars);

}  // namespace cyclepoly
