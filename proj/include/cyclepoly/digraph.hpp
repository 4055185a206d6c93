#pragma once

// Multidigraphs and labeled multidigraphs: simple cycle enumeration, the cycle
// complex, cycle polynomials, exact symbolic characteristic polynomials, and
// matrix classification (irreducible / expanding / Perron-Frobenius).

#include <vector>

#include "cyclepoly/grpring.hpp"
#include "cyclepoly/intlin.hpp"

namespace cyclepoly {

struct DigraphEdge {
  int id, src, dst;
};

struct Digraph {
  int m = 0;  // vertices 0..m-1
  std::vector<DigraphEdge> edges;

  void add_edge(int src, int dst);
  static Digraph from_adjacency(const IntMatrix& M);
  IntMatrix adjacency() const;
};

// Multidigraph with group-element edge labels of uniform rank.
struct LabeledDigraph {
  Digraph digraph;
  std::vector<GroupElement> labels;  // by edge id
  int rank = 0;
};

// Cyclic edge sequence visiting no vertex twice; canonical rotation starts at
// the minimal visited vertex.
struct SimpleCycle {
  std::vector<int> edges;
  std::vector<int> vertices;  // visited set, sorted
  int length() const { return static_cast<int>(edges.size()); }
};

// A simplex of the cycle complex: indices into the simple-cycle list,
// pairwise vertex-disjoint.
struct CycleSet {
  std::vector<int> cycles;
  int size() const { return static_cast<int>(cycles.size()); }
};

// Square matrix of group ring elements (entries in ZH).
struct LaurentMatrix {
  int n = 0;
  int rank = 0;
  std::vector<GroupRingElement> a;  // row major

  LaurentMatrix(int n_, int rank_)
      : n(n_), rank(rank_), a(size_t(n_) * n_, GroupRingElement(rank_)) {}
  GroupRingElement& at(int i, int j) { return a[size_t(i) * n + j]; }
  const GroupRingElement& at(int i, int j) const { return a[size_t(i) * n + j]; }
};

struct ClassifyFlags {
  bool strongly_connected = false;
  bool irreducible = false;
  bool expanding = false;
  bool perron_frobenius = false;
};

// All simple cycles, each once up to rotation, in deterministic order.
std::vector<SimpleCycle> simple_cycles(const Digraph& d, int max_cycles = 10000);

// All nonempty sets of pairwise vertex-disjoint simple cycles.
std::vector<CycleSet> cycle_complex(const Digraph& d, int max_cycles = 10000);
std::vector<CycleSet> cycle_complex(const std::vector<SimpleCycle>& cycles, int m);

// Unlabeled cycle polynomial theta_D(x) = 1 + sum (-1)^{|s|} x^{-l(s)}.
UniLaurent cycle_polynomial(const Digraph& d, int max_cycles = 10000);

// Labeled cycle polynomial over H x <u>: rank k+1, last coordinate the
// u-exponent -l(sigma); labels of cycles are sums of edge labels.
GroupRingElement cycle_polynomial(const LabeledDigraph& ld, int max_cycles = 10000);

// det(uI - M) in ZH[u] = ZG, computed exactly by memoized cofactor expansion.
GroupRingElement char_poly_labeled(const LaurentMatrix& M);

// det(xI - M) for an integer matrix.
UniLaurent char_poly(const IntMatrix& M);

ClassifyFlags classify(const Digraph& d);

// Spectral radius of the adjacency matrix; power iteration on M+I with a
// characteristic-polynomial fallback.
double spectral_radius(const Digraph& d, double tol = 1e-9);

// Same underlying digraph, every label negated.
LabeledDigraph conjugate(const LabeledDigraph& ld);

GroupElement cycle_label(const LabeledDigraph& ld, const SimpleCycle& c);

// Deterministic text dump / parse of a labeled digraph.
std::string dump_labeled_digraph(const LabeledDigraph& ld, const std::vector<std::string>& vars);

}  // namespace cyclepoly
