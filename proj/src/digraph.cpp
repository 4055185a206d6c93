#include "cyclepoly/digraph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace cyclepoly {

void Digraph::add_edge(int src, int dst) {
  if (src < 0 || src >= m || dst < 0 || dst >= m) fail("BadEdge", "edge endpoint out of range");
  edges.push_back({static_cast<int>(edges.size()), src, dst});
}

Digraph Digraph::from_adjacency(const IntMatrix& M) {
  if (M.rows() != M.cols()) fail("ShapeMismatch", "adjacency matrix must be square");
  Digraph d;
  d.m = M.rows();
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) {
      if (M.at(i, j) < 0) fail("BadEdge", "negative adjacency entry");
      long c = M.at(i, j).get_si();
      for (long t = 0; t < c; ++t) d.add_edge(i, j);
    }
  return d;
}

IntMatrix Digraph::adjacency() const {
  IntMatrix M(m, m);
  for (const auto& e : edges) M.at(e.src, e.dst) += 1;
  return M;
}

// ----- simple cycles ----------------------------------------------------------

namespace {

struct CycleSearch {
  const Digraph& d;
  std::vector<std::vector<int>> out;  // vertex -> edge ids, sorted
  std::vector<SimpleCycle>& found;
  int root = 0;
  int max_cycles;
  std::vector<bool> on_path;
  std::vector<int> path_edges;

  CycleSearch(const Digraph& dg, std::vector<SimpleCycle>& f, int cap)
      : d(dg), found(f), max_cycles(cap) {
    out.resize(d.m);
    for (const auto& e : d.edges) out[e.src].push_back(e.id);
    on_path.assign(d.m, false);
  }

  // Explore from `v`, allowed vertices are > root (except closing at root).
  void dfs(int v) {
    for (int eid : out[v]) {
      const auto& e = d.edges[eid];
      if (e.dst == root) {
        SimpleCycle c;
        c.edges = path_edges;
        c.edges.push_back(eid);
        for (int x : c.edges) c.vertices.push_back(d.edges[x].src);
        std::sort(c.vertices.begin(), c.vertices.end());
        if (static_cast<int>(found.size()) >= max_cycles)
          fail("ComplexTooLarge", "simple cycle count exceeds bound");
        found.push_back(std::move(c));
      } else if (e.dst > root && !on_path[e.dst]) {
        on_path[e.dst] = true;
        path_edges.push_back(eid);
        dfs(e.dst);
        path_edges.pop_back();
        on_path[e.dst] = false;
      }
    }
  }
};

}  // namespace

std::vector<SimpleCycle> simple_cycles(const Digraph& d, int max_cycles) {
  std::vector<SimpleCycle> found;
  CycleSearch cs(d, found, max_cycles);
  for (int r = 0; r < d.m; ++r) {
    cs.root = r;
    cs.on_path.assign(d.m, false);
    cs.on_path[r] = true;
    cs.dfs(r);
  }
  return found;
}

std::vector<CycleSet> cycle_complex(const std::vector<SimpleCycle>& cycles, int m) {
  int n = static_cast<int>(cycles.size());
  // Conflict bitsets over vertices.
  std::vector<std::vector<bool>> uses(n, std::vector<bool>(m, false));
  for (int i = 0; i < n; ++i)
    for (int v : cycles[i].vertices) uses[i][v] = true;
  auto disjoint = [&](const std::vector<bool>& used, int j) {
    for (int v : cycles[j].vertices)
      if (used[v]) return false;
    return true;
  };
  std::vector<CycleSet> out;
  std::vector<int> cur;
  std::vector<bool> used(m, false);
  // Depth-first over increasing cycle indices.
  auto rec = [&](auto&& self, int from) -> void {
    for (int j = from; j < n; ++j) {
      if (!disjoint(used, j)) continue;
      cur.push_back(j);
      for (int v : cycles[j].vertices) used[v] = true;
      out.push_back(CycleSet{cur});
      self(self, j + 1);
      for (int v : cycles[j].vertices) used[v] = false;
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

std::vector<CycleSet> cycle_complex(const Digraph& d, int max_cycles) {
  return cycle_complex(simple_cycles(d, max_cycles), d.m);
}

// ----- cycle polynomials --------------------------------------------------------

UniLaurent cycle_polynomial(const Digraph& d, int max_cycles) {
  auto cycles = simple_cycles(d, max_cycles);
  auto complex = cycle_complex(cycles, d.m);
  UniLaurent p;
  p.add_term(0, 1);
  for (const auto& s : complex) {
    long len = 0;
    for (int i : s.cycles) len += cycles[i].length();
    p.add_term(-len, (s.size() % 2) ? -1 : 1);
  }
  return p;
}

GroupElement cycle_label(const LabeledDigraph& ld, const SimpleCycle& c) {
  GroupElement g = GroupElement::zero(ld.rank);
  for (int eid : c.edges) g = g + ld.labels[eid];
  return g;
}

GroupRingElement cycle_polynomial(const LabeledDigraph& ld, int max_cycles) {
  auto cycles = simple_cycles(ld.digraph, max_cycles);
  auto complex = cycle_complex(cycles, ld.digraph.m);
  int k = ld.rank;
  GroupRingElement p = GroupRingElement::one(k + 1);
  for (const auto& s : complex) {
    GroupElement g = GroupElement::zero(k + 1);
    for (int i : s.cycles) {
      GroupElement h = cycle_label(ld, cycles[i]);
      for (int j = 0; j < k; ++j) g.e[j] -= h.e[j];
      g.e[k] -= cycles[i].length();
    }
    p.add_term(g, (s.size() % 2) ? -1 : 1);
  }
  return p;
}

// ----- symbolic characteristic polynomial ---------------------------------------

namespace {

// Expansion over column subsets: D(rows i.., column set S).  For an n x n
// matrix this touches 2^n subsets, fine at desk scale.
struct DetWorker {
  const LaurentMatrix& M;
  int n;
  std::map<unsigned, GroupRingElement> memo;

  explicit DetWorker(const LaurentMatrix& m) : M(m), n(m.n) {}

  GroupRingElement det(unsigned cols, int row) {
    if (row == n) return GroupRingElement::one(M.rank);
    auto it = memo.find(cols);
    if (it != memo.end()) return it->second;
    GroupRingElement acc(M.rank);
    int sign = 1;
    for (int j = 0; j < n; ++j) {
      if (!(cols & (1u << j))) continue;
      if (!M.at(row, j).is_zero()) {
        GroupRingElement sub = det(cols & ~(1u << j), row + 1);
        GroupRingElement term = M.at(row, j) * sub;
        if (sign < 0) term = GroupRingElement(M.rank) - term;
        acc = acc + term;
      }
      sign = -sign;
    }
    memo.emplace(cols, acc);
    return acc;
  }
};

}  // namespace

GroupRingElement char_poly_labeled(const LaurentMatrix& M) {
  if (M.n > 20) fail("MatrixTooLarge", "characteristic polynomial capped at 20x20");
  int k = M.rank;
  // Entries of uI - M live in rank k+1 with u the last coordinate.
  LaurentMatrix A(M.n, k + 1);
  GroupElement u = GroupElement::zero(k + 1);
  u.e[k] = 1;
  for (int i = 0; i < M.n; ++i)
    for (int j = 0; j < M.n; ++j) {
      GroupRingElement x(k + 1);
      for (const auto& [g, c] : M.at(i, j).terms()) {
        GroupElement gg = GroupElement::zero(k + 1);
        for (int l = 0; l < k; ++l) gg.e[l] = g.e[l];
        x.add_term(gg, -c);
      }
      if (i == j) x.add_term(u, 1);
      A.at(i, j) = x;
    }
  if (M.n == 0) return GroupRingElement::one(k + 1);
  DetWorker w(A);
  return w.det((1u << M.n) - 1, 0);
}

UniLaurent char_poly(const IntMatrix& M) {
  LaurentMatrix L(M.rows(), 0);
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j)
      L.at(i, j) = GroupRingElement::monomial(M.at(i, j), GroupElement::zero(0));
  GroupRingElement p = char_poly_labeled(L);
  UniLaurent out;
  for (const auto& [g, c] : p.terms()) out.add_term(g.e[0], c);
  return out;
}

// ----- classification -----------------------------------------------------------

namespace {

bool strongly_connected(const Digraph& d) {
  if (d.m == 0) return false;
  std::vector<std::vector<int>> fwd(d.m), bwd(d.m);
  for (const auto& e : d.edges) {
    fwd[e.src].push_back(e.dst);
    bwd[e.dst].push_back(e.src);
  }
  auto reach_all = [&](const std::vector<std::vector<int>>& adj) {
    std::vector<bool> seen(d.m, false);
    std::vector<int> stack{0};
    seen[0] = true;
    int count = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v])
        if (!seen[w]) {
          seen[w] = true;
          ++count;
          stack.push_back(w);
        }
    }
    return count == d.m;
  };
  return reach_all(fwd) && reach_all(bwd);
}

bool primitive(const Digraph& d) {
  int m = d.m;
  if (m == 0) return false;
  std::vector<std::vector<bool>> B(m, std::vector<bool>(m, false));
  for (const auto& e : d.edges) B[e.src][e.dst] = true;
  auto all_positive = [&](const std::vector<std::vector<bool>>& A) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (!A[i][j]) return false;
    return true;
  };
  std::vector<std::vector<bool>> P = B;
  int bound = (m - 1) * (m - 1) + 1;
  for (int step = 1; step <= bound; ++step) {
    if (all_positive(P)) return true;
    std::vector<std::vector<bool>> N(m, std::vector<bool>(m, false));
    for (int i = 0; i < m; ++i)
      for (int l = 0; l < m; ++l) {
        if (!P[i][l]) continue;
        for (int j = 0; j < m; ++j)
          if (B[l][j]) N[i][j] = true;
      }
    P.swap(N);
  }
  return all_positive(P);
}

}  // namespace

ClassifyFlags classify(const Digraph& d) {
  ClassifyFlags f;
  f.strongly_connected = strongly_connected(d);
  f.irreducible = f.strongly_connected;
  // For a strongly connected integer digraph, having more edges than vertices
  // is equivalent to spectral radius > 1 and hence to unbounded powers.
  f.expanding = f.strongly_connected && static_cast<int>(d.edges.size()) > d.m;
  f.perron_frobenius = f.expanding && primitive(d);
  return f;
}

double spectral_radius(const Digraph& d, double tol) {
  int m = d.m;
  if (m == 0) return 0.0;
  IntMatrix A = d.adjacency();
  // Power iteration on M+I; the shift makes every strongly connected class
  // aperiodic and preserves lambda up to the shift.
  std::vector<double> x(m, 1.0), y(m);
  double lambda = 0.0, prev = -1.0;
  for (int iter = 0; iter < 200000; ++iter) {
    for (int i = 0; i < m; ++i) {
      double s = x[i];
      for (int j = 0; j < m; ++j) s += A.at(i, j).get_d() * x[j];
      y[i] = s;
    }
    double norm = 0.0;
    for (double v : y) norm = std::max(norm, std::abs(v));
    if (norm == 0.0) return 0.0;
    for (int i = 0; i < m; ++i) x[i] = y[i] / norm;
    lambda = norm;
    if (iter > 10 && std::abs(lambda - prev) < tol * 1e-3) break;
    prev = lambda;
  }
  double guess = lambda - 1.0;
  if (m <= 16) {
    // Exact cross-check via the characteristic polynomial.
    UniLaurent p = char_poly(A);
    if (p.num_terms() >= 2) {
      double h = house(p, tol);
      if (std::abs(h - guess) > tol) return h;
    } else {
      return 0.0;
    }
  }
  return guess;
}

LabeledDigraph conjugate(const LabeledDigraph& ld) {
  LabeledDigraph out = ld;
  for (auto& g : out.labels) g = -g;
  return out;
}

std::string dump_labeled_digraph(const LabeledDigraph& ld, const std::vector<std::string>& vars) {
  std::ostringstream os;
  os << "vertices: " << ld.digraph.m << "\n";
  for (const auto& e : ld.digraph.edges) {
    os << e.src << " -> " << e.dst << " [" << format_monomial(ld.labels[e.id], vars) << "]\n";
  }
  return os.str();
}

}  // namespace cyclepoly
