#include "cyclepoly/traintrack.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace cyclepoly {

EdgePath reversed_path(const EdgePath& p) {
  EdgePath r;
  r.reserve(p.size());
  for (auto it = p.rbegin(); it != p.rend(); ++it) r.push_back(it->reversed());
  return r;
}

std::string DirName::token() const {
  if (name.size() == 1 && std::islower(static_cast<unsigned char>(name[0]))) {
    if (!rev) return name;
    std::string t = name;
    t[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(t[0])));
    return t;
  }
  return rev ? "~" + name : name;
}

DirName DirName::parse(const std::string& token) {
  if (token.empty()) fail("ParseError", "empty edge token");
  if (token[0] == '~') return {token.substr(1), true};
  if (token.size() == 1 && std::isupper(static_cast<unsigned char>(token[0]))) {
    std::string n(1, static_cast<char>(std::tolower(static_cast<unsigned char>(token[0]))));
    return {n, true};
  }
  return {token, false};
}

int Graph::add_vertex(const std::string& name) {
  vertex_names.push_back(name);
  return num_vertices() - 1;
}

int Graph::add_edge(int init, int term, const std::string& name) {
  if (init < 0 || init >= num_vertices() || term < 0 || term >= num_vertices())
    fail("BadEdge", "edge endpoint out of range");
  if (edge_by_name(name) >= 0) fail("BadEdge", "duplicate edge name '" + name + "'");
  edges.push_back({num_edges(), init, term, name});
  return num_edges() - 1;
}

int Graph::edge_by_name(const std::string& name) const {
  for (const auto& e : edges)
    if (e.name == name) return e.id;
  return -1;
}

int Graph::vertex_by_name(const std::string& name) const {
  for (int i = 0; i < num_vertices(); ++i)
    if (vertex_names[i] == name) return i;
  return -1;
}

int Graph::degree(int v) const {
  int d = 0;
  for (const auto& e : edges) {
    if (e.init == v) ++d;
    if (e.term == v) ++d;
  }
  return d;
}

bool Graph::path_chains(const EdgePath& p) const {
  for (size_t i = 0; i + 1 < p.size(); ++i)
    if (dir_term(p[i]) != dir_init(p[i + 1])) return false;
  return true;
}

bool Graph::connected() const {
  if (num_vertices() == 0) return false;
  std::vector<bool> seen(num_vertices(), false);
  std::vector<int> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (const auto& e : edges) {
      if (e.init == v && !seen[e.term]) {
        seen[e.term] = true;
        stack.push_back(e.term);
      }
      if (e.term == v && !seen[e.init]) {
        seen[e.init] = true;
        stack.push_back(e.init);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

bool has_backtracking(const EdgePath& p) {
  for (size_t i = 0; i + 1 < p.size(); ++i)
    if (p[i + 1] == p[i].reversed()) return true;
  return false;
}

// ----- TrainTrackMap -----------------------------------------------------------

EdgePath TrainTrackMap::image(DirEdge d) const {
  return d.rev ? reversed_path(edge_map[d.id]) : edge_map[d.id];
}

EdgePath TrainTrackMap::image_path(const EdgePath& p) const {
  EdgePath out;
  for (DirEdge d : p) {
    EdgePath im = image(d);
    out.insert(out.end(), im.begin(), im.end());
  }
  return out;
}

void TrainTrackMap::check() const {
  if (static_cast<int>(vertex_map.size()) != graph.num_vertices())
    fail("InvalidMap", "vertex map size");
  if (static_cast<int>(edge_map.size()) != graph.num_edges()) fail("InvalidMap", "edge map size");
  for (int v : vertex_map)
    if (v < 0 || v >= graph.num_vertices()) fail("InvalidMap", "vertex image out of range");
  for (const auto& e : graph.edges) {
    const EdgePath& p = edge_map[e.id];
    if (p.empty()) fail("InvalidMap", "edge '" + e.name + "' has empty image");
    for (DirEdge d : p)
      if (d.id < 0 || d.id >= graph.num_edges()) fail("InvalidMap", "image edge out of range");
    if (!graph.path_chains(p)) fail("InvalidMap", "image of '" + e.name + "' does not chain");
    if (graph.dir_init(p.front()) != vertex_map[e.init] ||
        graph.dir_term(p.back()) != vertex_map[e.term])
      fail("InvalidMap", "image endpoints of '" + e.name + "' disagree with vertex map");
  }
}

// ----- validation ----------------------------------------------------------------

namespace {

int dir_index(DirEdge d) { return 2 * d.id + (d.rev ? 1 : 0); }

}  // namespace

TrainTrackReport validate_train_track(const TrainTrackMap& f) {
  TrainTrackReport rep;
  f.check();
  rep.is_graph_map = true;
  for (const auto& e : f.graph.edges) {
    if (has_backtracking(f.edge_map[e.id])) {
      rep.is_graph_map = false;
      rep.offending_edge = e.id;
      rep.offending_power = 1;
      return rep;
    }
  }

  int m = f.graph.num_edges();
  int nd = 2 * m;
  std::vector<int> Df(nd);
  for (int id = 0; id < m; ++id) {
    Df[dir_index({id, false})] = dir_index(f.image({id, false}).front());
    Df[dir_index({id, true})] = dir_index(f.image({id, true}).front());
  }
  // Taken turns: junctions of the image paths.
  std::set<std::pair<int, int>> turns;
  std::map<std::pair<int, int>, int> origin;  // turn -> edge that takes it
  for (const auto& e : f.graph.edges) {
    const EdgePath& p = f.edge_map[e.id];
    for (size_t i = 0; i + 1 < p.size(); ++i) {
      int a = dir_index(p[i].reversed());
      int b = dir_index(p[i + 1]);
      auto t = std::minmax(a, b);
      if (turns.emplace(t.first, t.second).second)
        origin.emplace(std::make_pair(t.first, t.second), e.id);
    }
  }
  rep.is_train_track = true;
  for (auto [a, b] : std::set<std::pair<int, int>>(turns)) {
    int x = a, y = b;
    int src = origin[{a, b}];
    for (int j = 1; j <= 2 * m - 1; ++j) {
      x = Df[x];
      y = Df[y];
      if (x == y) {
        rep.is_train_track = false;
        if (rep.offending_edge < 0 || j + 1 < rep.offending_power) {
          rep.offending_edge = src;
          rep.offending_power = j + 1;
        }
        break;
      }
    }
    if (!rep.is_train_track) break;
  }

  try {
    derive_folding(f);
    rep.is_homotopy_equivalence = true;
  } catch (const Error&) {
    rep.is_homotopy_equivalence = false;
  }
  return rep;
}

IntMatrix transition_matrix(const TrainTrackMap& f) {
  int m = f.graph.num_edges();
  IntMatrix M(m, m);
  for (int i = 0; i < m; ++i)
    for (DirEdge d : f.edge_map[i]) M.at(i, d.id) += 1;
  return M;
}

double dilatation(const TrainTrackMap& f, double tol) {
  return spectral_radius(Digraph::from_adjacency(transition_matrix(f)), tol);
}

// ----- folds ---------------------------------------------------------------------

FoldResult fold(const Graph& g, DirEdge e1, DirEdge e2) {
  if (e1.id == e2.id) fail("SameEdge", "cannot fold an edge with itself");
  if (g.dir_init(e1) != g.dir_init(e2)) fail("InvalidFold", "edges do not share initial vertex");
  int q1 = g.dir_term(e1), q2 = g.dir_term(e2);
  if (q1 == q2) fail("SharedTerminalVertex", "fold requires distinct terminal vertices");

  FoldResult r;
  // Merge q2 into q1.
  r.vertex_map.resize(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) {
    int tgt = (v == q2) ? q1 : v;
    r.vertex_map[v] = tgt - (tgt > q2 ? 1 : 0);
  }
  for (int v = 0; v < g.num_vertices(); ++v)
    if (v != q2) r.graph.add_vertex(g.vertex_names[v]);

  r.edge_map.resize(g.num_edges());
  for (const auto& e : g.edges) {
    if (e.id == e2.id) continue;
    int nid = r.graph.add_edge(r.vertex_map[e.init], r.vertex_map[e.term], e.name);
    r.edge_map[e.id] = {nid, false};
  }
  // e2 (in the folded direction) is identified with e1 (in its direction).
  DirEdge ne1 = r.edge_map[e1.id];
  if (e1.rev) ne1 = ne1.reversed();
  r.edge_map[e2.id] = e2.rev ? ne1.reversed() : ne1;
  return r;
}

SubdivideResult subdivide(const Graph& g, const std::vector<int>& counts) {
  if (static_cast<int>(counts.size()) != g.num_edges()) fail("ShapeMismatch", "counts size");
  SubdivideResult r;
  r.vertex_map.resize(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) r.vertex_map[v] = r.graph.add_vertex(g.vertex_names[v]);
  r.segments.resize(g.num_edges());
  for (const auto& e : g.edges) {
    int n = counts[e.id];
    if (n < 1) fail("BadSubdivision", "segment count must be >= 1");
    if (n == 1) {
      r.segments[e.id] = {r.graph.add_edge(r.vertex_map[e.init], r.vertex_map[e.term], e.name)};
      continue;
    }
    int prev = r.vertex_map[e.init];
    for (int i = 1; i <= n; ++i) {
      int next = (i == n) ? r.vertex_map[e.term]
                          : r.graph.add_vertex(e.name + "." + std::to_string(i));
      r.segments[e.id].push_back(r.graph.add_edge(prev, next, e.name + std::to_string(i)));
      prev = next;
    }
  }
  return r;
}

// ----- folding decompositions -----------------------------------------------------

namespace {

// Shared driver: subdivide, then fold pairs with equal residual image.  In
// `schedule` mode the pairs are discovered; otherwise the given fold tokens
// are replayed in order.
struct FoldDriver {
  const TrainTrackMap& f;
  bool schedule;
  const FoldingDecomposition* given = nullptr;

  FoldSequence seq;
  FoldingDecomposition derived;
  // Residual map: current graph -> original graph (edge-to-edge).
  std::vector<DirEdge> res_edge;
  std::vector<int> res_vertex;

  FoldDriver(const TrainTrackMap& f_, const FoldingDecomposition* d) : f(f_), schedule(d == nullptr), given(d) {}

  void run() {
    f.check();
    const Graph& tau = f.graph;
    std::vector<int> counts(tau.num_edges(), 1);
    if (schedule) {
      for (const auto& e : tau.edges)
        counts[e.id] = static_cast<int>(f.edge_map[e.id].size());
    } else {
      for (const auto& [name, n] : given->subdivision) {
        int id = tau.edge_by_name(name);
        if (id < 0) fail("ParseError", "subdivide: unknown edge '" + name + "'");
        counts[id] = n;
      }
    }
    SubdivideResult sub = subdivide(tau, counts);
    for (const auto& e : tau.edges)
      if (counts[e.id] > 1) derived.subdivision.emplace_back(e.name, counts[e.id]);
    seq.segments = sub.segments;
    seq.sub_vertex_map = sub.vertex_map;
    seq.graphs.push_back(sub.graph);

    // Residual image of each segment: the matching step of f(e).  This
    // requires counts[e] == |f(e)|.
    res_edge.assign(sub.graph.num_edges(), DirEdge{});
    for (const auto& e : tau.edges) {
      if (counts[e.id] != static_cast<int>(f.edge_map[e.id].size()))
        fail("BadSubdivision",
             "edge '" + e.name + "' must be subdivided into |f(e)| segments");
      for (size_t i = 0; i < sub.segments[e.id].size(); ++i)
        res_edge[sub.segments[e.id][i]] = f.edge_map[e.id][i];
    }
    res_vertex.assign(sub.graph.num_vertices(), -1);
    for (const auto& e : sub.graph.edges) {
      res_vertex[e.init] = tau.dir_init(res_edge[e.id]);
      res_vertex[e.term] = tau.dir_term(res_edge[e.id]);
    }

    if (schedule) {
      run_schedule();
    } else {
      replay_given();
    }

    // Residual must now be a graph isomorphism.
    const Graph& last = seq.graphs.back();
    if (last.num_edges() != tau.num_edges() || last.num_vertices() != tau.num_vertices())
      fail("NotHomotopyEquivalence", "folding terminated at a non-isomorphism");
    std::vector<int> edge_hits(tau.num_edges(), 0), vertex_hits(tau.num_vertices(), 0);
    for (const auto& e : last.edges) edge_hits[res_edge[e.id].id]++;
    for (int v = 0; v < last.num_vertices(); ++v) {
      if (res_vertex[v] < 0) fail("NotHomotopyEquivalence", "unmapped vertex");
      vertex_hits[res_vertex[v]]++;
    }
    for (int h : edge_hits)
      if (h != 1) fail("NotHomotopyEquivalence", "residual map is not an isomorphism");
    for (int h : vertex_hits)
      if (h != 1) fail("NotHomotopyEquivalence", "residual map is not an isomorphism");
    seq.h_vertex = res_vertex;
    seq.h_edge = res_edge;
    for (const auto& e : last.edges)
      derived.homeo.emplace_back(e.name, DirName{tau.edges[res_edge[e.id].id].name,
                                                 res_edge[e.id].rev});
  }

  bool try_fold(DirEdge d1, DirEdge d2, bool record) {
    const Graph& g = seq.graphs.back();
    FoldResult fr = fold(g, d1, d2);
    if (record)
      derived.folds.emplace_back(DirName{g.edges[d1.id].name, d1.rev},
                                 DirName{g.edges[d2.id].name, d2.rev});
    // Update residual through the quotient.
    std::vector<DirEdge> new_res(fr.graph.num_edges());
    for (const auto& e : g.edges) {
      DirEdge ne = fr.edge_map[e.id];
      DirEdge img = res_edge[e.id];
      new_res[ne.id] = ne.rev ? img.reversed() : img;
    }
    std::vector<int> new_resv(fr.graph.num_vertices(), -1);
    for (int v = 0; v < g.num_vertices(); ++v) new_resv[fr.vertex_map[v]] = res_vertex[v];
    res_edge = std::move(new_res);
    res_vertex = std::move(new_resv);
    seq.steps.push_back({d1, d2, fr.vertex_map, fr.edge_map});
    seq.graphs.push_back(std::move(fr.graph));
    return true;
  }

  void run_schedule() {
    for (;;) {
      const Graph& g = seq.graphs.back();
      bool folded = false;
      for (int i = 0; i < 2 * g.num_edges() && !folded; ++i) {
        DirEdge d1{i / 2, (i % 2) == 1};
        for (int j = i + 1; j < 2 * g.num_edges() && !folded; ++j) {
          DirEdge d2{j / 2, (j % 2) == 1};
          if (d1.id == d2.id) continue;
          if (g.dir_init(d1) != g.dir_init(d2)) continue;
          DirEdge r1 = d1.rev ? res_edge[d1.id].reversed() : res_edge[d1.id];
          DirEdge r2 = d2.rev ? res_edge[d2.id].reversed() : res_edge[d2.id];
          if (!(r1 == r2)) continue;
          if (g.dir_term(d1) == g.dir_term(d2)) continue;  // illegal fold, skip
          try_fold(d1, d2, true);
          folded = true;
        }
      }
      if (!folded) break;
    }
  }

  void replay_given() {
    for (const auto& [t1, t2] : given->folds) {
      const Graph& g = seq.graphs.back();
      int id1 = g.edge_by_name(t1.name), id2 = g.edge_by_name(t2.name);
      if (id1 < 0 || id2 < 0)
        fail("ParseError", "fold references unknown edge '" +
                               (id1 < 0 ? t1.name : t2.name) + "'");
      try_fold({id1, t1.rev}, {id2, t2.rev}, true);
    }
    // Override the residual by the user-supplied homeomorphism if present;
    // the residual is recomputed from it so that compose_check compares
    // against exactly the supplied data.
    if (!given->homeo.empty()) {
      const Graph& last = seq.graphs.back();
      const Graph& tau = f.graph;
      std::vector<DirEdge> he(last.num_edges(), DirEdge{});
      std::vector<bool> seen(last.num_edges(), false);
      for (const auto& [name, target] : given->homeo) {
        int id = last.edge_by_name(name);
        int tid = tau.edge_by_name(target.name);
        if (id < 0) fail("ParseError", "homeo: unknown edge '" + name + "'");
        if (tid < 0) fail("ParseError", "homeo: unknown target edge '" + target.name + "'");
        he[id] = {tid, target.rev};
        seen[id] = true;
      }
      for (bool b : seen)
        if (!b) fail("ParseError", "homeo does not cover all edges");
      // Induced vertex map, checked for consistency.
      std::vector<int> hv(last.num_vertices(), -1);
      for (const auto& e : last.edges) {
        int a = tau.dir_init(he[e.id]), b = tau.dir_term(he[e.id]);
        if (hv[e.init] >= 0 && hv[e.init] != a) fail("InvalidMap", "homeo vertex mismatch");
        if (hv[e.term] >= 0 && hv[e.term] != b) fail("InvalidMap", "homeo vertex mismatch");
        hv[e.init] = a;
        hv[e.term] = b;
      }
      res_edge = he;
      res_vertex = hv;
    }
  }
};

}  // namespace

FoldingDecomposition derive_folding(const TrainTrackMap& f) {
  FoldDriver drv(f, nullptr);
  drv.run();
  return drv.derived;
}

FoldSequence replay_decomposition(const FoldingDecomposition& d, const TrainTrackMap& f) {
  FoldDriver drv(f, &d);
  drv.run();
  return drv.seq;
}

bool compose_check(const FoldingDecomposition& d, const TrainTrackMap& f) {
  FoldSequence seq;
  try {
    seq = replay_decomposition(d, f);
  } catch (const Error&) {
    return false;
  }
  const Graph& tau = f.graph;
  // Collapse map tau_0 -> tau_k composed with h must reproduce f segmentwise.
  int n0 = seq.graphs.front().num_edges();
  std::vector<DirEdge> collapse(n0);
  for (int i = 0; i < n0; ++i) collapse[i] = {i, false};
  for (const auto& step : seq.steps)
    for (auto& c : collapse) {
      DirEdge ne = step.edge_map[c.id];
      c = c.rev ? ne.reversed() : ne;
    }
  for (const auto& e : tau.edges) {
    const EdgePath& want = f.edge_map[e.id];
    const auto& segs = seq.segments[e.id];
    if (want.size() != segs.size()) return false;
    for (size_t i = 0; i < segs.size(); ++i) {
      DirEdge c = collapse[segs[i]];
      DirEdge img = seq.h_edge[c.id];
      if (c.rev) img = img.reversed();
      if (!(img == want[i])) return false;
    }
  }
  return true;
}

long cyclically_reduced_length(const TrainTrackMap& f, const EdgePath& start, int k) {
  EdgePath w = start;
  for (int i = 0; i < k; ++i) w = f.image_path(w);
  // Free reduction.
  EdgePath red;
  for (DirEdge d : w) {
    if (!red.empty() && red.back() == d.reversed())
      red.pop_back();
    else
      red.push_back(d);
  }
  // Cyclic reduction.
  size_t lo = 0, hi = red.size();
  while (hi - lo >= 2 && red[lo] == red[hi - 1].reversed()) {
    ++lo;
    --hi;
  }
  return static_cast<long>(hi - lo);
}

}  // namespace cyclepoly
