#include "cyclepoly/branched.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace cyclepoly {

int BranchedSurface::top_cell_of(int transversal) const {
  int found = -1;
  for (size_t c = 0; c < cells2.size(); ++c) {
    if (cells2[c].top == transversal) {
      if (found >= 0) fail("InvariantViolation", "transversal cell tops two 2-cells");
      found = static_cast<int>(c);
    }
  }
  if (found < 0) fail("InvariantViolation", "transversal cell tops no 2-cell");
  return found;
}

std::vector<SignedCell> BranchedSurface::lower_boundary(int cell) const {
  const Cell2& c = cells2[cell];
  std::vector<SignedCell> out;
  for (int v : c.left) out.push_back({v, false});
  for (SignedCell s : c.bottom) out.push_back(s);
  for (auto it = c.right.rbegin(); it != c.right.rend(); ++it) out.push_back({*it, true});
  return out;
}

IntMatrix BranchedSurface::boundary1() const {
  IntMatrix d1(n0, static_cast<int>(cells1.size()));
  for (size_t e = 0; e < cells1.size(); ++e) {
    d1.at(cells1[e].to, static_cast<int>(e)) += 1;
    d1.at(cells1[e].from, static_cast<int>(e)) -= 1;
  }
  return d1;
}

IntMatrix BranchedSurface::boundary2() const {
  IntMatrix d2(static_cast<int>(cells1.size()), static_cast<int>(cells2.size()));
  for (size_t c = 0; c < cells2.size(); ++c) {
    const Cell2& cell = cells2[c];
    d2.at(cell.top, static_cast<int>(c)) += 1;
    for (int v : cell.right) d2.at(v, static_cast<int>(c)) += 1;
    for (SignedCell s : cell.bottom) d2.at(s.cell, static_cast<int>(c)) += s.rev ? 1 : -1;
    for (int v : cell.left) d2.at(v, static_cast<int>(c)) -= 1;
  }
  return d2;
}

void BranchedSurface::check_invariants() const {
  for (const auto& e : cells1)
    if (e.from < 0 || e.from >= n0 || e.to < 0 || e.to >= n0)
      fail("InvariantViolation", "1-cell endpoint out of range");

  // Every transversal 1-cell is the top of exactly one 2-cell.
  std::vector<int> tops(cells1.size(), 0);
  for (const auto& c : cells2) {
    if (c.top < 0 || c.top >= static_cast<int>(cells1.size()))
      fail("InvariantViolation", "top out of range");
    if (cells1[c.top].kind != CellKind::Transversal)
      fail("InvariantViolation", "top 1-cell is not transversal");
    tops[c.top]++;
  }
  for (size_t e = 0; e < cells1.size(); ++e) {
    if (cells1[e].kind == CellKind::Transversal && tops[e] != 1)
      fail("InvariantViolation", "transversal 1-cell must top exactly one 2-cell");
  }

  // Vertical 1-cells chain.
  for (size_t e = 0; e < cells1.size(); ++e) {
    if (cells1[e].kind != CellKind::Vertical) continue;
    bool chained = false;
    for (size_t g = 0; g < cells1.size(); ++g)
      if (cells1[g].kind == CellKind::Vertical && cells1[g].from == cells1[e].to) {
        chained = true;
        break;
      }
    if (!chained) fail("InvariantViolation", "vertical 1-cell endpoint is not a start");
  }

  // Boundary circuits close up.
  for (size_t ci = 0; ci < cells2.size(); ++ci) {
    const Cell2& c = cells2[ci];
    for (int v : c.left)
      if (cells1[v].kind != CellKind::Vertical) fail("InvariantViolation", "left path not vertical");
    for (int v : c.right)
      if (cells1[v].kind != CellKind::Vertical) fail("InvariantViolation", "right path not vertical");
    if (c.bottom.empty()) fail("InvariantViolation", "empty bottom path");
    int pos = cells1[c.top].from;
    for (int v : c.left) {
      if (cells1[v].from != pos) fail("InvariantViolation", "left path does not chain");
      pos = cells1[v].to;
    }
    for (SignedCell s : c.bottom) {
      int a = s.rev ? cells1[s.cell].to : cells1[s.cell].from;
      int b = s.rev ? cells1[s.cell].from : cells1[s.cell].to;
      if (a != pos) fail("InvariantViolation", "bottom path does not chain");
      pos = b;
    }
    int rpos = cells1[c.top].to;
    for (int v : c.right) {
      if (cells1[v].from != rpos) fail("InvariantViolation", "right path does not chain");
      rpos = cells1[v].to;
    }
    if (rpos != pos) fail("InvariantViolation", "boundary circuit does not close");
  }

  if (has_fibration() && rho.size() != cells1.size())
    fail("InvariantViolation", "fibration class size mismatch");
}

std::string BranchedSurface::dump() const {
  std::ostringstream os;
  os << "cells0: " << n0 << "\n";
  for (size_t e = 0; e < cells1.size(); ++e) {
    os << "c1 " << e << (cells1[e].kind == CellKind::Vertical ? " vert " : " trans ")
       << cells1[e].from << " " << cells1[e].to;
    if (has_fibration()) os << " rho " << rho[e];
    os << "\n";
  }
  auto sc = [](SignedCell s) {
    return (s.rev ? "-" : "+") + std::to_string(s.cell);
  };
  for (size_t c = 0; c < cells2.size(); ++c) {
    os << "c2 " << c << " top " << cells2[c].top << " left";
    for (int v : cells2[c].left) os << " " << v;
    os << " bottom";
    for (SignedCell s : cells2[c].bottom) os << " " << sc(s);
    os << " right";
    for (int v : cells2[c].right) os << " " << v;
    os << "\n";
  }
  return os.str();
}

// ----- dual digraph -------------------------------------------------------------

HomologyProjection homology(const BranchedSurface& b) {
  std::optional<std::vector<Int>> rho;
  if (b.has_fibration()) {
    std::vector<Int> r;
    for (long x : b.rho) r.emplace_back(x);
    rho = std::move(r);
  }
  return homology_projection(b.boundary2(), b.boundary1(), rho);
}

std::vector<Hinge> hinges(const BranchedSurface& b) {
  std::vector<Hinge> out;
  for (size_t c = 0; c < b.cells2.size(); ++c) {
    const auto& bottom = b.cells2[c].bottom;
    for (size_t i = 0; i < bottom.size(); ++i) {
      if (b.cells1[bottom[i].cell].kind != CellKind::Transversal) continue;
      Hinge h;
      h.through = bottom[i].cell;
      h.initial_cell = static_cast<int>(c);
      h.position = static_cast<int>(i);
      h.rev = bottom[i].rev;
      h.terminal_cell = b.top_cell_of(h.through);
      out.push_back(h);
    }
  }
  return out;
}

DualDigraph dual_digraph(const BranchedSurface& b) {
  b.check_invariants();
  DualDigraph dd;
  dd.projection = homology(b);
  dd.hinges = hinges(b);
  dd.labeled.rank = dd.projection.k;
  dd.labeled.digraph.m = static_cast<int>(b.cells2.size());

  for (const Hinge& h : dd.hinges) {
    // chain: left vertical path of the initial cell, then the signed bottom
    // prefix before the occurrence, then -through if the occurrence is
    // reversed.  This runs from basepoint(initial) to basepoint(terminal).
    std::vector<Int> chain(b.cells1.size(), Int(0));
    const Cell2& c = b.cells2[h.initial_cell];
    for (int v : c.left) chain[v] += 1;
    for (int i = 0; i < h.position; ++i) {
      SignedCell s = c.bottom[i];
      chain[s.cell] += s.rev ? -1 : 1;
    }
    if (h.rev) chain[h.through] -= 1;
    dd.labeled.digraph.add_edge(h.initial_cell, h.terminal_cell);
    dd.labeled.labels.push_back(GroupElement(dd.projection.project(chain)));
    dd.chains.push_back(std::move(chain));
  }

  // Basepoint telescoping makes every digraph cycle's chain closed; verify.
  IntMatrix d1 = b.boundary1();
  auto cycles = simple_cycles(dd.labeled.digraph);
  for (const auto& cyc : cycles) {
    std::vector<Int> total(b.cells1.size(), Int(0));
    for (int eid : cyc.edges)
      for (size_t j = 0; j < total.size(); ++j) total[j] += dd.chains[eid][j];
    for (int v = 0; v < b.n0; ++v) {
      Int s = 0;
      for (size_t j = 0; j < total.size(); ++j) s += d1.at(v, static_cast<int>(j)) * total[j];
      if (s != 0) fail("InvariantViolation", "dual cycle chain is not closed");
    }
  }
  return dd;
}

GroupRingElement cycle_function(const BranchedSurface& b, int max_cycles) {
  DualDigraph dd = dual_digraph(b);
  int k = dd.projection.k;
  auto cycles = simple_cycles(dd.labeled.digraph, max_cycles);
  auto complex = cycle_complex(cycles, dd.labeled.digraph.m);
  GroupRingElement theta = GroupRingElement::one(k);
  for (const auto& s : complex) {
    GroupElement g = GroupElement::zero(k);
    for (int i : s.cycles) g = g - cycle_label(dd.labeled, cycles[i]);
    theta.add_term(g, (s.size() % 2) ? -1 : 1);
  }
  return theta;
}

// ----- mapping torus --------------------------------------------------------------

BranchedSurface mapping_torus(const TrainTrackMap& f) {
  f.check();
  for (const auto& e : f.graph.edges)
    if (has_backtracking(f.edge_map[e.id]))
      fail("InvalidMap", "image of '" + e.name + "' back-tracks");

  BranchedSurface b;
  int nv = f.graph.num_vertices();
  int ne = f.graph.num_edges();
  b.n0 = nv;
  // Vertical 1-cell s_v per vertex, transversal t_e per edge.
  for (int v = 0; v < nv; ++v)
    b.cells1.push_back({CellKind::Vertical, v, f.vertex_map[v]});
  for (const auto& e : f.graph.edges)
    b.cells1.push_back({CellKind::Transversal, e.init, e.term});
  for (const auto& e : f.graph.edges) {
    Cell2 c;
    c.top = nv + e.id;
    c.left = {e.init};
    c.right = {e.term};
    for (DirEdge d : f.edge_map[e.id]) c.bottom.push_back({nv + d.id, d.rev});
    b.cells2.push_back(std::move(c));
  }
  b.rho.assign(b.cells1.size(), 0);
  for (int v = 0; v < nv; ++v) b.rho[v] = 1;
  b.check_invariants();
  return b;
}

// ----- folded mapping torus -------------------------------------------------------

namespace {

// A point of the vertical flow: vertex u of the level-l graph.
struct FlowPoint {
  int level, vertex;
  auto operator<=>(const FlowPoint&) const = default;
};

// Boundary item of a region in the piece decomposition.
struct Item {
  enum Kind { HS, VS, DG } kind;
  // HS: (level, edge, rev)   traversal against the edge orientation if rev
  // VS: (level, vertex, down)  the arc at `vertex` crossing piece level+1
  // DG: (piece index, down)
  int a = 0, b = 0;
  bool dir = false;  // HS: rev; VS/DG: true = downward
};

struct Region {
  std::vector<Item> items;
};

struct FoldedBuilder {
  const TrainTrackMap& f;
  const FoldSequence& seq;
  int k;

  FoldedBuilder(const TrainTrackMap& f_, const FoldSequence& s)
      : f(f_), seq(s), k(static_cast<int>(s.steps.size())) {}

  const Graph& level_graph(int l) const { return seq.graphs[l]; }

  int flow_vertex(int level, int u) const {
    int w = seq.steps[level].vertex_map[u];
    if (level + 1 == k) w = seq.sub_vertex_map[seq.h_vertex[w]];
    return w;
  }

  // Bottom path of the square over edge `e` of graphs[piece-1], as directed
  // edges of the next level graph.
  std::vector<DirEdge> bottom_path(int piece, int e) const {
    DirEdge im = seq.steps[piece - 1].edge_map[e];
    if (piece < k) return {im};
    DirEdge t = im.rev ? seq.h_edge[im.id].reversed() : seq.h_edge[im.id];
    std::vector<DirEdge> segs;
    const auto& ss = seq.segments[t.id];
    if (!t.rev) {
      for (int sid : ss) segs.push_back({sid, false});
    } else {
      for (auto it = ss.rbegin(); it != ss.rend(); ++it) segs.push_back({*it, true});
    }
    return segs;
  }

  // --- vertical skeleton ---
  std::map<FlowPoint, FlowPoint> arc;      // point -> flow successor (skeleton only)
  std::set<FlowPoint> zero_cells;
  std::map<FlowPoint, int> cell0_id;
  std::map<FlowPoint, int> arc_cell;       // arc source -> vertical 1-cell id
  std::map<FlowPoint, int> arc_pos;
  std::vector<std::vector<FlowPoint>> vcell_arcs;  // per vertical 1-cell

  FlowPoint step(FlowPoint p) const { return {(p.level + 1) % k, flow_vertex(p.level, p.vertex)}; }

  void build_skeleton() {
    std::set<FlowPoint> seeds;
    for (int i = 1; i <= k; ++i) {
      const Graph& g = level_graph(i - 1);
      DirEdge d1 = seq.steps[i - 1].d1;
      int q = g.dir_init(d1);
      seeds.insert({i - 1, q});
      FlowPoint below{i % k, flow_vertex(i - 1, q)};
      seeds.insert(below);
      int m = seq.steps[i - 1].vertex_map[g.dir_term(d1)];
      if (i == k) m = seq.sub_vertex_map[seq.h_vertex[m]];
      seeds.insert({i % k, m});
    }
    for (int l = 0; l < k; ++l) {
      const Graph& g = level_graph(l);
      for (int u = 0; u < g.num_vertices(); ++u)
        if (g.degree(u) != 2) seeds.insert({l, u});
    }

    std::set<FlowPoint> pts;
    for (FlowPoint s : seeds) {
      FlowPoint p = s;
      while (!pts.count(p)) {
        pts.insert(p);
        arc.emplace(p, step(p));
        p = step(p);
      }
    }
    // 0-cells: seeds, merge points, and one breaker per 0-cell-free cycle.
    std::map<FlowPoint, int> indeg;
    for (const auto& [p, q] : arc) indeg[q]++;
    for (FlowPoint s : seeds)
      if (pts.count(s)) zero_cells.insert(s);
    for (const auto& [p, d] : indeg)
      if (d >= 2) zero_cells.insert(p);
    // Breakers.
    std::set<FlowPoint> visited;
    for (FlowPoint s : pts) {
      if (visited.count(s)) continue;
      std::vector<FlowPoint> trail;
      std::set<FlowPoint> on_trail;
      FlowPoint p = s;
      while (!visited.count(p) && !on_trail.count(p)) {
        trail.push_back(p);
        on_trail.insert(p);
        p = arc.at(p);
      }
      if (on_trail.count(p)) {
        // found a fresh cycle starting at p
        bool has_zero = false;
        FlowPoint best = p;
        FlowPoint q = p;
        bool first = true;
        for (FlowPoint w = p; first || !(w == p); w = arc.at(w)) {
          first = false;
          if (zero_cells.count(w)) has_zero = true;
          if (w < best) best = w;
        }
        (void)q;
        if (!has_zero) zero_cells.insert(best);
      }
      for (FlowPoint w : trail) visited.insert(w);
    }
    if (zero_cells.empty()) fail("InvariantViolation", "no 0-cells in folded torus");

    // Vertical 1-cells: maximal arc chains between 0-cells.
    int next_vcell = 0;
    for (FlowPoint z : zero_cells) {
      FlowPoint p = z;
      std::vector<FlowPoint> chain;
      do {
        chain.push_back(p);
        p = arc.at(p);
      } while (!zero_cells.count(p));
      for (size_t i = 0; i < chain.size(); ++i) {
        arc_cell[chain[i]] = next_vcell;
        arc_pos[chain[i]] = static_cast<int>(i);
      }
      vcell_arcs.push_back(chain);
      ++next_vcell;
    }
  }

  // --- regions ---
  std::vector<Region> regions;
  std::map<std::pair<int, int>, std::pair<int, int>> hs_top;     // (level,edge) -> (region,item)
  std::map<std::pair<int, int>, std::pair<int, int>> hs_bottom;  // ditto
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> vs_uses;  // arc key
  std::vector<std::pair<int, int>> t_region;  // per piece: (region id, DG item index)

  void add_region(Region r) { regions.push_back(std::move(r)); }

  void build_regions() {
    for (int i = 1; i <= k; ++i) {
      const Graph& g = level_graph(i - 1);
      DirEdge d1 = seq.steps[i - 1].d1;
      DirEdge d2 = seq.steps[i - 1].d2;
      for (const auto& e : g.edges) {
        if (e.id == d1.id || e.id == d2.id) continue;
        Region r;
        r.items.push_back({Item::HS, i - 1, e.id, false});
        r.items.push_back({Item::VS, i - 1, e.term, true});
        auto bp = bottom_path(i, e.id);
        for (auto it = bp.rbegin(); it != bp.rend(); ++it)
          r.items.push_back({Item::HS, i % k, it->id, !it->rev});
        r.items.push_back({Item::VS, i - 1, e.init, false});
        hs_top[{i - 1, e.id}] = {static_cast<int>(regions.size()), 0};
        add_region(std::move(r));
      }
      // Upper triangles of the two folded squares.
      for (DirEdge d : {d1, d2}) {
        const auto& e = g.edges[d.id];
        Region r;
        r.items.push_back({Item::HS, i - 1, e.id, false});
        if (!d.rev) {
          r.items.push_back({Item::VS, i - 1, e.term, true});
          r.items.push_back({Item::DG, i, 0, false});
        } else {
          r.items.push_back({Item::DG, i, 0, true});
          r.items.push_back({Item::VS, i - 1, e.init, false});
        }
        hs_top[{i - 1, e.id}] = {static_cast<int>(regions.size()), 0};
        add_region(std::move(r));
      }
      // The identified lower triangle.
      {
        int q = g.dir_init(d1);
        DirEdge bhat = d1.rev ? seq.steps[i - 1].edge_map[d1.id].reversed()
                              : seq.steps[i - 1].edge_map[d1.id];
        std::vector<DirEdge> bp;
        if (i < k) {
          bp = {bhat};
        } else {
          DirEdge t = bhat.rev ? seq.h_edge[bhat.id].reversed() : seq.h_edge[bhat.id];
          const auto& ss = seq.segments[t.id];
          if (!t.rev)
            for (int sid : ss) bp.push_back({sid, false});
          else
            for (auto it = ss.rbegin(); it != ss.rend(); ++it) bp.push_back({*it, true});
        }
        Region r;
        r.items.push_back({Item::DG, i, 0, true});
        for (auto it = bp.rbegin(); it != bp.rend(); ++it)
          r.items.push_back({Item::HS, i % k, it->id, !it->rev});
        r.items.push_back({Item::VS, i - 1, q, false});
        t_region.push_back({static_cast<int>(regions.size()), 0});
        add_region(std::move(r));
      }
    }
    // Register bottom occurrences and vertical uses.
    for (size_t ri = 0; ri < regions.size(); ++ri) {
      for (size_t ii = 0; ii < regions[ri].items.size(); ++ii) {
        const Item& it = regions[ri].items[ii];
        if (it.kind == Item::HS) {
          auto key = std::make_pair(it.a, it.b);
          auto self = std::make_pair(static_cast<int>(ri), static_cast<int>(ii));
          if (hs_top.count(key) && hs_top[key] == self) continue;
          if (hs_bottom.count(key)) fail("Internal", "horizontal edge covered twice");
          hs_bottom[key] = self;
        } else if (it.kind == Item::VS) {
          vs_uses[{it.a, it.b}].push_back({static_cast<int>(ri), static_cast<int>(ii)});
        }
      }
    }
  }

  // twin[region][item] = (region', item') or (-1,-1) for boundary items.
  std::vector<std::vector<std::pair<int, int>>> twin;

  void build_twins() {
    twin.resize(regions.size());
    for (size_t ri = 0; ri < regions.size(); ++ri)
      twin[ri].assign(regions[ri].items.size(), {-1, -1});
    for (const auto& [key, top] : hs_top) {
      auto itb = hs_bottom.find(key);
      if (itb == hs_bottom.end()) fail("Internal", "horizontal edge with no cover");
      twin[top.first][top.second] = itb->second;
      twin[itb->second.first][itb->second.second] = top;
    }
    for (const auto& [key, uses] : vs_uses) {
      FlowPoint p{key.first, key.second};
      if (arc.count(p)) continue;  // skeleton line: boundary
      if (uses.size() != 2)
        fail("InvariantViolation", "non-skeleton vertical line with " +
                                       std::to_string(uses.size()) + " sheets");
      twin[uses[0].first][uses[0].second] = uses[1];
      twin[uses[1].first][uses[1].second] = uses[0];
    }
  }

  // --- assembling the surface ---
  BranchedSurface out;
  std::vector<int> diag_cell1;  // per piece

  void build_cells() {
    // 0-cells and vertical 1-cells.
    for (FlowPoint z : zero_cells) cell0_id[z] = out.n0++;
    for (const auto& chain : vcell_arcs) {
      FlowPoint from = chain.front();
      FlowPoint to = arc.at(chain.back());
      out.cells1.push_back({CellKind::Vertical, cell0_id.at(from), cell0_id.at(to)});
      out.rho.push_back(static_cast<long>(chain.size()));
    }
    // Diagonals.
    diag_cell1.resize(k);
    for (int i = 1; i <= k; ++i) {
      const Graph& g = level_graph(i - 1);
      DirEdge d1 = seq.steps[i - 1].d1;
      int q = g.dir_init(d1);
      int m = seq.steps[i - 1].vertex_map[g.dir_term(d1)];
      if (i == k) m = seq.sub_vertex_map[seq.h_vertex[m]];
      FlowPoint top{i - 1, q}, bot{i % k, m};
      if (!cell0_id.count(top) || !cell0_id.count(bot))
        fail("Internal", "diagonal endpoint is not a 0-cell");
      diag_cell1[i - 1] = static_cast<int>(out.cells1.size());
      out.cells1.push_back({CellKind::Transversal, cell0_id.at(top), cell0_id.at(bot)});
      out.rho.push_back(1);
    }
    // 2-cells by boundary walks started at each identified triangle.
    std::set<std::pair<int, int>> visited;
    for (int i = 0; i < k; ++i) {
      auto start = t_region[i];
      if (visited.count(start)) fail("Internal", "two fold triangles in one 2-cell");
      std::vector<SignedCell> circuit = walk(start, visited);
      out.cells2.push_back(parse_circuit(circuit, diag_cell1[i]));
    }
  }

  // Walk the union boundary starting at a boundary item.  Orientation flips
  // across same-direction twins are tracked in `dir`.
  std::vector<SignedCell> walk(std::pair<int, int> start, std::set<std::pair<int, int>>& visited) {
    std::vector<std::pair<Item, bool>> emitted;  // (item, walk direction)
    auto advance = [&](std::pair<int, int> pos, bool dir) {
      int n = static_cast<int>(regions[pos.first].items.size());
      pos.second = ((pos.second + (dir ? 1 : -1)) % n + n) % n;
      return pos;
    };
    std::pair<int, int> pos = start;
    bool dir = true;
    do {
      visited.insert(pos);
      emitted.push_back({regions[pos.first].items[pos.second], dir});
      auto nxt = advance(pos, dir);
      while (twin[nxt.first][nxt.second].first >= 0) {
        const Item& here = regions[nxt.first].items[nxt.second];
        auto tw = twin[nxt.first][nxt.second];
        const Item& there = regions[tw.first].items[tw.second];
        // Crossing reverses the walk direction unless the twins traverse the
        // shared edge oppositely.
        if (here.dir == there.dir) dir = !dir;
        nxt = advance(tw, dir);
      }
      pos = nxt;
    } while (!(pos == start));
    if (!dir) fail("Internal", "2-cell boundary walk ended orientation-reversed");

    // Convert to signed final 1-cells: diagonals directly, vertical arcs
    // merged into complete vertical 1-cells.
    std::vector<std::tuple<int, int, int, bool>> raw;  // (kind 0=diag 1=arc, id, arcpos, down)
    for (auto& [item, d] : emitted) {
      bool down = (item.dir == d);
      if (item.kind == Item::DG) {
        raw.push_back({0, diag_cell1[item.a - 1], 0, down});
      } else if (item.kind == Item::VS) {
        FlowPoint p{item.a, item.b};
        raw.push_back({1, arc_cell.at(p), arc_pos.at(p), down});
      }
    }
    std::vector<SignedCell> circuit;
    for (size_t i = 0; i < raw.size();) {
      auto [kind, id, posn, down] = raw[i];
      if (kind == 0) {
        circuit.push_back({id, !down});
        ++i;
        continue;
      }
      size_t j = i;
      while (j < raw.size() && std::get<0>(raw[j]) == 1 && std::get<1>(raw[j]) == id &&
             std::get<3>(raw[j]) == down)
        ++j;
      int count = static_cast<int>(j - i);
      int total = static_cast<int>(vcell_arcs[id].size());
      if (count % total != 0) fail("Internal", "partial vertical 1-cell on a 2-cell boundary");
      for (int rpt = 0; rpt < count / total; ++rpt) circuit.push_back({id, !down});
      i = j;
    }
    return circuit;
  }

  Cell2 parse_circuit(const std::vector<SignedCell>& circuit, int top_id) {
    if (circuit.empty() || circuit.front().cell != top_id || circuit.front().rev)
      fail("Internal", "cell circuit does not start at its top");
    Cell2 c;
    c.top = top_id;
    size_t i = 1, j = circuit.size();
    while (i < j && out.cells1[circuit[i].cell].kind == CellKind::Vertical && !circuit[i].rev) {
      c.right.push_back(circuit[i].cell);
      ++i;
    }
    while (j > i && out.cells1[circuit[j - 1].cell].kind == CellKind::Vertical &&
           circuit[j - 1].rev) {
      c.left.push_back(circuit[j - 1].cell);
      --j;
    }
    std::reverse(c.left.begin(), c.left.end());
    // middle = reverse(bottom)
    for (size_t t = j; t-- > i;) c.bottom.push_back(circuit[t].reversed());
    if (c.bottom.empty()) fail("Internal", "cell with empty bottom");
    return c;
  }

  BranchedSurface build() {
    if (k == 0) return mapping_torus(f);
    build_skeleton();
    build_regions();
    build_twins();
    build_cells();
    out.check_invariants();
    return out;
  }
};

}  // namespace

BranchedSurface folded_mapping_torus(const TrainTrackMap& f, const FoldSequence& seq) {
  if (seq.steps.empty()) return mapping_torus(f);
  FoldedBuilder builder(f, seq);
  return builder.build();
}

BranchedSurface folded_mapping_torus(const TrainTrackMap& f, const FoldingDecomposition& d) {
  if (!compose_check(d, f))
    fail("DecompositionMismatch", "decomposition does not compose to the map");
  return folded_mapping_torus(f, replay_decomposition(d, f));
}

}  // namespace cyclepoly
