#include <algorithm>

#include "cyclepoly/branched.hpp"

namespace cyclepoly {

namespace {

// Rewrite every occurrence of `target` in a bottom path by its two halves.
std::vector<SignedCell> rewrite_bottom(const std::vector<SignedCell>& bottom, int target,
                                       int left_half, int right_half) {
  std::vector<SignedCell> out;
  for (SignedCell s : bottom) {
    if (s.cell != target) {
      out.push_back(s);
    } else if (!s.rev) {
      out.push_back({left_half, false});
      out.push_back({right_half, false});
    } else {
      out.push_back({right_half, true});
      out.push_back({left_half, true});
    }
  }
  return out;
}

// Junction 0-cell at position j of a cell's bottom path (0..len).
int bottom_junction_vertex(const BranchedSurface& b, const Cell2& c, int j) {
  if (j == 0)
    return c.left.empty() ? b.cells1[c.top].from : b.cells1[c.left.back()].to;
  SignedCell s = c.bottom[j - 1];
  return s.rev ? b.cells1[s.cell].from : b.cells1[s.cell].to;
}

// Split the linearized lower boundary of a cell back into left/bottom/right.
Cell2 reassemble(const BranchedSurface& b, int top, std::vector<SignedCell> lower) {
  Cell2 c;
  c.top = top;
  size_t i = 0, j = lower.size();
  while (i < j && b.cells1[lower[i].cell].kind == CellKind::Vertical && !lower[i].rev) {
    c.left.push_back(lower[i].cell);
    ++i;
  }
  while (j > i && b.cells1[lower[j - 1].cell].kind == CellKind::Vertical && lower[j - 1].rev) {
    c.right.push_back(lower[j - 1].cell);
    --j;
  }
  std::reverse(c.right.begin(), c.right.end());
  c.bottom.assign(lower.begin() + i, lower.begin() + j);
  if (c.bottom.empty()) fail("InvariantViolation", "move produced a cell with empty bottom");
  return c;
}

// Drop unreferenced transversal 1-cells and renumber.
BranchedSurface compact(const BranchedSurface& s) {
  std::vector<bool> used(s.cells1.size(), false);
  for (const auto& c2 : s.cells2) {
    used[c2.top] = true;
    for (int v : c2.left) used[v] = true;
    for (int v : c2.right) used[v] = true;
    for (SignedCell sc : c2.bottom) used[sc.cell] = true;
  }
  for (size_t e = 0; e < s.cells1.size(); ++e)
    if (s.cells1[e].kind == CellKind::Vertical) used[e] = true;
  std::vector<int> remap(s.cells1.size(), -1);
  BranchedSurface t;
  t.n0 = s.n0;
  for (size_t e = 0; e < s.cells1.size(); ++e) {
    if (!used[e]) continue;
    remap[e] = static_cast<int>(t.cells1.size());
    t.cells1.push_back(s.cells1[e]);
    if (s.has_fibration()) t.rho.push_back(s.rho[e]);
  }
  for (const auto& c2 : s.cells2) {
    Cell2 nc;
    nc.top = remap[c2.top];
    for (int v : c2.left) nc.left.push_back(remap[v]);
    for (int v : c2.right) nc.right.push_back(remap[v]);
    for (SignedCell sc : c2.bottom) nc.bottom.push_back({remap[sc.cell], sc.rev});
    t.cells2.push_back(std::move(nc));
  }
  t.check_invariants();
  return t;
}

}  // namespace

BranchedSurface vertical_subdivide(const BranchedSurface& b, const OrbitSpec& orbit) {
  if (orbit.on_existing_vertical) return b;  // point already on a vertical 1-cell
  if (orbit.start_cell1 < 0 || orbit.start_cell1 >= static_cast<int>(b.cells1.size()))
    fail("InvalidPoint", "orbit start out of range");
  if (b.cells1[orbit.start_cell1].kind != CellKind::Transversal)
    fail("InvalidPoint", "orbit must start on a transversal 1-cell");
  if (orbit.interior_entries.size() > 4 * b.cells1.size())
    fail("NotAllowable", "orbit exceeds the traversal bound");

  int r = static_cast<int>(orbit.interior_entries.size()) + 1;

  // Phase A: resolve the crossed cells and split points against b.
  std::vector<int> through(r);  // e_0 .. e_{r-1}
  std::vector<int> cells(r);    // c_1 .. c_r
  through[0] = orbit.start_cell1;
  for (int i = 0; i < r; ++i) {
    cells[i] = b.top_cell_of(through[i]);
    for (int l = 0; l < i; ++l)
      if (cells[l] == cells[i]) fail("NotAllowable", "orbit revisits a 2-cell");
    if (i + 1 < r) {
      int entry = orbit.interior_entries[i];
      const auto& bottom = b.cells2[cells[i]].bottom;
      if (entry < 0 || entry >= static_cast<int>(bottom.size()))
        fail("InvalidPoint", "orbit entry out of range");
      if (b.cells1[bottom[entry].cell].kind != CellKind::Transversal)
        fail("NotAllowable", "orbit exits through a vertical 1-cell");
      through[i + 1] = bottom[entry].cell;
      for (int l = 0; l <= i; ++l)
        if (through[l] == through[i + 1]) fail("NotAllowable", "orbit revisits a 1-cell");
    }
  }
  {
    const auto& bottom = b.cells2[cells[r - 1]].bottom;
    if (orbit.final_junction < 0 || orbit.final_junction > static_cast<int>(bottom.size()))
      fail("InvalidPoint", "final junction out of range");
  }

  BranchedSurface s = b;

  // Phase B: allocate the new 0-cells and the halves of each split 1-cell.
  std::vector<int> xs(r);  // x_0 .. x_{r-1}; x_r is the existing junction
  std::vector<int> tl(r), tr(r);
  for (int i = 0; i < r; ++i) {
    xs[i] = s.n0++;
    tl[i] = static_cast<int>(s.cells1.size());
    s.cells1.push_back({CellKind::Transversal, s.cells1[through[i]].from, xs[i]});
    tr[i] = static_cast<int>(s.cells1.size());
    s.cells1.push_back({CellKind::Transversal, xs[i], s.cells1[through[i]].to});
    if (s.has_fibration()) {
      s.rho.push_back(s.rho[through[i]]);
      s.rho.push_back(0);
    }
  }
  int x_last = bottom_junction_vertex(b, b.cells2[cells[r - 1]], orbit.final_junction);

  // Phase C: split each crossed cell, inserting the new vertical 1-cells.
  for (int i = 0; i < r; ++i) {
    const Cell2 c = b.cells2[cells[i]];
    Cell2 cl, cr;
    cl.top = tl[i];
    cr.top = tr[i];
    cl.left = c.left;
    cr.right = c.right;
    if (i + 1 < r) {
      int entry = orbit.interior_entries[i];
      SignedCell occ = c.bottom[entry];
      cl.bottom.assign(c.bottom.begin(), c.bottom.begin() + entry);
      cr.bottom.assign(c.bottom.begin() + entry + 1, c.bottom.end());
      if (!occ.rev) {
        cl.bottom.push_back({tl[i + 1], false});
        cr.bottom.insert(cr.bottom.begin(), {tr[i + 1], false});
      } else {
        cl.bottom.push_back({tr[i + 1], true});
        cr.bottom.insert(cr.bottom.begin(), {tl[i + 1], true});
      }
    } else {
      cl.bottom.assign(c.bottom.begin(), c.bottom.begin() + orbit.final_junction);
      cr.bottom.assign(c.bottom.begin() + orbit.final_junction, c.bottom.end());
    }
    if (cl.bottom.empty() || cr.bottom.empty())
      fail("InvalidPoint", "subdivision would create an empty cell");

    int lower = (i + 1 < r) ? xs[i + 1] : x_last;
    int v_new = static_cast<int>(s.cells1.size());
    s.cells1.push_back({CellKind::Vertical, xs[i], lower});
    if (s.has_fibration()) {
      // Cocycle closure on the left part fixes the value on the new vertical.
      long acc = -s.rho[tl[i]];
      for (int v : cl.left) acc += s.rho[v];
      for (SignedCell sc : cl.bottom) acc += (sc.rev ? -1 : 1) * s.rho[sc.cell];
      s.rho.push_back(acc);
    }
    cl.right = {v_new};
    cr.left = {v_new};
    s.cells2[cells[i]] = cl;
    s.cells2.push_back(cr);
  }

  // Phase D: rewrite the remaining occurrences of every split 1-cell.
  for (int i = 0; i < r; ++i)
    for (auto& c2 : s.cells2) c2.bottom = rewrite_bottom(c2.bottom, through[i], tl[i], tr[i]);

  return compact(s);
}

BranchedSurface transversal_subdivide(const BranchedSurface& b, int cell, int p, int q) {
  if (cell < 0 || cell >= static_cast<int>(b.cells2.size()))
    fail("InvalidPoint", "cell out of range");
  BranchedSurface s = b;
  std::vector<SignedCell> lower = s.lower_boundary(cell);
  int len = static_cast<int>(lower.size());
  if (p > q) std::swap(p, q);
  if (p < 0 || q > len) fail("InvalidPoint", "cut position out of range");
  if (p == q || q == p + 1)
    fail("SameCellBoundaryEdge", "cut endpoints lie on the same 1-cell");

  auto junction = [&](int j) {
    if (j == 0) return s.cells1[s.cells2[cell].top].from;
    SignedCell sc = lower[j - 1];
    return sc.rev ? s.cells1[sc.cell].from : s.cells1[sc.cell].to;
  };
  int P = junction(p), Q = junction(q);

  int t_new = static_cast<int>(s.cells1.size());
  s.cells1.push_back({CellKind::Transversal, P, Q});
  if (s.has_fibration()) {
    long acc = 0;
    for (int i = p; i < q; ++i) acc += (lower[i].rev ? -1 : 1) * s.rho[lower[i].cell];
    s.rho.push_back(acc);
  }

  std::vector<SignedCell> upper_lower;
  upper_lower.insert(upper_lower.end(), lower.begin(), lower.begin() + p);
  upper_lower.push_back({t_new, false});
  upper_lower.insert(upper_lower.end(), lower.begin() + q, lower.end());
  std::vector<SignedCell> lower_lower(lower.begin() + p, lower.begin() + q);

  Cell2 upper = reassemble(s, s.cells2[cell].top, upper_lower);
  Cell2 below = reassemble(s, t_new, lower_lower);
  s.cells2[cell] = upper;
  s.cells2.push_back(below);
  s.check_invariants();
  return s;
}

BranchedSurface fold_move(const BranchedSurface& b, int e1, SignedCell e2) {
  if (e1 < 0 || e1 >= static_cast<int>(b.cells1.size()) ||
      b.cells1[e1].kind != CellKind::Vertical)
    fail("NoCommonSegment", "e1 must be a vertical 1-cell");
  if (e2.cell < 0 || e2.cell >= static_cast<int>(b.cells1.size()) ||
      b.cells1[e2.cell].kind != CellKind::Transversal)
    fail("NoCommonSegment", "e2 must be a transversal 1-cell");

  // Cells whose lower boundary contains the segment e1 then e2.
  std::vector<std::pair<int, int>> found;
  for (size_t c = 0; c < b.cells2.size(); ++c) {
    auto lower = b.lower_boundary(static_cast<int>(c));
    for (size_t i = 0; i + 1 < lower.size(); ++i) {
      if (lower[i] == SignedCell{e1, false} && lower[i + 1] == e2)
        found.push_back({static_cast<int>(c), static_cast<int>(i)});
    }
  }
  if (found.size() < 2) fail("NoCommonSegment", "segment e1 e2 is not shared by two 2-cells");
  if (found[0].first == found[1].first)
    fail("NoCommonSegment", "segment occurrences lie in a single 2-cell");

  int hinge_count = 0;
  for (const auto& c2 : b.cells2)
    for (SignedCell sc : c2.bottom)
      if (sc.cell == e2.cell) ++hinge_count;

  // Transversal subdivision of both cells along the diagonal of the triangle
  // Delta(e1, e2, .), then identification of the two triangles.
  BranchedSurface s = b;
  int tri[2], tnew[2];
  for (int t = 0; t < 2; ++t) {
    auto [cell, idx] = found[t];
    s = transversal_subdivide(s, cell, idx, idx + 2);
    tri[t] = static_cast<int>(s.cells2.size()) - 1;
    tnew[t] = s.cells2[tri[t]].top;
  }

  for (auto& c2 : s.cells2)
    for (auto& sc : c2.bottom)
      if (sc.cell == tnew[1]) sc.cell = tnew[0];
  std::vector<Cell2> cells;
  for (size_t c = 0; c < s.cells2.size(); ++c)
    if (static_cast<int>(c) != tri[1]) cells.push_back(s.cells2[c]);
  s.cells2 = std::move(cells);

  if (hinge_count == 2) {
    // e2 carried only the two folded hinges: delete its image by merging the
    // triangle with the cell below e2.
    int tri_cell = -1;
    for (size_t c = 0; c < s.cells2.size(); ++c)
      if (s.cells2[c].top == tnew[0]) tri_cell = static_cast<int>(c);
    int below = s.top_cell_of(e2.cell);
    auto lower = s.lower_boundary(tri_cell);
    std::vector<SignedCell> merged;
    for (SignedCell sc : lower) {
      if (sc.cell != e2.cell) {
        merged.push_back(sc);
        continue;
      }
      auto sub = s.lower_boundary(below);
      if (!sc.rev) {
        merged.insert(merged.end(), sub.begin(), sub.end());
      } else {
        for (auto it = sub.rbegin(); it != sub.rend(); ++it) merged.push_back(it->reversed());
      }
    }
    s.cells2[tri_cell] = reassemble(s, tnew[0], merged);
    std::vector<Cell2> kept;
    for (size_t c = 0; c < s.cells2.size(); ++c)
      if (static_cast<int>(c) != below) kept.push_back(s.cells2[c]);
    s.cells2 = std::move(kept);
  }

  return compact(s);
}

}  // namespace cyclepoly
