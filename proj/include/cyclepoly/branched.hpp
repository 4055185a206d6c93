#pragma once

// Combinatorial branched surfaces with semiflow: mapping tori of train-track
// maps, folded mapping tori of folding decompositions, dual digraphs with
// homology labels, cycle functions, the three invariance moves, and
// cross-section extraction.

#include <optional>
#include <string>
#include <vector>

#include "cyclepoly/digraph.hpp"
#include "cyclepoly/intlin.hpp"
#include "cyclepoly/traintrack.hpp"

namespace cyclepoly {

enum class CellKind { Vertical, Transversal };

struct SignedCell {
  int cell = -1;
  bool rev = false;
  bool operator==(const SignedCell&) const = default;
  SignedCell reversed() const { return {cell, !rev}; }
};

struct Cell1 {
  CellKind kind;
  int from, to;  // 0-cells; vertical cells oriented along the flow
};

// A 2-cell as a flow rectangle with a staircase lower boundary.  The boundary
// circuit is top . right . reverse(bottom) . reverse(left); `left` and
// `right` are vertical 1-cells traversed downward, `bottom` runs left to
// right and may interleave reversed verticals between transversal pieces
// (folded tori produce such staircases).
struct Cell2 {
  int top;
  std::vector<int> left;
  std::vector<SignedCell> bottom;
  std::vector<int> right;
};

struct BranchedSurface {
  int n0 = 0;
  std::vector<Cell1> cells1;
  std::vector<Cell2> cells2;
  std::vector<long> rho;  // fibration class per 1-cell; empty when absent

  bool has_fibration() const { return !rho.empty(); }
  int top_cell_of(int transversal) const;  // unique 2-cell with this top
  std::vector<SignedCell> lower_boundary(int cell) const;  // left+bottom+rev(right)

  IntMatrix boundary1() const;
  IntMatrix boundary2() const;
  void check_invariants() const;  // throws InvariantViolation

  std::string dump() const;  // deterministic text form for golden tests
};

// A hinge: one occurrence of a transversal 1-cell in some cell's bottom path.
struct Hinge {
  int through;
  int initial_cell;
  int position;  // index into the initial cell's bottom path
  bool rev;
  int terminal_cell;
};

struct DualDigraph {
  LabeledDigraph labeled;  // vertex per 2-cell, edge per hinge
  std::vector<Hinge> hinges;
  std::vector<std::vector<Int>> chains;  // 1-chain per edge, used for labels
  HomologyProjection projection;
};

HomologyProjection homology(const BranchedSurface& b);
std::vector<Hinge> hinges(const BranchedSurface& b);
DualDigraph dual_digraph(const BranchedSurface& b);

// theta_{X,c,psi} = 1 + sum (-1)^{|sigma|} g(sigma)^{-1} over the cycle
// complex of the dual digraph.
GroupRingElement cycle_function(const BranchedSurface& b, int max_cycles = 10000);

// Mapping torus of a graph map, with the product cell structure.
BranchedSurface mapping_torus(const TrainTrackMap& f);

// Folded mapping torus of a folding decomposition.  Cell structure keeps the
// fold corners, their forward flows, and the fold diagonals.
BranchedSurface folded_mapping_torus(const TrainTrackMap& f, const FoldingDecomposition& d);
BranchedSurface folded_mapping_torus(const TrainTrackMap& f, const FoldSequence& seq);

// ----- moves ------------------------------------------------------------------

// Forward orbit of a point in the interior of a transversal 1-cell, encoded
// combinatorially: the entry of the current cell's bottom to flow into at
// each crossing, ending at a junction (always a 0-cell, hence allowable).
struct OrbitSpec {
  int start_cell1 = -1;            // transversal 1-cell containing the point
  std::vector<int> interior_entries;  // bottom-entry index per crossed cell
  int final_junction = 0;          // junction index in the last crossed cell
  bool on_existing_vertical = false;  // degenerate input: subdivision is a no-op
};

BranchedSurface vertical_subdivide(const BranchedSurface& b, const OrbitSpec& orbit);

// Positions on the lower boundary of a 2-cell (junctions of
// left+bottom+rev(right)); p < q cut the cell by a new transversal 1-cell.
BranchedSurface transversal_subdivide(const BranchedSurface& b, int cell, int p, int q);

// Folding move along the segment e1 (vertical) followed by e2 (transversal,
// possibly reversed) shared by two distinct 2-cells.
BranchedSurface fold_move(const BranchedSurface& b, int e1, SignedCell e2);

// ----- sections ----------------------------------------------------------------

struct SectionResult {
  TrainTrackMap map;                       // first-return train-track map
  std::vector<int> arc_cells;              // 2-cell containing each section edge
  std::vector<std::pair<int, int>> points;  // (1-cell, index) per section vertex
  std::vector<long> cocycle;               // integer cocycle used
};

// Cross-section dual to a primitive integral class alpha in the DKL cone,
// with the first-return map computed by flowing arcs through hinges.
SectionResult extract_section(const BranchedSurface& b, const Cocharacter& alpha);

}  // namespace cyclepoly
