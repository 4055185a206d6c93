#pragma once

// Graphs, graph self-maps, train-track verification, transition matrices and
// dilatation, Stallings folds, and folding decompositions.

#include <map>
#include <string>
#include <vector>

#include "cyclepoly/digraph.hpp"
#include "cyclepoly/intlin.hpp"

namespace cyclepoly {

struct GraphEdge {
  int id;
  int init, term;
  std::string name;
};

// Directed edge: the positively oriented edge `id`, or its reversal.
struct DirEdge {
  int id = -1;
  bool rev = false;
  bool operator==(const DirEdge&) const = default;
  DirEdge reversed() const { return {id, !rev}; }
};

using EdgePath = std::vector<DirEdge>;

EdgePath reversed_path(const EdgePath& p);

// Edge name with orientation.  Single lowercase names print with the
// capital-letter convention for reversal.
struct DirName {
  std::string name;
  bool rev = false;
  std::string token() const;
  static DirName parse(const std::string& token);
};

struct Graph {
  std::vector<std::string> vertex_names;
  std::vector<GraphEdge> edges;

  int num_vertices() const { return static_cast<int>(vertex_names.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int add_vertex(const std::string& name);
  int add_edge(int init, int term, const std::string& name);
  int edge_by_name(const std::string& name) const;  // -1 when absent
  int vertex_by_name(const std::string& name) const;

  int dir_init(DirEdge d) const { return d.rev ? edges[d.id].term : edges[d.id].init; }
  int dir_term(DirEdge d) const { return d.rev ? edges[d.id].init : edges[d.id].term; }
  int degree(int v) const;  // edge-ends at v (loops count twice)

  bool path_chains(const EdgePath& p) const;
  bool connected() const;
};

bool has_backtracking(const EdgePath& p);

struct TrainTrackMap {
  Graph graph;
  std::vector<int> vertex_map;
  std::vector<EdgePath> edge_map;  // image of each positively oriented edge

  EdgePath image(DirEdge d) const;
  EdgePath image_path(const EdgePath& p) const;
  void check() const;  // structural validity; throws InvalidMap
};

struct TrainTrackReport {
  bool is_graph_map = false;
  bool is_train_track = false;
  bool is_homotopy_equivalence = false;
  int offending_edge = -1;  // first edge whose iterate backtracks
  int offending_power = 0;
};

struct FoldingDecomposition {
  std::vector<std::pair<std::string, int>> subdivision;  // edge name -> segments
  std::vector<std::pair<DirName, DirName>> folds;        // e1 folded with e2
  std::vector<std::pair<std::string, DirName>> homeo;    // tau_k edge -> tau edge
};

struct FoldResult {
  Graph graph;
  std::vector<int> vertex_map;    // old vertex -> new vertex
  std::vector<DirEdge> edge_map;  // old positive edge -> new directed edge
};

// The fully replayed decomposition: graphs tau_0..tau_k, the fold steps, and
// the terminal homeomorphism onto the original graph.
struct FoldSequence {
  std::vector<Graph> graphs;
  struct Step {
    DirEdge d1, d2;  // directed edges of graphs[i]
    std::vector<int> vertex_map;
    std::vector<DirEdge> edge_map;
  };
  std::vector<Step> steps;
  std::vector<int> h_vertex;               // tau_k vertex -> tau vertex
  std::vector<DirEdge> h_edge;             // tau_k edge -> directed tau edge
  std::vector<std::vector<int>> segments;  // tau edge -> tau_0 segment ids
  std::vector<int> sub_vertex_map;         // tau vertex -> tau_0 vertex
};

// Graph map / train-track / homotopy-equivalence verification.  The
// train-track test follows taken turns through the derivative map for 2m-1
// steps, which decides absence of back-tracking in f^{2m}(e) for every e.
TrainTrackReport validate_train_track(const TrainTrackMap& f);

IntMatrix transition_matrix(const TrainTrackMap& f);
double dilatation(const TrainTrackMap& f, double tol = 1e-9);

// Stallings fold of two distinct directed edges sharing an initial vertex
// whose terminal vertices are distinct.
FoldResult fold(const Graph& g, DirEdge e1, DirEdge e2);

// Subdivide; segments of e are named e1..en and mapped to consecutive ids.
struct SubdivideResult {
  Graph graph;
  std::vector<std::vector<int>> segments;  // old edge -> new edge ids
  std::vector<int> vertex_map;             // old vertex -> new vertex
};
SubdivideResult subdivide(const Graph& g, const std::vector<int>& counts);

// Deterministic folding decomposition: subdivide each edge into |f(e)|
// segments, fold smallest-id pairs with equal image first, finish with the
// residual homeomorphism.  Throws NotHomotopyEquivalence when folding stalls.
FoldingDecomposition derive_folding(const TrainTrackMap& f);

// Replay a decomposition against f; throws on structural errors.
FoldSequence replay_decomposition(const FoldingDecomposition& d, const TrainTrackMap& f);

// True iff subdivision, folds and the homeomorphism compose to f.
bool compose_check(const FoldingDecomposition& d, const TrainTrackMap& f);

// Cyclically reduced length of f^k(start), for growth-rate checks.
long cyclically_reduced_length(const TrainTrackMap& f, const EdgePath& start, int k);

}  // namespace cyclepoly
