#pragma once

// Small exact-rational linear programming helpers used by the cone and
// Newton-polyhedron computations.  Everything here is homogeneous, so a
// single-phase simplex (origin feasible) is enough.

#include <optional>
#include <vector>

#include "cyclepoly/grpring.hpp"

namespace cyclepoly {

// max c.z subject to G z <= h, z >= 0, with h >= 0 entrywise so that z = 0 is
// feasible.  The feasible region must be bounded in the direction of c (all
// callers add explicit box constraints).  Returns the optimal value and an
// optimizer.
struct LpSolution {
  Rat value;
  std::vector<Rat> z;
};
LpSolution lp_max_origin(const std::vector<std::vector<Rat>>& G, const std::vector<Rat>& h,
                         const std::vector<Rat>& c);

// Is there x with rows[i].x > 0 for every i?  If yes, returns such an x
// (scaled into the unit box).  An empty row list is trivially feasible.
std::optional<std::vector<Rat>> strict_positive_solution(
    const std::vector<std::vector<Rat>>& rows);

// Is there x with rows[i].x > 0 for all i and extra.x <= 0?
bool strict_feasible_with_nonpositive(const std::vector<std::vector<Rat>>& rows,
                                      const std::vector<Rat>& extra);

// Exact membership of p in the convex hull of pts (possibly empty).
bool in_convex_hull(const std::vector<Rat>& p, const std::vector<std::vector<Rat>>& pts);

}  // namespace cyclepoly
