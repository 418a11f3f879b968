#pragma once

#include <map>
#include <utility>
#include <vector>

#include "orthotour/geometry.hpp"

// O(n log n) solver for step-disjoint ortho-convex sequences. Iteration i
// carries the prefix-tour cost function f_i along the boundary of P_i as
// persistent mountain ranges, one per edge. Edges are split at terminals
// (grid points of the two-polygon local grid); each fragment of P_i receives
// its function from the facing fragment of P_{i-1} (shift by the gap) capped
// by two slope +-1 lines anchored at the fragment's terminal values.

namespace orthotour {

// Terminal sets of grid({prev, cur}) on the boundaries of prev and cur,
// sorted lexicographically. Throws ClassError unless both polygons are
// ortho-convex and disjoint.
std::pair<std::vector<Point2>, std::vector<Point2>> terminals(
    const OrthoPolygon& prev, const OrthoPolygon& cur);

struct OrthoConvexStats {
  std::size_t iterations = 0;
  std::size_t total_fragments = 0;
  std::size_t max_iteration_fragments = 0;
  // per-iteration fragment count <= 8 * (n(P_{i-1}) + n(P_i))
  bool fragment_bound_ok = true;
};

// f_i at the terminals of each boundary for i = 2..k (element 0 belongs to
// iteration 2). Exposed for differential testing.
std::vector<std::map<Point2, Length>> orthoconvex_terminal_values(
    const Instance& inst);

TourResult solve_orthoconvex(const Instance& inst,
                             OrthoConvexStats* stats = nullptr);

}  // namespace orthotour
