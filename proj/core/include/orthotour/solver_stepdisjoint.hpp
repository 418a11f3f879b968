#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "orthotour/geometry.hpp"

// Batched solver for step-disjoint sequences. The sequence is split at
// low-complexity delimiter polygons into batches that are either sparse
// (few vertices in total) or dense (few polygons). A sparse batch advances
// the portal value map with a terminal dynamic program plus horizontal and
// vertical line sweeps; a dense batch routes through a low-stabbing
// rectangle partition of the plane, carrying values on hubs (grid points on
// rectangle boundaries) and alternating per-rectangle progressions with
// nearest-neighbor teleports. Both processors are exact for arbitrary
// step-disjoint ranges; the tags only decide which one runs.

namespace orthotour {

struct BatchPlan {
  struct Batch {
    std::size_t a = 1, b = 1;  // 1-based inclusive; neighbors share an index
    bool sparse = true;
  };
  std::vector<std::size_t> delimiters;  // 1-based, strictly increasing
  std::vector<Batch> batches;
  double alpha = 0.0, beta = 0.0;
  std::size_t total = 0;  // sum of vertex counts
};

// Delimiter selection over the complexity profile in O(k): polygons with
// more than n^alpha vertices form red blocks; heavy red blocks are fenced
// off into dense batches, and a running-sum scan cuts the rest into sparse
// batches of at most 3 n^beta vertices.
BatchPlan plan_batches(const std::vector<std::size_t>& vertex_counts,
                       double alpha, double beta);

struct Rect {
  Coord x1 = 0, y1 = 0, x2 = 0, y2 = 0;  // closed; x1 <= x2, y1 <= y2
  bool contains(Point2 p) const {
    return x1 <= p.x && p.x <= x2 && y1 <= p.y && p.y <= y2;
  }
};

struct RectPartition {
  std::vector<Rect> rects;
};

// Alternating median splits, each consuming exactly one input point, so the
// result has vertices.size() + 1 rectangles and no input point interior to
// any of them. Every axis-parallel line stabs O(sqrt n) rectangles for
// points in general position. The unbounded outer rectangles are clipped to
// the bounding box inflated by its own span; tours never leave that area.
RectPartition build_rect_partition(std::vector<Point2> vertices);

// Weighted digraph used by the line sweeps and the layered 1-D tours.
struct SweepGraph {
  std::vector<std::vector<std::pair<std::size_t, Length>>> adj;

  std::size_t size() const { return adj.size(); }
  std::size_t add_node() {
    adj.emplace_back();
    return adj.size() - 1;
  }
  void add_arc(std::size_t u, std::size_t v, Length w) {
    adj[u].push_back({v, w});
  }
  void add_edge(std::size_t u, std::size_t v, Length w) {
    add_arc(u, v, w);
    add_arc(v, u, w);
  }
};

struct SweepResult {
  std::vector<Length> dist;         // kInf when unreachable
  std::vector<std::size_t> parent;  // SIZE_MAX at facilities / unreachable
};

// Multi-source Dijkstra from the weighted facilities; facilities with
// weight kInf are ignored.
SweepResult sweep_all(
    const SweepGraph& g,
    const std::vector<std::pair<std::size_t, Length>>& facilities);
std::vector<Length> sweep_min_dist(
    const SweepGraph& g,
    const std::vector<std::pair<std::size_t, Length>>& facilities,
    const std::vector<std::size_t>& queries);

using PortalMap = std::map<Point2, Length>;

// Batch processors: given exact prefix-tour values on the global portals of
// polygon a, return exact values on the global portals of polygon b.
PortalMap process_sparse_batch(const std::vector<OrthoPolygon>& polygons,
                               std::size_t a, std::size_t b,
                               const PortalMap& fa);
PortalMap process_dense_batch(const std::vector<OrthoPolygon>& polygons,
                              std::size_t a, std::size_t b, const PortalMap& fa,
                              const RectPartition& partition);

struct StepDisjointOptions {
  double alpha = 5.0 / 6.0;
  double beta = 47.0 / 48.0;
  // Batches with at most this many vertices always take the sparse path;
  // the asymptotic thresholds degenerate at small n.
  std::size_t sparse_clamp = 64;
  bool force_dense = false;  // test hook: process every batch densely
};

struct StepDisjointStats {
  std::size_t batches = 0, sparse_batches = 0, dense_batches = 0;
  std::size_t rectangles = 0;
  std::size_t hubs = 0;      // max over dense batches
  std::size_t stabbing = 0;  // max rectangles met by any axis-parallel line
};

TourResult solve_stepdisjoint(const Instance& inst,
                              const StepDisjointOptions& opt = {},
                              StepDisjointStats* stats = nullptr);

}  // namespace orthotour
