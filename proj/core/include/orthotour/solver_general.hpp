#pragma once

#include <cstddef>
#include <vector>

#include "orthotour/geometry.hpp"

// Baseline solver for arbitrary (possibly overlapping) polygon sequences:
// a segment tree of polygon intersections answers next(i, p) = the first
// index at or after i whose polygon misses p; the portal DP then relaxes
// shortest tour lengths between portal sets with weighted L1
// nearest-neighbor queries, one round per run start.

namespace orthotour {

class IntersectionTree {
 public:
  explicit IntersectionTree(const std::vector<OrthoPolygon>& polygons);

  // min{ j >= i : p not in P_j }, or k+1 if none. 1-based.
  std::size_t next(std::size_t i, Point2 p) const;
  // max{ j <= i : p not in P_j }, or 0 if none. 1-based.
  std::size_t prev(std::size_t i, Point2 p) const;

  std::size_t k() const { return k_; }
  bool in_polygon(std::size_t i, Point2 p) const;  // 1-based leaf query

 private:
  struct NodeRef {
    std::size_t lo = 0, hi = 0;  // 1-based inclusive polygon interval
  };
  void build(std::size_t u, std::size_t lo, std::size_t hi,
             const std::vector<OrthoPolygon>& polygons);
  std::size_t descend_first(std::size_t u, std::size_t lo, std::size_t hi,
                            Point2 p) const;
  std::size_t descend_last(std::size_t u, std::size_t lo, std::size_t hi,
                           Point2 p) const;
  template <typename Visit>
  void cover(std::size_t u, std::size_t lo, std::size_t hi, std::size_t ql,
             std::size_t qr, Visit&& visit) const;

  std::size_t k_ = 0;
  std::vector<Region> regions_;  // heap-ordered segment tree nodes
};

struct GeneralOptions {
  // Compute the whole next-table before the DP instead of streaming it in
  // round order. Output-identical; kept for differential testing.
  bool precompute_next = false;
};

// Audit counters reported by the solver.
struct GeneralStats {
  std::size_t total_portals = 0;
  std::size_t total_bucket_sites = 0;  // sum of |S_j|, equals total_portals
  std::size_t rounds = 0;
};

TourResult solve_general(const Instance& inst, const GeneralOptions& opt = {},
                         GeneralStats* stats = nullptr);

}  // namespace orthotour
