#include "orthotour/solver_rectangles.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace orthotour {

IntervalTour tour_intervals(const std::vector<Interval>& xs) {
  if (xs.empty()) throw std::invalid_argument("tour_intervals: empty");
  for (const auto& iv : xs)
    if (iv.lo > iv.hi) throw std::invalid_argument("tour_intervals: lo > hi");
  std::size_t k = xs.size();

  // Largest l such that X_1 .. X_l have a common point.
  Coord lo = xs[0].lo, hi = xs[0].hi;
  std::size_t l = 0;
  while (l + 1 < k && std::max(lo, xs[l + 1].lo) <=
                          std::min(hi, xs[l + 1].hi)) {
    ++l;
    lo = std::max(lo, xs[l].lo);
    hi = std::min(hi, xs[l].hi);
  }
  if (l == k - 1) {
    // Common intersection: stay put.
    return {0, std::vector<Coord>(k, lo)};
  }
  Interval prefix{lo, hi};
  // Smallest r such that X_r .. X_k have a common point.
  Coord slo = xs[k - 1].lo, shi = xs[k - 1].hi;
  std::size_t r = k - 1;
  while (r > 0 &&
         std::max(slo, xs[r - 1].lo) <= std::min(shi, xs[r - 1].hi)) {
    --r;
    slo = std::max(slo, xs[r].lo);
    shi = std::min(shi, xs[r].hi);
  }
  Interval suffix{slo, shi};
  // The runs may overlap (r <= l); the middle then vanishes and the answer
  // is the gap between the two collapsed intervals, still covered by the
  // greedy below since prefix and suffix are disjoint.
  std::vector<Interval> seq{prefix};
  for (std::size_t i = l + 1; i < r; ++i) seq.push_back(xs[i]);
  seq.push_back(suffix);
  assert(seq.size() >= 2);
  Coord x;
  if (seq[0].hi < seq[1].lo) {
    x = seq[0].hi;
  } else {
    assert(seq[0].lo > seq[1].hi);
    x = seq[0].lo;
  }
  Length total = 0;
  std::vector<Coord> pts{x};
  for (std::size_t i = 1; i < seq.size(); ++i) {
    Coord nx = std::clamp(x, seq[i].lo, seq[i].hi);
    // forced moves land on the facing interval end
    assert(nx == x || (nx > x ? nx == seq[i].lo : nx == seq[i].hi));
    total += std::llabs(nx - x);
    x = nx;
    pts.push_back(x);
  }

  IntervalTour out;
  out.length = total;
  out.waypoints.assign(k, 0);
  for (std::size_t i = 0; i <= l; ++i) out.waypoints[i] = pts[0];
  for (std::size_t i = l + 1; i < r; ++i) out.waypoints[i] = pts[i - l];
  for (std::size_t i = r; i < k; ++i) out.waypoints[i] = pts.back();
  return out;
}

TourResult solve_rectangles(const Instance& inst) {
  std::vector<Interval> xiv, yiv;
  for (const auto& p : inst.polygons) {
    if (!is_rectangle(p))
      throw ClassError("solve_rectangles: polygon is not a rectangle");
    auto [lo, hi] = p.bbox();
    xiv.push_back({lo.x, hi.x});
    yiv.push_back({lo.y, hi.y});
  }
  if (xiv.empty()) throw ClassError("solve_rectangles: empty instance");
  auto tx = tour_intervals(xiv);
  auto ty = tour_intervals(yiv);
  TourResult res;
  res.length = tx.length + ty.length;
  for (std::size_t i = 0; i < xiv.size(); ++i)
    res.skeleton.entries.push_back({i + 1, {tx.waypoints[i], ty.waypoints[i]}});
  Length check = 0;
  assert(!validate_skeleton(inst, res.skeleton, &check));
  assert(check == res.length);
  return res;
}

}  // namespace orthotour
