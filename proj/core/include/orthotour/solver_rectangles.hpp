#pragma once

#include <vector>

#include "orthotour/geometry.hpp"

// Linear-time rectangle touring: the x- and y-projections are independent
// 1-D interval-touring problems, and the optimum is exactly the sum of the
// two 1-D optima. Each 1-D problem is solved by collapsing the longest
// intersecting prefix and suffix and running the closest-point greedy on
// what remains.

namespace orthotour {

struct Interval {
  Coord lo = 0;
  Coord hi = 0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct IntervalTour {
  Length length = 0;
  std::vector<Coord> waypoints;  // one per input interval
};

IntervalTour tour_intervals(const std::vector<Interval>& xs);

TourResult solve_rectangles(const Instance& inst);

}  // namespace orthotour
