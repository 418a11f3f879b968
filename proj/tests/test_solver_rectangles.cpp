#include "doctest.h"

#include <random>

#include "orthotour/oracle.hpp"
#include "orthotour/solver_rectangles.hpp"

using namespace orthotour;

namespace {

OrthoPolygon rect(Coord x1, Coord y1, Coord x2, Coord y2) {
  return OrthoPolygon{{{x1, y1}, {x2, y1}, {x2, y2}, {x1, y2}}};
}

// 1-D reference: DP over all interval endpoints.
Length brute_intervals(const std::vector<Interval>& xs) {
  std::vector<Coord> grid;
  for (const auto& iv : xs) {
    grid.push_back(iv.lo);
    grid.push_back(iv.hi);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  auto pts_in = [&](const Interval& iv) {
    std::vector<Coord> out;
    for (Coord c : grid)
      if (iv.lo <= c && c <= iv.hi) out.push_back(c);
    return out;
  };
  std::vector<std::pair<Coord, Length>> cur;
  for (Coord c : pts_in(xs[0])) cur.push_back({c, 0});
  for (std::size_t i = 1; i < xs.size(); ++i) {
    std::vector<std::pair<Coord, Length>> next;
    for (Coord c : pts_in(xs[i])) {
      Length best = kInf;
      for (auto& [p, v] : cur)
        best = std::min<Length>(best, v + std::llabs(c - p));
      next.push_back({c, best});
    }
    cur = std::move(next);
  }
  Length best = kInf;
  for (auto& [p, v] : cur) best = std::min(best, v);
  return best;
}

std::vector<Interval> random_intervals(std::size_t k, std::mt19937_64& rng,
                                       Coord range = 40) {
  std::uniform_int_distribution<Coord> c(0, range);
  std::vector<Interval> out;
  for (std::size_t i = 0; i < k; ++i) {
    Coord a = c(rng), b = c(rng);
    if (a > b) std::swap(a, b);
    out.push_back({a, b});
  }
  return out;
}

}  // namespace

TEST_CASE("tour_intervals hand cases") {
  CHECK(tour_intervals({{0, 5}, {2, 8}, {4, 6}}).length == 0);
  CHECK(tour_intervals({{3, 7}}).length == 0);
  auto r = tour_intervals({{0, 1}, {3, 4}, {0, 1}});
  CHECK(r.length == 4);
  CHECK(r.waypoints == std::vector<Coord>{1, 3, 1});
  CHECK_THROWS(tour_intervals({}));
  CHECK_THROWS(tour_intervals({{2, 1}}));
}

TEST_CASE("tour_intervals equals endpoint DP") {
  std::mt19937_64 rng(611);
  for (int iter = 0; iter < 400; ++iter) {
    auto xs = random_intervals(1 + std::size_t(iter % 12), rng);
    auto got = tour_intervals(xs);
    CAPTURE(iter);
    REQUIRE(got.length == brute_intervals(xs));
    // witness valid and consistent
    Length sum = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      REQUIRE(got.waypoints[i] >= xs[i].lo);
      REQUIRE(got.waypoints[i] <= xs[i].hi);
      if (i > 0) sum += std::llabs(got.waypoints[i] - got.waypoints[i - 1]);
    }
    REQUIRE(sum == got.length);
  }
}

TEST_CASE("solve_rectangles hand cases") {
  Instance inst;
  inst.declared_class = InstanceClass::kRectangles;
  inst.polygons = {rect(0, 0, 1, 1), rect(3, 0, 4, 1)};
  CHECK(solve_rectangles(inst).length == 2);

  inst.polygons.assign(5, rect(2, 2, 4, 7));
  CHECK(solve_rectangles(inst).length == 0);

  inst.polygons = {rect(0, 0, 2, 2), OrthoPolygon{{{0, 0},
                                                   {2, 0},
                                                   {2, 1},
                                                   {1, 1},
                                                   {1, 2},
                                                   {0, 2}}}};
  CHECK_THROWS_AS(solve_rectangles(inst), ClassError);
}

TEST_CASE("solve_rectangles equals oracle and separability holds") {
  std::mt19937_64 rng(1213);
  std::uniform_int_distribution<Coord> c(0, 30);
  for (int iter = 0; iter < 150; ++iter) {
    Instance inst;
    inst.declared_class = InstanceClass::kRectangles;
    std::size_t k = 1 + std::size_t(iter % 6);
    for (std::size_t i = 0; i < k; ++i) {
      Coord x1 = c(rng), x2 = c(rng), y1 = c(rng), y2 = c(rng);
      if (x1 > x2) std::swap(x1, x2);
      if (y1 > y2) std::swap(y1, y2);
      if (x1 == x2) ++x2;
      if (y1 == y2) ++y2;
      inst.polygons.push_back(rect(x1, y1, x2, y2));
    }
    auto fast = solve_rectangles(inst);
    auto oracle = solve_oracle_2d(inst);
    CAPTURE(iter);
    REQUIRE(fast.length == oracle.length);
    // projection lower bounds
    std::vector<Interval> xiv, yiv;
    for (const auto& p : inst.polygons) {
      auto [lo, hi] = p.bbox();
      xiv.push_back({lo.x, hi.x});
      yiv.push_back({lo.y, hi.y});
    }
    REQUIRE(oracle.length >= tour_intervals(xiv).length);
    REQUIRE(oracle.length >= tour_intervals(yiv).length);
  }
}

TEST_CASE("degenerate intervals accepted") {
  CHECK(tour_intervals({{5, 5}, {1, 1}, {9, 9}}).length == 12);
}
