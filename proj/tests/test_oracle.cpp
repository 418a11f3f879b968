#include "doctest.h"

#include <random>

#include "orthotour/oracle.hpp"
#include "support/test_util.hpp"

using namespace orthotour;
namespace ot = orthotour::test;

namespace {

OrthoPolygon rect(Coord x1, Coord y1, Coord x2, Coord y2) {
  return OrthoPolygon{{{x1, y1}, {x2, y1}, {x2, y2}, {x1, y2}}};
}

// Independent reference: enumerate all grid-point chains q_1..q_k, q_i in
// P_i, and minimize the polyline length.
Length enumerate_optimum(const Instance& inst) {
  Grid grid = instance_grid(inst);
  std::vector<std::vector<Point2>> members(inst.polygons.size());
  for (std::size_t i = 0; i < inst.polygons.size(); ++i)
    for (Coord x : grid.xs)
      for (Coord y : grid.ys)
        if (contains(inst.polygons[i], {x, y}))
          members[i].push_back({x, y});
  std::vector<Length> cur(members[0].size(), 0);
  for (std::size_t i = 1; i < members.size(); ++i) {
    std::vector<Length> next(members[i].size(), kInf);
    for (std::size_t a = 0; a < members[i - 1].size(); ++a)
      for (std::size_t b = 0; b < members[i].size(); ++b)
        next[b] = std::min(next[b],
                           cur[a] + l1_dist(members[i - 1][a], members[i][b]));
    cur = std::move(next);
  }
  Length best = kInf;
  for (Length v : cur) best = std::min(best, v);
  return best;
}

Instance random_instance(std::mt19937_64& rng, std::size_t k) {
  Instance inst;
  std::uniform_int_distribution<Coord> shift(-4, 8);
  for (std::size_t i = 0; i < k; ++i) {
    auto p = ot::random_polygon(5, 5, 0.5, rng);
    Coord dx = shift(rng), dy = shift(rng);
    for (auto& v : p.vertices) {
      v.x += dx;
      v.y += dy;
    }
    inst.polygons.push_back(p);
  }
  return inst;
}

}  // namespace

TEST_CASE("oracle 2d hand examples") {
  Instance inst;
  inst.polygons = {rect(0, 0, 2, 2)};
  auto r = solve_oracle_2d(inst);
  CHECK(r.length == 0);
  CHECK(r.skeleton.entries.size() == 1);

  inst.polygons = {rect(0, 0, 2, 2), rect(5, 0, 7, 2)};
  CHECK(solve_oracle_2d(inst).length == 3);

  // all share a common point
  inst.polygons = {rect(0, 0, 4, 4), rect(2, 2, 6, 6), rect(3, 0, 8, 3)};
  CHECK(solve_oracle_2d(inst).length == 0);

  // back and forth
  inst.polygons = {rect(0, 0, 1, 1), rect(4, 0, 5, 1), rect(0, 0, 1, 1)};
  CHECK(solve_oracle_2d(inst).length == 6);
}

TEST_CASE("oracle 2d equals chain enumeration") {
  std::mt19937_64 rng(2024);
  for (int iter = 0; iter < 40; ++iter) {
    auto inst = random_instance(rng, 1 + iter % 3);
    auto r = solve_oracle_2d(inst);
    CAPTURE(iter);
    REQUIRE(r.length == enumerate_optimum(inst));
    Length len = 0;
    REQUIRE(!validate_skeleton(inst, r.skeleton, &len));
    REQUIRE(len == r.length);
  }
}

TEST_CASE("oracle invariances") {
  std::mt19937_64 rng(555);
  for (int iter = 0; iter < 15; ++iter) {
    auto inst = random_instance(rng, 3);
    Length base = solve_oracle_2d(inst).length;

    Instance translated = inst;
    for (auto& p : translated.polygons)
      for (auto& v : p.vertices) {
        v.x += 100;
        v.y -= 57;
      }
    CHECK(solve_oracle_2d(translated).length == base);

    Instance rotated = inst;  // (x, y) -> (-y, x)
    for (auto& p : rotated.polygons) {
      std::vector<Point2> ring;
      for (auto& v : p.vertices) ring.push_back({-v.y, v.x});
      p = *normalize_polygon(ring);
    }
    CHECK(solve_oracle_2d(rotated).length == base);

    Instance reversed = inst;
    std::reverse(reversed.polygons.begin(), reversed.polygons.end());
    CHECK(solve_oracle_2d(reversed).length == base);

    Instance dup = inst;
    dup.polygons.insert(dup.polygons.begin() + 1, dup.polygons[1]);
    CHECK(solve_oracle_2d(dup).length == base);
  }
}

TEST_CASE("layer compression is output-equivalent") {
  std::mt19937_64 rng(808);
  OracleOptions on;
  on.compress_layers = true;
  for (int iter = 0; iter < 25; ++iter) {
    auto inst = random_instance(rng, 4);
    if (iter % 3 == 0) {
      // force nesting so compression actually triggers
      inst.polygons[1] = rect(-20, -20, 30, 30);
    }
    auto plain = solve_oracle_2d(inst);
    auto compressed = solve_oracle_2d(inst, on);
    CAPTURE(iter);
    REQUIRE(plain.length == compressed.length);
    Length len = 0;
    REQUIRE(!validate_skeleton(inst, compressed.skeleton, &len));
    REQUIRE(len == compressed.length);
  }
}

TEST_CASE("node budget enforced") {
  Instance inst;
  inst.polygons = {rect(0, 0, 2, 2), rect(5, 0, 7, 2)};
  OracleOptions opt;
  opt.node_budget = 4;
  CHECK_THROWS_AS(solve_oracle_2d(inst, opt), ResourceError);
}

TEST_CASE("oracle 3d hand examples") {
  Instance inst;
  inst.dims = 3;
  inst.polytopes = {Polytope3{{{{0, 0, 0}, {1, 1, 1}}}}};
  auto r = solve_oracle_3d(inst);
  CHECK(r.length == 0);

  inst.polytopes = {Polytope3{{{{0, 0, 0}, {1, 1, 1}}}},
                    Polytope3{{{{6, 0, 0}, {7, 1, 1}}}}};
  r = solve_oracle_3d(inst);
  CHECK(r.length == 5);
  Length len = 0;
  CHECK(!validate_skeleton3(inst, r.skeleton3, &len));
  CHECK(len == 5);

  // degenerate boxes (segments) are fine
  inst.polytopes = {Polytope3{{{{0, 0, 0}, {0, 5, 0}}}},
                    Polytope3{{{{3, 2, 4}, {3, 2, 9}}}}};
  CHECK(solve_oracle_3d(inst).length == 7);  // 3 in x, 0 in y, 4 in z
}

TEST_CASE("oracle 3d comb crossing") {
  // two overlapping combs: zero-length tour exists iff they share a point
  Polytope3 a{{{{0, 0, 0}, {10, 0, 0}}}};   // segment along x
  Polytope3 b{{{{5, -3, 0}, {5, 3, 0}}}};   // crossing segment along y
  Instance inst;
  inst.dims = 3;
  inst.polytopes = {a, b};
  CHECK(solve_oracle_3d(inst).length == 0);
  b.boxes[0] = {{5, 1, 0}, {5, 3, 0}};
  inst.polytopes = {a, b};
  CHECK(solve_oracle_3d(inst).length == 1);
}
