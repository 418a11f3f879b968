#pragma once

#include <functional>
#include <random>
#include <vector>

#include "orthotour/geometry.hpp"

// Shared helpers for tests: independent brute-force oracles and random
// shape generation from explicit cell bitmaps (ground truth kept as the
// bitmap itself, so generated polygons can be checked against it).

namespace orthotour::test {

struct CellWorld {
  int w = 0, h = 0;
  std::vector<char> cells;  // row-major, cell (i, j) covers [i,i+1]x[j,j+1]

  bool cell(int i, int j) const {
    if (i < 0 || j < 0 || i >= w || j >= h) return false;
    return cells[std::size_t(j) * std::size_t(w) + std::size_t(i)] != 0;
  }
  char& at(int i, int j) {
    return cells[std::size_t(j) * std::size_t(w) + std::size_t(i)];
  }

  // Closed-union membership at doubled coordinates.
  bool contains2(Coord px2, Coord py2) const {
    for (int j = 0; j < h; ++j)
      for (int i = 0; i < w; ++i)
        if (cell(i, j) && 2 * i <= px2 && px2 <= 2 * i + 2 && 2 * j <= py2 &&
            py2 <= 2 * j + 2)
          return true;
    return false;
  }
};

inline CellWorld random_cells(int w, int h, double p, std::mt19937_64& rng) {
  CellWorld cw{w, h, std::vector<char>(std::size_t(w) * std::size_t(h), 0)};
  std::bernoulli_distribution coin(p);
  for (auto& c : cw.cells) c = coin(rng) ? 1 : 0;
  return cw;
}

// Keeps the largest 4-connected component and fills its holes (cells not
// reachable from outside within the bounding box frame).
inline void keep_main_component_fill_holes(CellWorld& cw) {
  auto flood = [&](std::vector<char>& mark, int si, int sj, char want) {
    std::vector<std::pair<int, int>> st{{si, sj}};
    auto idx = [&](int i, int j) {
      return std::size_t(j + 1) * std::size_t(cw.w + 2) + std::size_t(i + 1);
    };
    while (!st.empty()) {
      auto [i, j] = st.back();
      st.pop_back();
      if (i < -1 || j < -1 || i > cw.w || j > cw.h) continue;
      if (mark[idx(i, j)]) continue;
      bool set = cw.cell(i, j);
      if ((want == 1) != set) continue;
      mark[idx(i, j)] = 1;
      st.push_back({i + 1, j});
      st.push_back({i - 1, j});
      st.push_back({i, j + 1});
      st.push_back({i, j - 1});
    }
  };
  std::size_t frame = std::size_t(cw.w + 2) * std::size_t(cw.h + 2);
  // Largest set component.
  std::vector<char> best(frame, 0);
  std::size_t best_count = 0;
  std::vector<char> seen(frame, 0);
  for (int j = 0; j < cw.h; ++j) {
    for (int i = 0; i < cw.w; ++i) {
      std::size_t id = std::size_t(j + 1) * std::size_t(cw.w + 2) +
                       std::size_t(i + 1);
      if (!cw.cell(i, j) || seen[id]) continue;
      std::vector<char> mark(frame, 0);
      flood(mark, i, j, 1);
      std::size_t count = 0;
      for (auto c : mark) count += std::size_t(c);
      for (std::size_t t = 0; t < frame; ++t) seen[t] |= mark[t];
      if (count > best_count) {
        best_count = count;
        best = mark;
      }
    }
  }
  for (int j = 0; j < cw.h; ++j)
    for (int i = 0; i < cw.w; ++i)
      cw.at(i, j) = best[std::size_t(j + 1) * std::size_t(cw.w + 2) +
                         std::size_t(i + 1)];
  // Fill holes: outside flood over empty cells starting from the frame.
  std::vector<char> outside(frame, 0);
  flood(outside, -1, -1, 0);
  for (int j = 0; j < cw.h; ++j)
    for (int i = 0; i < cw.w; ++i)
      if (!cw.cell(i, j) && !outside[std::size_t(j + 1) * std::size_t(cw.w + 2) +
                                     std::size_t(i + 1)])
        cw.at(i, j) = 1;
}

inline Region region_of(const CellWorld& cw) {
  std::vector<Coord> xs, ys;
  for (int i = 0; i <= cw.w; ++i) xs.push_back(i);
  for (int j = 0; j <= cw.h; ++j) ys.push_back(j);
  return Region::from_predicate(xs, ys, [&](Coord px2, Coord py2) {
    return cw.contains2(px2, py2);
  });
}

// Random simply-connected-ish orthogonal polygons; each returned polygon is
// structurally valid, and their union rasterizes to the cell world.
inline std::vector<OrthoPolygon> random_polygons(int w, int h, double p,
                                                 std::mt19937_64& rng,
                                                 CellWorld* world_out = nullptr) {
  for (;;) {
    CellWorld cw = random_cells(w, h, p, rng);
    keep_main_component_fill_holes(cw);
    bool any = false;
    for (auto c : cw.cells) any = any || c;
    if (!any) continue;
    auto polys = region_of(cw).to_polygons();
    if (polys.empty()) continue;
    if (world_out) *world_out = cw;
    return polys;
  }
}

// One random valid polygon (the largest by area from a random world).
inline OrthoPolygon random_polygon(int w, int h, double p,
                                   std::mt19937_64& rng) {
  for (;;) {
    auto polys = random_polygons(w, h, p, rng);
    OrthoPolygon* best = nullptr;
    for (auto& poly : polys) {
      if (validate_polygon(poly)) continue;  // skip invalid
      if (!best || poly.signed_area2() > best->signed_area2()) best = &poly;
    }
    if (best) return *best;
  }
}

// Brute-force union membership of a polygon list at doubled coordinates.
inline bool polys_contain2(const std::vector<OrthoPolygon>& polys, Coord px2,
                           Coord py2) {
  for (const auto& poly : polys)
    if (contains_doubled(poly, px2, py2)) return true;
  return false;
}

}  // namespace orthotour::test
