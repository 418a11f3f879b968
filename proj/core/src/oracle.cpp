#include "orthotour/oracle.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <queue>
#include <vector>

namespace orthotour {

std::size_t default_node_budget() {
  if (const char* env = std::getenv("MANHATTAN_TOURING_NODE_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return std::size_t(v);
  }
  return 50'000'000;
}

namespace {

struct Dijkstra {
  std::vector<Length> dist;
  std::vector<std::int64_t> pred;
  using QItem = std::pair<Length, std::int64_t>;
  std::priority_queue<QItem, std::vector<QItem>, std::greater<>> pq;

  explicit Dijkstra(std::size_t n) : dist(n, kInf), pred(n, -1) {}

  void seed(std::int64_t u, Length d) {
    if (d < dist[std::size_t(u)]) {
      dist[std::size_t(u)] = d;
      pq.push({d, u});
    }
  }
  template <typename Neighbors>
  void run(Neighbors&& for_each_neighbor) {
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d != dist[std::size_t(u)]) continue;
      for_each_neighbor(u, [&](std::int64_t v, Length w) {
        Length nd = d + w;
        if (nd < dist[std::size_t(v)]) {
          dist[std::size_t(v)] = nd;
          pred[std::size_t(v)] = u;
          pq.push({nd, v});
        }
      });
    }
  }
};

std::vector<Coord> gaps(const std::vector<Coord>& cs) {
  std::vector<Coord> g;
  for (std::size_t i = 0; i + 1 < cs.size(); ++i)
    g.push_back(cs[i + 1] - cs[i]);
  return g;
}

}  // namespace

TourResult solve_oracle_2d(const Instance& inst, const OracleOptions& opt) {
  const auto& polys = inst.polygons;
  std::size_t k = polys.size();
  Grid grid = instance_grid(inst);
  std::size_t nx = grid.xs.size(), ny = grid.ys.size();
  std::size_t g = nx * ny;

  // membership bitmap per polygon over the grid
  std::vector<std::vector<char>> inside(k, std::vector<char>(g, 0));
  for (std::size_t i = 0; i < k; ++i) {
    PointLocator loc(polys[i]);
    for (std::size_t yi = 0; yi < ny; ++yi)
      for (std::size_t xi = 0; xi < nx; ++xi)
        inside[i][yi * nx + xi] =
            loc.contains({grid.xs[xi], grid.ys[yi]}) ? 1 : 0;
  }

  // effective layers (compression drops P_{i+1} when it contains P_i on grid)
  std::vector<std::size_t> layers{0};
  for (std::size_t i = 1; i < k; ++i) {
    if (opt.compress_layers) {
      std::size_t prev = layers.back();
      bool superset = true;
      for (std::size_t t = 0; t < g && superset; ++t)
        if (inside[prev][t] && !inside[i][t]) superset = false;
      if (superset) continue;
    }
    layers.push_back(i);
  }
  std::size_t L = layers.size();

  std::size_t budget = opt.node_budget ? opt.node_budget
                                       : default_node_budget();
  if (g * L > budget)
    throw ResourceError("oracle grid exceeds node budget");

  auto xgap = gaps(grid.xs);
  auto ygap = gaps(grid.ys);
  Dijkstra dj(g * L);
  for (std::size_t t = 0; t < g; ++t)
    if (inside[layers[0]][t]) dj.seed(std::int64_t(t), 0);
  dj.run([&](std::int64_t u, auto&& relax) {
    std::size_t l = std::size_t(u) / g, t = std::size_t(u) % g;
    std::size_t xi = t % nx, yi = t / nx;
    if (xi + 1 < nx) relax(u + 1, xgap[xi]);
    if (xi > 0) relax(u - 1, xgap[xi - 1]);
    if (yi + 1 < ny) relax(u + std::int64_t(nx), ygap[yi]);
    if (yi > 0) relax(u - std::int64_t(nx), ygap[yi - 1]);
    if (l + 1 < L && inside[layers[l + 1]][t])
      relax(u + std::int64_t(g), 0);
  });

  std::int64_t best = -1;
  for (std::size_t t = 0; t < g; ++t) {
    std::int64_t u = std::int64_t((L - 1) * g + t);
    if (dj.dist[std::size_t(u)] >= kInf) continue;
    if (best < 0 || dj.dist[std::size_t(u)] < dj.dist[std::size_t(best)])
      best = u;
  }
  assert(best >= 0);

  TourResult res;
  res.length = dj.dist[std::size_t(best)];
  // Transition nodes: points where the path enters each effective layer.
  std::vector<Point2> entry_points(L);
  std::int64_t u = best;
  for (;;) {
    std::int64_t p = dj.pred[std::size_t(u)];
    std::size_t lu = std::size_t(u) / g;
    if (p < 0 || std::size_t(p) / g < lu) {
      std::size_t t = std::size_t(u) % g;
      entry_points[lu] = {grid.xs[t % nx], grid.ys[t / nx]};
      if (p < 0) break;
    }
    u = p;
  }
  for (std::size_t l = 0; l < L; ++l)
    res.skeleton.entries.push_back({layers[l] + 1, entry_points[l]});
  Length check = 0;
  assert(!validate_skeleton(inst, res.skeleton, &check));
  assert(check == res.length);
  return res;
}

TourResult solve_oracle_3d(const Instance& inst, const OracleOptions& opt) {
  const auto& pts = inst.polytopes;
  std::size_t k = pts.size();
  std::vector<Coord> xs, ys, zs;
  for (const auto& p : pts) {
    for (const auto& b : p.boxes) {
      xs.push_back(b.lo.x);
      xs.push_back(b.hi.x);
      ys.push_back(b.lo.y);
      ys.push_back(b.hi.y);
      zs.push_back(b.lo.z);
      zs.push_back(b.hi.z);
    }
  }
  auto dedup = [](std::vector<Coord>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  dedup(xs);
  dedup(ys);
  dedup(zs);
  std::size_t nx = xs.size(), ny = ys.size(), nz = zs.size();
  std::size_t g = nx * ny * nz;
  std::size_t budget = opt.node_budget ? opt.node_budget
                                       : default_node_budget();
  if (g * k > budget)
    throw ResourceError("oracle grid exceeds node budget");

  auto point_at = [&](std::size_t t) {
    std::size_t xi = t % nx, yi = (t / nx) % ny, zi = t / (nx * ny);
    return Point3{xs[xi], ys[yi], zs[zi]};
  };
  std::vector<std::vector<char>> inside(k, std::vector<char>(g, 0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t t = 0; t < g; ++t)
      inside[i][t] = pts[i].contains(point_at(t)) ? 1 : 0;

  auto xgap = gaps(xs);
  auto ygap = gaps(ys);
  auto zgap = gaps(zs);
  Dijkstra dj(g * k);
  for (std::size_t t = 0; t < g; ++t)
    if (inside[0][t]) dj.seed(std::int64_t(t), 0);
  dj.run([&](std::int64_t u, auto&& relax) {
    std::size_t l = std::size_t(u) / g, t = std::size_t(u) % g;
    std::size_t xi = t % nx, yi = (t / nx) % ny, zi = t / (nx * ny);
    if (xi + 1 < nx) relax(u + 1, xgap[xi]);
    if (xi > 0) relax(u - 1, xgap[xi - 1]);
    if (yi + 1 < ny) relax(u + std::int64_t(nx), ygap[yi]);
    if (yi > 0) relax(u - std::int64_t(nx), ygap[yi - 1]);
    if (zi + 1 < nz) relax(u + std::int64_t(nx * ny), zgap[zi]);
    if (zi > 0) relax(u - std::int64_t(nx * ny), zgap[zi - 1]);
    if (l + 1 < k && inside[l + 1][t]) relax(u + std::int64_t(g), 0);
  });

  std::int64_t best = -1;
  for (std::size_t t = 0; t < g; ++t) {
    std::int64_t u = std::int64_t((k - 1) * g + t);
    if (dj.dist[std::size_t(u)] >= kInf) continue;
    if (best < 0 || dj.dist[std::size_t(u)] < dj.dist[std::size_t(best)])
      best = u;
  }
  assert(best >= 0);

  TourResult res;
  res.length = dj.dist[std::size_t(best)];
  res.skeleton3.points.assign(k, {});
  std::int64_t u = best;
  for (;;) {
    std::int64_t p = dj.pred[std::size_t(u)];
    std::size_t lu = std::size_t(u) / g;
    if (p < 0 || std::size_t(p) / g < lu) {
      res.skeleton3.points[lu] = point_at(std::size_t(u) % g);
      if (p < 0) break;
    }
    u = p;
  }
  Length check = 0;
  assert(!validate_skeleton3(inst, res.skeleton3, &check));
  assert(check == res.length);
  return res;
}

}  // namespace orthotour
