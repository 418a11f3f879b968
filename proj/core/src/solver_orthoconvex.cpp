#include "orthotour/solver_orthoconvex.hpp"

#include <algorithm>
#include <cassert>
#include <memory>
#include <optional>

#include "orthotour/mountain_range.hpp"
#include "orthotour/nn_l1.hpp"

namespace orthotour {

namespace {

// Placeholder level for fragments with no facing fragment; always erased by
// the two terminal-anchored relax lines before anyone reads it.
constexpr Length kHigh = Length{1} << 55;

void check_pair(const OrthoPolygon& prev, const OrthoPolygon& cur) {
  if (!is_ortho_convex(prev) || !is_ortho_convex(cur))
    throw ClassError("orthoconvex: polygon is not ortho-convex");
  if (!polygons_disjoint(prev, cur))
    throw ClassError("orthoconvex: consecutive polygons are not disjoint");
}

struct EdgeFun {
  bool horizontal = false;
  Coord fixed = 0;     // y for horizontal, x for vertical
  Coord lo = 0, hi = 0;  // range of the varying coordinate, lo < hi
  MountainStore::Handle h;

  Point2 at(Coord v) const {
    return horizontal ? Point2{v, fixed} : Point2{fixed, v};
  }
  Coord var(Point2 p) const { return horizontal ? p.x : p.y; }
  bool covers(Point2 p) const {
    Coord f = horizontal ? p.y : p.x;
    Coord v = var(p);
    return f == fixed && lo <= v && v <= hi;
  }
};

std::vector<EdgeFun> edge_geometry(const OrthoPolygon& poly) {
  std::vector<EdgeFun> out;
  for (std::size_t j = 0; j < poly.size(); ++j) {
    Point2 a = poly.vertex(j), b = poly.vertex(j + 1);
    EdgeFun e;
    e.horizontal = (a.y == b.y);
    e.fixed = e.horizontal ? a.y : a.x;
    e.lo = std::min(e.horizontal ? a.x : a.y, e.horizontal ? b.x : b.y);
    e.hi = std::max(e.horizontal ? a.x : a.y, e.horizontal ? b.x : b.y);
    out.push_back(e);
  }
  return out;
}

// f along the boundary, evaluated at a point known to lie on some edge.
Length boundary_eval(const MountainStore& store,
                     const std::vector<EdgeFun>& edges, Point2 p) {
  for (const auto& e : edges)
    if (e.covers(p)) return store.evaluate(e.h, e.var(p));
  assert(false && "point not on boundary");
  return kInf;
}

// Nearest point of the polygon on the axis line through p, or nullopt.
std::optional<Point2> project_vertical(const PointLocator& loc, Point2 p) {
  auto ext = loc.y_extent_at(p.x);
  if (!ext) return std::nullopt;
  auto [ylo, yhi] = *ext;
  assert(p.y < ylo || p.y > yhi);  // step-disjointness
  return Point2{p.x, p.y > yhi ? yhi : ylo};
}

std::optional<Point2> project_horizontal(const PointLocator& loc, Point2 p) {
  auto ext = loc.x_extent_at(p.y);
  if (!ext) return std::nullopt;
  auto [xlo, xhi] = *ext;
  assert(p.x < xlo || p.x > xhi);
  return Point2{p.x > xhi ? xhi : xlo, p.y};
}

struct Fragment {
  bool horizontal = false;
  Coord fixed = 0;
  Coord lo = 0, hi = 0;
  MountainStore::Handle h;
};

class Engine {
 public:
  Engine(const Instance& inst, OrthoConvexStats* stats,
         std::vector<std::map<Point2, Length>>* terminal_maps)
      : inst_(inst), stats_(stats), terminal_maps_(terminal_maps) {
    const auto& polys = inst.polygons;
    if (polys.empty()) throw ClassError("orthoconvex: empty instance");
    if (!is_ortho_convex(polys[0]))
      throw ClassError("orthoconvex: polygon is not ortho-convex");
    for (std::size_t i = 1; i < polys.size(); ++i)
      check_pair(polys[i - 1], polys[i]);
    for (const auto& p : polys)
      locators_.push_back(std::make_unique<PointLocator>(p));
    edges_.resize(polys.size());
    edges_[0] = edge_geometry(polys[0]);
    for (auto& e : edges_[0]) e.h = store_.new_zero(e.lo, e.hi);
    for (std::size_t i = 1; i < polys.size(); ++i) iterate(i);
  }

  TourResult finish() {
    const auto& polys = inst_.polygons;
    std::size_t k = polys.size();
    Length best = kInf;
    Point2 best_pt;
    for (const auto& e : edges_[k - 1]) {
      auto [val, arg] = store_.min_over_domain(e.h);
      Point2 pt = e.at(arg);
      if (val < best || (val == best && pt < best_pt)) {
        best = val;
        best_pt = pt;
      }
    }
    assert(best < kInf);

    TourResult res;
    res.length = best;
    std::vector<Point2> pts(k);
    pts[k - 1] = best_pt;
    Length v = best;
    for (std::size_t i = k; i-- > 1;) {
      // predecessor on dP_{i-1}: a vertex or the nearest axis projection
      Point2 p = pts[i];
      std::optional<Point2> found;
      Length found_f = 0;
      auto consider = [&](Point2 r) {
        Length fr = boundary_eval(store_, edges_[i - 1], r);
        if (fr + l1_dist(r, p) != v) return;
        if (!found || r < *found) {
          found = r;
          found_f = fr;
        }
      };
      const auto& poly = polys[i - 1];
      for (std::size_t j = 0; j < poly.size(); ++j) consider(poly.vertex(j));
      if (auto q = project_vertical(*locators_[i - 1], p)) consider(*q);
      if (auto q = project_horizontal(*locators_[i - 1], p)) consider(*q);
      assert(found && "no predecessor reproduces the optimal value");
      pts[i - 1] = *found;
      v = found_f;
    }
    assert(v == 0);
    for (std::size_t i = 0; i < k; ++i)
      res.skeleton.entries.push_back({i + 1, pts[i]});
    Length check = 0;
    assert(!validate_skeleton(inst_, res.skeleton, &check));
    assert(check == res.length);
    (void)check;
    return res;
  }

 private:
  // terminals on one edge, as sorted varying coordinates (endpoints included)
  static std::vector<Coord> edge_cuts(const EdgeFun& e,
                                      const std::vector<Point2>& terms) {
    std::vector<Coord> cuts{e.lo, e.hi};
    for (Point2 t : terms)
      if (e.covers(t)) cuts.push_back(e.var(t));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
  }

  void iterate(std::size_t i) {
    const OrthoPolygon& prev = inst_.polygons[i - 1];
    const OrthoPolygon& cur = inst_.polygons[i];
    Grid local = polygons_grid({prev, cur});
    std::vector<Point2> term_prev = portals(prev, local);
    std::vector<Point2> term_cur = portals(cur, local);

    // fragments of dP_{i-1}, grouped by their varying-coordinate interval
    std::map<std::tuple<bool, Coord, Coord>, std::vector<Fragment>> by_span;
    std::size_t fragment_count = 0;
    for (const auto& e : edges_[i - 1]) {
      auto cuts = edge_cuts(e, term_prev);
      for (std::size_t t = 0; t + 1 < cuts.size(); ++t) {
        Fragment f{e.horizontal, e.fixed, cuts[t], cuts[t + 1],
                   store_.restrict(e.h, cuts[t], cuts[t + 1])};
        by_span[{f.horizontal, f.lo, f.hi}].push_back(f);
        ++fragment_count;
      }
    }

    // f_{i-1} at the vertices of P_{i-1}, then f_i at the terminals of dP_i
    std::vector<WeightedSite> sites;
    for (const auto& e : edges_[i - 1]) {
      sites.push_back({e.at(e.lo), store_.evaluate(e.h, e.lo)});
      sites.push_back({e.at(e.hi), store_.evaluate(e.h, e.hi)});
    }
    NnIndex nn(std::move(sites));
    std::map<Point2, Length> fmap;
    for (Point2 p : term_cur) {
      Length best = nn.query(p).value;
      if (auto q = project_vertical(*locators_[i - 1], p)) {
        Length fq = boundary_eval(store_, edges_[i - 1], *q);
        best = std::min(best, fq + l1_dist(*q, p));
      }
      if (auto q = project_horizontal(*locators_[i - 1], p)) {
        Length fq = boundary_eval(store_, edges_[i - 1], *q);
        best = std::min(best, fq + l1_dist(*q, p));
      }
      assert(best < kInf);
      fmap[p] = best;
    }

    // fragments of dP_i: facing-fragment shift capped by the terminal lines
    std::vector<EdgeFun> cur_edges = edge_geometry(cur);
    for (auto& e : cur_edges) {
      auto cuts = edge_cuts(e, term_cur);
      MountainStore::Handle acc;
      for (std::size_t t = 0; t + 1 < cuts.size(); ++t) {
        Coord a = cuts[t], b = cuts[t + 1];
        Length fa = fmap.at(e.at(a)), fb = fmap.at(e.at(b));
        MountainStore::Handle h;
        const Fragment* facing = nullptr;
        auto it = by_span.find({e.horizontal, a, b});
        if (it != by_span.end()) {
          for (const auto& f : it->second) {
            // nearest same-span fragment on the facing side
            if (!facing ||
                std::llabs(f.fixed - e.fixed) < std::llabs(facing->fixed - e.fixed))
              facing = &f;
          }
        }
        if (facing) {
          h = store_.shift(facing->h, std::llabs(facing->fixed - e.fixed));
        } else {
          h = store_.shift(store_.new_zero(a, b), kHigh);
        }
        h = store_.relax(h, +1, fa - a);
        h = store_.relax(h, -1, fb + b);
        assert(store_.evaluate(h, a) == fa);
        assert(store_.evaluate(h, b) == fb);
        if (stats_) audit_slopes(h);
        acc = (t == 0) ? h : store_.join(acc, h);
        ++fragment_count;
      }
      e.h = acc;
    }
    edges_[i] = std::move(cur_edges);

    if (terminal_maps_) terminal_maps_->push_back(fmap);
    if (stats_) {
      ++stats_->iterations;
      stats_->total_fragments += fragment_count;
      stats_->max_iteration_fragments =
          std::max(stats_->max_iteration_fragments, fragment_count);
      if (fragment_count > 8 * (prev.size() + cur.size()))
        stats_->fragment_bound_ok = false;
    }
  }

  void audit_slopes(MountainStore::Handle h) {
    auto vs = store_.breakpoints2(h);
    assert(!vs.empty());
    assert(vs.front().x2 == h.a2 && vs.back().x2 == h.b2);
    for (std::size_t t = 0; t + 1 < vs.size(); ++t) {
      Coord dx = vs[t + 1].x2 - vs[t].x2;
      Length dy = vs[t + 1].y2 - vs[t].y2;
      assert(dx > 0);
      assert(dy == 0 || dy == dx || dy == -dx);
      (void)dx;
      (void)dy;
    }
  }

  const Instance& inst_;
  OrthoConvexStats* stats_;
  std::vector<std::map<Point2, Length>>* terminal_maps_;
  MountainStore store_;
  std::vector<std::unique_ptr<PointLocator>> locators_;
  std::vector<std::vector<EdgeFun>> edges_;  // per polygon, with f handles
};

}  // namespace

std::pair<std::vector<Point2>, std::vector<Point2>> terminals(
    const OrthoPolygon& prev, const OrthoPolygon& cur) {
  check_pair(prev, cur);
  Grid local = polygons_grid({prev, cur});
  return {portals(prev, local), portals(cur, local)};
}

std::vector<std::map<Point2, Length>> orthoconvex_terminal_values(
    const Instance& inst) {
  std::vector<std::map<Point2, Length>> maps;
  Engine engine(inst, nullptr, &maps);
  return maps;
}

TourResult solve_orthoconvex(const Instance& inst, OrthoConvexStats* stats) {
  Engine engine(inst, stats, nullptr);
  return engine.finish();
}

}  // namespace orthotour
