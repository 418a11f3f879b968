#include "orthotour/geometry.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <unordered_set>

namespace orthotour {

Length l1_dist(Point2 p, Point2 q) {
  return std::llabs(p.x - q.x) + std::llabs(p.y - q.y);
}

Length l1_dist(Point3 p, Point3 q) {
  return std::llabs(p.x - q.x) + std::llabs(p.y - q.y) + std::llabs(p.z - q.z);
}

std::vector<Coord> OrthoPolygon::x_coords() const {
  std::vector<Coord> out;
  out.reserve(vertices.size());
  for (const auto& v : vertices) out.push_back(v.x);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Coord> OrthoPolygon::y_coords() const {
  std::vector<Coord> out;
  out.reserve(vertices.size());
  for (const auto& v : vertices) out.push_back(v.y);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::pair<Point2, Point2> OrthoPolygon::bbox() const {
  Point2 lo = vertices.front(), hi = vertices.front();
  for (const auto& v : vertices) {
    lo.x = std::min(lo.x, v.x);
    lo.y = std::min(lo.y, v.y);
    hi.x = std::max(hi.x, v.x);
    hi.y = std::max(hi.y, v.y);
  }
  return {lo, hi};
}

std::int64_t OrthoPolygon::signed_area2() const {
  std::int64_t a = 0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    Point2 p = vertices[i];
    Point2 q = vertex(i + 1);
    a += p.x * q.y - q.x * p.y;
  }
  return a;
}

std::optional<OrthoPolygon> normalize_polygon(std::vector<Point2> ring) {
  // Drop consecutive duplicates.
  std::vector<Point2> r;
  for (const auto& p : ring) {
    if (r.empty() || r.back() != p) r.push_back(p);
  }
  if (r.size() >= 2 && r.front() == r.back()) r.pop_back();
  if (r.size() < 4) return std::nullopt;
  // Merge collinear consecutive edges (axis-aligned only).
  std::vector<Point2> m;
  std::size_t n = r.size();
  for (std::size_t i = 0; i < n; ++i) {
    Point2 prev = r[(i + n - 1) % n];
    Point2 cur = r[i];
    Point2 next = r[(i + 1) % n];
    bool collinear = (prev.x == cur.x && cur.x == next.x) ||
                     (prev.y == cur.y && cur.y == next.y);
    if (!collinear) m.push_back(cur);
  }
  if (m.size() < 4) return std::nullopt;
  for (std::size_t i = 0; i < m.size(); ++i) {
    Point2 p = m[i], q = m[(i + 1) % m.size()];
    if ((p.x != q.x) == (p.y != q.y)) return std::nullopt;  // diagonal or zero
  }
  OrthoPolygon poly{std::move(m)};
  if (poly.signed_area2() < 0) {
    std::reverse(poly.vertices.begin(), poly.vertices.end());
  }
  auto it = std::min_element(poly.vertices.begin(), poly.vertices.end());
  std::rotate(poly.vertices.begin(), it, poly.vertices.end());
  return poly;
}

namespace {

struct HEdge {  // horizontal segment [x1, x2] x {y}, x1 <= x2
  Coord x1, x2, y;
  int label = 0;
};
struct VEdge {  // vertical segment {x} x [y1, y2], y1 <= y2
  Coord x, y1, y2;
  int label = 0;
};

void split_edges(const OrthoPolygon& poly, std::vector<HEdge>& hs,
                 std::vector<VEdge>& vs, int label = 0) {
  for (std::size_t i = 0; i < poly.size(); ++i) {
    Point2 p = poly.vertex(i), q = poly.vertex(i + 1);
    if (p.y == q.y) {
      hs.push_back({std::min(p.x, q.x), std::max(p.x, q.x), p.y, label});
    } else {
      vs.push_back({p.x, std::min(p.y, q.y), std::max(p.y, q.y), label});
    }
  }
}

class Bit {  // Fenwick tree of counts
 public:
  explicit Bit(std::size_t n) : t_(n + 1, 0) {}
  void add(std::size_t i, int d) {
    for (++i; i < t_.size(); i += i & (~i + 1)) t_[i] += d;
  }
  int prefix(std::size_t i) const {  // count of ranks < i
    int s = 0;
    for (; i > 0; i -= i & (~i + 1)) s += t_[i];
    return s;
  }
  int range(std::size_t lo, std::size_t hi) const {  // ranks in [lo, hi]
    return prefix(hi + 1) - prefix(lo);
  }
 private:
  std::vector<int> t_;
};

// True if some vertical edge touches a horizontal edge whose open x-interval
// strictly contains the vertical's x (closed contact in y). `cross_label`
// restricts detection to pairs with differing labels; with closed_x the
// horizontal x-interval is treated as closed instead.
bool vh_contact(std::vector<HEdge> hs, std::vector<VEdge> vs, bool cross_label,
                bool closed_x) {
  std::vector<Coord> ys;
  for (const auto& h : hs) ys.push_back(h.y);
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  auto rank = [&](Coord y) {
    return std::size_t(std::lower_bound(ys.begin(), ys.end(), y) - ys.begin());
  };
  std::sort(hs.begin(), hs.end(),
            [](const HEdge& a, const HEdge& b) { return a.x1 < b.x1; });
  std::vector<std::size_t> by_end(hs.size());
  std::iota(by_end.begin(), by_end.end(), 0);
  std::sort(by_end.begin(), by_end.end(),
            [&](std::size_t a, std::size_t b) { return hs[a].x2 < hs[b].x2; });
  std::sort(vs.begin(), vs.end(),
            [](const VEdge& a, const VEdge& b) { return a.x < b.x; });

  int nlabels = cross_label ? 2 : 1;
  std::vector<Bit> bits(nlabels, Bit(ys.size()));
  std::vector<char> active(hs.size(), 0);
  std::size_t ai = 0, di = 0;
  for (const auto& v : vs) {
    // Activate horizontals whose interval has started.
    while (ai < hs.size() &&
           (closed_x ? hs[ai].x1 <= v.x : hs[ai].x1 < v.x)) {
      bits[cross_label ? hs[ai].label : 0].add(rank(hs[ai].y), 1);
      active[ai] = 1;
      ++ai;
    }
    // Deactivate those already finished.
    while (di < by_end.size() &&
           (closed_x ? hs[by_end[di]].x2 < v.x : hs[by_end[di]].x2 <= v.x)) {
      std::size_t h = by_end[di];
      if (active[h]) {
        bits[cross_label ? hs[h].label : 0].add(rank(hs[h].y), -1);
        active[h] = 0;
      }
      ++di;
    }
    auto lo = std::lower_bound(ys.begin(), ys.end(), v.y1) - ys.begin();
    auto hi = std::upper_bound(ys.begin(), ys.end(), v.y2) - ys.begin();
    if (lo >= static_cast<std::ptrdiff_t>(hi)) continue;
    int qlabel = cross_label ? 1 - v.label : 0;
    if (bits[qlabel].range(std::size_t(lo), std::size_t(hi) - 1) > 0) {
      return true;
    }
  }
  return false;
}

// True if two same-orientation edges with different labels (or any two when
// !cross_label) share a point; intervals are closed.
bool parallel_contact(std::vector<std::pair<Coord, std::pair<Coord, Coord>>> a0,
                      std::vector<int> labels, bool cross_label) {
  // entries: (line coord, (lo, hi)) with parallel label list
  std::vector<std::size_t> idx(a0.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    return a0[i] < a0[j];
  });
  for (std::size_t s = 0; s < idx.size();) {
    std::size_t e = s;
    while (e < idx.size() && a0[idx[e]].first == a0[idx[s]].first) ++e;
    Coord max_end[2] = {kInf * -1, kInf * -1};
    bool seen[2] = {false, false};
    for (std::size_t t = s; t < e; ++t) {
      auto [lo, hi] = a0[idx[t]].second;
      int lb = cross_label ? labels[idx[t]] : 0;
      int other = cross_label ? 1 - lb : 0;
      if ((seen[other] && lo <= max_end[other]) ||
          (!cross_label && seen[0] && lo <= max_end[0])) {
        return true;
      }
      seen[lb] = true;
      max_end[lb] = std::max(max_end[lb], hi);
    }
    s = e;
  }
  return false;
}

bool edges_self_intersect(const OrthoPolygon& poly) {
  std::vector<HEdge> hs;
  std::vector<VEdge> vs;
  split_edges(poly, hs, vs);
  // Same-orientation closed contact (includes shared endpoints of
  // non-adjacent edges; adjacent edges alternate orientation).
  std::vector<std::pair<Coord, std::pair<Coord, Coord>>> items;
  for (const auto& h : hs) items.push_back({h.y, {h.x1, h.x2}});
  if (parallel_contact(items, {}, false)) return true;
  items.clear();
  for (const auto& v : vs) items.push_back({v.x, {v.y1, v.y2}});
  if (parallel_contact(items, {}, false)) return true;
  // Vertical meets horizontal interior (and transposed).
  if (vh_contact(hs, vs, false, false)) return true;
  std::vector<HEdge> hs2;
  std::vector<VEdge> vs2;
  for (const auto& v : vs) hs2.push_back({v.y1, v.y2, v.x, v.label});
  for (const auto& h : hs) vs2.push_back({h.y, h.x1, h.x2, h.label});
  return vh_contact(hs2, vs2, false, false);
}

}  // namespace

std::optional<std::string> validate_polygon(const OrthoPolygon& poly) {
  const auto& v = poly.vertices;
  if (v.size() < 4) return "polygon has fewer than 4 vertices";
  if (v.size() % 2 != 0) return "orthogonal polygon needs an even vertex count";
  for (std::size_t i = 0; i < v.size(); ++i) {
    Point2 p = poly.vertex(i), q = poly.vertex(i + 1);
    if (p == q) return "zero-length edge";
    if (p.x != q.x && p.y != q.y) return "non-axis-aligned edge";
    Point2 r = poly.vertex(i + 2);
    bool e1h = (p.y == q.y);
    bool e2h = (q.y == r.y);
    if (e1h == e2h) return "consecutive edges do not alternate";
  }
  if (poly.signed_area2() <= 0) return "vertices are not in CCW order";
  if (edges_self_intersect(poly)) return "boundary is not simple";
  return std::nullopt;
}

bool on_boundary(const OrthoPolygon& poly, Point2 p) {
  for (std::size_t i = 0; i < poly.size(); ++i) {
    Point2 a = poly.vertex(i), b = poly.vertex(i + 1);
    if (a.x == b.x) {
      if (p.x == a.x && p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y))
        return true;
    } else {
      if (p.y == a.y && p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x))
        return true;
    }
  }
  return false;
}

bool contains(const OrthoPolygon& poly, Point2 p) {
  return contains_doubled(poly, 2 * p.x, 2 * p.y);
}

bool contains_doubled(const OrthoPolygon& poly, Coord px2, Coord py2) {
  // Work at doubled coordinates so half-integer queries stay integral.
  int crossings = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    Point2 a = poly.vertex(i), b = poly.vertex(i + 1);
    Coord ax = 2 * a.x, ay = 2 * a.y, bx = 2 * b.x, by = 2 * b.y;
    if (ax == bx) {
      Coord lo = std::min(ay, by), hi = std::max(ay, by);
      if (px2 == ax && py2 >= lo && py2 <= hi) return true;  // on edge
      if (lo <= py2 && py2 < hi && ax > px2) ++crossings;    // ray cast
    } else {
      Coord lo = std::min(ax, bx), hi = std::max(ax, bx);
      if (py2 == ay && px2 >= lo && px2 <= hi) return true;
    }
  }
  return crossings % 2 == 1;
}

bool Box3::contains(Point3 p) const {
  return lo.x <= p.x && p.x <= hi.x && lo.y <= p.y && p.y <= hi.y &&
         lo.z <= p.z && p.z <= hi.z;
}

bool Polytope3::contains(Point3 p) const {
  return std::any_of(boxes.begin(), boxes.end(),
                     [&](const Box3& b) { return b.contains(p); });
}

bool boxes_intersect(const Box3& a, const Box3& b) {
  return a.lo.x <= b.hi.x && b.lo.x <= a.hi.x && a.lo.y <= b.hi.y &&
         b.lo.y <= a.hi.y && a.lo.z <= b.hi.z && b.lo.z <= a.hi.z;
}

bool polytopes_disjoint(const Polytope3& a, const Polytope3& b) {
  for (const auto& ba : a.boxes)
    for (const auto& bb : b.boxes)
      if (boxes_intersect(ba, bb)) return false;
  return true;
}

std::string to_string(InstanceClass c) {
  switch (c) {
    case InstanceClass::kGeneral: return "general";
    case InstanceClass::kStepDisjoint: return "step_disjoint";
    case InstanceClass::kOrthoConvex: return "ortho_convex";
    case InstanceClass::kRectangles: return "rectangles";
  }
  return "general";
}

std::optional<InstanceClass> instance_class_from_string(const std::string& s) {
  if (s == "general") return InstanceClass::kGeneral;
  if (s == "step_disjoint") return InstanceClass::kStepDisjoint;
  if (s == "ortho_convex") return InstanceClass::kOrthoConvex;
  if (s == "rectangles") return InstanceClass::kRectangles;
  return std::nullopt;
}

std::size_t Instance::total_vertices() const {
  std::size_t n = 0;
  for (const auto& p : polygons) n += p.size();
  for (const auto& p : polytopes) n += p.boxes.size() * 8;
  return n;
}

Grid polygons_grid(const std::vector<OrthoPolygon>& polys) {
  Grid g;
  for (const auto& p : polys) {
    for (const auto& v : p.vertices) {
      g.xs.push_back(v.x);
      g.ys.push_back(v.y);
    }
  }
  auto dedup = [](std::vector<Coord>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  dedup(g.xs);
  dedup(g.ys);
  return g;
}

Grid instance_grid(const Instance& inst) {
  return polygons_grid(inst.polygons);
}

bool is_rectangle(const OrthoPolygon& poly) {
  return poly.size() == 4;
}

bool is_ortho_convex(const OrthoPolygon& poly) {
  // x-convex and y-convex iff the cyclic sequence of horizontal edge
  // directions changes sign exactly twice, and likewise for vertical.
  std::vector<int> hdir, vdir;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    Point2 p = poly.vertex(i), q = poly.vertex(i + 1);
    if (p.y == q.y) {
      hdir.push_back(q.x > p.x ? 1 : -1);
    } else {
      vdir.push_back(q.y > p.y ? 1 : -1);
    }
  }
  auto changes = [](const std::vector<int>& d) {
    int c = 0;
    for (std::size_t i = 0; i < d.size(); ++i)
      if (d[i] != d[(i + 1) % d.size()]) ++c;
    return c;
  };
  return changes(hdir) == 2 && changes(vdir) == 2;
}

bool polygons_disjoint(const OrthoPolygon& a, const OrthoPolygon& b) {
  // Closed-set test: either a vertex of one lies in the other, or the
  // boundaries touch/cross.
  PointLocator la(a), lb(b);
  for (const auto& v : a.vertices)
    if (lb.contains(v)) return false;
  for (const auto& v : b.vertices)
    if (la.contains(v)) return false;
  std::vector<HEdge> hs;
  std::vector<VEdge> vs;
  split_edges(a, hs, vs, 0);
  split_edges(b, hs, vs, 1);
  std::vector<std::pair<Coord, std::pair<Coord, Coord>>> items;
  std::vector<int> labels;
  for (const auto& h : hs) {
    items.push_back({h.y, {h.x1, h.x2}});
    labels.push_back(h.label);
  }
  if (parallel_contact(items, labels, true)) return false;
  items.clear();
  labels.clear();
  for (const auto& v : vs) {
    items.push_back({v.x, {v.y1, v.y2}});
    labels.push_back(v.label);
  }
  if (parallel_contact(items, labels, true)) return false;
  if (vh_contact(hs, vs, true, true)) return false;
  return true;
}

std::optional<std::string> validate_instance(const Instance& inst) {
  if (inst.dims == 3) {
    if (inst.polytopes.empty()) return "instance has no polytopes";
    for (const auto& p : inst.polytopes) {
      if (p.boxes.empty()) return "empty polytope";
      for (const auto& b : p.boxes) {
        if (b.lo.x > b.hi.x || b.lo.y > b.hi.y || b.lo.z > b.hi.z)
          return "inverted box";
      }
    }
    return std::nullopt;
  }
  if (inst.polygons.empty()) return "instance has no polygons";
  for (std::size_t i = 0; i < inst.polygons.size(); ++i) {
    if (auto err = validate_polygon(inst.polygons[i])) {
      return "polygon " + std::to_string(i + 1) + ": " + *err;
    }
  }
  switch (inst.declared_class) {
    case InstanceClass::kGeneral:
      break;
    case InstanceClass::kRectangles:
      for (std::size_t i = 0; i < inst.polygons.size(); ++i) {
        if (!is_rectangle(inst.polygons[i]))
          return "polygon " + std::to_string(i + 1) + " is not a rectangle";
      }
      break;
    case InstanceClass::kOrthoConvex:
      for (std::size_t i = 0; i < inst.polygons.size(); ++i) {
        if (!is_ortho_convex(inst.polygons[i]))
          return "polygon " + std::to_string(i + 1) + " is not ortho-convex";
      }
      [[fallthrough]];
    case InstanceClass::kStepDisjoint:
      for (std::size_t i = 0; i + 1 < inst.polygons.size(); ++i) {
        if (!polygons_disjoint(inst.polygons[i], inst.polygons[i + 1]))
          return "polygons " + std::to_string(i + 1) + " and " +
                 std::to_string(i + 2) + " are not disjoint";
      }
      break;
  }
  return std::nullopt;
}

std::vector<Point2> portals(const OrthoPolygon& poly, const Grid& grid) {
  std::vector<Point2> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    Point2 a = poly.vertex(i), b = poly.vertex(i + 1);
    if (a.y == b.y) {
      if (!std::binary_search(grid.ys.begin(), grid.ys.end(), a.y)) continue;
      Coord lo = std::min(a.x, b.x), hi = std::max(a.x, b.x);
      auto it = std::lower_bound(grid.xs.begin(), grid.xs.end(), lo);
      for (; it != grid.xs.end() && *it <= hi; ++it)
        out.push_back({*it, a.y});
    } else {
      if (!std::binary_search(grid.xs.begin(), grid.xs.end(), a.x)) continue;
      Coord lo = std::min(a.y, b.y), hi = std::max(a.y, b.y);
      auto it = std::lower_bound(grid.ys.begin(), grid.ys.end(), lo);
      for (; it != grid.ys.end() && *it <= hi; ++it)
        out.push_back({a.x, *it});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Point2> portals(std::size_t i,
                            const std::vector<OrthoPolygon>& polygons) {
  return portals(polygons[i], polygons_grid(polygons));
}

// --- Region -----------------------------------------------------------------

Region Region::from_predicate(std::vector<Coord> xs, std::vector<Coord> ys,
                              const std::function<bool(Coord, Coord)>& pred2) {
  Region r;
  r.xs_ = std::move(xs);
  r.ys_ = std::move(ys);
  if (r.xs_.empty() || r.ys_.empty()) return r;
  r.stride_ = 2 * r.xs_.size() - 1;
  std::size_t rows = 2 * r.ys_.size() - 1;
  r.bits_.assign(r.stride_ * rows, false);
  auto doubled = [](const std::vector<Coord>& c, std::size_t i) {
    return i % 2 == 0 ? 2 * c[i / 2] : c[(i - 1) / 2] + c[(i + 1) / 2];
  };
  for (std::size_t j = 0; j < rows; ++j) {
    Coord py2 = doubled(r.ys_, j);
    for (std::size_t i = 0; i < r.stride_; ++i) {
      bool b = pred2(doubled(r.xs_, i), py2);
      r.bits_[j * r.stride_ + i] = b;
      r.any_ = r.any_ || b;
    }
  }
  return r;
}

Region Region::from_polygon(const OrthoPolygon& poly) {
  return from_predicate(poly.x_coords(), poly.y_coords(),
                        [&](Coord px2, Coord py2) {
                          return orthotour::contains_doubled(poly, px2, py2);
                        });
}

bool Region::contains_doubled(Coord px2, Coord py2) const {
  if (bits_.empty()) return false;
  auto locate = [](const std::vector<Coord>& c, Coord v2,
                   std::size_t& idx) -> bool {
    if (v2 < 2 * c.front() || v2 > 2 * c.back()) return false;
    auto it = std::lower_bound(c.begin(), c.end(), v2,
                               [](Coord cc, Coord v) { return 2 * cc < v; });
    std::size_t a = std::size_t(it - c.begin());
    if (a < c.size() && 2 * c[a] == v2) {
      idx = 2 * a;
      return true;
    }
    if (a == 0) return false;
    idx = 2 * (a - 1) + 1;  // strictly between c[a-1] and c[a]
    return true;
  };
  std::size_t i, j;
  if (!locate(xs_, px2, i) || !locate(ys_, py2, j)) return false;
  return bit(i, j);
}

bool Region::contains(Point2 p) const {
  return contains_doubled(2 * p.x, 2 * p.y);
}

Region Region::intersection(const Region& a, const Region& b) {
  std::vector<Coord> xs = a.xs_, ys = a.ys_;
  xs.insert(xs.end(), b.xs_.begin(), b.xs_.end());
  ys.insert(ys.end(), b.ys_.begin(), b.ys_.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  return from_predicate(std::move(xs), std::move(ys),
                        [&](Coord px2, Coord py2) {
                          return a.contains_doubled(px2, py2) &&
                                 b.contains_doubled(px2, py2);
                        });
}

std::vector<OrthoPolygon> Region::to_polygons() const {
  std::vector<OrthoPolygon> out;
  if (empty()) return out;
  std::size_t cx = xs_.size() - 1, cy = ys_.size() - 1;
  // Directed boundary edges of the set cells, interior on the left.
  // Key vertices by (grid x index, grid y index).
  std::map<std::pair<std::size_t, std::size_t>,
           std::vector<std::pair<std::size_t, std::size_t>>> next;
  std::int64_t cell_area2 = 0;
  auto has_cell = [&](std::ptrdiff_t i, std::ptrdiff_t j) {
    if (i < 0 || j < 0 || i >= std::ptrdiff_t(cx) || j >= std::ptrdiff_t(cy))
      return false;
    return cell(std::size_t(i), std::size_t(j));
  };
  for (std::size_t i = 0; i < cx; ++i) {
    for (std::size_t j = 0; j < cy; ++j) {
      if (!cell(i, j)) continue;
      cell_area2 += 2 * (xs_[i + 1] - xs_[i]) * (ys_[j + 1] - ys_[j]);
      auto pi = std::ptrdiff_t(i), pj = std::ptrdiff_t(j);
      if (!has_cell(pi, pj - 1)) next[{i, j}].push_back({i + 1, j});
      if (!has_cell(pi + 1, pj)) next[{i + 1, j}].push_back({i + 1, j + 1});
      if (!has_cell(pi, pj + 1)) next[{i + 1, j + 1}].push_back({i, j + 1});
      if (!has_cell(pi - 1, pj)) next[{i, j + 1}].push_back({i, j});
    }
  }
  std::vector<std::vector<Point2>> cycles;
  std::int64_t traced_area2 = 0;
  bool holes = false;
  // At pinch vertices (diagonally touching cells) prefer the sharpest left
  // turn; with interior on the left this keeps each traced cycle simple.
  auto take = [&](std::pair<std::size_t, std::size_t> v,
                  std::pair<std::ptrdiff_t, std::ptrdiff_t> indir)
      -> std::optional<std::pair<std::size_t, std::size_t>> {
    auto it = next.find(v);
    if (it == next.end() || it->second.empty()) return std::nullopt;
    auto& outs = it->second;
    std::size_t best = 0;
    std::ptrdiff_t best_cross = -2;
    for (std::size_t t = 0; t < outs.size(); ++t) {
      std::ptrdiff_t ox = std::ptrdiff_t(outs[t].first) -
                          std::ptrdiff_t(v.first);
      std::ptrdiff_t oy = std::ptrdiff_t(outs[t].second) -
                          std::ptrdiff_t(v.second);
      std::ptrdiff_t cross = indir.first * oy - indir.second * ox;
      if (cross > best_cross) {
        best_cross = cross;
        best = t;
      }
    }
    auto n = outs[best];
    outs.erase(outs.begin() + std::ptrdiff_t(best));
    return n;
  };
  for (auto& [start, start_outs] : next) {
    while (!start_outs.empty()) {
      std::vector<Point2> cyc;
      auto cur = start;
      std::pair<std::ptrdiff_t, std::ptrdiff_t> indir{0, 0};
      for (;;) {
        cyc.push_back({xs_[cur.first], ys_[cur.second]});
        auto n = take(cur, indir);
        if (!n) break;
        indir = {std::ptrdiff_t(n->first) - std::ptrdiff_t(cur.first),
                 std::ptrdiff_t(n->second) - std::ptrdiff_t(cur.second)};
        cur = *n;
        if (cur == start) break;
      }
      auto poly = normalize_polygon(cyc);
      if (!poly) {
        holes = true;  // pinched/degenerate trace; fall back
        continue;
      }
      // Trace direction: interior-left yields CCW for outer cycles, CW for
      // holes; normalize_polygon flips CW, so detect holes by raw area.
      OrthoPolygon raw{cyc};
      if (raw.signed_area2() < 0) {
        holes = true;
      } else {
        traced_area2 += raw.signed_area2();
        cycles.push_back(std::move(poly->vertices));
      }
    }
  }
  if (!holes && traced_area2 == cell_area2) {
    for (auto& c : cycles) out.push_back(OrthoPolygon{std::move(c)});
    return out;
  }
  // Fallback: vertical column runs merged into rectangles across columns.
  struct Run {
    std::size_t y1, y2;  // grid y indices [y1, y2]
  };
  std::vector<std::vector<Run>> cols(cx);
  for (std::size_t i = 0; i < cx; ++i) {
    for (std::size_t j = 0; j < cy;) {
      if (!cell(i, j)) {
        ++j;
        continue;
      }
      std::size_t j2 = j;
      while (j2 + 1 < cy && cell(i, j2 + 1)) ++j2;
      cols[i].push_back({j, j2 + 1});
      j = j2 + 2;
    }
  }
  std::vector<std::vector<bool>> used(cx);
  for (std::size_t i = 0; i < cx; ++i) used[i].assign(cols[i].size(), false);
  for (std::size_t i = 0; i < cx; ++i) {
    for (std::size_t r = 0; r < cols[i].size(); ++r) {
      if (used[i][r]) continue;
      Run run = cols[i][r];
      std::size_t i2 = i;
      while (i2 + 1 < cx) {
        bool extended = false;
        for (std::size_t r2 = 0; r2 < cols[i2 + 1].size(); ++r2) {
          if (!used[i2 + 1][r2] && cols[i2 + 1][r2].y1 == run.y1 &&
              cols[i2 + 1][r2].y2 == run.y2) {
            used[i2 + 1][r2] = true;
            extended = true;
            break;
          }
        }
        if (!extended) break;
        ++i2;
      }
      used[i][r] = true;
      out.push_back(OrthoPolygon{{{xs_[i], ys_[run.y1]},
                                  {xs_[i2 + 1], ys_[run.y1]},
                                  {xs_[i2 + 1], ys_[run.y2]},
                                  {xs_[i], ys_[run.y2]}}});
    }
  }
  return out;
}

std::vector<OrthoPolygon> intersect(const OrthoPolygon& p,
                                    const OrthoPolygon& q) {
  auto bp = p.bbox(), bq = q.bbox();
  if (bp.second.x < bq.first.x || bq.second.x < bp.first.x ||
      bp.second.y < bq.first.y || bq.second.y < bp.first.y) {
    return {};
  }
  Region rp = Region::from_polygon(p);
  Region rq = Region::from_polygon(q);
  return Region::intersection(rp, rq).to_polygons();
}

// --- PointLocator -----------------------------------------------------------

PointLocator::Slabs PointLocator::build(const std::vector<Point2>& verts,
                                        bool transpose) {
  Slabs s;
  std::size_t n = verts.size();
  auto getx = [&](Point2 p) { return transpose ? p.y : p.x; };
  auto gety = [&](Point2 p) { return transpose ? p.x : p.y; };
  for (const auto& v : verts) s.coords.push_back(getx(v));
  std::sort(s.coords.begin(), s.coords.end());
  s.coords.erase(std::unique(s.coords.begin(), s.coords.end()),
                 s.coords.end());
  std::size_t m = s.coords.size();
  s.intervals.assign(m > 0 ? m - 1 : 0, {});
  s.edge_intervals.assign(m, {});
  auto rank = [&](Coord c) {
    return std::size_t(
        std::lower_bound(s.coords.begin(), s.coords.end(), c) -
        s.coords.begin());
  };
  // "Vertical" edges (constant x in this orientation) span slab boundaries;
  // collect per open slab the crossing edges' y, then pair them up.
  std::vector<std::vector<Coord>> crossing(s.intervals.size());
  for (std::size_t i = 0; i < n; ++i) {
    Point2 a = verts[i], b = verts[(i + 1) % n];
    if (getx(a) == getx(b)) {  // edge along boundary coord: record interval
      auto& ei = s.edge_intervals[rank(getx(a))];
      ei.push_back(std::min(gety(a), gety(b)));
      ei.push_back(std::max(gety(a), gety(b)));
    } else {
      std::size_t lo = rank(std::min(getx(a), getx(b)));
      std::size_t hi = rank(std::max(getx(a), getx(b)));
      for (std::size_t sl = lo; sl < hi; ++sl)
        crossing[sl].push_back(gety(a));
    }
  }
  for (std::size_t sl = 0; sl < crossing.size(); ++sl) {
    auto& ys = crossing[sl];
    std::sort(ys.begin(), ys.end());
    s.intervals[sl] = ys;  // pairs (ys[0],ys[1]), (ys[2],ys[3]), ...
  }
  for (auto& ei : s.edge_intervals) {
    std::sort(ei.begin(), ei.end());
    // Merge overlapping closed intervals (corner-adjacent edges of the two
    // incident slabs can abut).
    std::vector<Coord> merged;
    for (std::size_t t = 0; t + 1 < ei.size(); t += 2) {
      if (!merged.empty() && ei[t] <= merged.back()) {
        merged.back() = std::max(merged.back(), ei[t + 1]);
      } else {
        merged.push_back(ei[t]);
        merged.push_back(ei[t + 1]);
      }
    }
    ei = std::move(merged);
  }
  return s;
}

bool PointLocator::in_intervals(const std::vector<Coord>& iv, Coord v) {
  // iv holds sorted disjoint closed pairs [a,b].
  auto it = std::upper_bound(iv.begin(), iv.end(), v);
  std::size_t idx = std::size_t(it - iv.begin());
  if (idx % 2 == 1) return true;       // strictly inside some [a, b)
  return idx > 0 && iv[idx - 1] == v;  // exactly at an interval end
}

bool PointLocator::slab_contains(const Slabs& s, Coord x, Coord y) const {
  if (s.coords.empty() || x < s.coords.front() || x > s.coords.back())
    return false;
  auto it = std::lower_bound(s.coords.begin(), s.coords.end(), x);
  std::size_t idx = std::size_t(it - s.coords.begin());
  if (idx < s.coords.size() && s.coords[idx] == x) {
    // On a slab boundary: inside if on a boundary edge at this coord, or
    // inside either adjacent open slab's interval set.
    if (in_intervals(s.edge_intervals[idx], y)) return true;
    if (idx > 0 && in_intervals(s.intervals[idx - 1], y)) return true;
    if (idx < s.intervals.size() && in_intervals(s.intervals[idx], y))
      return true;
    return false;
  }
  return idx > 0 && in_intervals(s.intervals[idx - 1], y);
}

PointLocator::PointLocator(const OrthoPolygon& poly)
    : by_x_(build(poly.vertices, false)), by_y_(build(poly.vertices, true)) {}

bool PointLocator::contains(Point2 p) const {
  return slab_contains(by_x_, p.x, p.y);
}

std::optional<std::pair<Coord, Coord>> PointLocator::extent(const Slabs& s,
                                                            Coord c) {
  if (s.coords.empty() || c < s.coords.front() || c > s.coords.back())
    return std::nullopt;
  auto it = std::lower_bound(s.coords.begin(), s.coords.end(), c);
  std::size_t idx = std::size_t(it - s.coords.begin());
  Coord lo = kInf, hi = -kInf;
  auto feed = [&](const std::vector<Coord>& iv) {
    if (iv.empty()) return;
    lo = std::min(lo, iv.front());
    hi = std::max(hi, iv.back());
  };
  if (idx < s.coords.size() && s.coords[idx] == c) {
    feed(s.edge_intervals[idx]);
    if (idx > 0) feed(s.intervals[idx - 1]);
    if (idx < s.intervals.size()) feed(s.intervals[idx]);
  } else if (idx > 0) {
    feed(s.intervals[idx - 1]);
  }
  if (lo > hi) return std::nullopt;
  return std::make_pair(lo, hi);
}

std::optional<std::pair<Coord, Coord>> PointLocator::y_extent_at(
    Coord x) const {
  return extent(by_x_, x);
}

std::optional<std::pair<Coord, Coord>> PointLocator::x_extent_at(
    Coord y) const {
  return extent(by_y_, y);
}

// --- Skeletons --------------------------------------------------------------

Length Skeleton::length() const {
  Length total = 0;
  for (std::size_t i = 0; i + 1 < entries.size(); ++i)
    total += l1_dist(entries[i].point, entries[i + 1].point);
  return total;
}

Length Skeleton3::length() const {
  Length total = 0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    total += l1_dist(points[i], points[i + 1]);
  return total;
}

std::optional<SkeletonViolation> validate_skeleton(const Instance& inst,
                                                   const Skeleton& s,
                                                   Length* length_out) {
  std::size_t k = inst.polygons.size();
  if (s.entries.empty())
    return SkeletonViolation{0, 0, "skeleton is empty"};
  if (s.entries.front().index != 1)
    return SkeletonViolation{0, 0, "skeleton does not start at polygon 1"};
  for (std::size_t t = 0; t < s.entries.size(); ++t) {
    const auto& e = s.entries[t];
    if (e.index < 1 || e.index > k)
      return SkeletonViolation{t, 0, "index out of range"};
    if (t > 0 && e.index < s.entries[t - 1].index)
      return SkeletonViolation{t, 0, "indices decrease"};
    // Entry t is responsible for polygons [index, next index) (or [index, k]
    // for the last entry).
    std::size_t upto = (t + 1 < s.entries.size())
                           ? s.entries[t + 1].index - 1
                           : k;
    for (std::size_t i = e.index; i <= upto; ++i) {
      if (!contains(inst.polygons[i - 1], e.point)) {
        return SkeletonViolation{t, i, "waypoint outside polygon"};
      }
    }
  }
  if (length_out) *length_out = s.length();
  return std::nullopt;
}

std::optional<SkeletonViolation> validate_skeleton3(const Instance& inst,
                                                    const Skeleton3& s,
                                                    Length* length_out) {
  if (s.points.size() != inst.polytopes.size())
    return SkeletonViolation{0, 0, "skeleton size mismatch"};
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    if (!inst.polytopes[i].contains(s.points[i]))
      return SkeletonViolation{i, i + 1, "waypoint outside polytope"};
  }
  if (length_out) *length_out = s.length();
  return std::nullopt;
}

}  // namespace orthotour
