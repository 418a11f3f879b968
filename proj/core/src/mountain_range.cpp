#include "orthotour/mountain_range.hpp"

#include <cassert>
#include <stdexcept>

namespace orthotour {

MountainStore::MountainStore(std::uint64_t seed) : rng_(seed) {}

std::int32_t MountainStore::fresh(Coord x, Length y) {
  nodes_.push_back(Node{x, y, rng_(), -1, -1});
  return std::int32_t(nodes_.size() - 1);
}

std::int32_t MountainStore::clone(std::int32_t t, Length abs_y) {
  const Node& n = nodes_[t];
  nodes_.push_back(Node{n.x, abs_y, n.pri, n.l, n.r});
  return std::int32_t(nodes_.size() - 1);
}

std::pair<std::int32_t, std::int32_t> MountainStore::split_leq(std::int32_t t,
                                                              Length base,
                                                              Coord x0) {
  if (t < 0) return {-1, -1};
  Length abs = base + nodes_[t].dy;
  std::int32_t c = clone(t, abs);
  if (nodes_[t].x <= x0) {
    auto [a, b] = split_leq(nodes_[t].r, abs, x0);
    if (a >= 0) nodes_[a].dy -= abs;
    nodes_[c].r = a;
    return {c, b};
  }
  auto [a, b] = split_leq(nodes_[t].l, abs, x0);
  if (b >= 0) nodes_[b].dy -= abs;
  nodes_[c].l = b;
  return {a, c};
}

std::int32_t MountainStore::merge(std::int32_t a, Length base_a,
                                  std::int32_t b, Length base_b) {
  if (a < 0 && b < 0) return -1;
  if (a < 0) return clone(b, base_b + nodes_[b].dy);
  if (b < 0) return clone(a, base_a + nodes_[a].dy);
  if (nodes_[a].pri > nodes_[b].pri) {
    Length abs = base_a + nodes_[a].dy;
    std::int32_t c = clone(a, abs);
    std::int32_t r = merge(nodes_[a].r, abs, b, base_b);
    if (r >= 0) nodes_[r].dy -= abs;
    nodes_[c].r = r;
    return c;
  }
  Length abs = base_b + nodes_[b].dy;
  std::int32_t c = clone(b, abs);
  std::int32_t l = merge(a, base_a, nodes_[b].l, abs);
  if (l >= 0) nodes_[l].dy -= abs;
  nodes_[c].l = l;
  return c;
}

void MountainStore::walk(std::int32_t t, Length base,
                         std::vector<Vertex2>& out) const {
  if (t < 0) return;
  Length abs = base + nodes_[t].dy;
  walk(nodes_[t].l, abs, out);
  out.push_back({nodes_[t].x, abs});
  walk(nodes_[t].r, abs, out);
}

MountainStore::Found MountainStore::floor_vertex(std::int32_t t,
                                                 Coord x2) const {
  Found best;
  Length acc = 0;
  while (t >= 0) {
    Length abs = acc + nodes_[t].dy;
    if (nodes_[t].x <= x2) {
      best = {nodes_[t].x, abs, true};
      acc = abs;
      t = nodes_[t].r;
    } else {
      acc = abs;
      t = nodes_[t].l;
    }
  }
  return best;
}

MountainStore::Found MountainStore::ceil_vertex(std::int32_t t,
                                                Coord x2) const {
  Found best;
  Length acc = 0;
  while (t >= 0) {
    Length abs = acc + nodes_[t].dy;
    if (nodes_[t].x >= x2) {
      best = {nodes_[t].x, abs, true};
      acc = abs;
      t = nodes_[t].l;
    } else {
      acc = abs;
      t = nodes_[t].r;
    }
  }
  return best;
}

MountainStore::Found MountainStore::last_ge_line(std::int32_t t,
                                                 Length gamma2) const {
  // y - x is non-increasing in x; find the greatest vertex with y-x >= g.
  Found best;
  Length acc = 0;
  while (t >= 0) {
    Length abs = acc + nodes_[t].dy;
    if (abs - nodes_[t].x >= gamma2) {
      best = {nodes_[t].x, abs, true};
      acc = abs;
      t = nodes_[t].r;
    } else {
      acc = abs;
      t = nodes_[t].l;
    }
  }
  return best;
}

MountainStore::Found MountainStore::first_ge_line(std::int32_t t,
                                                  Length gamma2) const {
  // y + x is non-decreasing in x; find the smallest vertex with y+x >= g.
  Found best;
  Length acc = 0;
  while (t >= 0) {
    Length abs = acc + nodes_[t].dy;
    if (abs + nodes_[t].x >= gamma2) {
      best = {nodes_[t].x, abs, true};
      acc = abs;
      t = nodes_[t].l;
    } else {
      acc = abs;
      t = nodes_[t].r;
    }
  }
  return best;
}

MountainStore::Handle MountainStore::from_vertices(
    std::initializer_list<Vertex2> vs, Coord a2, Coord b2) {
  std::int32_t root = -1;
  Coord last_x = a2 - 1;
  for (const auto& v : vs) {
    if (root >= 0 && v.x2 == last_x) continue;  // dedupe equal x
    std::int32_t s = fresh(v.x2, v.y2);
    root = merge(root, 0, s, 0);
    last_x = v.x2;
  }
  return Handle{root, a2, b2};
}

MountainStore::Handle MountainStore::new_zero(Coord a, Coord b) {
  if (a > b) throw std::invalid_argument("new_zero: a > b");
  if (a == b) return from_vertices({{2 * a, 0}}, 2 * a, 2 * b);
  return from_vertices({{2 * a, 0}, {2 * b, 0}}, 2 * a, 2 * b);
}

Length MountainStore::evaluate2(Handle h, Coord x2) const {
  if (!h.valid() || x2 < h.a2 || x2 > h.b2)
    throw std::out_of_range("evaluate: x outside domain");
  Found lo = floor_vertex(h.root, x2);
  assert(lo.ok);
  if (lo.x == x2) return lo.y;
  Found hi = ceil_vertex(h.root, x2);
  assert(hi.ok && hi.x > lo.x);
  Length dy = hi.y - lo.y;
  Coord dx = hi.x - lo.x;
  assert(dy == 0 || dy == dx || dy == -dx);
  Length slope = dy == 0 ? 0 : (dy > 0 ? 1 : -1);
  return lo.y + slope * (x2 - lo.x);
}

Length MountainStore::evaluate(Handle h, Coord x) const {
  Length y2 = evaluate2(h, 2 * x);
  assert(y2 % 2 == 0);
  return y2 / 2;
}

MountainStore::Handle MountainStore::shift(Handle h, Length delta) {
  if (!h.valid()) return h;
  std::int32_t c = clone(h.root, nodes_[h.root].dy + 2 * delta);
  return Handle{c, h.a2, h.b2};
}

MountainStore::Handle MountainStore::restrict(Handle h, Coord a, Coord b) {
  Coord a2 = 2 * a, b2 = 2 * b;
  if (!h.valid() || a > b || a2 < h.a2 || b2 > h.b2)
    throw std::out_of_range("restrict: range outside domain");
  Length ya = evaluate2(h, a2);
  Length yb = evaluate2(h, b2);
  if (a2 == b2) return from_vertices({{a2, ya}}, a2, b2);
  auto [left, mid0] = split_leq(h.root, 0, a2 - 1);
  (void)left;
  std::int32_t mid = -1;
  if (mid0 >= 0) {
    auto [m, right] = split_leq(mid0, 0, b2);
    (void)right;
    mid = m;
  }
  Found first = ceil_vertex(mid, a2);
  Found last = floor_vertex(mid, b2);
  if (!first.ok || first.x > a2) {
    std::int32_t s = fresh(a2, ya);
    mid = merge(s, 0, mid, 0);
  }
  if (!last.ok || last.x < b2) {
    std::int32_t s = fresh(b2, yb);
    mid = merge(mid, 0, s, 0);
  }
  return Handle{mid, a2, b2};
}

MountainStore::Handle MountainStore::relax(Handle h, int lambda,
                                           Length gamma) {
  if (!h.valid()) return h;
  Length g2 = 2 * gamma;
  if (lambda == 1) {
    Found u = last_ge_line(h.root, g2);
    if (!u.ok) return h;  // line strictly above f everywhere
    Found v = ceil_vertex(h.root, u.x + 1);
    if (!v.ok) {
      // every vertex lies on or above the line: f becomes the line
      return from_vertices({{h.a2, h.a2 + g2}, {h.b2, h.b2 + g2}}, h.a2,
                           h.b2);
    }
    Length dy = v.y - u.y;
    Coord dx = v.x - u.x;
    Length s = dy == 0 ? 0 : (dy > 0 ? 1 : -1);
    assert(s <= 0);
    Coord xc;
    if (s == 0) {
      xc = u.y - g2;
    } else {
      assert((u.y + u.x - g2) % 2 == 0);
      xc = (u.y + u.x - g2) / 2;
    }
    (void)dx;
    assert(xc >= u.x && xc < v.x);
    auto [drop, keep] = split_leq(h.root, 0, xc);
    (void)drop;
    Handle line = from_vertices({{h.a2, h.a2 + g2}, {xc, xc + g2}}, h.a2, xc);
    std::int32_t root = merge(line.root, 0, keep, 0);
    return Handle{root, h.a2, h.b2};
  }
  if (lambda != -1) throw std::invalid_argument("relax: lambda must be +-1");
  Found u = first_ge_line(h.root, g2);
  if (!u.ok) return h;
  Found v = floor_vertex(h.root, u.x - 1);
  if (!v.ok) {
    return from_vertices({{h.a2, -h.a2 + g2}, {h.b2, -h.b2 + g2}}, h.a2,
                         h.b2);
  }
  Length dy = u.y - v.y;
  Length s = dy == 0 ? 0 : (dy > 0 ? 1 : -1);
  assert(s >= 0);
  Coord xc;
  if (s == 0) {
    xc = g2 - v.y;
  } else {
    assert((g2 - v.y + v.x) % 2 == 0);
    xc = (g2 - v.y + v.x) / 2;
  }
  assert(xc > v.x && xc <= u.x);
  auto [keep, drop] = split_leq(h.root, 0, xc - 1);
  (void)drop;
  Handle line =
      from_vertices({{xc, -xc + g2}, {h.b2, -h.b2 + g2}}, xc, h.b2);
  std::int32_t root = merge(keep, 0, line.root, 0);
  return Handle{root, h.a2, h.b2};
}

MountainStore::Handle MountainStore::join(Handle left, Handle right) {
  if (!left.valid() || !right.valid())
    throw std::invalid_argument("join: invalid handle");
  if (left.b2 != right.a2)
    throw std::invalid_argument("join: domains do not abut");
  if (evaluate2(left, left.b2) != evaluate2(right, right.a2))
    throw std::invalid_argument("join: seam values differ");
  // Drop the seam vertex from the right tree (the left tree keeps it).
  auto [seam, rest] = split_leq(right.root, 0, right.a2);
  (void)seam;
  std::int32_t root = merge(left.root, 0, rest, 0);
  return Handle{root, left.a2, right.b2};
}

std::vector<MountainStore::Vertex2> MountainStore::breakpoints2(
    Handle h) const {
  std::vector<Vertex2> out;
  walk(h.root, 0, out);
  return out;
}

std::pair<Length, Coord> MountainStore::min_over_domain(Handle h) const {
  auto vs = breakpoints2(h);
  if (vs.empty()) throw std::invalid_argument("min_over_domain: empty");
  Length m = vs.front().y2;
  for (const auto& v : vs) m = std::min(m, v.y2);
  // Find an integer argmin: an even-x vertex at the minimum, or an interior
  // even x of a flat piece at the minimum.
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (vs[i].y2 != m) continue;
    if (vs[i].x2 % 2 == 0) {
      assert(m % 2 == 0);
      return {m / 2, vs[i].x2 / 2};
    }
    if (i + 1 < vs.size() && vs[i + 1].y2 == m && vs[i + 1].x2 > vs[i].x2) {
      Coord x2 = vs[i].x2 + 1;  // odd + 1 = even, still < vs[i+1].x2
      if (x2 % 2 == 0 && x2 <= vs[i + 1].x2) {
        assert(m % 2 == 0);
        return {m / 2, x2 / 2};
      }
    }
  }
  // The DP never produces a strictly half-integer minimum; if it did, the
  // nearest integer values exceed the true minimum by 1 (doubled units).
  assert(false && "minimum not attained at an integer point");
  return {(m + 1) / 2, (vs.front().x2 + 1) / 2};
}

std::size_t MountainStore::complexity(Handle h) const {
  return breakpoints2(h).size();
}

}  // namespace orthotour
