#include "orthotour/solver_stepdisjoint.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <utility>

#include "orthotour/nn_l1.hpp"

namespace orthotour {

// ---------------------------------------------------------------------------
// Batch planning

BatchPlan plan_batches(const std::vector<std::size_t>& vertex_counts,
                       double alpha, double beta) {
  BatchPlan plan;
  plan.alpha = alpha;
  plan.beta = beta;
  std::size_t k = vertex_counts.size();
  if (k == 0) return plan;
  std::size_t n = 0;
  for (std::size_t c : vertex_counts) n += c;
  plan.total = n;
  double na = std::pow(double(n), alpha);
  double nb = std::pow(double(n), beta);
  auto blue = [&](std::size_t i) { return double(vertex_counts[i - 1]) <= na; };

  // Maximal red (heavy-polygon) blocks with more than n^beta vertices are
  // dark; they end up strictly inside dense batches.
  std::vector<char> dark(k + 1, 0);
  for (std::size_t i = 1; i <= k;) {
    if (blue(i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    double sum = 0;
    while (j <= k && !blue(j)) sum += double(vertex_counts[j++ - 1]);
    if (sum > nb)
      for (std::size_t t = i; t < j; ++t) dark[t] = 1;
    i = j;
  }

  // Within each dark-free segment, mark its blue ends next to dark blocks
  // and cut with a running vertex sum; every delimiter is blue.
  std::set<std::size_t> marks;
  for (std::size_t i = 1; i <= k;) {
    if (dark[i]) {
      ++i;
      continue;
    }
    std::size_t s = i, e = i;
    while (e + 1 <= k && !dark[e + 1]) ++e;
    if (s > 1) marks.insert(s);
    if (e < k) marks.insert(e);
    double run = 0;
    for (std::size_t t = s; t <= e; ++t) {
      run += double(vertex_counts[t - 1]);
      if (run > nb && blue(t)) {
        marks.insert(t);
        run = 0;
      }
    }
    i = e + 1;
  }

  plan.delimiters.assign(marks.begin(), marks.end());
  std::size_t prev = 1;
  for (std::size_t d : plan.delimiters) {
    plan.batches.push_back({prev, d, true});
    prev = d;
  }
  plan.batches.push_back({prev, k, true});
  for (auto& bt : plan.batches) {
    double sum = 0;
    for (std::size_t i = bt.a; i <= bt.b; ++i)
      sum += double(vertex_counts[i - 1]);
    bt.sparse = sum <= 3 * nb;
  }
  return plan;
}

// ---------------------------------------------------------------------------
// Rectangle partition

RectPartition build_rect_partition(std::vector<Point2> vertices) {
  RectPartition rp;
  if (vertices.empty()) {
    rp.rects.push_back({0, 0, 0, 0});
    return rp;
  }
  Coord lox = vertices[0].x, hix = vertices[0].x;
  Coord loy = vertices[0].y, hiy = vertices[0].y;
  for (Point2 p : vertices) {
    lox = std::min(lox, p.x);
    hix = std::max(hix, p.x);
    loy = std::min(loy, p.y);
    hiy = std::max(hiy, p.y);
  }
  Coord w = std::max({hix - lox, hiy - loy, Coord(1)});
  Rect root{lox - w, loy - w, hix + w, hiy + w};

  struct Task {
    Rect r;
    std::vector<Point2> pts;
    bool by_x;
  };
  std::vector<Task> stack;
  stack.push_back({root, std::move(vertices), true});
  while (!stack.empty()) {
    Task t = std::move(stack.back());
    stack.pop_back();
    if (t.pts.empty()) {
      rp.rects.push_back(t.r);
      continue;
    }
    auto key = [&](Point2 p) {
      return t.by_x ? std::pair{p.x, p.y} : std::pair{p.y, p.x};
    };
    auto cmp = [&](Point2 p, Point2 q) { return key(p) < key(q); };
    std::size_t mid = (t.pts.size() - 1) / 2;
    std::nth_element(t.pts.begin(), t.pts.begin() + mid, t.pts.end(), cmp);
    Point2 m = t.pts[mid];
    // the median point itself is consumed; duplicates go left
    std::vector<Point2> left, right;
    for (std::size_t s = 0; s < t.pts.size(); ++s) {
      if (s == mid) continue;
      if (cmp(m, t.pts[s]))
        right.push_back(t.pts[s]);
      else
        left.push_back(t.pts[s]);
    }
    Rect rl = t.r, rr = t.r;
    if (t.by_x)
      rl.x2 = rr.x1 = m.x;
    else
      rl.y2 = rr.y1 = m.y;
    stack.push_back({rl, std::move(left), !t.by_x});
    stack.push_back({rr, std::move(right), !t.by_x});
  }
  return rp;
}

// ---------------------------------------------------------------------------
// Multi-source sweeps

SweepResult sweep_all(
    const SweepGraph& g,
    const std::vector<std::pair<std::size_t, Length>>& facilities) {
  SweepResult r;
  r.dist.assign(g.size(), kInf);
  r.parent.assign(g.size(), SIZE_MAX);
  using QItem = std::pair<Length, std::size_t>;
  std::priority_queue<QItem, std::vector<QItem>, std::greater<>> pq;
  for (auto [v, w] : facilities) {
    if (w >= kInf) continue;
    if (w < r.dist[v]) {
      r.dist[v] = w;
      pq.push({w, v});
    }
  }
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d != r.dist[u]) continue;
    for (auto [v, w] : g.adj[u]) {
      Length nd = sat_add(d, w);
      if (nd < r.dist[v]) {
        r.dist[v] = nd;
        r.parent[v] = u;
        pq.push({nd, v});
      }
    }
  }
  return r;
}

std::vector<Length> sweep_min_dist(
    const SweepGraph& g,
    const std::vector<std::pair<std::size_t, Length>>& facilities,
    const std::vector<std::size_t>& queries) {
  SweepResult r = sweep_all(g, facilities);
  std::vector<Length> out;
  out.reserve(queries.size());
  for (std::size_t q : queries) out.push_back(r.dist[q]);
  return out;
}

namespace {

using Intervals = std::vector<std::pair<Coord, Coord>>;  // sorted, disjoint

bool covers(const Intervals& iv, Coord x) {
  auto it = std::upper_bound(
      iv.begin(), iv.end(),
      std::pair{x, std::numeric_limits<Coord>::max()});
  if (it == iv.begin()) return false;
  --it;
  return it->first <= x && x <= it->second;
}

// ---------------------------------------------------------------------------
// Layered 1-D interval touring: starting from a weighted source coordinate,
// touch the interval unions of each step in order, end at a target
// coordinate. Skip arcs jump to the first later step not already covering
// the current position, so steps passed over in place cost nothing.

struct Tour1d {
  std::size_t m = 0;                    // number of steps
  std::vector<std::vector<Coord>> lc;   // coords per layer 0..m+1
  std::vector<std::size_t> base;        // node id offset per layer
  SweepGraph g;
  SweepResult res;

  std::size_t node(std::size_t layer, Coord c) const {
    const auto& v = lc[layer];
    auto it = std::lower_bound(v.begin(), v.end(), c);
    assert(it != v.end() && *it == c);
    return base[layer] + std::size_t(it - v.begin());
  }
  std::size_t layer_of(std::size_t id) const {
    auto it = std::upper_bound(base.begin(), base.end(), id);
    return std::size_t(it - base.begin()) - 1;
  }
  Coord coord_of(std::size_t id) const {
    std::size_t l = layer_of(id);
    return lc[l][id - base[l]];
  }
  Length at(Coord target) const { return res.dist[node(m + 1, target)]; }
};

Tour1d tour_1d(const std::vector<Intervals>& steps,
               const std::vector<std::pair<Coord, Length>>& sources,
               const std::vector<Coord>& targets) {
  Tour1d T;
  T.m = steps.size();
  T.lc.assign(T.m + 2, {});
  for (auto [c, w] : sources) T.lc[0].push_back(c);
  for (std::size_t s = 0; s < T.m; ++s)
    for (auto [lo, hi] : steps[s]) {
      T.lc[s + 1].push_back(lo);
      T.lc[s + 1].push_back(hi);
    }
  T.lc[T.m + 1] = targets;
  std::size_t total = 0;
  T.base.assign(T.m + 2, 0);
  for (std::size_t l = 0; l < T.lc.size(); ++l) {
    auto& v = T.lc[l];
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    T.base[l] = total;
    total += v.size();
  }
  T.g.adj.assign(total, {});
  for (std::size_t l = 0; l < T.lc.size(); ++l)
    for (std::size_t s = 0; s + 1 < T.lc[l].size(); ++s)
      T.g.add_edge(T.base[l] + s, T.base[l] + s + 1,
                   T.lc[l][s + 1] - T.lc[l][s]);
  for (std::size_t l = 0; l <= T.m; ++l)
    for (Coord x : T.lc[l]) {
      std::size_t l2 = l + 1;
      while (l2 <= T.m && covers(steps[l2 - 1], x)) ++l2;
      const auto& tv = T.lc[l2];
      if (tv.empty()) continue;
      std::size_t u = T.node(l, x);
      auto it = std::lower_bound(tv.begin(), tv.end(), x);
      if (it != tv.end())
        T.g.add_arc(u, T.base[l2] + std::size_t(it - tv.begin()), *it - x);
      if (it != tv.begin())
        T.g.add_arc(u, T.base[l2] + std::size_t(it - tv.begin()) - 1,
                    x - *(it - 1));
    }
  std::vector<std::pair<std::size_t, Length>> fac;
  for (auto [c, w] : sources) fac.push_back({T.node(0, c), w});
  T.res = sweep_all(T.g, fac);
  return T;
}

struct Tour1dPath {
  Coord source = 0;
  std::vector<Coord> pos;  // touch position per step
};

Tour1dPath tour_path(const Tour1d& T, Coord target) {
  std::size_t v = T.node(T.m + 1, target);
  assert(T.res.dist[v] < kInf);
  std::vector<std::size_t> chain;
  for (std::size_t u = v; u != SIZE_MAX; u = T.res.parent[u])
    chain.push_back(u);
  std::reverse(chain.begin(), chain.end());
  assert(T.layer_of(chain.front()) == 0);
  Tour1dPath P;
  P.source = T.coord_of(chain.front());
  P.pos.assign(T.m, 0);
  for (std::size_t s = 0; s + 1 < chain.size(); ++s) {
    std::size_t lu = T.layer_of(chain[s]), lw = T.layer_of(chain[s + 1]);
    if (lw <= lu) continue;  // intra-layer move
    Coord cu = T.coord_of(chain[s]), cw = T.coord_of(chain[s + 1]);
    std::size_t last = (lw <= T.m) ? lw - 1 : T.m;
    for (std::size_t t = lu + 1; t <= last; ++t) P.pos[t - 1] = cu;
    if (lw <= T.m) P.pos[lw - 1] = cw;
  }
  return P;
}

Point2 tp(Point2 p) { return {p.y, p.x}; }

OrthoPolygon transpose_poly(const OrthoPolygon& p) {
  OrthoPolygon t;
  t.vertices.reserve(p.size());
  for (auto it = p.vertices.rbegin(); it != p.vertices.rend(); ++it)
    t.vertices.push_back({it->y, it->x});
  return t;
}

// ---------------------------------------------------------------------------
// Sparse batch: the value map advances by the minimum of a terminal DP
// (tours that touch a terminal of every intermediate boundary) and
// horizontal/vertical sweeps (tours that finish on one axis line).

class SparseEngine {
 public:
  SparseEngine(const std::vector<OrthoPolygon>& polys, std::size_t a,
               std::size_t b, PortalMap fa)
      : a_(a), b_(b), fa_(std::move(fa)) {
    port_b_ = portals(b - 1, polys);
    if (a == b) {
      result_ = fa_;
      return;
    }
    std::size_t L = b - a + 1;
    slice_[0].assign(polys.begin() + std::ptrdiff_t(a - 1),
                     polys.begin() + std::ptrdiff_t(b));
    for (const auto& p : slice_[0]) slice_[1].push_back(transpose_poly(p));
    for (int o = 0; o < 2; ++o) {
      for (const auto& p : slice_[o])
        locs_[o].push_back(std::make_unique<PointLocator>(p));
      for (const auto& p : slice_[o])
        for (Coord x : p.x_coords()) xbase_[o].push_back(x);
      std::sort(xbase_[o].begin(), xbase_[o].end());
      xbase_[o].erase(std::unique(xbase_[o].begin(), xbase_[o].end()),
                      xbase_[o].end());
    }
    for (const auto& [p, v] : fa_) fa_t_[tp(p)] = v;

    // type 1: DP over the terminals of the batch-local grid
    Grid local = polygons_grid(slice_[0]);
    terms_.resize(L - 1);
    f1_.resize(L - 1);
    par1_.resize(L - 1);
    for (std::size_t s = 0; s + 1 < L; ++s)
      terms_[s] = portals(slice_[0][s], local);
    for (Point2 q : terms_[0]) {
      auto it = fa_.find(q);
      assert(it != fa_.end());
      f1_[0][q] = it->second;
    }
    for (std::size_t s = 1; s + 1 < L; ++s) {
      NnIndex nn(sites_of(f1_[s - 1]));
      for (Point2 q : terms_[s]) {
        auto ans = nn.query(q);
        f1_[s][q] = ans.value;
        par1_[s][q] = ans.site;
      }
    }
    {
      NnIndex nn(sites_of(f1_[L - 2]));
      for (Point2 q : port_b_) {
        auto ans = nn.query(q);
        val1_[q] = ans.value;
        parf_[q] = ans.site;
      }
    }
    // types 2 and 3: straight-line sweeps, one layered graph per line
    axis_values(0, val2_);
    axis_values(1, val3_);
    for (Point2 q : port_b_) {
      Length v = std::min({val1_.at(q), val2_.at(q), val3_.at(q)});
      assert(v < kInf);
      result_[q] = v;
    }
  }

  const PortalMap& result() const { return result_; }

  // Visit points for indices a..b; front() is the entry point on P_a.
  std::vector<Point2> backtrack(Point2 p) const {
    if (a_ == b_) {
      assert(fa_.count(p));
      return {p};
    }
    std::size_t L = b_ - a_ + 1;
    std::vector<Point2> pts(L);
    pts[L - 1] = p;
    Length v = result_.at(p);
    if (val1_.at(p) == v) {
      Point2 q = parf_.at(p);
      for (std::size_t s = L - 2; s >= 1; --s) {
        pts[s] = q;
        q = par1_[s].at(q);
      }
      pts[0] = q;
    } else if (val2_.at(p) == v) {
      axis_path(0, p, pts);
    } else {
      assert(val3_.at(p) == v);
      axis_path(1, p, pts);
    }
    return pts;
  }

 private:
  static std::vector<WeightedSite> sites_of(const PortalMap& m) {
    std::vector<WeightedSite> s;
    s.reserve(m.size());
    for (const auto& [p, v] : m) s.push_back({p, v});
    return s;
  }

  struct Line {
    std::vector<Coord> xs;
    std::size_t L = 0;
    SweepGraph g;
    SweepResult res;
    std::size_t node(std::size_t t, Coord x) const {
      auto it = std::lower_bound(xs.begin(), xs.end(), x);
      assert(it != xs.end() && *it == x);
      return t * xs.size() + std::size_t(it - xs.begin());
    }
  };

  // Layered graph on one horizontal line of orientation o: layer per
  // polygon, zero-cost advance where the line meets the polygon, weighted
  // sources where the value map lives on the line.
  Line build_line(int o, Coord y, const std::vector<Coord>& qxs) const {
    Line ln;
    ln.L = b_ - a_ + 1;
    ln.xs = xbase_[o];
    ln.xs.insert(ln.xs.end(), qxs.begin(), qxs.end());
    std::sort(ln.xs.begin(), ln.xs.end());
    ln.xs.erase(std::unique(ln.xs.begin(), ln.xs.end()), ln.xs.end());
    std::size_t W = ln.xs.size();
    ln.g.adj.assign(ln.L * W, {});
    for (std::size_t t = 0; t < ln.L; ++t)
      for (std::size_t s = 0; s + 1 < W; ++s)
        ln.g.add_edge(t * W + s, t * W + s + 1, ln.xs[s + 1] - ln.xs[s]);
    for (std::size_t t = 0; t + 1 < ln.L; ++t)
      for (std::size_t s = 0; s < W; ++s)
        if (locs_[o][t]->contains({ln.xs[s], y}))
          ln.g.add_arc(t * W + s, (t + 1) * W + s, 0);
    const PortalMap& fa = (o == 0) ? fa_ : fa_t_;
    std::vector<std::pair<std::size_t, Length>> fac;
    for (std::size_t s = 0; s < W; ++s) {
      auto it = fa.find({ln.xs[s], y});
      if (it != fa.end()) fac.push_back({s, it->second});
    }
    ln.res = sweep_all(ln.g, fac);
    return ln;
  }

  std::map<Coord, std::vector<Coord>> query_lines(int o) const {
    std::map<Coord, std::vector<Coord>> by_y;
    for (Point2 q : port_b_) {
      Point2 r = (o == 0) ? q : tp(q);
      by_y[r.y].push_back(r.x);
    }
    return by_y;
  }

  void axis_values(int o, std::map<Point2, Length>& out) {
    for (const auto& [y, qxs] : query_lines(o)) {
      Line ln = build_line(o, y, qxs);
      for (Coord x : qxs) {
        Point2 orig = (o == 0) ? Point2{x, y} : Point2{y, x};
        out[orig] = ln.res.dist[ln.node(ln.L - 1, x)];
      }
    }
  }

  void axis_path(int o, Point2 p, std::vector<Point2>& pts) const {
    Point2 q = (o == 0) ? p : tp(p);
    auto by_y = query_lines(o);
    Line ln = build_line(o, q.y, by_y.at(q.y));
    std::size_t v = ln.node(ln.L - 1, q.x);
    assert(ln.res.dist[v] == result_.at(p));
    std::vector<std::size_t> chain;
    for (std::size_t u = v; u != SIZE_MAX; u = ln.res.parent[u])
      chain.push_back(u);
    std::reverse(chain.begin(), chain.end());
    std::size_t W = ln.xs.size();
    assert(chain.front() < W);  // starts at a source in layer 0
    Point2 anchor{ln.xs[chain.front()], q.y};
    pts[0] = (o == 0) ? anchor : tp(anchor);
    for (std::size_t s = 0; s + 1 < chain.size(); ++s) {
      std::size_t tu = chain[s] / W, tw = chain[s + 1] / W;
      if (tw != tu + 1) continue;
      // zero-cost advance out of layer tu = visit of polygon a + tu
      if (tu >= 1 && tu + 1 < ln.L) {
        Point2 pt{ln.xs[chain[s] % W], q.y};
        pts[tu] = (o == 0) ? pt : tp(pt);
      }
    }
  }

  std::size_t a_, b_;
  PortalMap fa_, fa_t_;
  std::vector<Point2> port_b_;
  std::vector<OrthoPolygon> slice_[2];  // [1] is the transposed copy
  std::vector<std::unique_ptr<PointLocator>> locs_[2];
  std::vector<Coord> xbase_[2];
  std::vector<std::vector<Point2>> terms_;
  std::vector<PortalMap> f1_;
  std::vector<std::map<Point2, Point2>> par1_;
  std::map<Point2, Length> val1_, val2_, val3_;
  std::map<Point2, Point2> parf_;
  PortalMap result_;
};

// ---------------------------------------------------------------------------
// Dense batch: values live on the hubs of the rectangle partition. Each
// round alternates progression candidates (a run of polygons touched inside
// one rectangle, horizontal and vertical movement priced independently),
// a membership shortcut for hubs inside the round's polygon, and a
// nearest-neighbor teleport closure over all hubs.

class DenseEngine {
 public:
  DenseEngine(const std::vector<OrthoPolygon>& polys, std::size_t a,
              std::size_t b, PortalMap fa, const RectPartition& rp)
      : a_(a), b_(b), span_(b - a + 1), fa_(std::move(fa)) {
    assert(b > a);
    slice_.assign(polys.begin() + std::ptrdiff_t(a - 1),
                  polys.begin() + std::ptrdiff_t(b));
    for (const auto& p : slice_)
      locs_.push_back(std::make_unique<PointLocator>(p));
    grid_ = polygons_grid(polys);
    port_b_ = portals(b - 1, polys);
    build_rects(rp);
    assert(!hubs_.empty());
    f_.assign(span_, std::vector<Length>(hubs_.size(), kInf));
    fprov_.assign(span_, std::vector<Prov>(hubs_.size()));
    wprov_.assign(span_, std::vector<Prov>(hubs_.size()));
    wval_.assign(span_, std::vector<Length>(hubs_.size(), kInf));
    init_round();
    for (std::size_t j = a_ + 1; j <= b_; ++j) round(j);
    project();
  }

  const PortalMap& result() const { return result_; }
  std::size_t hub_count() const { return hubs_.size(); }

  std::vector<Point2> backtrack(Point2 p) const {
    std::vector<Point2> pts(span_);
    std::vector<char> have(span_, 0);
    auto put = [&](std::size_t idx, Point2 q) {
      if (!have[idx - a_]) {
        pts[idx - a_] = q;
        have[idx - a_] = 1;
      }
    };
    put(b_, p);
    const Prov& pr = pprov_.at(p);
    if (pr.kind == Prov::kTeleport) {
      expand_hub(b_, hub_id_.at(pr.site), put);
    } else {
      auto cont = expand_prog(b_, pr, p, projv_.at(p), put);
      if (cont) expand_hub(cont->first, cont->second, put);
    }
    for (char h : have) {
      assert(h);
      (void)h;
    }
    return pts;
  }

 private:
  enum Axis : int { kNoneAx, kVert, kHorz };

  struct Prov {
    enum Kind : int { kNothing, kInit, kTeleport, kMember, kProg, kProgA };
    Kind kind = kNothing;
    Point2 site{};         // init portal / teleport or member hub
    std::size_t rect = 0;  // progression fields
    std::size_t i = 0;     // run start (absolute index)
    std::size_t edge = 0;  // 0 left, 1 right, 2 bottom, 3 top
    Coord x0 = 0;          // source column of a portal-anchored run
  };

  struct RectInfo {
    Rect r;
    std::vector<std::size_t> hubs;
    std::vector<std::size_t> edge_hubs[4];
    std::vector<Axis> axis;    // per batch offset
    std::vector<Intervals> iv; // x-intervals (kVert) or y-intervals (kHorz)
    std::map<Coord, std::vector<std::pair<Coord, Length>>> porta;  // by x
    std::vector<Point2> portb;
  };

  static std::vector<Coord> sample2(const std::vector<Coord>& cs, Coord lo,
                                    Coord hi) {
    std::vector<Coord> base{lo, hi};
    for (Coord c : cs)
      if (lo < c && c < hi) base.push_back(c);
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());
    std::vector<Coord> out;
    for (std::size_t s = 0; s < base.size(); ++s) {
      out.push_back(2 * base[s]);
      if (s + 1 < base.size()) out.push_back(2 * base[s] + 1);
    }
    return out;
  }

  static Intervals runs(const std::vector<Coord>& ss2,
                        const std::vector<char>& full, Coord lo, Coord hi) {
    Intervals out;
    std::size_t s = 0;
    while (s < ss2.size()) {
      if (!full[s]) {
        ++s;
        continue;
      }
      std::size_t e = s;
      while (e + 1 < ss2.size() && full[e + 1]) ++e;
      Coord c1 = ss2[s], c2 = ss2[e];
      assert((c1 & 1) == 0 && (c2 & 1) == 0);
      // drop zero-width touches pinned to the rectangle boundary
      if (!(c1 == c2 && (c1 == 2 * lo || c1 == 2 * hi)))
        out.push_back({c1 / 2, c2 / 2});
      s = e + 1;
    }
    return out;
  }

  // Classify the polygon's trace inside the rectangle. With no vertex in
  // the open rectangle, any interior intersection is a set of full-height
  // vertical stripes or full-width horizontal stripes; boundary-only
  // contact is treated as empty (those visits happen at hubs).
  static std::pair<Axis, Intervals> classify(const Rect& r,
                                             const OrthoPolygon& poly) {
    if (r.x1 >= r.x2 || r.y1 >= r.y2) return {kNoneAx, {}};
    auto [blo, bhi] = poly.bbox();
    if (blo.x >= r.x2 || bhi.x <= r.x1 || blo.y >= r.y2 || bhi.y <= r.y1)
      return {kNoneAx, {}};
    auto xs2 = sample2(poly.x_coords(), r.x1, r.x2);
    auto ys2 = sample2(poly.y_coords(), r.y1, r.y2);
    std::size_t nx = xs2.size(), ny = ys2.size();
    std::vector<char> in(nx * ny);
    for (std::size_t ix = 0; ix < nx; ++ix)
      for (std::size_t iy = 0; iy < ny; ++iy)
        in[ix * ny + iy] = contains_doubled(poly, xs2[ix], ys2[iy]);
    std::vector<char> col_full(nx, 1), row_full(ny, 1);
    std::vector<char> col_any(nx, 0), row_any(ny, 0);
    for (std::size_t ix = 0; ix < nx; ++ix)
      for (std::size_t iy = 1; iy + 1 < ny; ++iy) {
        if (in[ix * ny + iy])
          col_any[ix] = 1;
        else
          col_full[ix] = 0;
      }
    for (std::size_t iy = 0; iy < ny; ++iy)
      for (std::size_t ix = 1; ix + 1 < nx; ++ix) {
        if (in[ix * ny + iy])
          row_any[iy] = 1;
        else
          row_full[iy] = 0;
      }
    bool vok = true, vany = false, hok = true, hany = false;
    for (std::size_t ix = 1; ix + 1 < nx; ++ix) {
      if (col_any[ix] && !col_full[ix]) vok = false;
      if (col_full[ix]) vany = true;
    }
    for (std::size_t iy = 1; iy + 1 < ny; ++iy) {
      if (row_any[iy] && !row_full[iy]) hok = false;
      if (row_full[iy]) hany = true;
    }
    if (vok && vany) return {kVert, runs(xs2, col_full, r.x1, r.x2)};
    if (hok && hany) return {kHorz, runs(ys2, row_full, r.y1, r.y2)};
    assert(!vany && !hany && "stripe structure violated");
    return {kNoneAx, {}};
  }

  static bool in_sorted(const std::vector<Coord>& v, Coord c) {
    auto it = std::lower_bound(v.begin(), v.end(), c);
    return it != v.end() && *it == c;
  }

  void build_rects(const RectPartition& rp) {
    for (const Rect& r : rp.rects) {
      RectInfo ri;
      ri.r = r;
      std::set<Point2> pts;
      auto scan = [&](const std::vector<Coord>& line, Coord fixc, Coord lo,
                      Coord hi, bool vertical) {
        if (!in_sorted(line, fixc)) return;
        const auto& varc = vertical ? grid_.ys : grid_.xs;
        auto it = std::lower_bound(varc.begin(), varc.end(), lo);
        for (; it != varc.end() && *it <= hi; ++it)
          pts.insert(vertical ? Point2{fixc, *it} : Point2{*it, fixc});
      };
      scan(grid_.xs, r.x1, r.y1, r.y2, true);
      scan(grid_.xs, r.x2, r.y1, r.y2, true);
      scan(grid_.ys, r.y1, r.x1, r.x2, false);
      scan(grid_.ys, r.y2, r.x1, r.x2, false);
      for (Point2 p : pts) {
        auto [it, fresh] = hub_id_.try_emplace(p, hubs_.size());
        if (fresh) hubs_.push_back(p);
        ri.hubs.push_back(it->second);
        if (p.x == r.x1) ri.edge_hubs[0].push_back(it->second);
        if (p.x == r.x2) ri.edge_hubs[1].push_back(it->second);
        if (p.y == r.y1) ri.edge_hubs[2].push_back(it->second);
        if (p.y == r.y2) ri.edge_hubs[3].push_back(it->second);
      }
      ri.axis.resize(span_);
      ri.iv.resize(span_);
      for (std::size_t t = 0; t < span_; ++t)
        std::tie(ri.axis[t], ri.iv[t]) = classify(r, slice_[t]);
      for (const auto& [p, v] : fa_)
        if (r.contains(p)) ri.porta[p.x].push_back({p.y, v});
      for (Point2 p : port_b_)
        if (r.contains(p)) ri.portb.push_back(p);
      rects_.push_back(std::move(ri));
    }
  }

  void init_round() {
    std::vector<WeightedSite> sites;
    for (const auto& [p, v] : fa_) sites.push_back({p, v});
    NnIndex nn(std::move(sites));
    for (std::size_t h = 0; h < hubs_.size(); ++h) {
      auto ans = nn.query(hubs_[h]);
      assert(ans.value < kInf);
      f_[0][h] = ans.value;
      fprov_[0][h] = {Prov::kInit, ans.site, 0, 0, 0, 0};
    }
  }

  void targets_for(const RectInfo& R, std::size_t j, std::vector<Coord>& txs,
                   std::vector<Coord>& tys) const {
    for (std::size_t h : R.hubs) {
      txs.push_back(hubs_[h].x);
      tys.push_back(hubs_[h].y);
    }
    if (j == b_)
      for (Point2 p : R.portb) {
        txs.push_back(p.x);
        tys.push_back(p.y);
      }
  }

  void steps_for(const RectInfo& R, std::size_t i, std::size_t j,
                 std::vector<Intervals>& hsteps,
                 std::vector<Intervals>& vsteps) const {
    for (std::size_t t = i; t <= j; ++t) {
      if (R.axis[t - a_] == kVert)
        hsteps.push_back(R.iv[t - a_]);
      else
        vsteps.push_back(R.iv[t - a_]);
    }
  }

  // Sources for one progression: a fixed coordinate on one side, the
  // weighted prefix values on the other.
  bool prog_sources(const RectInfo& R, std::size_t i, const Prov& pr,
                    std::vector<std::pair<Coord, Length>>& hsrc,
                    std::vector<std::pair<Coord, Length>>& vsrc) const {
    if (pr.kind == Prov::kProgA) {
      hsrc.push_back({pr.x0, 0});
      vsrc = R.porta.at(pr.x0);
      return true;
    }
    std::size_t e = pr.edge;
    const auto& ehubs = R.edge_hubs[e];
    if (ehubs.empty()) return false;
    bool any = false;
    if (e < 2) {
      hsrc.push_back({e == 0 ? R.r.x1 : R.r.x2, 0});
      for (std::size_t h : ehubs) {
        Length w = f_[i - 1 - a_][h];
        if (w < kInf) {
          vsrc.push_back({hubs_[h].y, w});
          any = true;
        }
      }
    } else {
      vsrc.push_back({e == 2 ? R.r.y1 : R.r.y2, 0});
      for (std::size_t h : ehubs) {
        Length w = f_[i - 1 - a_][h];
        if (w < kInf) {
          hsrc.push_back({hubs_[h].x, w});
          any = true;
        }
      }
    }
    return any;
  }

  void round(std::size_t j) {
    std::size_t jo = j - a_;
    std::vector<Length> gv(hubs_.size(), kInf);
    std::vector<Prov> gp(hubs_.size());
    for (std::size_t ri = 0; ri < rects_.size(); ++ri) {
      const RectInfo& R = rects_[ri];
      if (R.axis[jo] == kNoneAx) continue;
      std::vector<Coord> txs, tys;
      targets_for(R, j, txs, tys);
      if (txs.empty()) continue;
      std::size_t i_lo = j;
      while (i_lo > a_ + 1 && R.axis[i_lo - 1 - a_] != kNoneAx) --i_lo;
      for (std::size_t i = j; i >= i_lo; --i) {
        std::vector<Intervals> hsteps, vsteps;
        steps_for(R, i, j, hsteps, vsteps);
        auto apply = [&](const Prov& pr) {
          std::vector<std::pair<Coord, Length>> hsrc, vsrc;
          if (!prog_sources(R, i, pr, hsrc, vsrc)) return;
          Tour1d H = tour_1d(hsteps, hsrc, txs);
          Tour1d V = tour_1d(vsteps, vsrc, tys);
          for (std::size_t h : R.hubs) {
            Length cand = sat_add(H.at(hubs_[h].x), V.at(hubs_[h].y));
            if (cand < gv[h]) {
              gv[h] = cand;
              gp[h] = pr;
            }
          }
          if (j == b_)
            for (Point2 p : R.portb) {
              Length cand = sat_add(H.at(p.x), V.at(p.y));
              auto it = projv_.find(p);
              if (it == projv_.end() || cand < it->second) {
                projv_[p] = cand;
                projp_[p] = pr;
              }
            }
        };
        for (std::size_t e = 0; e < 4; ++e)
          apply({Prov::kProg, Point2{}, ri, i, e, 0});
        if (i == a_ + 1)
          for (const auto& [x0, col] : R.porta)
            apply({Prov::kProgA, Point2{}, ri, i, 0, x0});
      }
    }
    // membership shortcut, then the teleport closure over all hubs
    for (std::size_t h = 0; h < hubs_.size(); ++h)
      if (locs_[jo]->contains(hubs_[h]) && f_[jo - 1][h] < gv[h]) {
        gv[h] = f_[jo - 1][h];
        gp[h] = {Prov::kMember, hubs_[h], 0, 0, 0, 0};
      }
    wval_[jo] = gv;
    wprov_[jo] = gp;
    std::vector<WeightedSite> sites;
    for (std::size_t h = 0; h < hubs_.size(); ++h)
      sites.push_back({hubs_[h], gv[h]});
    NnIndex nn(std::move(sites));
    for (std::size_t h = 0; h < hubs_.size(); ++h) {
      auto ans = nn.query(hubs_[h]);
      assert(ans.value < kInf);
      f_[jo][h] = ans.value;
      fprov_[jo][h] = {Prov::kTeleport, ans.site, 0, 0, 0, 0};
    }
  }

  void project() {
    std::vector<WeightedSite> sites;
    for (std::size_t h = 0; h < hubs_.size(); ++h)
      sites.push_back({hubs_[h], f_[span_ - 1][h]});
    NnIndex nn(std::move(sites));
    for (Point2 p : port_b_) {
      auto ans = nn.query(p);
      Length v = ans.value;
      Prov pr{Prov::kTeleport, ans.site, 0, 0, 0, 0};
      auto it = projv_.find(p);
      if (it != projv_.end() && it->second < v) {
        v = it->second;
        pr = projp_.at(p);
      }
      assert(v < kInf);
      result_[p] = v;
      pprov_[p] = pr;
    }
  }

  template <class Put>
  void expand_hub(std::size_t j, std::size_t h, const Put& put) const {
    while (true) {
      std::size_t jo = j - a_;
      if (j == a_) {
        const Prov& ip = fprov_[0][h];
        assert(ip.kind == Prov::kInit);
        put(a_, ip.site);
        return;
      }
      const Prov& tl = fprov_[jo][h];
      assert(tl.kind == Prov::kTeleport);
      std::size_t s = hub_id_.at(tl.site);
      const Prov& wp = wprov_[jo][s];
      if (wp.kind == Prov::kMember) {
        put(j, hubs_[s]);
        j = j - 1;
        h = s;
        continue;
      }
      auto cont = expand_prog(j, wp, hubs_[s], wval_[jo][s], put);
      if (!cont) return;
      j = cont->first;
      h = cont->second;
    }
  }

  // Re-run one progression's two sweeps with parent tracking and interleave
  // the per-axis touch positions into visit points. Returns the round and
  // hub to continue from, or nullopt when anchored at an entry portal.
  template <class Put>
  std::optional<std::pair<std::size_t, std::size_t>> expand_prog(
      std::size_t j, const Prov& pr, Point2 target, Length expect,
      const Put& put) const {
    const RectInfo& R = rects_[pr.rect];
    std::size_t i = pr.i;
    std::vector<Coord> txs, tys;
    targets_for(R, j, txs, tys);
    std::vector<Intervals> hsteps, vsteps;
    steps_for(R, i, j, hsteps, vsteps);
    std::vector<std::pair<Coord, Length>> hsrc, vsrc;
    bool ok = prog_sources(R, i, pr, hsrc, vsrc);
    assert(ok);
    (void)ok;
    Tour1d H = tour_1d(hsteps, hsrc, txs);
    Tour1d V = tour_1d(vsteps, vsrc, tys);
    assert(sat_add(H.at(target.x), V.at(target.y)) == expect);
    (void)expect;
    Tour1dPath hp = tour_path(H, target.x);
    Tour1dPath vp = tour_path(V, target.y);
    Point2 anchor;
    if (pr.kind == Prov::kProgA) {
      assert(hp.source == pr.x0);
      anchor = {pr.x0, vp.source};
    } else if (pr.edge < 2) {
      anchor = {pr.edge == 0 ? R.r.x1 : R.r.x2, vp.source};
    } else {
      anchor = {hp.source, pr.edge == 2 ? R.r.y1 : R.r.y2};
    }
    Coord cx = anchor.x, cy = anchor.y;
    std::size_t hr = 0, vr = 0;
    for (std::size_t t = i; t <= j; ++t) {
      if (R.axis[t - a_] == kVert)
        cx = hp.pos[hr++];
      else
        cy = vp.pos[vr++];
      put(t, Point2{cx, cy});
    }
    if (pr.kind == Prov::kProgA) {
      put(a_, anchor);
      return std::nullopt;
    }
    return std::make_pair(i - 1, hub_id_.at(anchor));
  }

  std::size_t a_, b_, span_;
  PortalMap fa_;
  std::vector<OrthoPolygon> slice_;
  std::vector<std::unique_ptr<PointLocator>> locs_;
  Grid grid_;
  std::vector<Point2> port_b_;
  std::vector<Point2> hubs_;
  std::map<Point2, std::size_t> hub_id_;
  std::vector<RectInfo> rects_;
  std::vector<std::vector<Length>> f_, wval_;
  std::vector<std::vector<Prov>> fprov_, wprov_;
  std::map<Point2, Length> projv_;
  std::map<Point2, Prov> projp_;
  std::map<Point2, Prov> pprov_;
  PortalMap result_;
};

}  // namespace

PortalMap process_sparse_batch(const std::vector<OrthoPolygon>& polygons,
                               std::size_t a, std::size_t b,
                               const PortalMap& fa) {
  SparseEngine eng(polygons, a, b, fa);
  return eng.result();
}

PortalMap process_dense_batch(const std::vector<OrthoPolygon>& polygons,
                              std::size_t a, std::size_t b, const PortalMap& fa,
                              const RectPartition& partition) {
  DenseEngine eng(polygons, a, b, fa, partition);
  return eng.result();
}

TourResult solve_stepdisjoint(const Instance& inst,
                              const StepDisjointOptions& opt,
                              StepDisjointStats* stats) {
  const auto& polys = inst.polygons;
  if (inst.dims != 2) throw ClassError("stepdisjoint: 2-D instances only");
  if (polys.empty()) throw ClassError("stepdisjoint: empty instance");
  for (std::size_t i = 1; i < polys.size(); ++i)
    if (!polygons_disjoint(polys[i - 1], polys[i]))
      throw ClassError("stepdisjoint: consecutive polygons are not disjoint");
  std::size_t k = polys.size();

  std::vector<std::size_t> counts;
  counts.reserve(k);
  for (const auto& p : polys) counts.push_back(p.size());
  BatchPlan plan = plan_batches(counts, opt.alpha, opt.beta);

  PortalMap f;
  for (Point2 p : portals(0, polys)) f[p] = 0;

  struct Step {
    std::unique_ptr<SparseEngine> sp;
    std::unique_ptr<DenseEngine> de;
  };
  std::vector<Step> engines;
  RectPartition rp;
  bool rp_built = false;
  if (stats) *stats = {};
  for (const auto& bt : plan.batches) {
    std::size_t nsum = 0;
    for (std::size_t i = bt.a; i <= bt.b; ++i) nsum += counts[i - 1];
    bool dense = bt.a < bt.b &&
                 (opt.force_dense || (!bt.sparse && nsum > opt.sparse_clamp));
    if (dense && !rp_built) {
      std::vector<Point2> vs;
      for (const auto& p : polys)
        vs.insert(vs.end(), p.vertices.begin(), p.vertices.end());
      rp = build_rect_partition(std::move(vs));
      rp_built = true;
      if (stats) {
        stats->rectangles = rp.rects.size();
        // Max stabbing over all axis-parallel lines by a +1/-1 event sweep
        // along each axis (a line at c meets a rect iff c is in its range).
        for (int axis = 0; axis < 2; ++axis) {
          std::map<Coord, std::int64_t> ev;
          for (const auto& r : rp.rects) {
            ev[axis == 0 ? r.x1 : r.y1] += 1;
            ev[(axis == 0 ? r.x2 : r.y2) + 1] -= 1;
          }
          std::int64_t open = 0;
          for (const auto& [c, d] : ev) {
            open += d;
            stats->stabbing =
                std::max<std::size_t>(stats->stabbing, std::size_t(open));
          }
        }
      }
    }
    Step st;
    if (dense) {
      st.de = std::make_unique<DenseEngine>(polys, bt.a, bt.b, f, rp);
      f = st.de->result();
      if (stats) {
        ++stats->dense_batches;
        stats->hubs = std::max(stats->hubs, st.de->hub_count());
      }
    } else {
      st.sp = std::make_unique<SparseEngine>(polys, bt.a, bt.b, f);
      f = st.sp->result();
      if (stats) ++stats->sparse_batches;
    }
    engines.push_back(std::move(st));
    if (stats) ++stats->batches;
  }

  Length best = kInf;
  Point2 best_pt;
  for (const auto& [p, v] : f)
    if (v < best) {
      best = v;
      best_pt = p;
    }
  assert(best < kInf);

  TourResult res;
  res.length = best;
  std::vector<Point2> pts(k);
  std::vector<char> have(k, 0);
  Point2 target = best_pt;
  for (std::size_t e = engines.size(); e-- > 0;) {
    const auto& bt = plan.batches[e];
    std::vector<Point2> seg = engines[e].sp
                                  ? engines[e].sp->backtrack(target)
                                  : engines[e].de->backtrack(target);
    assert(seg.size() == bt.b - bt.a + 1);
    for (std::size_t off = 0; off < seg.size(); ++off) {
      std::size_t idx = bt.a + off;
      if (!have[idx - 1]) {
        pts[idx - 1] = seg[off];
        have[idx - 1] = 1;
      }
    }
    target = seg.front();
  }
  for (std::size_t i = 0; i < k; ++i) {
    assert(have[i]);
    res.skeleton.entries.push_back({i + 1, pts[i]});
  }
  Length check = 0;
  assert(!validate_skeleton(inst, res.skeleton, &check));
  assert(check == res.length);
  (void)check;
  return res;
}

}  // namespace orthotour
