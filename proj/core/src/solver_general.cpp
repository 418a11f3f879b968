#include "orthotour/solver_general.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <map>
#include <stdexcept>

#include "orthotour/nn_l1.hpp"

namespace orthotour {

namespace {
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
}

IntersectionTree::IntersectionTree(const std::vector<OrthoPolygon>& polygons)
    : k_(polygons.size()) {
  if (k_ == 0) throw std::invalid_argument("IntersectionTree: empty");
  regions_.resize(4 * k_);
  build(1, 1, k_, polygons);
}

void IntersectionTree::build(std::size_t u, std::size_t lo, std::size_t hi,
                             const std::vector<OrthoPolygon>& polygons) {
  if (lo == hi) {
    regions_[u] = Region::from_polygon(polygons[lo - 1]);
    return;
  }
  std::size_t mid = (lo + hi) / 2;
  build(2 * u, lo, mid, polygons);
  build(2 * u + 1, mid + 1, hi, polygons);
  regions_[u] = Region::intersection(regions_[2 * u], regions_[2 * u + 1]);
}

bool IntersectionTree::in_polygon(std::size_t i, Point2 p) const {
  std::size_t u = 1, lo = 1, hi = k_;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (i <= mid) {
      u = 2 * u;
      hi = mid;
    } else {
      u = 2 * u + 1;
      lo = mid + 1;
    }
  }
  return regions_[u].contains(p);
}

// Precondition: p misses Q(u); returns the first leaf index in [lo, hi]
// whose polygon misses p.
std::size_t IntersectionTree::descend_first(std::size_t u, std::size_t lo,
                                            std::size_t hi, Point2 p) const {
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (!regions_[2 * u].contains(p)) {
      u = 2 * u;
      hi = mid;
    } else {
      u = 2 * u + 1;
      lo = mid + 1;
    }
  }
  return lo;
}

std::size_t IntersectionTree::descend_last(std::size_t u, std::size_t lo,
                                           std::size_t hi, Point2 p) const {
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (!regions_[2 * u + 1].contains(p)) {
      u = 2 * u + 1;
      lo = mid + 1;
    } else {
      u = 2 * u;
      hi = mid;
    }
  }
  return lo;
}

template <typename Visit>
void IntersectionTree::cover(std::size_t u, std::size_t lo, std::size_t hi,
                             std::size_t ql, std::size_t qr,
                             Visit&& visit) const {
  if (qr < lo || hi < ql) return;
  if (ql <= lo && hi <= qr) {
    visit(u, lo, hi);
    return;
  }
  std::size_t mid = (lo + hi) / 2;
  cover(2 * u, lo, mid, ql, qr, visit);
  cover(2 * u + 1, mid + 1, hi, ql, qr, visit);
}

std::size_t IntersectionTree::next(std::size_t i, Point2 p) const {
  if (i > k_) return k_ + 1;
  std::size_t found = kNone;
  cover(1, 1, k_, std::max<std::size_t>(i, 1), k_,
        [&](std::size_t u, std::size_t lo, std::size_t hi) {
          if (found != kNone) return;  // left-to-right, first hit wins
          if (!regions_[u].contains(p)) found = descend_first(u, lo, hi, p);
        });
  return found == kNone ? k_ + 1 : found;
}

std::size_t IntersectionTree::prev(std::size_t i, Point2 p) const {
  if (i < 1) return 0;
  struct Piece {
    std::size_t u, lo, hi;
  };
  std::vector<Piece> pieces;
  cover(1, 1, k_, 1, std::min(i, k_),
        [&](std::size_t u, std::size_t lo, std::size_t hi) {
          pieces.push_back({u, lo, hi});
        });
  for (auto it = pieces.rbegin(); it != pieces.rend(); ++it)
    if (!regions_[it->u].contains(p))
      return descend_last(it->u, it->lo, it->hi, p);
  return 0;
}

TourResult solve_general(const Instance& inst, const GeneralOptions& opt,
                         GeneralStats* stats) {
  const std::size_t k = inst.polygons.size();
  if (k == 0) throw std::invalid_argument("solve_general: empty instance");
  IntersectionTree tree(inst.polygons);
  Grid grid = polygons_grid(inst.polygons);

  struct PortalEntry {
    std::size_t idx;   // 1-based polygon index
    Point2 p;
    std::size_t jr;    // run start lower bound: prev(idx - 1, p) + 1
    std::size_t nx;    // next(idx, p), 0 while unknown
    Length f = kInf;   // shortest tour of P_1..P_{idx} ending at p
    std::size_t run = 1;       // run start realizing f in the skeleton
    std::size_t pred = kNone;  // winning source entry of the round-run bucket
  };
  std::vector<PortalEntry> entries;
  std::vector<std::vector<std::size_t>> by_index(k + 1);
  for (std::size_t i = 1; i <= k; ++i) {
    for (Point2 p : portals(inst.polygons[i - 1], grid)) {
      by_index[i].push_back(entries.size());
      entries.push_back({i, p, tree.prev(i - 1, p) + 1, 0});
    }
  }

  // An entry (i, p) may start its skeleton run at any round r in [jr, i]: the
  // predecessor then covers polygons up to r - 1 and p takes over from r.
  // Bucket r holds the finished entries with next == r; its nearest-neighbor
  // index is frozen once every entry of index < r is finished, which is
  // exactly when index batch r could first query it.
  struct Bucket {
    std::map<Point2, std::size_t> owner;  // site point -> best source entry
    std::optional<NnIndex> nn;
  };
  std::vector<Bucket> buckets(k + 2);
  auto emit_next = [&](std::size_t e, bool compute) {
    if (compute) {
      entries[e].nx = tree.next(entries[e].idx + 1, entries[e].p);
      assert(entries[e].nx > entries[e].idx);
    }
    if (entries[e].f >= kInf) return;
    auto& owner = buckets[entries[e].nx].owner;
    auto [it, inserted] = owner.try_emplace(entries[e].p, e);
    if (!inserted && entries[e].f < entries[it->second].f) it->second = e;
  };
  if (opt.precompute_next)
    for (std::size_t e = 0; e < entries.size(); ++e)
      entries[e].nx = tree.next(entries[e].idx + 1, entries[e].p);
  std::size_t bucket_total = 0;
  auto freeze_bucket = [&](std::size_t r) {
    auto& b = buckets[r];
    if (b.owner.empty()) return;
    std::vector<WeightedSite> sites;
    for (const auto& [p, e] : b.owner) sites.push_back({p, entries[e].f});
    b.nn.emplace(std::move(sites));
  };

  for (std::size_t c = 1; c <= k; ++c) {
    freeze_bucket(c);
    for (std::size_t e : by_index[c]) {
      auto& en = entries[e];
      if (en.jr == 1) {
        en.f = 0;
        en.run = 1;
      } else {
        for (std::size_t r = en.jr; r <= c; ++r) {
          if (!buckets[r].nn) continue;
          auto ans = buckets[r].nn->query(en.p);
          if (ans.value < en.f) {
            en.f = ans.value;
            en.run = r;
            en.pred = buckets[r].owner.at(ans.site);
          }
        }
      }
      emit_next(e, !opt.precompute_next);
      ++bucket_total;
    }
  }
  // every portal lands in exactly one source bucket by its next value
  assert(bucket_total == entries.size());

  std::size_t best = kNone;
  for (const auto& [p, e] : buckets[k + 1].owner)
    if (best == kNone || entries[e].f < entries[best].f ||
        (entries[e].f == entries[best].f &&
         std::pair(entries[e].p, entries[e].idx) <
             std::pair(entries[best].p, entries[best].idx)))
      best = e;
  assert(best != kNone && entries[best].f < kInf);

  TourResult res;
  res.length = entries[best].f;
  std::vector<std::size_t> chain;
  for (std::size_t e = best; e != kNone; e = entries[e].pred)
    chain.push_back(e);
  std::reverse(chain.begin(), chain.end());
  for (std::size_t e : chain)
    res.skeleton.entries.push_back({entries[e].run, entries[e].p});
  Length check = 0;
  assert(!validate_skeleton(inst, res.skeleton, &check));
  assert(check == res.length);
  (void)check;

  if (stats) {
    stats->total_portals = entries.size();
    stats->total_bucket_sites = bucket_total;
    stats->rounds = k + 1;
  }
  return res;
}

}  // namespace orthotour
