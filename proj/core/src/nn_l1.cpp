#include "orthotour/nn_l1.hpp"

#include <algorithm>
#include <stdexcept>

namespace orthotour {

NnIndex::NnIndex(std::vector<WeightedSite> sites) {
  if (sites.empty()) throw std::invalid_argument("NnIndex: empty site set");
  all_inf_site_ = sites.front().p;
  for (const auto& s : sites) all_inf_site_ = std::min(all_inf_site_, s.p);
  std::erase_if(sites, [](const WeightedSite& s) { return s.w >= kInf; });
  std::sort(sites.begin(), sites.end(),
            [](const WeightedSite& a, const WeightedSite& b) {
              return a.p < b.p || (a.p == b.p && a.w < b.w);
            });
  m_ = sites.size();
  if (m_ == 0) return;
  leaves_ = 1;
  while (leaves_ < m_) leaves_ *= 2;
  tree_.assign(2 * leaves_, {});
  xs_.reserve(m_);
  for (const auto& s : sites) xs_.push_back(s.p.x);
  for (std::size_t i = 0; i < m_; ++i) {
    Node& leaf = tree_[leaves_ + i];
    leaf.ys = {sites[i].p.y};
    leaf.pts = {sites[i].p};
    leaf.ws = {sites[i].w};
  }
  for (std::size_t v = leaves_ - 1; v >= 1; --v) {
    const Node& a = tree_[2 * v];
    const Node& b = tree_[2 * v + 1];
    Node& nd = tree_[v];
    std::size_t na = a.ys.size(), nb = b.ys.size();
    if (na + nb == 0) continue;
    nd.ys.reserve(na + nb);
    nd.pts.reserve(na + nb);
    nd.ws.reserve(na + nb);
    std::size_t i = 0, j = 0;
    while (i < na || j < nb) {
      bool from_a =
          j >= nb || (i < na && (a.ys[i] < b.ys[j] ||
                                 (a.ys[i] == b.ys[j] && a.pts[i] < b.pts[j])));
      const Node& src = from_a ? a : b;
      std::size_t& t = from_a ? i : j;
      nd.ys.push_back(src.ys[t]);
      nd.pts.push_back(src.pts[t]);
      nd.ws.push_back(src.ws[t]);
      ++t;
    }
  }
  // Running minima of the four sign-pattern keys, with argmin positions.
  // Within one pattern, value(q) = key + g(q), so (key, point) comparison
  // yields the lexicographic tie-break exactly.
  for (auto& nd : tree_) {
    std::size_t n = nd.ys.size();
    if (n == 0) continue;
    nd.pre_sw.resize(n);
    nd.pre_se.resize(n);
    nd.suf_nw.resize(n);
    nd.suf_ne.resize(n);
    nd.pre_sw_a.resize(n);
    nd.pre_se_a.resize(n);
    nd.suf_nw_a.resize(n);
    nd.suf_ne_a.resize(n);
    auto better = [&](Length k1, std::size_t a1, Length k2, std::size_t a2) {
      if (k1 != k2) return k1 < k2;
      return nd.pts[a1] < nd.pts[a2];
    };
    for (std::size_t t = 0; t < n; ++t) {
      Length sw = nd.ws[t] - nd.pts[t].x - nd.pts[t].y;
      Length se = nd.ws[t] + nd.pts[t].x - nd.pts[t].y;
      nd.pre_sw[t] = sw;
      nd.pre_se[t] = se;
      nd.pre_sw_a[t] = nd.pre_se_a[t] = std::uint32_t(t);
      if (t > 0) {
        if (better(nd.pre_sw[t - 1], nd.pre_sw_a[t - 1], sw, t)) {
          nd.pre_sw[t] = nd.pre_sw[t - 1];
          nd.pre_sw_a[t] = nd.pre_sw_a[t - 1];
        }
        if (better(nd.pre_se[t - 1], nd.pre_se_a[t - 1], se, t)) {
          nd.pre_se[t] = nd.pre_se[t - 1];
          nd.pre_se_a[t] = nd.pre_se_a[t - 1];
        }
      }
    }
    for (std::size_t t = n; t-- > 0;) {
      Length nw = nd.ws[t] - nd.pts[t].x + nd.pts[t].y;
      Length ne = nd.ws[t] + nd.pts[t].x + nd.pts[t].y;
      nd.suf_nw[t] = nw;
      nd.suf_ne[t] = ne;
      nd.suf_nw_a[t] = nd.suf_ne_a[t] = std::uint32_t(t);
      if (t + 1 < n) {
        if (better(nd.suf_nw[t + 1], nd.suf_nw_a[t + 1], nw, t)) {
          nd.suf_nw[t] = nd.suf_nw[t + 1];
          nd.suf_nw_a[t] = nd.suf_nw_a[t + 1];
        }
        if (better(nd.suf_ne[t + 1], nd.suf_ne_a[t + 1], ne, t)) {
          nd.suf_ne[t] = nd.suf_ne[t + 1];
          nd.suf_ne_a[t] = nd.suf_ne_a[t + 1];
        }
      }
    }
  }
}

NnIndex::Answer NnIndex::query(Point2 q) const {
  Answer best;
  best.site = all_inf_site_;
  if (m_ == 0) return best;
  auto lo = std::size_t(std::lower_bound(xs_.begin(), xs_.end(), q.x) -
                        xs_.begin());
  auto hi = std::size_t(std::upper_bound(xs_.begin(), xs_.end(), q.x) -
                        xs_.begin());
  auto visit_range = [&](std::size_t l, std::size_t r, bool x_le, bool x_ge) {
    if (l >= r) return;
    for (l += leaves_, r += leaves_; l < r; l /= 2, r /= 2) {
      if (l & 1) query_node(tree_[l++], q, x_le, x_ge, best);
      if (r & 1) query_node(tree_[--r], q, x_le, x_ge, best);
    }
  };
  visit_range(0, hi, true, false);   // sites with x_p <= q.x
  visit_range(lo, m_, false, true);  // sites with x_p >= q.x
  return best;
}

void NnIndex::query_node(const Node& nd, Point2 q, bool x_le, bool x_ge,
                         Answer& best) const {
  auto consider = [&](Length value, Point2 site) {
    if (value < best.value || (value == best.value && site < best.site)) {
      best.value = value;
      best.site = site;
    }
  };
  std::size_t c = std::size_t(
      std::upper_bound(nd.ys.begin(), nd.ys.end(), q.y) - nd.ys.begin());
  std::size_t s = std::size_t(
      std::lower_bound(nd.ys.begin(), nd.ys.end(), q.y) - nd.ys.begin());
  if (x_le) {
    if (c > 0)
      consider(nd.pre_sw[c - 1] + q.x + q.y, nd.pts[nd.pre_sw_a[c - 1]]);
    if (s < nd.ys.size())
      consider(nd.suf_nw[s] + q.x - q.y, nd.pts[nd.suf_nw_a[s]]);
  }
  if (x_ge) {
    if (c > 0)
      consider(nd.pre_se[c - 1] - q.x + q.y, nd.pts[nd.pre_se_a[c - 1]]);
    if (s < nd.ys.size())
      consider(nd.suf_ne[s] - q.x - q.y, nd.pts[nd.suf_ne_a[s]]);
  }
}

}  // namespace orthotour
