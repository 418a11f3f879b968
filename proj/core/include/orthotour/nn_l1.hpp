#pragma once

#include <vector>

#include "orthotour/geometry.hpp"

// Additively weighted L1 nearest-neighbor index. Answers
//   min over sites of  w + |x - x_p| + |y - y_p|
// exactly, with the argmin site, in O(log^2 m) per query after an
// O(m log m) build. The absolute value splits into four sign patterns;
// each is a 2-D dominance minimum over a merge-sort tree keyed by
// w +/- x_p +/- y_p. Ties break toward the lexicographically smallest
// site point, so downstream witnesses are deterministic.

namespace orthotour {

struct WeightedSite {
  Point2 p;
  Length w = 0;  // kInf acts as +infinity (saturating)
  friend bool operator==(const WeightedSite&, const WeightedSite&) = default;
};

class NnIndex {
 public:
  // sites must be non-empty.
  explicit NnIndex(std::vector<WeightedSite> sites);

  struct Answer {
    Length value = kInf;
    Point2 site;  // winning site point (lex-smallest among argmins)
  };
  Answer query(Point2 q) const;

  std::size_t size() const { return m_; }

 private:
  struct Node {
    std::vector<Coord> ys;       // sorted site y's in this x-range
    std::vector<Point2> pts;     // site points, in ys order
    std::vector<Length> ws;      // site weights, in ys order
    // prefix minima (region y <= q.y) and suffix minima (y >= q.y) of the
    // four sign-pattern keys, with argmin positions
    std::vector<Length> pre_sw, pre_se, suf_nw, suf_ne;
    std::vector<std::uint32_t> pre_sw_a, pre_se_a, suf_nw_a, suf_ne_a;
  };
  void query_node(const Node& nd, Point2 q, bool x_le, bool x_ge,
                  Answer& best) const;

  std::size_t m_ = 0;           // finite sites in the tree
  std::size_t leaves_ = 0;      // tree leaf span (power of two)
  std::vector<Coord> xs_;       // sorted x of finite sites (with duplicates)
  std::vector<Node> tree_;
  Point2 all_inf_site_;         // lex-smallest site, used when no finite site
};

}  // namespace orthotour
