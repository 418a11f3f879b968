#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "orthotour/geometry.hpp"

// Fully persistent "mountain range": a continuous piecewise-linear function
// on an integer interval whose pieces have slope -1, 0 or +1. Supports
// restrict / shift / relax (pointwise min with a slope +-1 line) / join /
// evaluate, each returning a new immutable handle.
//
// Implementation: path-copying treap over the function's vertices. Vertex
// x-coordinates are doubled internally so that relax crossing points (which
// can fall on half-integers) stay integral; y values are delta-encoded
// along the root path so a pointwise shift is a single node copy.

namespace orthotour {

class MountainStore {
 public:
  struct Handle {
    std::int32_t root = -1;
    Coord a2 = 0, b2 = 0;  // doubled domain endpoints
    bool valid() const { return root >= 0; }
    Coord a() const { return a2 / 2; }
    Coord b() const { return b2 / 2; }
  };

  struct Vertex2 {
    Coord x2 = 0;   // doubled x
    Length y2 = 0;  // doubled value
    friend bool operator==(const Vertex2&, const Vertex2&) = default;
  };

  explicit MountainStore(std::uint64_t seed = 0x6f72746f746f7572ull);

  Handle new_zero(Coord a, Coord b);
  Handle restrict(Handle h, Coord a, Coord b);
  Handle shift(Handle h, Length delta);
  // f'(x) = min(f(x), lambda * x + gamma), lambda in {-1, +1}
  Handle relax(Handle h, int lambda, Length gamma);
  Handle join(Handle left, Handle right);

  Length evaluate(Handle h, Coord x) const;    // original units
  Length evaluate2(Handle h, Coord x2) const;  // doubled units

  // In-order vertex walk (doubled units); first/last vertices sit exactly
  // on the domain endpoints.
  std::vector<Vertex2> breakpoints2(Handle h) const;

  // Minimum over the domain together with an integer argmin. The minimum of
  // a mountain range produced by the touring DP is always attained at an
  // integer point; asserted here.
  std::pair<Length, Coord> min_over_domain(Handle h) const;

  std::size_t complexity(Handle h) const;  // number of stored vertices
  std::size_t allocations() const { return nodes_.size(); }

 private:
  struct Node {
    Coord x = 0;
    Length dy = 0;  // absolute y = sum of dy along the root path
    std::uint64_t pri = 0;
    std::int32_t l = -1, r = -1;
  };

  std::int32_t clone(std::int32_t t, Length abs_y);
  std::int32_t fresh(Coord x, Length y);
  // split by x <= x0; returned roots carry absolute dy
  std::pair<std::int32_t, std::int32_t> split_leq(std::int32_t t, Length base,
                                                  Coord x0);
  std::int32_t merge(std::int32_t a, Length base_a, std::int32_t b,
                     Length base_b);
  void walk(std::int32_t t, Length base, std::vector<Vertex2>& out) const;

  struct Found {
    Coord x = 0;
    Length y = 0;
    bool ok = false;
  };
  Found floor_vertex(std::int32_t t, Coord x2) const;   // greatest x <= x2
  Found ceil_vertex(std::int32_t t, Coord x2) const;    // smallest x >= x2
  // last vertex with y - x >= g (pred_plus) / first with y + x >= g
  Found last_ge_line(std::int32_t t, Length gamma2) const;
  Found first_ge_line(std::int32_t t, Length gamma2) const;

  Handle from_vertices(std::initializer_list<Vertex2> vs, Coord a2, Coord b2);

  std::vector<Node> nodes_;
  std::mt19937_64 rng_;
};

}  // namespace orthotour
