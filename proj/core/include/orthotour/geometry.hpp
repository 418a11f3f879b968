#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Integer-exact axis-aligned geometry kernel. All coordinates are 64-bit
// lattice points (inputs bounded to |coord| <= 2^30), all distances are L1
// and therefore exact integers. No floating point on any solver path.

namespace orthotour {

using Coord = std::int64_t;
using Length = std::int64_t;

// Saturating infinity for path lengths / additive weights.
inline constexpr Length kInf = std::int64_t{1} << 60;

inline Length sat_add(Length a, Length b) {
  if (a >= kInf || b >= kInf) return kInf;
  return a + b;
}

struct Point2 {
  Coord x = 0;
  Coord y = 0;
  friend bool operator==(const Point2&, const Point2&) = default;
  friend auto operator<=>(const Point2&, const Point2&) = default;  // lex (x,y)
};

struct Point3 {
  Coord x = 0;
  Coord y = 0;
  Coord z = 0;
  friend bool operator==(const Point3&, const Point3&) = default;
  friend auto operator<=>(const Point3&, const Point3&) = default;
};

Length l1_dist(Point2 p, Point2 q);
Length l1_dist(Point3 p, Point3 q);

// Simple axis-aligned polygon, vertices in counterclockwise order with
// horizontal and vertical edges alternating. Collinear (non-adjacent)
// edges are permitted; consecutive collinear vertices are merged by
// normalize(). Boundary counts as inside everywhere.
struct OrthoPolygon {
  std::vector<Point2> vertices;

  std::size_t size() const { return vertices.size(); }
  Point2 vertex(std::size_t i) const { return vertices[i % vertices.size()]; }

  std::vector<Coord> x_coords() const;  // sorted, deduplicated
  std::vector<Coord> y_coords() const;

  // Bounding box as {min, max}.
  std::pair<Point2, Point2> bbox() const;

  // Twice the signed area (positive for CCW).
  std::int64_t signed_area2() const;
};

// Merges consecutive collinear vertices and rotates the ring so that it
// starts at the lexicographically smallest vertex, CCW. Fails (nullopt) on
// rings that cannot form a valid orthogonal polygon.
std::optional<OrthoPolygon> normalize_polygon(std::vector<Point2> ring);

// Structural validation: alternation, simplicity, positive area.
// Returns an error message, or nullopt if valid.
std::optional<std::string> validate_polygon(const OrthoPolygon& poly);

bool contains(const OrthoPolygon& poly, Point2 p);
bool on_boundary(const OrthoPolygon& poly, Point2 p);

// Containment test at half-integer resolution: the query point is
// (px/2, py/2) in original units. Used for cell-midpoint rasterization.
bool contains_doubled(const OrthoPolygon& poly, Coord px2, Coord py2);

// Axis-aligned closed box in 3-D; degenerate thickness allowed.
struct Box3 {
  Point3 lo;
  Point3 hi;
  bool contains(Point3 p) const;
  friend bool operator==(const Box3&, const Box3&) = default;
};

// Orthogonal polytope as a union of closed boxes (the comb representation).
struct Polytope3 {
  std::vector<Box3> boxes;
  bool contains(Point3 p) const;
};

bool boxes_intersect(const Box3& a, const Box3& b);
bool polytopes_disjoint(const Polytope3& a, const Polytope3& b);

// Thrown by solvers when the instance does not satisfy the declared class.
struct ClassError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class InstanceClass { kGeneral, kStepDisjoint, kOrthoConvex, kRectangles };

std::string to_string(InstanceClass c);
std::optional<InstanceClass> instance_class_from_string(const std::string& s);

// Ordered polygon (2-D) or polytope (3-D) sequence plus declared class.
// The declared class is verified by validate_instance, never trusted.
struct Instance {
  int dims = 2;
  InstanceClass declared_class = InstanceClass::kGeneral;
  std::vector<OrthoPolygon> polygons;   // dims == 2
  std::vector<Polytope3> polytopes;     // dims == 3

  std::size_t k() const {
    return dims == 2 ? polygons.size() : polytopes.size();
  }
  std::size_t total_vertices() const;
};

struct Grid {
  std::vector<Coord> xs;  // sorted strictly increasing
  std::vector<Coord> ys;
};

Grid instance_grid(const Instance& inst);
Grid polygons_grid(const std::vector<OrthoPolygon>& polys);

bool is_rectangle(const OrthoPolygon& poly);
bool is_ortho_convex(const OrthoPolygon& poly);

// Closed-region disjointness (touching boundaries are NOT disjoint).
bool polygons_disjoint(const OrthoPolygon& a, const OrthoPolygon& b);

// Checks the declared class and per-polygon validity; returns the first
// violation, or nullopt if the instance is valid.
std::optional<std::string> validate_instance(const Instance& inst);

// Grid points on the boundary of polygons[i] with respect to the grid of
// the whole collection, sorted lexicographically.
std::vector<Point2> portals(std::size_t i, const std::vector<OrthoPolygon>& polygons);
std::vector<Point2> portals(const OrthoPolygon& poly, const Grid& grid);

// --- Regularized regions over a compressed grid -----------------------------
//
// A Region stores exact closed membership of a union of polygons at
// half-grid resolution: element (2a, 2b) is the grid point (xs[a], ys[b]),
// odd indices are the open cells/edges in between. Because the grid contains
// every edge coordinate, membership is constant per element, so intersection
// of Regions is an exact bitmap AND.
class Region {
 public:
  Region() = default;
  static Region from_polygon(const OrthoPolygon& poly);
  // Samples pred at doubled coordinates (2x, 2y); grid must cover every
  // membership change of the predicate for the result to be exact.
  static Region from_predicate(std::vector<Coord> xs, std::vector<Coord> ys,
                               const std::function<bool(Coord, Coord)>& pred2);
  static Region intersection(const Region& a, const Region& b);

  bool contains(Point2 p) const;
  bool contains_doubled(Coord px2, Coord py2) const;
  bool empty() const { return bits_.empty() || !any_; }

  // Boundary cycles of the regularized region as CCW polygons; pinched or
  // holed components fall back to interior-disjoint rectangles.
  std::vector<OrthoPolygon> to_polygons() const;

  const std::vector<Coord>& xs() const { return xs_; }
  const std::vector<Coord>& ys() const { return ys_; }

 private:
  // element (i, j): i in [0, 2|xs|-1), j in [0, 2|ys|-1)
  bool bit(std::size_t i, std::size_t j) const {
    return bits_[j * stride_ + i];
  }
  bool cell(std::size_t cx, std::size_t cy) const {  // open cell index
    return bit(2 * cx + 1, 2 * cy + 1);
  }
  std::vector<Coord> xs_, ys_;
  std::size_t stride_ = 0;
  std::vector<bool> bits_;
  bool any_ = false;
};

// Regularized intersection of two polygons as disjoint-interior orthogonal
// polygons (empty set when disjoint). Degenerate shared edges/points are
// excluded; use polygons_disjoint for contact detection.
std::vector<OrthoPolygon> intersect(const OrthoPolygon& p, const OrthoPolygon& q);

// --- Point location ---------------------------------------------------------

// Vertical slab decomposition; answers exactly as contains(poly, p) in
// O(log n). Immutable after construction, safe to share across threads.
class PointLocator {
 public:
  explicit PointLocator(const OrthoPolygon& poly);
  bool contains(Point2 p) const;

  // y-interval of the polygon's intersection with the vertical line x = c,
  // or nullopt if empty. Only meaningful for ortho-convex polygons (for
  // which the intersection is a single segment).
  std::optional<std::pair<Coord, Coord>> y_extent_at(Coord x) const;
  std::optional<std::pair<Coord, Coord>> x_extent_at(Coord y) const;

 private:
  struct Slabs {
    std::vector<Coord> coords;                       // slab boundaries
    std::vector<std::vector<Coord>> intervals;       // per open slab: y-pairs
    std::vector<std::vector<Coord>> edge_intervals;  // per coord: edge y-pairs
  };
  static Slabs build(const std::vector<Point2>& verts, bool transpose);
  static bool in_intervals(const std::vector<Coord>& iv, Coord v);
  static std::optional<std::pair<Coord, Coord>> extent(const Slabs& s, Coord c);
  bool slab_contains(const Slabs& s, Coord x, Coord y) const;

  Slabs by_x_;  // slabs along x, intervals in y
  Slabs by_y_;  // transposed
};

// --- Skeletons --------------------------------------------------------------

// Discrete tour witness: (polygon index, waypoint) entries, indices
// non-decreasing starting at 1; each waypoint must lie in the intersection
// of the polygons it covers.
struct Skeleton {
  struct Entry {
    std::size_t index = 1;  // 1-based
    Point2 point;
    friend bool operator==(const Entry&, const Entry&) = default;
  };
  std::vector<Entry> entries;
  Length length() const;
};

struct Skeleton3 {
  std::vector<Point3> points;  // one per polytope, in order
  Length length() const;
};

struct TourResult {
  Length length = 0;
  Skeleton skeleton;     // dims == 2
  Skeleton3 skeleton3;   // dims == 3
};

struct SkeletonViolation {
  std::size_t entry = 0;     // offending entry index (0-based)
  std::size_t polygon = 0;   // 1-based polygon whose membership failed, 0 = order
  std::string message;
};

// Confirms the skeleton invariants against the instance and returns its
// exact length, or the first violation.
std::optional<SkeletonViolation> validate_skeleton(const Instance& inst,
                                                   const Skeleton& s,
                                                   Length* length_out);
std::optional<SkeletonViolation> validate_skeleton3(const Instance& inst,
                                                    const Skeleton3& s,
                                                    Length* length_out);

}  // namespace orthotour
