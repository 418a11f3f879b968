#include "orthotour/instances.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <stdexcept>

namespace orthotour {
namespace {

// Column-profile polygon: column i covers [i, i+1] x [lo[i], hi[i]].
// Requires lo[i] < hi[i] and overlap between adjacent columns
// (max(lo[i-1], lo[i]) < min(hi[i-1], hi[i])), which makes the boundary a
// single simple ring.
OrthoPolygon profile_polygon(const std::vector<Coord>& lo,
                             const std::vector<Coord>& hi) {
  const Coord w = Coord(lo.size());
  std::vector<Point2> ring;
  ring.push_back({0, lo[0]});
  for (Coord i = 1; i < w; ++i)
    if (lo[std::size_t(i)] != lo[std::size_t(i) - 1]) {
      ring.push_back({i, lo[std::size_t(i) - 1]});
      ring.push_back({i, lo[std::size_t(i)]});
    }
  ring.push_back({w, lo[std::size_t(w) - 1]});
  ring.push_back({w, hi[std::size_t(w) - 1]});
  for (Coord i = w - 1; i >= 1; --i)
    if (hi[std::size_t(i)] != hi[std::size_t(i) - 1]) {
      ring.push_back({i, hi[std::size_t(i)]});
      ring.push_back({i, hi[std::size_t(i) - 1]});
    }
  ring.push_back({0, hi[0]});
  auto poly = normalize_polygon(std::move(ring));
  assert(poly);
  return *poly;
}

OrthoPolygon translated(OrthoPolygon poly, Coord dx, Coord dy) {
  for (auto& v : poly.vertices) {
    v.x += dx;
    v.y += dy;
  }
  return poly;
}

Box3 segment_x(Coord x1, Coord x2, Coord y, Coord z) {
  return {{x1, y, z}, {x2, y, z}};
}
Box3 segment_y(Coord x, Coord y1, Coord y2, Coord z) {
  return {{x, y1, z}, {x, y2, z}};
}

}  // namespace

Instance gen_random(InstanceClass cls, std::size_t n_target, std::size_t k,
                    std::uint64_t seed) {
  if (k == 0) throw std::invalid_argument("gen_random: k must be positive");
  std::mt19937_64 rng(seed);
  auto uniform = [&](Coord a, Coord b) {
    return std::uniform_int_distribution<Coord>(a, b)(rng);
  };

  Instance inst;
  inst.dims = 2;
  inst.declared_class = cls;

  const std::size_t budget = std::max<std::size_t>(4, n_target / k);

  if (cls == InstanceClass::kRectangles) {
    const Coord span = Coord(4 * k);
    for (std::size_t i = 0; i < k; ++i) {
      Coord x1 = uniform(0, span - 1), x2 = uniform(x1 + 1, span);
      Coord y1 = uniform(0, span - 1), y2 = uniform(y1 + 1, span);
      inst.polygons.push_back({{{x1, y1}, {x2, y1}, {x2, y2}, {x1, y2}}});
      inst.polygons.back() = *normalize_polygon(inst.polygons.back().vertices);
    }
    assert(!validate_instance(inst));
    return inst;
  }

  // Column count sized so that a profile changing at most columns yields
  // roughly `budget` vertices (each change contributes two).
  const Coord wmax = std::max<Coord>(1, Coord(budget / 4));
  const Coord height = wmax + 2;
  const bool banded = cls != InstanceClass::kGeneral;
  const Coord bandw = wmax + 2;

  for (std::size_t i = 0; i < k; ++i) {
    const Coord w = uniform(std::max<Coord>(1, (wmax + 1) / 2), wmax);
    std::vector<Coord> lo(std::size_t(w), 0), hi(std::size_t(w), 0);
    if (cls == InstanceClass::kOrthoConvex) {
      // Unimodal ceiling, valley floor strictly below the ceiling's minimum:
      // every row and column intersection is then a single run.
      const Coord peak = uniform(0, w - 1);
      hi[std::size_t(peak)] = height;
      for (Coord j = peak - 1; j >= 0; --j)
        hi[std::size_t(j)] =
            std::max<Coord>(1, hi[std::size_t(j) + 1] - uniform(0, 2));
      for (Coord j = peak + 1; j < w; ++j)
        hi[std::size_t(j)] =
            std::max<Coord>(1, hi[std::size_t(j) - 1] - uniform(0, 2));
      const Coord ceil_min = *std::min_element(hi.begin(), hi.end());
      const Coord pit = uniform(0, w - 1);
      lo[std::size_t(pit)] = 0;
      for (Coord j = pit - 1; j >= 0; --j)
        lo[std::size_t(j)] =
            std::min<Coord>(ceil_min - 1, lo[std::size_t(j) + 1] + uniform(0, 2));
      for (Coord j = pit + 1; j < w; ++j)
        lo[std::size_t(j)] =
            std::min<Coord>(ceil_min - 1, lo[std::size_t(j) - 1] + uniform(0, 2));
    } else {
      lo[0] = uniform(0, height - 1);
      hi[0] = uniform(lo[0] + 1, height);
      for (Coord j = 1; j < w; ++j) {
        lo[std::size_t(j)] = uniform(0, hi[std::size_t(j) - 1] - 1);
        hi[std::size_t(j)] = uniform(
            std::max(lo[std::size_t(j)], lo[std::size_t(j) - 1]) + 1, height);
      }
    }
    OrthoPolygon poly = profile_polygon(lo, hi);
    if (cls == InstanceClass::kOrthoConvex) assert(is_ortho_convex(poly));

    Coord dx, dy;
    if (banded) {
      // Alternating x-bands separated by a gap of at least two, so every
      // consecutive pair is disjoint as closed sets.
      dx = Coord(i % 2) * bandw + uniform(0, bandw - 2 - w);
      dy = uniform(0, height);
    } else {
      dx = uniform(0, wmax + height);
      dy = uniform(0, wmax + height);
    }
    inst.polygons.push_back(translated(std::move(poly), dx, dy));
  }
  assert(!validate_instance(inst));
  return inst;
}

bool has_orthogonal_pair(const OVInput& in) {
  for (const auto& a : in.a)
    for (const auto& b : in.b) {
      bool orth = true;
      for (std::size_t t = 0; t < a.size(); ++t)
        if (a[t] != 0 && b[t] != 0) orth = false;
      if (orth) return true;
    }
  return false;
}

Instance gen_ov(const OVInput& in) {
  if (in.a.empty() || in.b.empty())
    throw std::invalid_argument("gen_ov: both vector sets must be non-empty");
  const std::size_t d = in.a.front().size();
  if (d == 0) throw std::invalid_argument("gen_ov: dimension must be positive");
  for (const auto* side : {&in.a, &in.b})
    for (const auto& v : *side) {
      if (v.size() != d)
        throw std::invalid_argument("gen_ov: inconsistent vector dimension");
      for (int e : v)
        if (e != 0 && e != 1)
          throw std::invalid_argument("gen_ov: entries must be 0 or 1");
    }

  const Coord nmax = Coord(std::max(in.a.size(), in.b.size()));
  const Coord c = 10 * Coord(d);        // tooth pitch
  const Coord dist = 20 * Coord(d) * nmax;  // base distance

  // Comb bases: thin walls far from the teeth tips, spanning all z levels.
  const Box3 vbase{{c, dist, 0}, {c * nmax + 1, dist, 5}};
  const Box3 hbase{{dist, c, 0}, {dist, c * nmax + 1, 5}};

  Polytope3 vcomb{{vbase}};
  for (std::size_t i = 1; i <= in.a.size(); ++i)
    vcomb.boxes.push_back(segment_y(c * Coord(i), c, dist, 3));
  Polytope3 hcomb{{hbase}};
  for (std::size_t j = 1; j <= in.b.size(); ++j)
    hcomb.boxes.push_back(segment_x(c, dist, c * Coord(j), 2));

  Instance inst;
  inst.dims = 3;
  inst.declared_class = InstanceClass::kStepDisjoint;
  inst.polytopes.push_back(vcomb);
  for (std::size_t t = 0; t < d; ++t) {
    inst.polytopes.push_back(hcomb);
    // Offset combs: tooth i shifts by a_i[t] in x and drops to z = 0 when
    // the entry is one, staying at z = 4 otherwise (mirrored for b).
    Polytope3 acomb{{vbase}};
    for (std::size_t i = 1; i <= in.a.size(); ++i) {
      const Coord bit = in.a[i - 1][t];
      acomb.boxes.push_back(segment_y(c * Coord(i) + bit, c, dist, 4 - 4 * bit));
    }
    inst.polytopes.push_back(std::move(acomb));
    Polytope3 bcomb{{hbase}};
    for (std::size_t j = 1; j <= in.b.size(); ++j) {
      const Coord bit = in.b[j - 1][t];
      bcomb.boxes.push_back(segment_x(c, dist, c * Coord(j) + bit, 1 + 4 * bit));
    }
    inst.polytopes.push_back(std::move(bcomb));
    inst.polytopes.push_back(vcomb);
  }
  inst.polytopes.push_back(hcomb);

  assert(inst.polytopes.size() == 4 * d + 2);
  for (std::size_t s = 1; s < inst.polytopes.size(); ++s)
    assert(polytopes_disjoint(inst.polytopes[s - 1], inst.polytopes[s]));
  assert(!validate_instance(inst));
  return inst;
}

}  // namespace orthotour
