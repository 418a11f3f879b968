#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "orthotour/geometry.hpp"

// Instance / result file formats (JSON) and SVG rendering. Emission is
// canonical — sorted keys, no whitespace, polygons normalized to start at
// the lexicographically smallest vertex in CCW order — so parse∘emit is the
// identity on canonical text and hashes are deterministic.

namespace orthotour {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// {"class": "...", "dims": 2, "polygons": [[[x, y], ...], ...]} or, for
// dims 3, "boxes": one list per polytope of [[x1,y1,z1],[x2,y2,z2]].
// Coordinates are integers with |coord| <= 2^30. Structural problems
// (malformed JSON, wrong shapes, out-of-range coordinates) throw
// ParseError; class-level validity is checked separately by
// validate_instance.
Instance parse_instance(const std::string& text);
std::string emit_instance(const Instance& inst);

// FNV-1a over the canonical emission, as 16 lowercase hex digits.
std::string instance_hash(const Instance& inst);

struct ResultRecord {
  std::string instance;  // instance_hash of the input
  std::string solver;
  Length length = 0;
  bool has_witness = false;
  Skeleton witness;    // dims == 2
  Skeleton3 witness3;  // dims == 3, non-empty marks 3-D
  double wall_ms = 0.0;
  // Audit counters; zero when the solver does not track the quantity.
  std::uint64_t hubs = 0;
  std::uint64_t fragments = 0;
  std::uint64_t stabbing = 0;
};

std::string emit_result(const ResultRecord& rec);
ResultRecord parse_result(const std::string& text);

// Deterministic SVG: one filled path per polygon with an index label, plus
// one polyline for the witness tour when given. 2-D only.
std::string render_svg(const Instance& inst, const Skeleton* witness);

}  // namespace orthotour
