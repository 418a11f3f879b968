#pragma once

#include <cstdint>
#include <vector>

#include "orthotour/geometry.hpp"

// Seeded instance generators for the four 2-D classes, plus the 3-D
// orthogonal-vectors reduction: a step-disjoint sequence of 4d+2 comb-shaped
// polytopes whose optimal touring length is at most 8d+1 exactly when the
// input contains an orthogonal pair.

namespace orthotour {

// Deterministic per (class, n_target, k, seed); the result passes
// validate_instance for the requested class. n_target steers the total
// vertex count (approximately; rectangles always have 4k vertices).
// Throws std::invalid_argument on infeasible parameters (k == 0).
Instance gen_random(InstanceClass cls, std::size_t n_target, std::size_t k,
                    std::uint64_t seed);

struct OVInput {
  // N binary vectors of dimension d on each side; entries in {0, 1}.
  std::vector<std::vector<int>> a, b;
};

// Comb construction with tooth pitch c = 10d and base distance D = 20dN.
// Segments and base rectangles are kept as degenerate closed boxes.
Instance gen_ov(const OVInput& in);

// True iff some a-vector is orthogonal to some b-vector (the brute-force
// reference predicate for the reduction tests).
bool has_orthogonal_pair(const OVInput& in);

}  // namespace orthotour
