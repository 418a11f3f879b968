#pragma once

#include <stdexcept>

#include "orthotour/geometry.hpp"

// Ground-truth exact solvers: layered grid Dijkstra over the product of the
// instance's coordinate sets. Every point of an optimal tour can be snapped
// to this grid, so the graph distance equals the true optimum. These
// solvers optimize for obviousness of correctness; all fast solvers are
// differentially tested against them.

namespace orthotour {

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reads MANHATTAN_TOURING_NODE_BUDGET, defaulting to 5*10^7 graph nodes.
std::size_t default_node_budget();

struct OracleOptions {
  // Skip a layer when its polygon contains the previous one on the grid
  // (output-equivalent compression; off by default, fuzz-compared when on).
  bool compress_layers = false;
  std::size_t node_budget = 0;  // 0 = default_node_budget()
};

TourResult solve_oracle_2d(const Instance& inst,
                           const OracleOptions& opt = {});
TourResult solve_oracle_3d(const Instance& inst,
                           const OracleOptions& opt = {});

}  // namespace orthotour
