#pragma once

#include <string>
#include <vector>

#include "netdiff/graph.hpp"
#include "netdiff/rng.hpp"

namespace netdiff {

/// Per-node latent coordinates in [0,1]^dim.
struct LatentPositions {
  std::uint32_t dim = 0;
  std::vector<double> coords;  // row-major, n * dim

  double coord(NodeId v, std::uint32_t k) const { return coords[v * dim + k]; }
  NodeId size() const { return static_cast<NodeId>(coords.size() / dim); }
};

enum class SupportRule { all_pairs, latent_nearest, hop_nearest };

struct ErrorGraphSpec {
  double beta = 0.0;   // pair-link probability
  double delta = 1.0;  // support share in (0,1]; 1 means all pairs
  SupportRule support_rule = SupportRule::all_pairs;
};

struct LatticeRandomGraph {
  Graph graph;
  LatentPositions positions;
};

// Lattice-plus-random geometric graph: n_side^q nodes on the regular grid
// over [0,1]^q (row-major node order), the remaining n - n_side^q placed
// uniformly at random, and every pair within Euclidean distance
//   r = max{ 1/(n_side-1), (sqrt(q)/2) / (n_side-1) }
// linked. The radius rule keeps the graph connected.
LatticeRandomGraph generate_lattice_random(NodeId n, std::uint32_t q,
                                           std::uint32_t n_side,
                                           RngStream& rng);

// Idiosyncratic error graph: each admissible unordered pair linked
// independently with probability spec.beta. With delta < 1 the admissible
// pairs are restricted to each node's ceil(delta*n) nearest nodes (by latent
// distance or by hop distance in `base`), a pair being admissible when it is
// in the support of either endpoint.
Graph generate_error_graph(NodeId n, const ErrorGraphSpec& spec,
                           const Graph* base, const LatentPositions* positions,
                           RngStream& rng);

// Simple d-regular graph by configuration-model pairing with full resampling
// on any self-loop or multi-edge clash.
Graph generate_random_regular(NodeId n, std::uint32_t d, RngStream& rng);

// Remove each existing edge independently with probability beta_drop.
Graph drop_links(const Graph& g, double beta_drop, RngStream& rng);

void save_positions(const LatentPositions& pos, const std::string& path);

}  // namespace netdiff
