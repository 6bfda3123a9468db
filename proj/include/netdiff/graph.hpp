#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "netdiff/rng.hpp"

namespace netdiff {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr std::uint32_t kUnreachable = UINT32_MAX;
inline constexpr NodeId kNoNode = UINT32_MAX;

/// Immutable undirected unweighted graph over dense node indices [0, n).
/// Adjacency lists are sorted ascending; edges carry stable ids so that
/// percolation indicators can be stored per edge.
class Graph {
 public:
  Graph() = default;

  // Validates and canonicalizes: rejects self-loops, out-of-range endpoints
  // and duplicate edges. Edge ids are assigned in sorted (u,v) order, u < v.
  static Graph from_edges(NodeId n,
                          std::vector<std::pair<NodeId, NodeId>> edges);

  NodeId node_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  // Edge ids aligned one-to-one with neighbors(v).
  std::span<const EdgeId> incident_edges(NodeId v) const {
    return {adj_edge_.data() + offsets_[v], adj_edge_.data() + offsets_[v + 1]};
  }
  std::pair<NodeId, NodeId> edge(EdgeId e) const { return edges_[e]; }
  const std::vector<std::pair<NodeId, NodeId>>& edges() const { return edges_; }

  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  double mean_degree() const {
    return n_ == 0 ? 0.0 : 2.0 * static_cast<double>(edges_.size()) / n_;
  }
  bool has_edge(NodeId u, NodeId v) const;

 private:
  NodeId n_ = 0;
  std::vector<std::uint64_t> offsets_;  // CSR, size n+1
  std::vector<NodeId> adj_;
  std::vector<EdgeId> adj_edge_;
  std::vector<std::pair<NodeId, NodeId>> edges_;  // canonical u < v, sorted
};

struct GraphStats {
  std::uint32_t diameter = 0;  // max finite eccentricity over sampled sources
  double mean_degree = 0.0;
  std::uint32_t min_degree = 0;
  std::uint32_t max_degree = 0;
  double mean_clustering = 0.0;
  double avg_path_length = 0.0;  // over reachable pairs only
  std::uint32_t component_count = 0;
  // Number of BFS sources used; equals n when exact.
  std::uint32_t path_length_sources = 0;
};

// BFS hop distances; unreachable nodes get kUnreachable. Traversal order is
// deterministic (ascending neighbor index).
std::vector<std::uint32_t> distances_from(const Graph& g, NodeId source);

// All nodes within hop distance `radius` of `center`, sorted ascending.
std::vector<NodeId> ball(const Graph& g, NodeId center, std::uint32_t radius);

// Exact all-source BFS when path_length_sample is unset and n is small
// enough; otherwise distances are estimated from sampled sources.
GraphStats graph_stats(const Graph& g,
                       std::optional<std::uint32_t> path_length_sample,
                       RngStream& rng);

// Edge-set union of two graphs over the same node set.
Graph union_graphs(const Graph& a, const Graph& b);

struct ComponentResult {
  Graph graph;
  // old index -> new index, kNoNode for dropped nodes
  std::vector<NodeId> node_map;
};

// Induced subgraph on the largest connected component. Ties are broken by
// the component containing the smallest node index.
ComponentResult largest_component(const Graph& g);

// Edge-list text format: one "u,v" per line, 0-based.
Graph load_edge_list(const std::string& path);
void save_edge_list(const Graph& g, const std::string& path);

}  // namespace netdiff
