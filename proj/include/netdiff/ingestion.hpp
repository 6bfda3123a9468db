#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netdiff/graph.hpp"

namespace netdiff {

struct FlowRecord {
  NodeId origin = 0;       // interned dense id
  NodeId destination = 0;
  double flow = 0.0;
};

struct FlowTable {
  std::vector<FlowRecord> records;
  std::vector<std::string> names;  // dense id -> original label
};

// Text table `origin,destination,flow` with header. Region labels are
// interned to dense ids in first-appearance order.
FlowTable load_flows(const std::string& path);

// Either an absolute flow cutoff or a percentile of the positive
// symmetrized flows (nearest-rank).
struct FlowThreshold {
  double value = 0.0;
  bool is_percentile = false;
};

struct PrunedFlows {
  Graph graph;                      // largest component, reindexed
  std::vector<NodeId> node_map;     // original dense id -> new id, kNoNode dropped
  double cutoff = 0.0;              // resolved absolute cutoff
};

// f_ab = mean of the two directed flows (a missing direction counts as 0);
// link a-b iff f_ab > cutoff (strict). Keeps the largest component.
PrunedFlows symmetrize_and_prune(const FlowTable& flows,
                                 const FlowThreshold& threshold);

struct VillageData {
  Graph graph;
  std::vector<NodeId> seeds;
  std::optional<std::uint64_t> observed_count;
  std::map<std::string, std::vector<double>> outcomes;  // per-node columns
};

// Village loader: directed `u,v` edge list OR-symmetrized to an undirected
// graph; one seed id per line; optional `node,<col>...` outcome table.
VillageData load_village(const std::string& graph_path,
                         const std::string& seeds_path,
                         const std::optional<std::string>& outcomes_path = {});

}  // namespace netdiff
