#pragma once

#include <cstdint>
#include <vector>

#include "netdiff/graph.hpp"
#include "netdiff/rng.hpp"

namespace netdiff {

inline constexpr std::uint32_t kNeverActivated = UINT32_MAX;

enum class PercMode { undirected, directed };

/// Pre-sampled per-edge transmission indicators. With these fixed, the
/// one-period SIR diffusion is a deterministic reachability process.
struct Percolation {
  PercMode mode = PercMode::undirected;
  const Graph* graph = nullptr;
  // one bit per edge (undirected) or per directed arc (directed);
  // arc (u->v) of edge e with endpoints (a<b) is 2e when u==a, 2e+1 otherwise
  std::vector<std::uint8_t> pass;

  bool passes(EdgeId e, NodeId from) const {
    if (mode == PercMode::undirected) return pass[e] != 0;
    auto [a, b] = graph->edge(e);
    return pass[2 * static_cast<std::size_t>(e) + (from == a ? 0 : 1)] != 0;
  }
};

struct DecaySpec {
  double p0 = 0.0;     // base probability; p(t) = p0 / t^lambda for t >= 1
  double lambda = 0.0; // 0 means constant
};

struct DiffusionTrace {
  std::vector<std::uint32_t> activation_time;  // kNeverActivated if never
  std::vector<std::uint32_t> new_by_step;      // counts for t = 0..T
  std::vector<NodeId> seeds;
  std::uint32_t horizon = 0;

  std::uint64_t total_activated() const {
    std::uint64_t s = 0;
    for (auto c : new_by_step) s += c;
    return s;
  }
  // nodes ever activated by step t (inclusive)
  std::uint64_t ever_activated_by(std::uint32_t t) const {
    std::uint64_t s = 0;
    for (std::uint32_t u = 0; u <= t && u < new_by_step.size(); ++u)
      s += new_by_step[u];
    return s;
  }
};

// Independent Bernoulli(p) indicator per edge / per directed arc, drawn in
// edge-id order from the stream.
Percolation sample_percolation(const Graph& g, double p, PercMode mode,
                               RngStream& rng);

// Same law, but each indicator is a keyed hash of (seed, endpoints), so the
// indicator of a physical edge is identical across graphs sharing it
// (common random numbers for L vs L-union-E comparisons).
Percolation sample_percolation_keyed(const Graph& g, double p, PercMode mode,
                                     std::uint64_t seed);

// Deterministic one-period SIR over a fixed percolation: a node activated at
// t-1 transmits along each passing incident edge at step t; activated nodes
// never re-activate. Stops at T or when the frontier empties.
DiffusionTrace run_diffusion(const Percolation& perc,
                             const std::vector<NodeId>& seeds,
                             std::uint32_t T);

// Time-decaying variant: the coin for an edge is flipped lazily at first
// frontier contact (probability p0 / t^lambda at step t) and at most once.
// lambda = 0 reproduces the law of run_diffusion over an undirected
// percolation with p = p0.
DiffusionTrace run_diffusion_decaying(const Graph& g,
                                      const std::vector<NodeId>& seeds,
                                      std::uint32_t T, const DecaySpec& decay,
                                      RngStream& rng);

// |EverA(t) n EverB(t)| / |EverA(t) u EverB(t)|; negative when union empty.
inline constexpr double kJaccardUndefined = -1.0;
double jaccard_overlap(const DiffusionTrace& a, const DiffusionTrace& b,
                       std::uint32_t t);

// Per-step counts of E-edge transmissions into nodes with no passing L-edge
// from the previous step's activations (operational "new catchment region"
// count). The trace must have been produced on union(L, E) with `perc`.
std::vector<std::uint32_t> count_jumps(const DiffusionTrace& trace,
                                       const Percolation& perc, const Graph& L,
                                       const Graph& E);

struct RegionLabels {
  std::vector<std::uint32_t> region;  // per node; UINT32_MAX if never activated
  std::uint32_t region_count = 0;     // origin region is id 0
  std::vector<std::uint32_t> region_birth;  // step at which each region appeared
};

// Region attribution for detection experiments: the seeds form region 0; a
// node whose activation is attributable only to an E-edge starts a fresh
// region, every other node inherits the region of its smallest-index
// activating L-neighbor (E-neighbor if the L side is empty).
RegionLabels label_regions(const DiffusionTrace& trace, const Percolation& perc,
                           const Graph& L, const Graph& E);

}  // namespace netdiff
