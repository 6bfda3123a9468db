#include "netdiff/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace netdiff {

Percolation sample_percolation(const Graph& g, double p, PercMode mode,
                               RngStream& rng) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("p outside [0,1]");
  Percolation perc;
  perc.mode = mode;
  perc.graph = &g;
  std::size_t count =
      mode == PercMode::undirected ? g.edge_count() : 2 * g.edge_count();
  perc.pass.resize(count);
  for (std::size_t i = 0; i < count; ++i)
    perc.pass[i] = rng.bernoulli(p) ? 1 : 0;
  return perc;
}

Percolation sample_percolation_keyed(const Graph& g, double p, PercMode mode,
                                     std::uint64_t seed) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("p outside [0,1]");
  Percolation perc;
  perc.mode = mode;
  perc.graph = &g;
  if (mode == PercMode::undirected) {
    perc.pass.resize(g.edge_count());
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      auto [u, v] = g.edge(e);
      perc.pass[e] = keyed_u01(seed, u, v) < p ? 1 : 0;
    }
  } else {
    perc.pass.resize(2 * g.edge_count());
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      auto [u, v] = g.edge(e);
      perc.pass[2 * static_cast<std::size_t>(e)] =
          keyed_u01(seed, u, v, 0) < p ? 1 : 0;
      perc.pass[2 * static_cast<std::size_t>(e) + 1] =
          keyed_u01(seed, u, v, 1) < p ? 1 : 0;
    }
  }
  return perc;
}

DiffusionTrace run_diffusion(const Percolation& perc,
                             const std::vector<NodeId>& seeds,
                             std::uint32_t T) {
  const Graph& g = *perc.graph;
  if (seeds.empty()) throw std::invalid_argument("empty seed set");
  DiffusionTrace trace;
  trace.activation_time.assign(g.node_count(), kNeverActivated);
  trace.new_by_step.assign(static_cast<std::size_t>(T) + 1, 0);
  trace.seeds = seeds;
  trace.horizon = T;

  std::vector<NodeId> frontier;
  for (NodeId s : seeds) {
    if (s >= g.node_count())
      throw std::invalid_argument("seed out of range");
    if (trace.activation_time[s] == kNeverActivated) {
      trace.activation_time[s] = 0;
      frontier.push_back(s);
    }
  }
  std::sort(frontier.begin(), frontier.end());
  trace.new_by_step[0] = static_cast<std::uint32_t>(frontier.size());

  std::vector<NodeId> next;
  for (std::uint32_t t = 1; t <= T && !frontier.empty(); ++t) {
    next.clear();
    for (NodeId u : frontier) {
      auto nbrs = g.neighbors(u);
      auto eids = g.incident_edges(u);
      for (std::size_t i = 0; i < nbrs.size(); ++i) {
        NodeId v = nbrs[i];
        if (trace.activation_time[v] != kNeverActivated) continue;
        if (perc.passes(eids[i], u)) {
          trace.activation_time[v] = t;
          next.push_back(v);
        }
      }
    }
    std::sort(next.begin(), next.end());
    trace.new_by_step[t] = static_cast<std::uint32_t>(next.size());
    frontier.swap(next);
  }
  return trace;
}

DiffusionTrace run_diffusion_decaying(const Graph& g,
                                      const std::vector<NodeId>& seeds,
                                      std::uint32_t T, const DecaySpec& decay,
                                      RngStream& rng) {
  if (decay.p0 < 0.0 || decay.p0 > 1.0)
    throw std::invalid_argument("decay p0 gives p(1) outside [0,1]");
  if (decay.lambda < 0.0) throw std::invalid_argument("negative decay exponent");
  if (seeds.empty()) throw std::invalid_argument("empty seed set");

  DiffusionTrace trace;
  trace.activation_time.assign(g.node_count(), kNeverActivated);
  trace.new_by_step.assign(static_cast<std::size_t>(T) + 1, 0);
  trace.seeds = seeds;
  trace.horizon = T;

  std::vector<NodeId> frontier;
  for (NodeId s : seeds) {
    if (s >= g.node_count()) throw std::invalid_argument("seed out of range");
    if (trace.activation_time[s] == kNeverActivated) {
      trace.activation_time[s] = 0;
      frontier.push_back(s);
    }
  }
  std::sort(frontier.begin(), frontier.end());
  trace.new_by_step[0] = static_cast<std::uint32_t>(frontier.size());

  // 0 = unflipped, 1 = passes, 2 = blocked; each edge flipped at most once
  std::vector<std::uint8_t> edge_state(g.edge_count(), 0);
  std::vector<NodeId> next;
  for (std::uint32_t t = 1; t <= T && !frontier.empty(); ++t) {
    const double pt =
        decay.lambda == 0.0
            ? decay.p0
            : decay.p0 / std::pow(static_cast<double>(t), decay.lambda);
    next.clear();
    for (NodeId u : frontier) {
      auto nbrs = g.neighbors(u);
      auto eids = g.incident_edges(u);
      for (std::size_t i = 0; i < nbrs.size(); ++i) {
        NodeId v = nbrs[i];
        if (trace.activation_time[v] != kNeverActivated) continue;
        std::uint8_t& state = edge_state[eids[i]];
        if (state == 0) state = rng.bernoulli(pt) ? 1 : 2;
        if (state == 1) {
          trace.activation_time[v] = t;
          next.push_back(v);
        }
      }
    }
    std::sort(next.begin(), next.end());
    trace.new_by_step[t] = static_cast<std::uint32_t>(next.size());
    frontier.swap(next);
  }
  return trace;
}

double jaccard_overlap(const DiffusionTrace& a, const DiffusionTrace& b,
                       std::uint32_t t) {
  if (a.activation_time.size() != b.activation_time.size())
    throw std::invalid_argument("jaccard_overlap: trace size mismatch");
  std::uint64_t inter = 0, uni = 0;
  for (std::size_t v = 0; v < a.activation_time.size(); ++v) {
    bool in_a = a.activation_time[v] <= t;
    bool in_b = b.activation_time[v] <= t;
    if (in_a && in_b) ++inter;
    if (in_a || in_b) ++uni;
  }
  if (uni == 0) return kJaccardUndefined;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

EdgeId find_edge(const Graph& g, NodeId u, NodeId v) {
  auto nbrs = g.neighbors(u);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v);
  if (it == nbrs.end() || *it != v) throw std::invalid_argument("edge not in graph");
  return g.incident_edges(u)[static_cast<std::size_t>(it - nbrs.begin())];
}

void check_run_graph(const DiffusionTrace& trace, const Percolation& perc,
                     const Graph& L, const Graph& E) {
  const Graph& g = *perc.graph;
  if (trace.activation_time.size() != g.node_count() ||
      L.node_count() != g.node_count() || E.node_count() != g.node_count())
    throw std::invalid_argument("trace/graph node count mismatch");
  // L and E may overlap (an error draw can duplicate an observed link);
  // overlapping edges classify as L. Only edges outside both are an error.
  for (const auto& [u, v] : g.edges())
    if (!L.has_edge(u, v) && !E.has_edge(u, v))
      throw std::invalid_argument("run graph edge outside both L and E");
}

}  // namespace

std::vector<std::uint32_t> count_jumps(const DiffusionTrace& trace,
                                       const Percolation& perc, const Graph& L,
                                       const Graph& E) {
  check_run_graph(trace, perc, L, E);
  const Graph& g = *perc.graph;
  std::vector<std::uint32_t> jumps(trace.new_by_step.size(), 0);
  const auto& act = trace.activation_time;

  auto has_passing_L_parent = [&](NodeId v, std::uint32_t t) {
    for (NodeId w : L.neighbors(v)) {
      if (act[w] != t - 1) continue;
      if (perc.passes(find_edge(g, w, v), w)) return true;
    }
    return false;
  };

  for (const auto& [a, b] : E.edges()) {
    for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
      if (act[x] == kNeverActivated || act[y] == kNeverActivated) continue;
      if (act[y] == 0 || act[x] + 1 != act[y]) continue;
      std::uint32_t t = act[y];
      if (t >= jumps.size()) continue;
      if (!perc.passes(find_edge(g, x, y), x)) continue;
      if (has_passing_L_parent(y, t)) continue;
      ++jumps[t];
    }
  }
  return jumps;
}

RegionLabels label_regions(const DiffusionTrace& trace, const Percolation& perc,
                           const Graph& L, const Graph& E) {
  check_run_graph(trace, perc, L, E);
  const Graph& g = *perc.graph;
  const auto& act = trace.activation_time;

  RegionLabels out;
  out.region.assign(g.node_count(), UINT32_MAX);
  out.region_count = 1;
  out.region_birth.push_back(0);
  for (NodeId s : trace.seeds) out.region[s] = 0;

  // activation order: by (time, node index)
  std::vector<NodeId> order;
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (act[v] != kNeverActivated && act[v] > 0) order.push_back(v);
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return std::pair(act[a], a) < std::pair(act[b], b);
  });

  for (NodeId v : order) {
    const std::uint32_t t = act[v];
    NodeId l_parent = kNoNode, e_parent = kNoNode;
    auto nbrs = g.neighbors(v);
    auto eids = g.incident_edges(v);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      NodeId w = nbrs[i];
      if (act[w] != t - 1) continue;
      if (!perc.passes(eids[i], w)) continue;
      if (L.has_edge(v, w)) {
        l_parent = w;
        break;  // neighbors ascend, first hit is the smallest
      }
      if (e_parent == kNoNode) e_parent = w;
    }
    if (l_parent != kNoNode) {
      out.region[v] = out.region[l_parent];
    } else if (e_parent != kNoNode) {
      out.region[v] = out.region_count++;
      out.region_birth.push_back(t);
    } else {
      throw std::invalid_argument("trace inconsistent with percolation");
    }
  }
  return out;
}

}  // namespace netdiff
