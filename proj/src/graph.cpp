#include "netdiff/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace netdiff {

Graph Graph::from_edges(NodeId n,
                        std::vector<std::pair<NodeId, NodeId>> edges) {
  for (auto& [u, v] : edges) {
    if (u >= n || v >= n)
      throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop rejected");
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("duplicate edge rejected");

  Graph g;
  g.n_ = n;
  g.edges_ = std::move(edges);
  g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& [u, v] : g.edges_) {
    ++g.offsets_[u + 1];
    ++g.offsets_[v + 1];
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.adj_.resize(2 * g.edges_.size());
  g.adj_edge_.resize(2 * g.edges_.size());
  std::vector<std::uint64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (EdgeId e = 0; e < g.edges_.size(); ++e) {
    auto [u, v] = g.edges_[e];
    g.adj_[cursor[u]] = v;
    g.adj_edge_[cursor[u]++] = e;
    g.adj_[cursor[v]] = u;
    g.adj_edge_[cursor[v]++] = e;
  }
  // Neighbor lists come out sorted because edges_ is sorted by (u,v) and the
  // reverse arcs are inserted in increasing u as well.
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<std::uint32_t> distances_from(const Graph& g, NodeId source) {
  if (source >= g.node_count())
    throw std::invalid_argument("distances_from: source out of range");
  std::vector<std::uint32_t> dist(g.node_count(), kUnreachable);
  std::vector<NodeId> frontier{source}, next;
  dist[source] = 0;
  std::uint32_t d = 0;
  while (!frontier.empty()) {
    ++d;
    next.clear();
    for (NodeId u : frontier)
      for (NodeId v : g.neighbors(u))
        if (dist[v] == kUnreachable) {
          dist[v] = d;
          next.push_back(v);
        }
    frontier.swap(next);
  }
  return dist;
}

std::vector<NodeId> ball(const Graph& g, NodeId center, std::uint32_t radius) {
  if (center >= g.node_count())
    throw std::invalid_argument("ball: center out of range");
  auto dist = distances_from(g, center);
  std::vector<NodeId> out;
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (dist[v] <= radius) out.push_back(v);
  return out;
}

GraphStats graph_stats(const Graph& g,
                       std::optional<std::uint32_t> path_length_sample,
                       RngStream& rng) {
  const NodeId n = g.node_count();
  if (n == 0) throw std::invalid_argument("graph_stats: empty graph");

  GraphStats s;
  s.mean_degree = g.mean_degree();
  s.min_degree = UINT32_MAX;
  s.max_degree = 0;
  for (NodeId v = 0; v < n; ++v) {
    auto d = static_cast<std::uint32_t>(g.degree(v));
    s.min_degree = std::min(s.min_degree, d);
    s.max_degree = std::max(s.max_degree, d);
  }

  // clustering: (2 * triangles through v) / (deg * (deg-1)); deg<2 -> 0
  double clus_sum = 0.0;
  for (NodeId v = 0; v < n; ++v) {
    auto d = g.degree(v);
    if (d < 2) continue;
    std::uint64_t tri = 0;
    auto nv = g.neighbors(v);
    for (std::size_t i = 0; i < nv.size(); ++i)
      for (std::size_t j = i + 1; j < nv.size(); ++j)
        if (g.has_edge(nv[i], nv[j])) ++tri;
    clus_sum += 2.0 * static_cast<double>(tri) /
                (static_cast<double>(d) * static_cast<double>(d - 1));
  }
  s.mean_clustering = clus_sum / n;

  // components
  {
    std::vector<char> seen(n, 0);
    std::vector<NodeId> stack;
    for (NodeId v = 0; v < n; ++v) {
      if (seen[v]) continue;
      ++s.component_count;
      stack.push_back(v);
      seen[v] = 1;
      while (!stack.empty()) {
        NodeId u = stack.back();
        stack.pop_back();
        for (NodeId w : g.neighbors(u))
          if (!seen[w]) {
            seen[w] = 1;
            stack.push_back(w);
          }
      }
    }
  }

  // distances: exact all-source BFS unless a sample size is requested
  std::vector<NodeId> sources;
  if (!path_length_sample || *path_length_sample >= n) {
    sources.resize(n);
    std::iota(sources.begin(), sources.end(), 0);
  } else {
    // uniform sample without replacement
    std::vector<NodeId> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (std::uint32_t i = 0; i < *path_length_sample; ++i) {
      std::size_t j = i + rng.uniform_int(n - i);
      std::swap(pool[i], pool[j]);
      sources.push_back(pool[i]);
    }
  }
  s.path_length_sources = static_cast<std::uint32_t>(sources.size());

  std::uint64_t pair_count = 0;
  double dist_sum = 0.0;
  std::uint32_t diameter = 0;
  for (NodeId src : sources) {
    auto dist = distances_from(g, src);
    for (NodeId v = 0; v < n; ++v) {
      if (v == src || dist[v] == kUnreachable) continue;
      dist_sum += dist[v];
      ++pair_count;
      diameter = std::max(diameter, dist[v]);
    }
  }
  s.diameter = diameter;
  s.avg_path_length = pair_count ? dist_sum / static_cast<double>(pair_count)
                                 : 0.0;
  return s;
}

Graph union_graphs(const Graph& a, const Graph& b) {
  if (a.node_count() != b.node_count())
    throw std::invalid_argument("union_graphs: node count mismatch");
  std::vector<std::pair<NodeId, NodeId>> edges = a.edges();
  edges.insert(edges.end(), b.edges().begin(), b.edges().end());
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return Graph::from_edges(a.node_count(), std::move(edges));
}

ComponentResult largest_component(const Graph& g) {
  const NodeId n = g.node_count();
  if (n == 0) throw std::invalid_argument("largest_component: empty graph");
  std::vector<std::uint32_t> comp(n, UINT32_MAX);
  std::vector<std::uint64_t> comp_size;
  std::vector<NodeId> stack;
  for (NodeId v = 0; v < n; ++v) {
    if (comp[v] != UINT32_MAX) continue;
    std::uint32_t c = static_cast<std::uint32_t>(comp_size.size());
    comp_size.push_back(0);
    comp[v] = c;
    stack.push_back(v);
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      ++comp_size[c];
      for (NodeId w : g.neighbors(u))
        if (comp[w] == UINT32_MAX) {
          comp[w] = c;
          stack.push_back(w);
        }
    }
  }
  // largest; ties resolved by lowest component id, i.e. smallest min index
  std::uint32_t best = 0;
  for (std::uint32_t c = 1; c < comp_size.size(); ++c)
    if (comp_size[c] > comp_size[best]) best = c;

  std::vector<NodeId> node_map(n, kNoNode);
  NodeId next = 0;
  for (NodeId v = 0; v < n; ++v)
    if (comp[v] == best) node_map[v] = next++;
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (const auto& [u, v] : g.edges())
    if (comp[u] == best && comp[v] == best)
      edges.emplace_back(node_map[u], node_map[v]);
  ComponentResult out;
  out.graph = Graph::from_edges(next, std::move(edges));
  out.node_map = std::move(node_map);
  return out;
}

Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open edge list: " + path);
  std::vector<std::pair<NodeId, NodeId>> edges;
  NodeId max_node = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::uint64_t u, v;
    char comma;
    std::istringstream ss(line);
    if (!(ss >> u >> comma >> v) || comma != ',')
      throw std::invalid_argument("bad edge at " + path + ":" +
                                  std::to_string(lineno));
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    max_node = std::max({max_node, static_cast<NodeId>(u),
                         static_cast<NodeId>(v)});
  }
  const NodeId n = edges.empty() ? 0 : max_node + 1;
  return Graph::from_edges(n, std::move(edges));
}

void save_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write edge list: " + path);
  for (const auto& [u, v] : g.edges()) out << u << ',' << v << '\n';
}

}  // namespace netdiff
