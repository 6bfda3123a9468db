#include "netdiff/graph_gen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace netdiff {

namespace {

double dist2(const LatentPositions& pos, NodeId a, NodeId b) {
  double s = 0.0;
  for (std::uint32_t k = 0; k < pos.dim; ++k) {
    double d = pos.coord(a, k) - pos.coord(b, k);
    s += d * d;
  }
  return s;
}

// Geometric gap for iid Bernoulli(beta) skip sampling over a pair stream.
std::uint64_t geometric_gap(double beta, RngStream& rng) {
  if (beta >= 1.0) return 0;
  double u = rng.u01();
  while (u <= 0.0) u = rng.u01();
  return static_cast<std::uint64_t>(std::log(u) / std::log1p(-beta));
}

}  // namespace

LatticeRandomGraph generate_lattice_random(NodeId n, std::uint32_t q,
                                           std::uint32_t n_side,
                                           RngStream& rng) {
  if (n_side < 2) throw std::invalid_argument("n_side must be >= 2");
  std::uint64_t lattice_n = 1;
  for (std::uint32_t k = 0; k < q; ++k) lattice_n *= n_side;
  if (n < lattice_n)
    throw std::invalid_argument("n smaller than n_side^q lattice");

  LatentPositions pos;
  pos.dim = q;
  pos.coords.resize(static_cast<std::size_t>(n) * q);
  const double step = 1.0 / (n_side - 1);
  // lattice nodes, row-major over the grid
  std::vector<std::uint64_t> stride(q, 1);
  for (std::uint32_t k = q - 1; k > 0; --k) stride[k - 1] = stride[k] * n_side;
  for (std::uint64_t idx = 0; idx < lattice_n; ++idx) {
    std::uint64_t rem = idx;
    for (std::uint32_t k = 0; k < q; ++k) {
      pos.coords[idx * q + k] = static_cast<double>(rem / stride[k]) * step;
      rem %= stride[k];
    }
  }
  for (std::uint64_t v = lattice_n; v < n; ++v)
    for (std::uint32_t k = 0; k < q; ++k)
      pos.coords[v * q + k] = rng.u01();

  const double r = std::max(step, 0.5 * std::sqrt(static_cast<double>(q)) * step);
  const double r2 = r * r * (1.0 + 1e-9);  // lattice points at exactly r must link

  std::vector<std::pair<NodeId, NodeId>> edges;
  if (n <= 20000) {
    for (NodeId i = 0; i < n; ++i)
      for (NodeId j = i + 1; j < n; ++j)
        if (dist2(pos, i, j) <= r2) edges.emplace_back(i, j);
  } else {
    // grid-bucket acceleration: cells of width >= r, scan adjacent cells
    const std::uint32_t ncell =
        std::max<std::uint32_t>(1, static_cast<std::uint32_t>(1.0 / r));
    std::uint64_t total_cells = 1;
    for (std::uint32_t k = 0; k < q; ++k) total_cells *= ncell;
    std::vector<std::vector<NodeId>> buckets(total_cells);
    auto cell_of = [&](NodeId v) {
      std::uint64_t idx = 0;
      for (std::uint32_t k = 0; k < q; ++k) {
        auto c = std::min<std::uint32_t>(
            ncell - 1, static_cast<std::uint32_t>(pos.coord(v, k) * ncell));
        idx = idx * ncell + c;
      }
      return idx;
    };
    for (NodeId v = 0; v < n; ++v) buckets[cell_of(v)].push_back(v);
    std::vector<std::int32_t> offs;
    std::vector<std::uint32_t> coord(q);
    for (NodeId i = 0; i < n; ++i) {
      for (std::uint32_t k = 0; k < q; ++k)
        coord[k] = std::min<std::uint32_t>(
            ncell - 1, static_cast<std::uint32_t>(pos.coord(i, k) * ncell));
      // enumerate {-1,0,1}^q neighbor cells
      std::uint64_t combos = 1;
      for (std::uint32_t k = 0; k < q; ++k) combos *= 3;
      for (std::uint64_t m = 0; m < combos; ++m) {
        std::uint64_t rem = m, idx = 0;
        bool valid = true;
        for (std::uint32_t k = 0; k < q; ++k) {
          std::int64_t c = static_cast<std::int64_t>(coord[k]) +
                           (static_cast<std::int64_t>(rem % 3) - 1);
          rem /= 3;
          if (c < 0 || c >= static_cast<std::int64_t>(ncell)) {
            valid = false;
            break;
          }
          idx = idx * ncell + static_cast<std::uint64_t>(c);
        }
        if (!valid) continue;
        for (NodeId j : buckets[idx])
          if (j > i && dist2(pos, i, j) <= r2) edges.emplace_back(i, j);
      }
    }
  }
  LatticeRandomGraph out;
  out.graph = Graph::from_edges(n, std::move(edges));
  out.positions = std::move(pos);
  return out;
}

namespace {

// support = ceil(delta*n) nearest nodes (excluding self), ties by index
std::vector<std::pair<NodeId, NodeId>> admissible_pairs(
    NodeId n, const ErrorGraphSpec& spec, const Graph* base,
    const LatentPositions* positions) {
  const auto k = static_cast<std::size_t>(
      std::ceil(spec.delta * static_cast<double>(n)));
  std::vector<std::pair<NodeId, NodeId>> pairs;
  std::vector<std::pair<double, NodeId>> ranked;
  for (NodeId i = 0; i < n; ++i) {
    ranked.clear();
    if (spec.support_rule == SupportRule::latent_nearest) {
      for (NodeId j = 0; j < n; ++j)
        if (j != i) ranked.emplace_back(dist2(*positions, i, j), j);
    } else {
      auto dist = distances_from(*base, i);
      for (NodeId j = 0; j < n; ++j)
        if (j != i && dist[j] != kUnreachable)
          ranked.emplace_back(static_cast<double>(dist[j]), j);
    }
    std::size_t take = std::min(k, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + take, ranked.end());
    for (std::size_t m = 0; m < take; ++m) {
      NodeId j = ranked[m].second;
      pairs.emplace_back(std::min(i, j), std::max(i, j));
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

}  // namespace

Graph generate_error_graph(NodeId n, const ErrorGraphSpec& spec,
                           const Graph* base, const LatentPositions* positions,
                           RngStream& rng) {
  if (spec.beta < 0.0 || spec.beta > 1.0)
    throw std::invalid_argument("beta outside [0,1]");
  std::vector<std::pair<NodeId, NodeId>> edges;
  if (spec.beta == 0.0) return Graph::from_edges(n, {});

  if (spec.support_rule == SupportRule::all_pairs || spec.delta >= 1.0) {
    // skip-sample over the C(n,2) linearized pair stream
    const std::uint64_t total =
        static_cast<std::uint64_t>(n) * (n - 1) / 2;
    std::uint64_t idx = geometric_gap(spec.beta, rng);
    while (idx < total) {
      // unrank: row i has n-1-i pairs, offset(i) = i*n - i(i+1)/2
      auto nd = static_cast<double>(n);
      auto id = static_cast<double>(idx);
      std::uint64_t i = static_cast<std::uint64_t>(
          std::floor((2.0 * nd - 1.0 -
                      std::sqrt((2.0 * nd - 1.0) * (2.0 * nd - 1.0) -
                                8.0 * id)) /
                     2.0));
      auto offset = [&](std::uint64_t row) {
        return row * n - row * (row + 1) / 2;
      };
      while (i > 0 && offset(i) > idx) --i;
      while (offset(i + 1) <= idx) ++i;
      NodeId u = static_cast<NodeId>(i);
      NodeId v = static_cast<NodeId>(i + 1 + (idx - offset(i)));
      edges.emplace_back(u, v);
      idx += 1 + geometric_gap(spec.beta, rng);
    }
  } else {
    if (spec.support_rule == SupportRule::latent_nearest && !positions)
      throw std::invalid_argument("latent-nearest support needs positions");
    if (spec.support_rule == SupportRule::hop_nearest && !base)
      throw std::invalid_argument("hop-nearest support needs a base graph");
    for (const auto& pr : admissible_pairs(n, spec, base, positions))
      if (rng.bernoulli(spec.beta)) edges.push_back(pr);
  }
  return Graph::from_edges(n, std::move(edges));
}

Graph generate_random_regular(NodeId n, std::uint32_t d, RngStream& rng) {
  if (d >= n) throw std::invalid_argument("degree must be < n");
  if ((static_cast<std::uint64_t>(n) * d) % 2 != 0)
    throw std::invalid_argument("n*d must be even");
  const std::uint64_t stubs_n = static_cast<std::uint64_t>(n) * d;
  std::vector<NodeId> stubs(stubs_n);
  for (std::uint64_t s = 0; s < stubs_n; ++s)
    stubs[s] = static_cast<NodeId>(s / d);

  constexpr int kMaxAttempts = 100000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    // Fisher-Yates, then pair consecutive stubs
    for (std::uint64_t i = stubs_n - 1; i > 0; --i) {
      std::uint64_t j = rng.uniform_int(i + 1);
      std::swap(stubs[i], stubs[j]);
    }
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(stubs_n);
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(stubs_n / 2);
    bool ok = true;
    for (std::uint64_t s = 0; s < stubs_n; s += 2) {
      NodeId u = stubs[s], v = stubs[s + 1];
      if (u == v) {
        ok = false;
        break;
      }
      if (u > v) std::swap(u, v);
      std::uint64_t key = static_cast<std::uint64_t>(u) * n + v;
      if (!seen.insert(key).second) {
        ok = false;
        break;
      }
      edges.emplace_back(u, v);
    }
    if (ok) return Graph::from_edges(n, std::move(edges));
  }
  throw std::runtime_error("configuration model failed to produce a simple graph");
}

Graph drop_links(const Graph& g, double beta_drop, RngStream& rng) {
  if (beta_drop < 0.0 || beta_drop > 1.0)
    throw std::invalid_argument("beta_drop outside [0,1]");
  std::vector<std::pair<NodeId, NodeId>> kept;
  for (const auto& e : g.edges())
    if (!rng.bernoulli(beta_drop)) kept.push_back(e);
  return Graph::from_edges(g.node_count(), std::move(kept));
}

void save_positions(const LatentPositions& pos, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write positions: " + path);
  for (NodeId v = 0; v < pos.size(); ++v) {
    out << v;
    for (std::uint32_t k = 0; k < pos.dim; ++k) out << ',' << pos.coord(v, k);
    out << '\n';
  }
}

}  // namespace netdiff
