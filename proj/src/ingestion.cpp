#include "netdiff/ingestion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace netdiff {

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t line,
                             const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, const std::string& path,
                    std::size_t line) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) parse_fail(path, line, "trailing junk in number: " + s);
    return v;
  } catch (const std::invalid_argument&) {
    parse_fail(path, line, "not a number: " + s);
  } catch (const std::out_of_range&) {
    parse_fail(path, line, "number out of range: " + s);
  }
}

std::uint64_t parse_id(const std::string& s, const std::string& path,
                       std::size_t line) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    parse_fail(path, line, "not a node id: " + s);
  return std::stoull(s);
}

}  // namespace

FlowTable load_flows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open flows file: " + path);

  FlowTable out;
  std::unordered_map<std::string, NodeId> intern;
  std::unordered_set<std::uint64_t> seen_pairs;
  auto id_of = [&](const std::string& name) {
    auto it = intern.find(name);
    if (it != intern.end()) return it->second;
    NodeId id = static_cast<NodeId>(out.names.size());
    intern.emplace(name, id);
    out.names.push_back(name);
    return id;
  };

  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    auto fields = split_csv(line);
    if (!header_seen) {
      if (fields.size() != 3 || trim(fields[0]) != "origin" ||
          trim(fields[1]) != "destination" || trim(fields[2]) != "flow")
        parse_fail(path, lineno, "expected header origin,destination,flow");
      header_seen = true;
      continue;
    }
    if (fields.size() != 3) parse_fail(path, lineno, "expected 3 fields");
    NodeId o = id_of(trim(fields[0]));
    NodeId d = id_of(trim(fields[1]));
    double f = parse_double(trim(fields[2]), path, lineno);
    if (f < 0.0) parse_fail(path, lineno, "negative flow");
    std::uint64_t key = (static_cast<std::uint64_t>(o) << 32) | d;
    if (!seen_pairs.insert(key).second)
      parse_fail(path, lineno, "duplicate ordered pair " + out.names[o] + "," +
                                   out.names[d]);
    out.records.push_back({o, d, f});
  }
  if (!header_seen && lineno > 0)
    parse_fail(path, 1, "missing header origin,destination,flow");
  return out;
}

PrunedFlows symmetrize_and_prune(const FlowTable& flows,
                                 const FlowThreshold& threshold) {
  if (flows.records.empty()) throw std::invalid_argument("no flow records");
  const NodeId n = static_cast<NodeId>(flows.names.size());

  // symmetrized flow per unordered pair: mean of the two directions,
  // a missing direction contributing 0
  std::map<std::pair<NodeId, NodeId>, double> sym;
  for (const auto& rec : flows.records) {
    if (rec.origin == rec.destination) continue;
    auto key = std::minmax(rec.origin, rec.destination);
    sym[{key.first, key.second}] += rec.flow / 2.0;
  }

  double cutoff = threshold.value;
  if (threshold.is_percentile) {
    if (threshold.value <= 0.0 || threshold.value >= 100.0)
      throw std::invalid_argument("percentile outside (0,100)");
    std::vector<double> positive;
    for (const auto& [k, f] : sym)
      if (f > 0.0) positive.push_back(f);
    if (positive.empty())
      throw std::invalid_argument("no positive symmetrized flows");
    std::sort(positive.begin(), positive.end());
    // nearest-rank percentile
    std::size_t rank = static_cast<std::size_t>(
        std::ceil(threshold.value / 100.0 * positive.size()));
    cutoff = positive[std::min(rank, positive.size()) - 1];
  }

  std::vector<std::pair<NodeId, NodeId>> edges;
  for (const auto& [k, f] : sym)
    if (f > cutoff) edges.push_back(k);

  auto comp = largest_component(Graph::from_edges(n, std::move(edges)));
  PrunedFlows out;
  out.graph = std::move(comp.graph);
  out.node_map = std::move(comp.node_map);
  out.cutoff = cutoff;
  return out;
}

VillageData load_village(const std::string& graph_path,
                         const std::string& seeds_path,
                         const std::optional<std::string>& outcomes_path) {
  std::ifstream gin(graph_path);
  if (!gin) throw std::runtime_error("cannot open graph file: " + graph_path);

  std::vector<std::pair<NodeId, NodeId>> directed;
  std::uint64_t max_id = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(gin, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    auto fields = split_csv(line);
    if (fields.size() != 2) parse_fail(graph_path, lineno, "expected u,v");
    std::uint64_t u = parse_id(trim(fields[0]), graph_path, lineno);
    std::uint64_t v = parse_id(trim(fields[1]), graph_path, lineno);
    if (u == v) parse_fail(graph_path, lineno, "self-loop");
    max_id = std::max({max_id, u, v});
    directed.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  if (directed.empty())
    throw std::runtime_error("empty village graph: " + graph_path);

  // OR-symmetrization: a link exists if either direction was reported
  const NodeId n = static_cast<NodeId>(max_id + 1);
  std::vector<std::pair<NodeId, NodeId>> undirected;
  undirected.reserve(directed.size());
  for (auto [u, v] : directed)
    undirected.emplace_back(std::min(u, v), std::max(u, v));
  std::sort(undirected.begin(), undirected.end());
  undirected.erase(std::unique(undirected.begin(), undirected.end()),
                   undirected.end());

  VillageData out;
  out.graph = Graph::from_edges(n, std::move(undirected));

  std::ifstream sin(seeds_path);
  if (!sin) throw std::runtime_error("cannot open seeds file: " + seeds_path);
  lineno = 0;
  while (std::getline(sin, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    std::uint64_t s = parse_id(line, seeds_path, lineno);
    if (s >= n) parse_fail(seeds_path, lineno, "seed not in graph: " + line);
    out.seeds.push_back(static_cast<NodeId>(s));
  }
  if (out.seeds.empty())
    throw std::runtime_error("empty seed set: " + seeds_path);
  std::sort(out.seeds.begin(), out.seeds.end());
  out.seeds.erase(std::unique(out.seeds.begin(), out.seeds.end()),
                  out.seeds.end());

  if (outcomes_path) {
    std::ifstream oin(*outcomes_path);
    if (!oin)
      throw std::runtime_error("cannot open outcomes file: " + *outcomes_path);
    lineno = 0;
    std::vector<std::string> cols;
    std::vector<bool> filled(n, false);
    while (std::getline(oin, line)) {
      ++lineno;
      line = trim(line);
      if (line.empty()) continue;
      auto fields = split_csv(line);
      if (cols.empty()) {
        if (fields.size() < 2 || trim(fields[0]) != "node")
          parse_fail(*outcomes_path, lineno, "expected header node,<col>...");
        for (std::size_t c = 1; c < fields.size(); ++c) {
          cols.push_back(trim(fields[c]));
          out.outcomes[cols.back()].assign(n, 0.0);
        }
        continue;
      }
      if (fields.size() != cols.size() + 1)
        parse_fail(*outcomes_path, lineno, "column count mismatch");
      std::uint64_t v = parse_id(trim(fields[0]), *outcomes_path, lineno);
      if (v >= n) parse_fail(*outcomes_path, lineno, "node id not in graph");
      if (filled[v]) parse_fail(*outcomes_path, lineno, "duplicate node row");
      filled[v] = true;
      for (std::size_t c = 0; c < cols.size(); ++c)
        out.outcomes[cols[c]][v] =
            parse_double(trim(fields[c + 1]), *outcomes_path, lineno);
    }
    if (cols.empty())
      throw std::runtime_error("empty outcomes table: " + *outcomes_path);
    for (NodeId v = 0; v < n; ++v)
      if (!filled[v])
        throw std::runtime_error(*outcomes_path + ": missing row for node " +
                                 std::to_string(v));
  }
  return out;
}

}  // namespace netdiff
