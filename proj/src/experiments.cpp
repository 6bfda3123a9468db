#include "netdiff/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "netdiff/parallel.hpp"

namespace netdiff {

namespace {

std::uint64_t derive_seed(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> path) {
  return RngStream(seed, path).next_u64();
}

// Column-wise mean and standard error over per-rep curves laid out
// rep-major; entries equal to `undefined` are dropped.
void reduce_curve(const std::vector<double>& values, std::size_t reps,
                  std::size_t width, double undefined, CurveResult& out) {
  out.mean.assign(width, 0.0);
  out.std_error.assign(width, 0.0);
  out.defined.assign(width, 0);
  out.reps = reps;
  for (std::size_t t = 0; t < width; ++t) {
    double sum = 0.0;
    std::uint32_t cnt = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      double v = values[r * width + t];
      if (v == undefined) continue;
      sum += v;
      ++cnt;
    }
    out.defined[t] = cnt;
    if (cnt == 0) {
      out.mean[t] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    double m = sum / cnt;
    out.mean[t] = m;
    if (cnt > 1) {
      double ss = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        double v = values[r * width + t];
        if (v == undefined) continue;
        ss += (v - m) * (v - m);
      }
      out.std_error[t] = std::sqrt(ss / (cnt - 1)) / std::sqrt(double(cnt));
    }
  }
}

}  // namespace

SeedPerturbation build_perturbation(const Graph& L, const Graph& E, NodeId i0,
                                    RngStream& rng) {
  if (L.node_count() != E.node_count())
    throw std::invalid_argument("L and E node counts differ");
  if (i0 >= L.node_count()) throw std::invalid_argument("i0 out of range");
  if (E.edge_count() == 0)
    throw std::invalid_argument("perturbation needs a non-empty error graph");

  Graph G = union_graphs(L, E);
  auto dist = distances_from(G, i0);

  // nearest and second-nearest E-incident nodes, ties by index
  SeedPerturbation out;
  out.i0 = i0;
  std::uint32_t d1 = kUnreachable, d2 = kUnreachable;
  for (NodeId v = 0; v < G.node_count(); ++v) {
    if (E.degree(v) == 0 || dist[v] == kUnreachable) continue;
    if (dist[v] < d1 || (dist[v] == d1 && v < out.e1)) {
      d2 = d1;
      out.e2 = out.e1;
      d1 = dist[v];
      out.e1 = v;
    } else if (dist[v] < d2 || (dist[v] == d2 && v < out.e2)) {
      d2 = dist[v];
      out.e2 = v;
    }
  }
  if (out.e2 == kNoNode)
    throw std::invalid_argument(
        "perturbation needs two reachable error-incident nodes");
  out.d_e2 = d2;

  const std::uint32_t radius = d2 + 1;
  std::vector<NodeId> J;
  std::uint64_t ball_size = 0;
  for (NodeId v = 0; v < G.node_count(); ++v) {
    if (dist[v] == kUnreachable || dist[v] > radius) continue;
    ++ball_size;
    if (dist[v] == radius) J.push_back(v);
  }
  if (J.empty())
    throw std::invalid_argument("no candidate alternative seeds at the target radius");
  out.j0 = J[rng.uniform_int(J.size())];
  out.neighborhood_share =
      static_cast<double>(ball_size) / static_cast<double>(G.node_count());
  out.j_share = static_cast<double>(J.size()) / static_cast<double>(ball_size);
  return out;
}

CurveResult sensitive_dependence_curve(const Graph& L, const Graph& E,
                                       const SeedPerturbation& pert, double p,
                                       std::uint32_t T, std::size_t reps,
                                       std::uint64_t seed, unsigned threads) {
  if (reps == 0) throw std::invalid_argument("reps must be positive");
  Graph G = union_graphs(L, E);
  const std::size_t width = static_cast<std::size_t>(T) + 1;
  constexpr double kUndef = -1.0;
  std::vector<double> vals(reps * width, kUndef);

  parallel_for(reps, threads, [&](std::size_t r) {
    auto perc = sample_percolation_keyed(G, p, PercMode::undirected,
                                         derive_seed(seed, {r}));
    auto a = run_diffusion(perc, {pert.i0}, T);
    auto b = run_diffusion(perc, {pert.j0}, T);
    for (std::uint32_t t = 0; t <= T; ++t) {
      double j = jaccard_overlap(a, b, t);
      vals[r * width + t] = j == kJaccardUndefined ? kUndef : j;
    }
  });

  CurveResult out;
  reduce_curve(vals, reps, width, kUndef, out);
  return out;
}

CurveResult forecast_ratio_curve(const Graph& L, const ErrorGraphSpec& espec,
                                 const LatentPositions* positions, NodeId i0,
                                 const ForecastParams& params, std::uint32_t T,
                                 std::size_t reps, std::uint64_t seed,
                                 unsigned threads) {
  if (reps == 0) throw std::invalid_argument("reps must be positive");
  if (i0 >= L.node_count()) throw std::invalid_argument("i0 out of range");
  const std::size_t width = static_cast<std::size_t>(T) + 1;
  std::vector<double> ever_l(reps * width), ever_g(reps * width);

  parallel_for(reps, threads, [&](std::size_t r) {
    RngStream egen(seed, {r, 1});
    Graph E = generate_error_graph(L.node_count(), espec, &L, positions, egen);
    Graph G = union_graphs(L, E);
    DiffusionTrace tl, tg;
    if (params.decay) {
      RngStream rl(seed, {r, 3}), rg(seed, {r, 4});
      tl = run_diffusion_decaying(L, {i0}, T, *params.decay, rl);
      tg = run_diffusion_decaying(G, {i0}, T, *params.decay, rg);
    } else {
      // same key on both graphs: shared edges get identical indicators
      const std::uint64_t pkey = derive_seed(seed, {r, 2});
      auto pl = sample_percolation_keyed(L, params.p, PercMode::undirected, pkey);
      auto pg = sample_percolation_keyed(G, params.p, PercMode::undirected, pkey);
      tl = run_diffusion(pl, {i0}, T);
      tg = run_diffusion(pg, {i0}, T);
    }
    for (std::uint32_t t = 0; t <= T; ++t) {
      ever_l[r * width + t] = static_cast<double>(tl.ever_activated_by(t));
      ever_g[r * width + t] = static_cast<double>(tg.ever_activated_by(t));
    }
  });

  CurveResult out;
  out.mean.assign(width, 0.0);
  out.std_error.assign(width, 0.0);
  out.defined.assign(width, static_cast<std::uint32_t>(reps));
  out.reps = reps;
  for (std::size_t t = 0; t < width; ++t) {
    double ml = 0.0, mg = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      ml += ever_l[r * width + t];
      mg += ever_g[r * width + t];
    }
    ml /= reps;
    mg /= reps;
    const double ratio = ml / mg;  // mg >= 1: the seed always activates
    out.mean[t] = ratio;
    if (reps > 1) {
      // delta-method standard error for a ratio of paired means
      double sll = 0.0, sgg = 0.0, slg = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        double dl = ever_l[r * width + t] - ml;
        double dg = ever_g[r * width + t] - mg;
        sll += dl * dl;
        sgg += dg * dg;
        slg += dl * dg;
      }
      sll /= reps - 1;
      sgg /= reps - 1;
      slg /= reps - 1;
      double var = (sll - 2.0 * ratio * slg + ratio * ratio * sgg) /
                   (static_cast<double>(reps) * mg * mg);
      out.std_error[t] = var > 0.0 ? std::sqrt(var) : 0.0;
    }
  }
  return out;
}

CurveResult jump_count_curve(const Graph& L, const Graph& E, NodeId i0,
                             double p, std::uint32_t T, std::size_t reps,
                             std::uint64_t seed, unsigned threads) {
  if (reps == 0) throw std::invalid_argument("reps must be positive");
  Graph G = union_graphs(L, E);
  const std::size_t width = static_cast<std::size_t>(T) + 1;
  std::vector<double> vals(reps * width, 0.0);

  parallel_for(reps, threads, [&](std::size_t r) {
    RngStream rs(seed, {r});
    auto perc = sample_percolation(G, p, PercMode::undirected, rs);
    auto trace = run_diffusion(perc, {i0}, T);
    auto jumps = count_jumps(trace, perc, L, E);
    for (std::uint32_t t = 0; t <= T; ++t)
      vals[r * width + t] = static_cast<double>(jumps[t]);
  });

  CurveResult out;
  reduce_curve(vals, reps, width, std::numeric_limits<double>::infinity(), out);
  return out;
}

PEstimate estimate_p(const std::vector<DiffusionTrace>& traces,
                     const Graph& L) {
  PEstimate out;
  std::vector<std::uint32_t> touch_count(L.node_count(), 0);
  std::vector<NodeId> touched;
  for (const auto& trace : traces) {
    if (trace.activation_time.size() != L.node_count())
      throw std::invalid_argument("trace node count does not match graph");
    const auto& act = trace.activation_time;
    // activation-time buckets drive the per-step frontier scan
    std::vector<std::vector<NodeId>> bucket(trace.horizon + 1);
    for (NodeId v = 0; v < L.node_count(); ++v)
      if (act[v] != kNeverActivated && act[v] <= trace.horizon)
        bucket[act[v]].push_back(v);
    for (std::uint32_t t = 1; t <= trace.horizon; ++t) {
      touched.clear();
      for (NodeId u : bucket[t - 1]) {
        for (NodeId v : L.neighbors(u)) {
          if (act[v] <= t - 1) continue;  // already activated
          if (touch_count[v] == 0) touched.push_back(v);
          ++touch_count[v];
        }
      }
      for (NodeId v : touched) {
        if (touch_count[v] == 1) {
          ++out.exposures;
          if (act[v] == t) ++out.transmissions;
        }
        touch_count[v] = 0;
      }
    }
  }
  if (out.exposures == 0)
    throw std::runtime_error("no qualifying single-exposure node-steps");
  out.p_hat =
      static_cast<double>(out.transmissions) / static_cast<double>(out.exposures);
  return out;
}

BetaSamplingResult beta_sampling_experiment(NodeId n, double beta,
                                            std::uint32_t m, std::size_t reps,
                                            std::uint64_t seed) {
  if (m < 2 || m > n) throw std::invalid_argument("sample size m outside [2, n]");
  if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("beta outside [0,1]");
  if (reps == 0) throw std::invalid_argument("reps must be positive");
  const std::uint64_t total = static_cast<std::uint64_t>(m) * (m - 1) / 2;

  RngStream rng(seed);
  std::vector<double> beta_hats(reps);
  std::size_t zero_count = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    std::uint64_t links = 0;
    if (beta > 0.0) {
      // skip sampling: count Bernoulli(beta) successes over `total` trials
      double u = rng.u01();
      while (u <= 0.0) u = rng.u01();
      std::uint64_t idx =
          static_cast<std::uint64_t>(std::log(u) / std::log1p(-beta));
      while (idx < total) {
        ++links;
        u = rng.u01();
        while (u <= 0.0) u = rng.u01();
        idx += 1 + static_cast<std::uint64_t>(std::log(u) / std::log1p(-beta));
      }
    }
    if (links == 0) ++zero_count;
    beta_hats[r] = static_cast<double>(links) / static_cast<double>(total);
  }

  BetaSamplingResult out;
  out.reps = reps;
  out.p_no_links_empirical =
      static_cast<double>(zero_count) / static_cast<double>(reps);
  out.p_no_links_analytic = std::pow(1.0 - beta, static_cast<double>(total));
  double mean = 0.0;
  for (double b : beta_hats) mean += b;
  mean /= reps;
  out.beta_hat_mean = mean;
  if (reps > 1) {
    double ss = 0.0;
    for (double b : beta_hats) ss += (b - mean) * (b - mean);
    out.beta_hat_sd = std::sqrt(ss / (reps - 1));
  }
  return out;
}

DetectionResult detection_experiment(const Graph& L, const Graph& E, NodeId i0,
                                     double p, std::uint32_t T, double alpha,
                                     std::size_t reps, std::uint64_t seed,
                                     unsigned threads) {
  if (reps == 0) throw std::invalid_argument("reps must be positive");
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("alpha outside [0,1]");
  Graph G = union_graphs(L, E);
  const std::size_t width = static_cast<std::size_t>(T) + 1;
  std::vector<double> active(reps * width, 0.0), detected(reps * width, 0.0);

  parallel_for(reps, threads, [&](std::size_t r) {
    RngStream rs(seed, {r, 0});
    auto perc = sample_percolation(G, p, PercMode::undirected, rs);
    auto trace = run_diffusion(perc, {i0}, T);
    auto regions = label_regions(trace, perc, L, E);

    // per-region earliest activation step of a flagged member
    RngStream flags(seed, {r, 1});
    std::vector<std::uint32_t> detect_at(regions.region_count, kNeverActivated);
    for (NodeId v = 0; v < G.node_count(); ++v) {
      if (trace.activation_time[v] == kNeverActivated) continue;
      if (!flags.bernoulli(alpha)) continue;
      auto& d = detect_at[regions.region[v]];
      d = std::min(d, trace.activation_time[v]);
    }
    for (std::uint32_t rc = 0; rc < regions.region_count; ++rc) {
      const std::uint32_t birth = regions.region_birth[rc];
      for (std::uint32_t t = birth; t <= T; ++t) active[r * width + t] += 1.0;
      if (detect_at[rc] == kNeverActivated) continue;
      for (std::uint32_t t = detect_at[rc]; t <= T; ++t)
        detected[r * width + t] += 1.0;
    }
  });

  DetectionResult out;
  out.reps = reps;
  out.ratio.assign(width, 0.0);
  out.mean_detected.assign(width, 0.0);
  out.mean_active.assign(width, 0.0);
  for (std::size_t t = 0; t < width; ++t) {
    double ma = 0.0, md = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      ma += active[r * width + t];
      md += detected[r * width + t];
    }
    out.mean_active[t] = ma / reps;
    out.mean_detected[t] = md / reps;
    out.ratio[t] = out.mean_detected[t] / out.mean_active[t];  // >= 1 region
  }
  return out;
}

namespace {

double msm_objective(const std::vector<VillageObservation>& villages,
                     std::uint32_t T, std::size_t reps, double p,
                     std::uint64_t seed) {
  double moment = 0.0;
  for (std::size_t v = 0; v < villages.size(); ++v) {
    const auto& vil = villages[v];
    double sim = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      // key fixed per (village, rep): objective is coupled across p
      auto perc = sample_percolation_keyed(vil.graph, p, PercMode::undirected,
                                           derive_seed(seed, {v, r}));
      sim += static_cast<double>(
          run_diffusion(perc, vil.seeds, T).total_activated());
    }
    moment += vil.observed_count - sim / static_cast<double>(reps);
  }
  moment /= static_cast<double>(villages.size());
  return moment * moment;
}

}  // namespace

MsmFit msm_fit_p(const std::vector<VillageObservation>& villages,
                 std::uint32_t T, std::size_t reps,
                 const std::vector<double>& grid, std::uint64_t seed,
                 unsigned threads) {
  if (villages.empty()) throw std::invalid_argument("no villages");
  if (grid.empty()) throw std::invalid_argument("empty grid");
  if (reps == 0) throw std::invalid_argument("reps must be positive");

  MsmFit out;
  out.grid = grid;
  out.grid_objective.assign(grid.size(), 0.0);
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    out.grid_objective[i] = msm_objective(villages, T, reps, grid[i], seed);
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (out.grid_objective[i] < out.grid_objective[best]) best = i;

  // golden-section refinement inside the bracketing grid cells
  double lo = grid[best > 0 ? best - 1 : best];
  double hi = grid[best + 1 < grid.size() ? best + 1 : best];
  if (hi - lo < 1e-12) {
    out.p_hat = grid[best];
    out.objective = out.grid_objective[best];
    return out;
  }
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = msm_objective(villages, T, reps, x1, seed);
  double f2 = msm_objective(villages, T, reps, x2, seed);
  while (b - a > 1e-3) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = msm_objective(villages, T, reps, x1, seed);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = msm_objective(villages, T, reps, x2, seed);
    }
  }
  out.p_hat = 0.5 * (a + b);
  out.objective = msm_objective(villages, T, reps, out.p_hat, seed);
  if (out.grid_objective[best] < out.objective) {
    out.p_hat = grid[best];
    out.objective = out.grid_objective[best];
  }
  return out;
}

std::vector<NodeId> multi_seed_perturb(const std::vector<NodeId>& seeds,
                                       const Graph& g, RngStream& rng) {
  if (seeds.empty()) throw std::invalid_argument("empty seed set");
  for (NodeId s : seeds)
    if (s >= g.node_count()) throw std::invalid_argument("seed out of range");

  const std::size_t idx = rng.uniform_int(seeds.size());
  const NodeId s = seeds[idx];
  std::vector<NodeId> eligible;
  for (NodeId v : g.neighbors(s))
    if (std::find(seeds.begin(), seeds.end(), v) == seeds.end())
      eligible.push_back(v);
  if (eligible.empty())
    throw std::runtime_error("chosen seed has no non-seed neighbor");
  std::vector<NodeId> out = seeds;
  out[idx] = eligible[rng.uniform_int(eligible.size())];
  return out;
}

}  // namespace netdiff
