#include "netdiff/peer_effects.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "netdiff/graph_gen.hpp"
#include "netdiff/parallel.hpp"

namespace netdiff {

double spectral_radius(const Graph& g) {
  const NodeId n = g.node_count();
  if (n == 0) throw std::invalid_argument("empty graph");
  if (g.edge_count() == 0) return 0.0;

  // power iteration on A + I: strictly positive shift kills the bipartite
  // +/-lambda oscillation; subtract the shift at the end
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> y(n);
  double lambda = 0.0;
  constexpr int kMaxIter = 10000;
  for (int it = 1; it <= kMaxIter; ++it) {
    for (NodeId v = 0; v < n; ++v) {
      double acc = x[v];
      for (NodeId w : g.neighbors(v)) acc += x[w];
      y[v] = acc;
    }
    double norm = 0.0;
    for (double t : y) norm += t * t;
    norm = std::sqrt(norm);
    double next = 0.0;  // Rayleigh quotient x'(A+I)x with unit x
    for (NodeId v = 0; v < n; ++v) next += x[v] * y[v];
    for (NodeId v = 0; v < n; ++v) x[v] = y[v] / norm;
    if (it > 1 && std::abs(next - lambda) <= 1e-9 * std::abs(next))
      return next - 1.0;
    lambda = next;
  }
  throw std::runtime_error("power iteration did not converge in " +
                           std::to_string(kMaxIter) + " iterations");
}

ExposureVector diffusion_exposure(const Graph& g, const std::vector<double>& s,
                                  double p, std::uint32_t T) {
  const NodeId n = g.node_count();
  if (s.size() != n) throw std::invalid_argument("seed vector size mismatch");
  if (T < 1) throw std::invalid_argument("T must be >= 1");
  if (p < 0.0) throw std::invalid_argument("negative probability");

  ExposureVector out;
  out.p_used = p;
  out.T_used = T;
  out.value.assign(n, 0.0);
  if (p > 0.0 && g.edge_count() > 0)
    out.contraction_warning = p * spectral_radius(g) > 1.0 + 1e-12;

  std::vector<double> cur(s), next(n);
  for (std::uint32_t t = 1; t <= T; ++t) {
    for (NodeId v = 0; v < n; ++v) {
      double acc = 0.0;
      for (NodeId w : g.neighbors(v)) acc += cur[w];
      next[v] = p * acc;
    }
    cur.swap(next);
    for (NodeId v = 0; v < n; ++v) out.value[v] += cur[v];
  }
  return out;
}

std::vector<double> standardize(const std::vector<double>& v,
                                const std::vector<bool>& mask) {
  if (v.size() != mask.size()) throw std::invalid_argument("mask size mismatch");
  double sum = 0.0;
  std::size_t cnt = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!mask[i]) continue;
    sum += v[i];
    ++cnt;
  }
  if (cnt < 2) throw std::invalid_argument("masked sample smaller than 2");
  const double mean = sum / cnt;
  double ss = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (mask[i]) ss += (v[i] - mean) * (v[i] - mean);
  const double sd = std::sqrt(ss / (cnt - 1));
  if (sd == 0.0) throw std::runtime_error("zero variance in masked sample");
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - mean) / sd;
  return out;
}

RegressionResult ols_fe(const std::vector<double>& y,
                        const std::vector<double>& x_main,
                        const std::vector<std::vector<double>>& controls,
                        const std::vector<std::uint32_t>& fe,
                        const std::vector<std::uint32_t>& clusters) {
  const std::size_t n = y.size();
  const std::size_t kx = 1 + controls.size();
  if (x_main.size() != n || fe.size() != n || clusters.size() != n)
    throw std::invalid_argument("regression input length mismatch");
  for (const auto& c : controls)
    if (c.size() != n) throw std::invalid_argument("control length mismatch");

  Eigen::MatrixXd X(n, kx);
  Eigen::VectorXd Y(n);
  for (std::size_t i = 0; i < n; ++i) {
    Y(i) = y[i];
    X(i, 0) = x_main[i];
    for (std::size_t c = 0; c < controls.size(); ++c) X(i, c + 1) = controls[c][i];
  }

  // absorb fixed effects by within-group demeaning
  std::unordered_map<std::uint32_t, std::size_t> fe_index;
  for (std::size_t i = 0; i < n; ++i)
    fe_index.emplace(fe[i], fe_index.size());
  const std::size_t n_fe = fe_index.size();
  Eigen::MatrixXd gx = Eigen::MatrixXd::Zero(n_fe, kx);
  Eigen::VectorXd gy = Eigen::VectorXd::Zero(n_fe);
  Eigen::VectorXd gn = Eigen::VectorXd::Zero(n_fe);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t gidx = fe_index[fe[i]];
    gx.row(gidx) += X.row(i);
    gy(gidx) += Y(i);
    gn(gidx) += 1.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t gidx = fe_index[fe[i]];
    X.row(i) -= gx.row(gidx) / gn(gidx);
    Y(i) -= gy(gidx) / gn(gidx);
  }

  const std::size_t k_total = kx + n_fe;
  if (n <= k_total)
    throw std::invalid_argument("too few observations for regressors plus fixed effects");

  Eigen::MatrixXd xtx = X.transpose() * X;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(xtx);
  lu.setThreshold(1e-10);
  if (lu.rank() < static_cast<Eigen::Index>(kx)) {
    // name the first column whose removal restores full rank
    for (std::size_t drop = 0; drop < kx; ++drop) {
      Eigen::MatrixXd sub(n, kx - 1);
      for (std::size_t c = 0, o = 0; c < kx; ++c)
        if (c != drop) sub.col(o++) = X.col(c);
      Eigen::FullPivLU<Eigen::MatrixXd> lus(sub.transpose() * sub);
      lus.setThreshold(1e-10);
      if (lus.rank() == static_cast<Eigen::Index>(kx - 1))
        throw std::runtime_error(
            "rank-deficient design: column " + std::to_string(drop) +
            (drop == 0 ? " (main regressor)" : " (control)") + " is collinear");
    }
    throw std::runtime_error("rank-deficient design");
  }
  Eigen::MatrixXd xtx_inv = lu.inverse();
  Eigen::VectorXd beta = xtx_inv * (X.transpose() * Y);
  Eigen::VectorXd resid = Y - X * beta;

  // Liang-Zeger sandwich over clusters
  std::unordered_map<std::uint32_t, Eigen::VectorXd> scores;
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, fresh] =
        scores.try_emplace(clusters[i], Eigen::VectorXd::Zero(kx));
    it->second += X.row(i).transpose() * resid(i);
  }
  const std::size_t n_clusters = scores.size();
  if (n_clusters < 2) throw std::invalid_argument("need at least 2 clusters");
  Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(kx, kx);
  for (const auto& [cid, sc] : scores) meat += sc * sc.transpose();
  const double g = static_cast<double>(n_clusters);
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(k_total);
  const double corr = g / (g - 1.0) * (nn - 1.0) / (nn - kk);
  Eigen::MatrixXd vcov = corr * xtx_inv * meat * xtx_inv;

  RegressionResult out;
  out.coefficient = beta(0);
  out.clustered_se = std::sqrt(vcov(0, 0));
  out.n_obs = n;
  out.cluster_count = n_clusters;
  const double z = out.coefficient / out.clustered_se;
  out.p_value = std::erfc(std::abs(z) / std::sqrt(2.0));
  return out;
}

namespace {

// Pooled exposure-on-outcome regression across villages; exposure is
// standardized over the pooled estimation sample.
RegressionResult estimate_pooled(const std::vector<PeerVillage>& villages,
                                 const std::vector<const Graph*>& graphs,
                                 std::uint32_t T,
                                 const std::vector<double>* fixed_p) {
  std::vector<double> de, y;
  std::vector<bool> mask;
  std::vector<std::uint32_t> fe;
  for (std::size_t v = 0; v < villages.size(); ++v) {
    const Graph& g = *graphs[v];
    double lam = spectral_radius(g);
    if (lam <= 0.0) throw std::runtime_error("degenerate village graph");
    double p = fixed_p ? (*fixed_p)[v] : 1.0 / lam;
    auto expo = diffusion_exposure(g, villages[v].seeds, p, T);
    for (NodeId i = 0; i < g.node_count(); ++i) {
      de.push_back(expo.value[i]);
      y.push_back(villages[v].outcome[i]);
      mask.push_back(villages[v].sample[i]);
      fe.push_back(static_cast<std::uint32_t>(v));
    }
  }
  auto de_std = standardize(de, mask);
  std::vector<double> ys, xs;
  std::vector<std::uint32_t> fes;
  for (std::size_t i = 0; i < de_std.size(); ++i) {
    if (!mask[i]) continue;
    ys.push_back(y[i]);
    xs.push_back(de_std[i]);
    fes.push_back(fe[i]);
  }
  return ols_fe(ys, xs, {}, fes, fes);
}

}  // namespace

McResult mc_mismeasurement(const std::vector<PeerVillage>& villages,
                           std::uint32_t T, const std::vector<double>& k_grid,
                           std::size_t reps, std::uint64_t seed,
                           unsigned threads, bool hold_p_fixed) {
  if (villages.empty()) throw std::invalid_argument("no villages");
  if (k_grid.empty()) throw std::invalid_argument("empty k grid");
  for (double k : k_grid)
    if (k < 1.0) throw std::invalid_argument("k values must be >= 1");
  for (const auto& vil : villages) {
    const NodeId n = vil.graph.node_count();
    if (vil.seeds.size() != n || vil.outcome.size() != n ||
        vil.sample.size() != n)
      throw std::invalid_argument("village vector length mismatch");
  }

  std::vector<const Graph*> intact;
  std::vector<double> full_p;
  for (const auto& vil : villages) {
    intact.push_back(&vil.graph);
    full_p.push_back(1.0 / spectral_radius(vil.graph));
  }

  McResult out;
  out.k_grid = k_grid;
  out.full_info = estimate_pooled(villages, intact, T, nullptr);

  for (std::size_t ki = 0; ki < k_grid.size(); ++ki) {
    const double k = k_grid[ki];
    std::vector<McDraw> draws(reps);
    std::vector<std::uint8_t> ok(reps, 0);
    parallel_for(reps, threads, [&](std::size_t r) {
      try {
        std::vector<Graph> degraded(villages.size());
        std::vector<const Graph*> ptrs(villages.size());
        for (std::size_t v = 0; v < villages.size(); ++v) {
          RngStream rs(seed, {ki, r, v});
          const double beta = 1.0 / (k * villages[v].graph.mean_degree());
          degraded[v] = drop_links(villages[v].graph, beta, rs);
          ptrs[v] = &degraded[v];
        }
        auto est = estimate_pooled(villages, ptrs, T,
                                   hold_p_fixed ? &full_p : nullptr);
        draws[r].bias_pct = 100.0 *
                            (est.coefficient - out.full_info.coefficient) /
                            out.full_info.coefficient;
        draws[r].p_value = est.p_value;
        ok[r] = 1;
      } catch (const std::exception&) {
        ok[r] = 0;
      }
    });
    std::vector<McDraw> kept;
    std::size_t failed = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      if (ok[r])
        kept.push_back(draws[r]);
      else
        ++failed;
    }
    out.draws.push_back(std::move(kept));
    out.excluded.push_back(failed);
  }
  return out;
}

}  // namespace netdiff
