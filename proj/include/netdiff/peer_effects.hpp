#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netdiff/graph.hpp"
#include "netdiff/rng.hpp"

namespace netdiff {

// Largest adjacency eigenvalue by power iteration (all-ones start, relative
// tolerance 1e-9, at most 10000 iterations). Throws on non-convergence.
double spectral_radius(const Graph& g);

struct ExposureVector {
  std::vector<double> value;  // per node
  double p_used = 0.0;
  std::uint32_t T_used = 0;
  bool contraction_warning = false;  // p * spectral_radius > 1
};

// DE = sum_{t=1..T} (pA)^t s by iterated sparse matrix-vector products.
ExposureVector diffusion_exposure(const Graph& g, const std::vector<double>& s,
                                  double p, std::uint32_t T);

// Affine transform making the masked sample mean 0 and sample sd (n-1) 1;
// entries outside the mask get the same transform.
std::vector<double> standardize(const std::vector<double>& v,
                                const std::vector<bool>& mask);

struct RegressionResult {
  double coefficient = 0.0;  // on the first (main) regressor
  double clustered_se = 0.0;
  double p_value = 1.0;  // normal reference
  std::size_t n_obs = 0;
  std::size_t cluster_count = 0;
};

// OLS with group fixed effects absorbed by within-demeaning and
// Liang-Zeger cluster-robust standard errors with the
// G/(G-1) * (N-1)/(N-K) small-sample correction (K counts the absorbed
// fixed effects). The coefficient reported is on x_main.
RegressionResult ols_fe(const std::vector<double>& y,
                        const std::vector<double>& x_main,
                        const std::vector<std::vector<double>>& controls,
                        const std::vector<std::uint32_t>& fe,
                        const std::vector<std::uint32_t>& clusters);

struct PeerVillage {
  Graph graph;
  std::vector<double> seeds;    // seed indicator vector
  std::vector<double> outcome;  // y per node
  std::vector<bool> sample;     // estimation sample mask
};

struct McDraw {
  double bias_pct = 0.0;  // 100 * (gamma_mismeasured - gamma_full) / gamma_full
  double p_value = 1.0;
};

struct McResult {
  std::vector<double> k_grid;
  std::vector<std::vector<McDraw>> draws;  // per k, successful reps
  std::vector<std::size_t> excluded;       // per k, failed reps
  RegressionResult full_info;              // estimate on the intact graphs
};

// Mismeasurement Monte Carlo: per replication each village loses every link
// independently with probability 1/(k * mean degree); exposure is recomputed
// on the degraded graph (with that graph's own 1/spectral_radius unless
// hold_p_fixed), re-standardized, and the regression re-estimated.
McResult mc_mismeasurement(const std::vector<PeerVillage>& villages,
                           std::uint32_t T, const std::vector<double>& k_grid,
                           std::size_t reps, std::uint64_t seed,
                           unsigned threads, bool hold_p_fixed = false);

}  // namespace netdiff
