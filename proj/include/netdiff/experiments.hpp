#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netdiff/diffusion.hpp"
#include "netdiff/graph.hpp"
#include "netdiff/graph_gen.hpp"
#include "netdiff/rng.hpp"

namespace netdiff {

struct CurveResult {
  std::vector<double> mean;        // per step 0..T
  std::vector<double> std_error;   // sample sd / sqrt(defined count)
  std::vector<std::uint32_t> defined;  // replications contributing per step
  std::size_t reps = 0;
  std::map<std::string, std::string> metadata;
};

struct SeedPerturbation {
  NodeId i0 = kNoNode;
  NodeId j0 = kNoNode;
  NodeId e1 = kNoNode;  // nearest node incident to an E-edge
  NodeId e2 = kNoNode;  // second nearest
  std::uint32_t d_e2 = 0;
  double neighborhood_share = 0.0;  // |ball(i0, d_e2+1)| / n
  double j_share = 0.0;             // |J_{i0}| / |ball|
};

// Seed perturbation: J = nodes at hop distance d(e2)+1 from i0 in
// union(L, E); j0 drawn uniformly from J.
SeedPerturbation build_perturbation(const Graph& L, const Graph& E, NodeId i0,
                                    RngStream& rng);

// Mean Jaccard overlap curve between diffusions seeded at i0 and j0, the
// percolation held fixed within each replication. Undefined (empty-union)
// entries are dropped from the mean; `defined` records the survivors.
CurveResult sensitive_dependence_curve(const Graph& L, const Graph& E,
                                       const SeedPerturbation& pert, double p,
                                       std::uint32_t T, std::size_t reps,
                                       std::uint64_t seed, unsigned threads);

struct ForecastParams {
  double p = 0.0;
  std::optional<DecaySpec> decay;  // set for the decaying-probability variant
};

// Ratio-of-means curve mean_r[ever(L)] / mean_r[ever(G)], with E redrawn and
// G = L u E rebuilt each replication. Constant-p runs couple L and G with
// keyed per-edge indicators (common random numbers on shared edges).
CurveResult forecast_ratio_curve(const Graph& L, const ErrorGraphSpec& espec,
                                 const LatentPositions* positions, NodeId i0,
                                 const ForecastParams& params, std::uint32_t T,
                                 std::size_t reps, std::uint64_t seed,
                                 unsigned threads);

// Mean per-step attributed E-edge jump counts on a fixed (L, E) pair.
CurveResult jump_count_curve(const Graph& L, const Graph& E, NodeId i0,
                             double p, std::uint32_t T, std::size_t reps,
                             std::uint64_t seed, unsigned threads);

struct PEstimate {
  double p_hat = 0.0;
  std::uint64_t transmissions = 0;  // numerator
  std::uint64_t exposures = 0;      // qualifying node-steps (denominator)
};

// Pooled estimator over traces: activations of susceptible nodes with
// exactly one L-neighbor activated in the previous step, divided by the
// count of such node-steps.
PEstimate estimate_p(const std::vector<DiffusionTrace>& traces, const Graph& L);

inline double estimate_r0(double p_hat, double mean_degree_L) {
  return p_hat * mean_degree_L;
}

struct BetaSamplingResult {
  double p_no_links_empirical = 0.0;
  double p_no_links_analytic = 0.0;  // (1-beta)^C(m,2)
  double beta_hat_mean = 0.0;
  double beta_hat_sd = 0.0;
  std::size_t reps = 0;
};

BetaSamplingResult beta_sampling_experiment(NodeId n, double beta,
                                            std::uint32_t m, std::size_t reps,
                                            std::uint64_t seed);

struct DetectionResult {
  std::vector<double> ratio;          // E[K_hat_t] / E[K_star_t]
  std::vector<double> mean_detected;  // E[K_hat_t]
  std::vector<double> mean_active;    // E[K_star_t]
  std::size_t reps = 0;
};

// Widespread-testing experiment: activated nodes flagged iid Ber(alpha); a
// region counts as detected from the first step a flagged member activates.
DetectionResult detection_experiment(const Graph& L, const Graph& E, NodeId i0,
                                     double p, std::uint32_t T, double alpha,
                                     std::size_t reps, std::uint64_t seed,
                                     unsigned threads);

struct VillageObservation {
  Graph graph;
  std::vector<NodeId> seeds;
  double observed_count = 0.0;
};

struct MsmFit {
  double p_hat = 0.0;
  double objective = 0.0;
  std::vector<double> grid;
  std::vector<double> grid_objective;
};

// Method of simulated moments for the passing probability: squared mean (over
// villages) gap between observed and simulated mean ever-activated counts at
// horizon T. Common random numbers across candidate p via keyed indicators;
// golden-section refinement around the best grid cell (tolerance 1e-3).
MsmFit msm_fit_p(const std::vector<VillageObservation>& villages,
                 std::uint32_t T, std::size_t reps,
                 const std::vector<double>& grid, std::uint64_t seed,
                 unsigned threads);

// Replace one uniformly chosen seed with a uniformly chosen neighbor that is
// not already a seed.
std::vector<NodeId> multi_seed_perturb(const std::vector<NodeId>& seeds,
                                       const Graph& g, RngStream& rng);

}  // namespace netdiff
