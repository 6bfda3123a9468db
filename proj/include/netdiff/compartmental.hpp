#pragma once

#include <cstdint>
#include <vector>

#include "netdiff/diffusion.hpp"

namespace netdiff {

struct SirParams {
  double s = 0.0;  // transmission parameter, >= 0
  double r = 0.0;  // removal rate in (0,1]
};

struct SirTrajectory {
  std::vector<double> S, I, R;  // indexed 0..T
  double n = 0.0;
  std::uint32_t clamp_events = 0;  // steps where a compartment left [0,n]
};

// Discrete-time SIR recursion:
//   S(t) = S(t-1) - (s/n) S(t-1) I(t-1)
//   I(t) = I(t-1) + (s/n) S(t-1) I(t-1) - r I(t-1)
//   R(t) = R(t-1) + r I(t-1)
// Compartments are clamped to [0, n]; clamps are counted, not silent.
SirTrajectory simulate_sir(const SirParams& params, double n, double i0,
                           std::uint32_t T);

struct SirSeries {
  std::vector<double> I, R;  // observed, indexed 0..T
};

// Network trace as compartmental observables: I(t) = newly activated at t
// (activation lasts one period), R(t) = cumulative activated before t.
SirSeries trace_to_sir_series(const DiffusionTrace& trace);

struct SirFit {
  SirParams params;
  double objective = 0.0;
  double r0 = 0.0;
  bool clamped = false;  // the optimum's trajectory hit a clamp
};

// Moment-matching fit: minimize (1/T_fit) sum_{t=1..T_fit} of
// (I_obs - I_mod)^2 + (R_obs - R_mod)^2 over s in [0,5], r in (0,1].
// 11x11 start grid, Nelder-Mead refinement per start, best start wins.
SirFit fit_gmm(const SirSeries& observed, double n, double i0,
               std::uint32_t T_fit);

double r0_from_params(const SirParams& params);

// Root-mean-square gap over both I and R on steps [t_begin, t_end].
double sir_rmse(const SirTrajectory& model, const SirSeries& observed,
                std::uint32_t t_begin, std::uint32_t t_end);

}  // namespace netdiff
