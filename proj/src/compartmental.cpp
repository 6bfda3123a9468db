#include "netdiff/compartmental.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "netdiff/nelder_mead.hpp"

namespace netdiff {

SirTrajectory simulate_sir(const SirParams& params, double n, double i0,
                           std::uint32_t T) {
  if (params.s < 0.0) throw std::invalid_argument("s must be >= 0");
  if (params.r < 0.0 || params.r > 1.0)
    throw std::invalid_argument("r outside [0,1]");
  if (!(i0 > 0.0) || i0 > n) throw std::invalid_argument("I0 outside (0, n]");

  SirTrajectory out;
  out.n = n;
  out.S.resize(T + 1);
  out.I.resize(T + 1);
  out.R.resize(T + 1);
  out.S[0] = n - i0;
  out.I[0] = i0;
  out.R[0] = 0.0;
  for (std::uint32_t t = 1; t <= T; ++t) {
    const double inflow = (params.s / n) * out.S[t - 1] * out.I[t - 1];
    const double removed = params.r * out.I[t - 1];
    double S = out.S[t - 1] - inflow;
    double I = out.I[t - 1] + inflow - removed;
    double R = out.R[t - 1] + removed;
    for (double* c : {&S, &I, &R}) {
      if (*c < 0.0 || *c > n) {
        *c = std::clamp(*c, 0.0, n);
        ++out.clamp_events;
      }
    }
    out.S[t] = S;
    out.I[t] = I;
    out.R[t] = R;
  }
  return out;
}

SirSeries trace_to_sir_series(const DiffusionTrace& trace) {
  SirSeries out;
  const std::size_t len = trace.new_by_step.size();
  out.I.resize(len);
  out.R.resize(len);
  double cum = 0.0;
  for (std::size_t t = 0; t < len; ++t) {
    out.I[t] = static_cast<double>(trace.new_by_step[t]);
    out.R[t] = cum;
    cum += out.I[t];
  }
  return out;
}

namespace {

double gmm_objective(const SirParams& params, const SirSeries& obs, double n,
                     double i0, std::uint32_t T_fit) {
  auto model = simulate_sir(params, n, i0, T_fit);
  double acc = 0.0;
  for (std::uint32_t t = 1; t <= T_fit; ++t) {
    const double di = obs.I[t] - model.I[t];
    const double dr = obs.R[t] - model.R[t];
    acc += di * di + dr * dr;
  }
  return acc / static_cast<double>(T_fit);
}

}  // namespace

SirFit fit_gmm(const SirSeries& observed, double n, double i0,
               std::uint32_t T_fit) {
  if (T_fit < 2) throw std::invalid_argument("fit window must cover >= 2 steps");
  if (observed.I.size() <= T_fit || observed.R.size() <= T_fit)
    throw std::invalid_argument("observed series shorter than fit window");
  bool any = false;
  for (std::uint32_t t = 0; t <= T_fit; ++t)
    if (observed.I[t] != 0.0 || observed.R[t] != 0.0) any = true;
  if (!any) throw std::runtime_error("degenerate observed series (all zeros)");

  const NmBox box{0.0, 5.0, 1e-6, 1.0};
  auto f = [&](std::array<double, 2> x) {
    return gmm_objective({x[0], x[1]}, observed, n, i0, T_fit);
  };

  SirFit best;
  bool have = false;
  double worst_grid = 0.0;
  for (int i = 0; i <= 10; ++i) {
    for (int j = 1; j <= 11; ++j) {
      const double s0 = 0.5 * i;
      const double r0 = static_cast<double>(j) / 11.0;
      auto res = nelder_mead2(f, {s0, r0}, box, 0.05);
      worst_grid = std::max(worst_grid, f({s0, r0}));
      if (!have || res.value < best.objective) {
        have = true;
        best.params = {res.x[0], res.x[1]};
        best.objective = res.value;
      }
    }
  }
  best.r0 = best.params.s / best.params.r;
  best.clamped =
      simulate_sir(best.params, n, i0, T_fit).clamp_events > 0;
  return best;
}

double r0_from_params(const SirParams& params) {
  if (params.r <= 0.0) throw std::invalid_argument("removal rate must be > 0");
  return params.s / params.r;
}

double sir_rmse(const SirTrajectory& model, const SirSeries& observed,
                std::uint32_t t_begin, std::uint32_t t_end) {
  if (t_end < t_begin) throw std::invalid_argument("empty RMSE window");
  if (model.I.size() <= t_end || observed.I.size() <= t_end)
    throw std::invalid_argument("RMSE window exceeds series length");
  double acc = 0.0;
  for (std::uint32_t t = t_begin; t <= t_end; ++t) {
    const double di = observed.I[t] - model.I[t];
    const double dr = observed.R[t] - model.R[t];
    acc += di * di + dr * dr;
  }
  const double count = 2.0 * (t_end - t_begin + 1);
  return std::sqrt(acc / count);
}

}  // namespace netdiff
