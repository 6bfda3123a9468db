#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

namespace netdiff {

struct NmBox {
  double lo0, hi0, lo1, hi1;
  std::array<double, 2> clamp(std::array<double, 2> x) const {
    x[0] = std::clamp(x[0], lo0, hi0);
    x[1] = std::clamp(x[1], lo1, hi1);
    return x;
  }
};

struct NmResult {
  std::array<double, 2> x;
  double value = 0.0;
  int iterations = 0;
};

// Deterministic two-parameter Nelder-Mead with projection onto a box.
// Standard coefficients (reflect 1, expand 2, contract 0.5, shrink 0.5).
inline NmResult nelder_mead2(
    const std::function<double(std::array<double, 2>)>& f,
    std::array<double, 2> start, const NmBox& box, double step = 0.1,
    double tol = 1e-10, int max_iter = 2000) {
  std::array<std::array<double, 2>, 3> v;
  std::array<double, 3> fv;
  v[0] = box.clamp(start);
  v[1] = box.clamp({start[0] + step, start[1]});
  v[2] = box.clamp({start[0], start[1] + step});
  // degenerate simplex at a box corner: push inward
  if (v[1][0] == v[0][0]) v[1][0] = box.clamp({start[0] - step, start[1]})[0];
  if (v[2][1] == v[0][1]) v[2][1] = box.clamp({start[0], start[1] - step})[1];
  for (int i = 0; i < 3; ++i) fv[i] = f(v[i]);

  NmResult res;
  int it = 0;
  for (; it < max_iter; ++it) {
    // order ascending, stable on ties
    std::array<int, 3> ord = {0, 1, 2};
    std::stable_sort(ord.begin(), ord.end(),
                     [&](int a, int b) { return fv[a] < fv[b]; });
    std::array<std::array<double, 2>, 3> vv = {v[ord[0]], v[ord[1]], v[ord[2]]};
    std::array<double, 3> ff = {fv[ord[0]], fv[ord[1]], fv[ord[2]]};
    v = vv;
    fv = ff;

    double spread = std::max(std::abs(fv[2] - fv[0]),
                             std::max(std::abs(v[2][0] - v[0][0]),
                                      std::abs(v[2][1] - v[0][1])));
    if (spread < tol) break;

    std::array<double, 2> c = {(v[0][0] + v[1][0]) / 2.0,
                               (v[0][1] + v[1][1]) / 2.0};
    auto point = [&](double coef) {
      return box.clamp({c[0] + coef * (c[0] - v[2][0]),
                        c[1] + coef * (c[1] - v[2][1])});
    };
    auto xr = point(1.0);
    double fr = f(xr);
    if (fr < fv[0]) {
      auto xe = point(2.0);
      double fe = f(xe);
      if (fe < fr) {
        v[2] = xe;
        fv[2] = fe;
      } else {
        v[2] = xr;
        fv[2] = fr;
      }
    } else if (fr < fv[1]) {
      v[2] = xr;
      fv[2] = fr;
    } else {
      auto xc = fr < fv[2] ? point(0.5) : point(-0.5);
      double fc = f(xc);
      if (fc < std::min(fr, fv[2])) {
        v[2] = xc;
        fv[2] = fc;
      } else {
        for (int i = 1; i < 3; ++i) {
          v[i] = box.clamp({v[0][0] + 0.5 * (v[i][0] - v[0][0]),
                            v[0][1] + 0.5 * (v[i][1] - v[0][1])});
          fv[i] = f(v[i]);
        }
      }
    }
  }
  int bi = 0;
  for (int i = 1; i < 3; ++i)
    if (fv[i] < fv[bi]) bi = i;
  res.x = v[bi];
  res.value = fv[bi];
  res.iterations = it;
  return res;
}

}  // namespace netdiff
