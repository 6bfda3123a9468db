#include "doctest.h"
#include "netdiff/peer_effects.hpp"
#include <stdexcept>

#include <cmath>

#include "netdiff/graph_gen.hpp"

using namespace netdiff;

TEST_CASE("spectral radius closed forms") {
  CHECK(spectral_radius(Graph::from_edges(2, {{0, 1}})) ==
        doctest::Approx(1.0).epsilon(1e-7));
  CHECK(spectral_radius(Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}})) ==
        doctest::Approx(2.0).epsilon(1e-7));
  CHECK(spectral_radius(Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}})) ==
        doctest::Approx(std::sqrt(3.0)).epsilon(1e-7));
  CHECK(spectral_radius(Graph::from_edges(3, {})) == 0.0);
  CHECK_THROWS_AS(spectral_radius(Graph::from_edges(0, {})),
                  std::invalid_argument);
}

TEST_CASE("spectral radius dominates the mean degree") {
  RngStream rng(4);
  auto lr = generate_lattice_random(30, 2, 5, rng);
  CHECK(spectral_radius(lr.graph) >= lr.graph.mean_degree() - 1e-7);
}

TEST_CASE("exposure hand value on a single edge") {
  Graph g = Graph::from_edges(2, {{0, 1}});
  auto de = diffusion_exposure(g, {1.0, 0.0}, 0.5, 2);
  CHECK(de.value[0] == doctest::Approx(0.25));
  CHECK(de.value[1] == doctest::Approx(0.5));
  CHECK_FALSE(de.contraction_warning);
  auto hot = diffusion_exposure(g, {1.0, 0.0}, 1.5, 2);
  CHECK(hot.contraction_warning);
}

TEST_CASE("exposure is linear in the seed vector and vanishes at p=0") {
  RngStream rng(5);
  Graph g = generate_random_regular(20, 3, rng);
  std::vector<double> s1(20, 0.0), s2(20, 0.0), s12(20, 0.0);
  s1[0] = 1.0;
  s2[7] = 1.0;
  s12[0] = s12[7] = 1.0;
  auto a = diffusion_exposure(g, s1, 0.2, 4);
  auto b = diffusion_exposure(g, s2, 0.2, 4);
  auto ab = diffusion_exposure(g, s12, 0.2, 4);
  for (NodeId v = 0; v < 20; ++v)
    CHECK(ab.value[v] ==
          doctest::Approx(a.value[v] + b.value[v]).epsilon(1e-10));
  auto zero = diffusion_exposure(g, s12, 0.0, 4);
  for (double x : zero.value) CHECK(x == 0.0);
  // T=1 closed form: p * (number of seeded neighbors)
  auto one = diffusion_exposure(g, s12, 0.3, 1);
  for (NodeId v = 0; v < 20; ++v) {
    double cnt = 0;
    for (NodeId w : g.neighbors(v)) cnt += s12[w];
    CHECK(one.value[v] == doctest::Approx(0.3 * cnt));
  }
  CHECK_THROWS_AS(diffusion_exposure(g, {1.0}, 0.3, 2), std::invalid_argument);
}

TEST_CASE("standardization") {
  auto z = standardize({1.0, 2.0, 3.0}, {true, true, true});
  CHECK(z[0] == doctest::Approx(-1.0));
  CHECK(z[1] == doctest::Approx(0.0));
  CHECK(z[2] == doctest::Approx(1.0));
  auto zz = standardize(z, {true, true, true});
  for (int i = 0; i < 3; ++i) CHECK(zz[i] == doctest::Approx(z[i]));
  CHECK_THROWS_AS(standardize({2.0, 2.0, 2.0}, {true, true, true}),
                  std::runtime_error);
  // mask restricts the reference sample
  auto m = standardize({0.0, 10.0, 1.0, 3.0}, {false, false, true, true});
  CHECK(m[2] == doctest::Approx(-std::sqrt(0.5)));
  CHECK(m[3] == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("exact regression recovery") {
  std::vector<double> x, y;
  std::vector<std::uint32_t> fe, cl;
  RngStream rng(8);
  for (int i = 0; i < 40; ++i) {
    double xi = rng.u01();
    x.push_back(xi);
    y.push_back(2.0 * xi);
    fe.push_back(i % 4);
    cl.push_back(i % 4);
  }
  auto res = ols_fe(y, x, {}, fe, cl);
  CHECK(res.coefficient == doctest::Approx(2.0));
  CHECK(res.cluster_count == 4);
  CHECK(res.n_obs == 40);
}

TEST_CASE("coefficient is invariant to per-group shifts of y") {
  std::vector<double> x, y, y_shift;
  std::vector<std::uint32_t> fe;
  RngStream rng(9);
  for (int i = 0; i < 60; ++i) {
    double xi = rng.u01();
    x.push_back(xi);
    double yi = 0.5 * xi + rng.u01();
    y.push_back(yi);
    y_shift.push_back(yi + 100.0 * (i % 3));
    fe.push_back(i % 3);
  }
  auto a = ols_fe(y, x, {}, fe, fe);
  auto b = ols_fe(y_shift, x, {}, fe, fe);
  CHECK(a.coefficient == doctest::Approx(b.coefficient).epsilon(1e-9));
}

TEST_CASE("collinear controls are reported") {
  std::vector<double> x, y;
  std::vector<std::uint32_t> fe;
  RngStream rng(10);
  for (int i = 0; i < 30; ++i) {
    x.push_back(rng.u01());
    y.push_back(rng.u01());
    fe.push_back(i % 3);
  }
  std::vector<std::vector<double>> controls = {x};  // duplicate of the main column
  CHECK_THROWS_AS(ols_fe(y, x, controls, fe, fe), std::runtime_error);
}

TEST_CASE("dropping nothing leaves the estimate unchanged") {
  RngStream g_rng(12);
  std::vector<PeerVillage> villages;
  for (int v = 0; v < 6; ++v) {
    PeerVillage pv;
    pv.graph = generate_random_regular(30, 4, g_rng);
    pv.seeds.assign(30, 0.0);
    pv.seeds[0] = pv.seeds[1] = pv.seeds[2] = 1.0;
    pv.sample.assign(30, true);
    pv.outcome.assign(30, 0.0);
    for (int i = 0; i < 30; ++i) pv.outcome[i] = g_rng.u01();
    villages.push_back(std::move(pv));
  }
  // k so large that no link is ever dropped
  auto res = mc_mismeasurement(villages, 3, {1e12}, 5, 21, 1);
  REQUIRE(res.draws.size() == 1);
  CHECK(res.excluded[0] == 0);
  for (const auto& d : res.draws[0]) {
    CHECK(d.bias_pct == doctest::Approx(0.0));
    CHECK(d.p_value == doctest::Approx(res.full_info.p_value));
  }
  CHECK_THROWS_AS(mc_mismeasurement(villages, 3, {0.5}, 5, 21, 1),
                  std::invalid_argument);
}
