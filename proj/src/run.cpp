#include "netdiff/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "netdiff/compartmental.hpp"
#include "netdiff/diffusion.hpp"
#include "netdiff/experiments.hpp"
#include "netdiff/graph.hpp"
#include "netdiff/graph_gen.hpp"
#include "netdiff/ingestion.hpp"
#include "netdiff/peer_effects.hpp"

namespace netdiff {

namespace {

using nlohmann::json;

class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& m) : m_(m) {}

  bool has(const std::string& key) const { return m_.count(key) > 0; }

  std::string str(const std::string& key, const std::string& def = "") const {
    auto it = m_.find(key);
    return it == m_.end() ? def : it->second;
  }
  std::string str_req(const std::string& key) const {
    auto it = m_.find(key);
    if (it == m_.end())
      throw std::invalid_argument("missing required parameter: " + key);
    return it->second;
  }
  double num(const std::string& key, double def) const {
    auto it = m_.find(key);
    return it == m_.end() ? def : parse(key, it->second);
  }
  double num_req(const std::string& key) const {
    return parse(key, str_req(key));
  }
  std::uint64_t uint(const std::string& key, std::uint64_t def) const {
    double v = num(key, static_cast<double>(def));
    if (v < 0 || v != std::floor(v))
      throw std::invalid_argument("parameter must be a nonnegative integer: " + key);
    return static_cast<std::uint64_t>(v);
  }
  bool flag(const std::string& key) const {
    auto v = str(key, "false");
    return v == "1" || v == "true" || v == "yes";
  }

 private:
  static double parse(const std::string& key, const std::string& v) {
    try {
      std::size_t used = 0;
      double d = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw std::invalid_argument("cannot parse parameter " + key + "=" + v);
    }
  }
  const std::map<std::string, std::string>& m_;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void write_curve_csv(const std::string& path, const CurveResult& curve) {
  std::ostringstream out;
  out << "t,mean,stderr\n";
  for (std::size_t t = 0; t < curve.mean.size(); ++t)
    out << t << ',' << fmt(curve.mean[t]) << ',' << fmt(curve.std_error[t])
        << '\n';
  write_text(path, out.str());
}

struct BaseGraph {
  Graph L;
  std::optional<LatentPositions> positions;
  std::uint32_t q = 0;
};

// Lattice defaults follow the two reference configurations: q=4 uses a
// 7^4 grid inside n=4000, q=2 a 50^2 grid inside n=4000.
BaseGraph build_base(const Params& p, std::uint64_t seed) {
  BaseGraph out;
  if (p.has("graph")) {
    out.L = load_edge_list(p.str_req("graph"));
    return out;
  }
  const std::string type = p.str("type", "lattice");
  if (type == "regular") {
    RngStream rng(seed, {11});
    out.L = generate_random_regular(
        static_cast<NodeId>(p.uint("n", 100000)),
        static_cast<std::uint32_t>(p.uint("d", 3)), rng);
    return out;
  }
  if (type != "lattice")
    throw std::invalid_argument("unknown graph type: " + type);
  const std::uint32_t q = static_cast<std::uint32_t>(p.uint("q", 4));
  const std::uint32_t n_side =
      static_cast<std::uint32_t>(p.uint("n_side", q == 2 ? 50 : 7));
  const NodeId n = static_cast<NodeId>(p.uint("n", 4000));
  RngStream rng(seed, {11});
  auto lr = generate_lattice_random(n, q, n_side, rng);
  out.L = std::move(lr.graph);
  out.positions = std::move(lr.positions);
  out.q = q;
  return out;
}

double resolve_p(const Params& p, const Graph& L) {
  if (p.has("p")) return p.num_req("p");
  const double r0 = p.num("r0", 2.5);
  return r0 / L.mean_degree();
}

std::uint32_t resolve_T(const Params& p, const Graph& L, std::uint64_t seed) {
  if (p.has("T")) return static_cast<std::uint32_t>(p.uint("T", 0));
  if (L.node_count() > 20000)
    throw std::invalid_argument("T required for graphs this large");
  RngStream rng(seed, {13});
  auto stats = graph_stats(L, std::nullopt, rng);
  return 2 * stats.diameter;
}

ErrorGraphSpec resolve_error_spec(const Params& p, const Graph& L) {
  ErrorGraphSpec spec;
  if (p.has("beta"))
    spec.beta = p.num_req("beta");
  else
    spec.beta = 1.0 / (p.num("beta_factor", 10.0) * L.node_count());
  spec.delta = p.num("delta", 1.0);
  const std::string rule = p.str("support", "all");
  if (rule == "all")
    spec.support_rule = SupportRule::all_pairs;
  else if (rule == "latent")
    spec.support_rule = SupportRule::latent_nearest;
  else if (rule == "hop")
    spec.support_rule = SupportRule::hop_nearest;
  else
    throw std::invalid_argument("unknown support rule: " + rule);
  return spec;
}

NodeId resolve_i0(const Params& p, const Graph& L, std::uint64_t seed,
                  std::uint64_t salt) {
  if (p.has("i0")) {
    auto v = p.uint("i0", 0);
    if (v >= L.node_count()) throw std::invalid_argument("i0 out of range");
    return static_cast<NodeId>(v);
  }
  RngStream rng(seed, {17, salt});
  return static_cast<NodeId>(rng.uniform_int(L.node_count()));
}

json base_meta(const RunConfig& cfg) {
  json meta;
  meta["experiment"] = cfg.experiment;
  meta["seed"] = cfg.seed;
  meta["rng"] = kRngName;
  json params = json::object();
  for (const auto& [k, v] : cfg.params) params[k] = v;
  meta["params"] = params;
  return meta;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

void run_gen_graph(const RunConfig& cfg, const Params& p) {
  auto base = build_base(p, cfg.seed);
  save_edge_list(base.L, out_path(cfg, "graph.csv"));
  if (base.positions)
    save_positions(*base.positions, out_path(cfg, "positions.csv"));
  json meta = base_meta(cfg);
  meta["nodes"] = base.L.node_count();
  meta["edges"] = base.L.edge_count();
  meta["mean_degree"] = base.L.mean_degree();
  write_text(out_path(cfg, "meta.json"), meta.dump(2) + "\n");
}

void run_stats(const RunConfig& cfg, const Params& p) {
  auto base = build_base(p, cfg.seed);
  RngStream rng(cfg.seed, {13});
  std::optional<std::uint32_t> sample;
  if (p.has("sample"))
    sample = static_cast<std::uint32_t>(p.uint("sample", 0));
  auto stats = graph_stats(base.L, sample, rng);
  json meta = base_meta(cfg);
  meta["nodes"] = base.L.node_count();
  meta["edges"] = base.L.edge_count();
  meta["diameter"] = stats.diameter;
  meta["mean_degree"] = stats.mean_degree;
  meta["min_degree"] = stats.min_degree;
  meta["max_degree"] = stats.max_degree;
  meta["mean_clustering"] = stats.mean_clustering;
  meta["avg_path_length"] = stats.avg_path_length;
  meta["components"] = stats.component_count;
  meta["path_length_sources"] = stats.path_length_sources;
  write_text(out_path(cfg, "stats.json"), meta.dump(2) + "\n");
}

void run_sens_dep(const RunConfig& cfg, const Params& p) {
  auto base = build_base(p, cfg.seed);
  auto espec = resolve_error_spec(p, base.L);
  const double prob = resolve_p(p, base.L);
  const std::uint32_t T = resolve_T(p, base.L, cfg.seed);
  const std::size_t reps = p.uint("reps", 1000);
  const std::size_t draws = p.uint("draws", 1);

  std::vector<CurveResult> curves;
  json draw_info = json::array();
  for (std::size_t d = 0; d < draws; ++d) {
    RngStream rd(cfg.seed, {77, d});
    Graph E = generate_error_graph(
        base.L.node_count(), espec, &base.L,
        base.positions ? &*base.positions : nullptr, rd);
    NodeId i0 = resolve_i0(p, base.L, cfg.seed, d);
    auto pert = build_perturbation(base.L, E, i0, rd);
    auto curve = sensitive_dependence_curve(
        base.L, E, pert, prob, T, reps, RngStream(cfg.seed, {78, d}).next_u64(),
        cfg.threads);
    json di;
    di["i0"] = pert.i0;
    di["j0"] = pert.j0;
    di["d_e2"] = pert.d_e2;
    di["neighborhood_share"] = pert.neighborhood_share;
    di["j_share"] = pert.j_share;
    draw_info.push_back(di);
    curves.push_back(std::move(curve));
  }

  // equal-weight average over draws; spread across draws when there are
  // several, otherwise the single draw's Monte Carlo error
  CurveResult out;
  const std::size_t width = curves[0].mean.size();
  out.mean.assign(width, 0.0);
  out.std_error.assign(width, 0.0);
  out.defined.assign(width, 0);
  out.reps = reps * draws;
  for (std::size_t t = 0; t < width; ++t) {
    double sum = 0.0;
    std::uint32_t cnt = 0;
    for (const auto& c : curves) {
      if (c.defined[t] == 0) continue;
      sum += c.mean[t];
      ++cnt;
      out.defined[t] += c.defined[t];
    }
    out.mean[t] = cnt ? sum / cnt : std::nan("");
    if (cnt > 1) {
      double ss = 0.0;
      for (const auto& c : curves)
        if (c.defined[t] > 0) ss += (c.mean[t] - out.mean[t]) * (c.mean[t] - out.mean[t]);
      out.std_error[t] = std::sqrt(ss / (cnt - 1)) / std::sqrt(double(cnt));
    } else if (cnt == 1) {
      out.std_error[t] = curves[0].std_error[t];
    }
  }
  write_curve_csv(out_path(cfg, "curve.csv"), out);
  json meta = base_meta(cfg);
  meta["p"] = prob;
  meta["T"] = T;
  meta["beta"] = espec.beta;
  meta["reps"] = reps;
  meta["draws"] = draw_info;
  write_text(out_path(cfg, "meta.json"), meta.dump(2) + "\n");
}

void run_forecast_ratio(const RunConfig& cfg, const Params& p) {
  auto base = build_base(p, cfg.seed);
  auto espec = resolve_error_spec(p, base.L);
  const std::uint32_t T = resolve_T(p, base.L, cfg.seed);
  const std::size_t reps = p.uint("reps", 2500);
  NodeId i0 = resolve_i0(p, base.L, cfg.seed, 0);

  ForecastParams fp;
  if (p.has("lambda")) {
    fp.decay = DecaySpec{p.num("p0", resolve_p(p, base.L)), p.num_req("lambda")};
  } else {
    fp.p = resolve_p(p, base.L);
  }
  auto curve = forecast_ratio_curve(
      base.L, espec, base.positions ? &*base.positions : nullptr, i0, fp, T,
      reps, cfg.seed, cfg.threads);
  write_curve_csv(out_path(cfg, "curve.csv"), curve);

  std::size_t argmin = 0;
  for (std::size_t t = 1; t < curve.mean.size(); ++t)
    if (curve.mean[t] < curve.mean[argmin]) argmin = t;
  json meta = base_meta(cfg);
  meta["p"] = fp.decay ? fp.decay->p0 : fp.p;
  meta["T"] = T;
  meta["beta"] = espec.beta;
  meta["reps"] = reps;
  meta["i0"] = i0;
  meta["min_ratio"] = curve.mean[argmin];
  meta["argmin_t"] = argmin;
  write_text(out_path(cfg, "meta.json"), meta.dump(2) + "\n");
}

void run_count_jumps(const RunConfig& cfg, const Params& p) {
  auto base = build_base(p, cfg.seed);
  auto espec = resolve_error_spec(p, base.L);
  const double prob = resolve_p(p, base.L);
  const std::uint32_t T = resolve_T(p, base.L, cfg.seed);
  const std::size_t reps = p.uint("reps", 1000);
  RngStream rd(cfg.seed, {5});
  Graph E = generate_error_graph(base.L.node_count(), espec, &base.L,
                                 base.positions ? &*base.positions : nullptr,
                                 rd);
  NodeId i0 = resolve_i0(p, base.L, cfg.seed, 0);
  auto curve =
      jump_count_curve(base.L, E, i0, prob, T, reps, cfg.seed, cfg.threads);
  write_curve_csv(out_path(cfg, "curve.csv"), curve);
  json meta = base_meta(cfg);
  meta["p"] = prob;
  meta["T"] = T;
  meta["beta"] = espec.beta;
  meta["error_edges"] = E.edge_count();
  meta["reps"] = reps;
  meta["i0"] = i0;
  write_text(out_path(cfg, "meta.json"), meta.dump(2) + "\n");
}

void run_estimate_p(const RunConfig& cfg, const Params& p) {
  auto base = build_base(p, cfg.seed);
  const double prob = resolve_p(p, base.L);
  const std::uint32_t T = resolve_T(p, base.L, cfg.seed);
  const std::size_t reps = p.uint("reps", 100);

  std::vector<DiffusionTrace> traces;
  traces.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    RngStream rs(cfg.seed, {r});
    NodeId i0 = static_cast<NodeId>(rs.uniform_int(base.L.node_count()));
    auto perc = sample_percolation(base.L, prob, PercMode::undirected, rs);
    traces.push_back(run_diffusion(perc, {i0}, T));
  }
  auto est = estimate_p(traces, base.L);
  json meta = base_meta(cfg);
  meta["p_true"] = prob;
  meta["p_hat"] = est.p_hat;
  meta["r0_hat"] = estimate_r0(est.p_hat, base.L.mean_degree());
  meta["transmissions"] = est.transmissions;
  meta["exposures"] = est.exposures;
  meta["reps"] = reps;
  meta["T"] = T;
  write_text(out_path(cfg, "report.json"), meta.dump(2) + "\n");
}

void run_beta_sample(const RunConfig& cfg, const Params& p) {
  auto res = beta_sampling_experiment(
      static_cast<NodeId>(p.uint("n", 1000000)), p.num_req("beta"),
      static_cast<std::uint32_t>(p.uint("m", 100)), p.uint("reps", 10000),
      cfg.seed);
  json meta = base_meta(cfg);
  meta["p_no_links_empirical"] = res.p_no_links_empirical;
  meta["p_no_links_analytic"] = res.p_no_links_analytic;
  meta["beta_hat_mean"] = res.beta_hat_mean;
  meta["beta_hat_sd"] = res.beta_hat_sd;
  meta["reps"] = res.reps;
  write_text(out_path(cfg, "report.json"), meta.dump(2) + "\n");
}

void run_detect(const RunConfig& cfg, const Params& p) {
  auto base = build_base(p, cfg.seed);
  auto espec = resolve_error_spec(p, base.L);
  const double prob = resolve_p(p, base.L);
  const std::uint32_t T = resolve_T(p, base.L, cfg.seed);
  const double alpha = p.num("alpha", 0.05);
  const std::size_t reps = p.uint("reps", 500);
  RngStream rd(cfg.seed, {5});
  Graph E = generate_error_graph(base.L.node_count(), espec, &base.L,
                                 base.positions ? &*base.positions : nullptr,
                                 rd);
  NodeId i0 = resolve_i0(p, base.L, cfg.seed, 0);
  auto res = detection_experiment(base.L, E, i0, prob, T, alpha, reps,
                                  cfg.seed, cfg.threads);
  CurveResult curve;
  curve.mean = res.ratio;
  curve.std_error.assign(res.ratio.size(), 0.0);
  curve.reps = reps;
  write_curve_csv(out_path(cfg, "curve.csv"), curve);
  json meta = base_meta(cfg);
  meta["alpha"] = alpha;
  meta["p"] = prob;
  meta["T"] = T;
  meta["reps"] = reps;
  meta["i0"] = i0;
  meta["mean_detected"] = res.mean_detected;
  meta["mean_active"] = res.mean_active;
  write_text(out_path(cfg, "meta.json"), meta.dump(2) + "\n");
}

void run_fit_sir(const RunConfig& cfg, const Params& p) {
  auto base = build_base(p, cfg.seed);
  const double prob = resolve_p(p, base.L);
  const std::uint32_t T = resolve_T(p, base.L, cfg.seed);
  NodeId i0 = resolve_i0(p, base.L, cfg.seed, 0);
  RngStream rs(cfg.seed, {0});
  auto perc = sample_percolation(base.L, prob, PercMode::undirected, rs);
  auto trace = run_diffusion(perc, {i0}, T);
  auto series = trace_to_sir_series(trace);

  const std::uint32_t t_fit =
      static_cast<std::uint32_t>(p.uint("fit_window", T / 4));
  auto fit = fit_gmm(series, base.L.node_count(), 1.0, t_fit);
  const std::uint32_t t_out = std::min<std::uint32_t>(2 * t_fit, T);
  auto model = simulate_sir(fit.params, base.L.node_count(), 1.0, t_out);
  json meta = base_meta(cfg);
  meta["s_hat"] = fit.params.s;
  meta["r_hat"] = fit.params.r;
  meta["r0_hat"] = fit.r0;
  meta["objective"] = fit.objective;
  meta["clamped"] = fit.clamped;
  meta["fit_window"] = t_fit;
  meta["rmse_in_sample"] = sir_rmse(model, series, 1, t_fit);
  meta["rmse_out_of_sample"] =
      t_out > t_fit ? sir_rmse(model, series, t_fit + 1, t_out) : 0.0;
  meta["i0"] = i0;
  meta["I0_model"] = 1.0;
  meta["p"] = prob;
  meta["T"] = T;
  write_text(out_path(cfg, "report.json"), meta.dump(2) + "\n");
}

// manifest: CSV `graph,seeds,observed` (paths relative to the manifest).
std::vector<VillageObservation> load_msm_villages(const std::string& manifest) {
  std::ifstream in(manifest);
  if (!in) throw std::runtime_error("cannot open manifest: " + manifest);
  auto dir = std::filesystem::path(manifest).parent_path();
  std::vector<VillageObservation> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (lineno == 1 && line.rfind("graph,", 0) == 0) continue;
    std::stringstream ss(line);
    std::string g, s, c;
    if (!std::getline(ss, g, ',') || !std::getline(ss, s, ',') ||
        !std::getline(ss, c))
      throw std::runtime_error(manifest + ":" + std::to_string(lineno) +
                               ": expected graph,seeds,observed");
    auto vd = load_village((dir / g).string(), (dir / s).string());
    VillageObservation vo;
    vo.graph = std::move(vd.graph);
    vo.seeds = std::move(vd.seeds);
    vo.observed_count = std::stod(c);
    out.push_back(std::move(vo));
  }
  return out;
}

void run_msm_fit(const RunConfig& cfg, const Params& p) {
  auto villages = load_msm_villages(p.str_req("manifest"));
  const std::uint32_t T = static_cast<std::uint32_t>(p.uint("T", 15));
  const std::size_t reps = p.uint("reps", 50);
  const double step = p.num("grid_step", 0.01);
  if (!(step > 0.0) || step > 1.0)
    throw std::invalid_argument("grid_step outside (0,1]");
  std::vector<double> grid;
  const int cells = static_cast<int>(std::lround(1.0 / step));
  for (int i = 0; i <= cells; ++i)
    grid.push_back(std::min(1.0, i * step));
  auto fit = msm_fit_p(villages, T, reps, grid, cfg.seed, cfg.threads);
  json meta = base_meta(cfg);
  meta["p_hat"] = fit.p_hat;
  meta["objective"] = fit.objective;
  meta["grid"] = fit.grid;
  meta["grid_objective"] = fit.grid_objective;
  meta["villages"] = villages.size();
  meta["T"] = T;
  meta["reps"] = reps;
  write_text(out_path(cfg, "report.json"), meta.dump(2) + "\n");
}

void run_exposure(const RunConfig& cfg, const Params& p) {
  auto vd = load_village(p.str_req("graph"), p.str_req("seeds"));
  std::vector<double> s(vd.graph.node_count(), 0.0);
  for (NodeId v : vd.seeds) s[v] = 1.0;
  const double lam = spectral_radius(vd.graph);
  const double prob = p.has("p") ? p.num_req("p") : 1.0 / lam;
  const std::uint32_t T = static_cast<std::uint32_t>(p.uint("T", 3));
  auto expo = diffusion_exposure(vd.graph, s, prob, T);
  std::ostringstream out;
  out << "node,exposure\n";
  for (NodeId v = 0; v < vd.graph.node_count(); ++v)
    out << v << ',' << fmt(expo.value[v]) << '\n';
  write_text(out_path(cfg, "exposure.csv"), out.str());
  json meta = base_meta(cfg);
  meta["p_used"] = expo.p_used;
  meta["T"] = expo.T_used;
  meta["spectral_radius"] = lam;
  meta["contraction_warning"] = expo.contraction_warning;
  write_text(out_path(cfg, "meta.json"), meta.dump(2) + "\n");
}

// manifest: CSV `graph,seeds,outcomes`; the outcomes table must provide a
// `y` column and may provide a 0/1 `sample` column.
std::vector<PeerVillage> load_peer_villages(const std::string& manifest) {
  std::ifstream in(manifest);
  if (!in) throw std::runtime_error("cannot open manifest: " + manifest);
  auto dir = std::filesystem::path(manifest).parent_path();
  std::vector<PeerVillage> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (lineno == 1 && line.rfind("graph,", 0) == 0) continue;
    std::stringstream ss(line);
    std::string g, s, o;
    if (!std::getline(ss, g, ',') || !std::getline(ss, s, ',') ||
        !std::getline(ss, o))
      throw std::runtime_error(manifest + ":" + std::to_string(lineno) +
                               ": expected graph,seeds,outcomes");
    auto vd = load_village((dir / g).string(), (dir / s).string(),
                           (dir / o).string());
    if (!vd.outcomes.count("y"))
      throw std::runtime_error("outcomes table missing a y column: " + o);
    PeerVillage pv;
    pv.outcome = vd.outcomes.at("y");
    pv.seeds.assign(vd.graph.node_count(), 0.0);
    for (NodeId v : vd.seeds) pv.seeds[v] = 1.0;
    if (vd.outcomes.count("sample")) {
      pv.sample.resize(vd.graph.node_count());
      for (NodeId v = 0; v < vd.graph.node_count(); ++v)
        pv.sample[v] = vd.outcomes.at("sample")[v] != 0.0;
    } else {
      pv.sample.assign(vd.graph.node_count(), true);
    }
    pv.graph = std::move(vd.graph);
    out.push_back(std::move(pv));
  }
  return out;
}

void run_peer_mc(const RunConfig& cfg, const Params& p) {
  auto villages = load_peer_villages(p.str_req("manifest"));
  const std::uint32_t T = static_cast<std::uint32_t>(p.uint("T", 3));
  const std::size_t reps = p.uint("reps", 100);
  std::vector<double> k_grid;
  {
    std::stringstream ss(p.str("k_grid", "5,10,15"));
    std::string tok;
    while (std::getline(ss, tok, ',')) k_grid.push_back(std::stod(tok));
  }
  auto res = mc_mismeasurement(villages, T, k_grid, reps, cfg.seed,
                               cfg.threads, p.flag("hold_p_fixed"));

  json meta = base_meta(cfg);
  meta["gamma_full"] = res.full_info.coefficient;
  meta["se_full"] = res.full_info.clustered_se;
  meta["p_value_full"] = res.full_info.p_value;
  meta["clusters"] = res.full_info.cluster_count;
  json per_k = json::array();
  for (std::size_t ki = 0; ki < k_grid.size(); ++ki) {
    std::ostringstream csv;
    csv << "rep,bias_pct,p_value\n";
    double mean = 0.0;
    for (std::size_t r = 0; r < res.draws[ki].size(); ++r) {
      const auto& d = res.draws[ki][r];
      csv << r << ',' << fmt(d.bias_pct) << ',' << fmt(d.p_value) << '\n';
      mean += d.bias_pct;
    }
    std::string name = "k_" + std::to_string(ki) + ".csv";
    write_text(out_path(cfg, name), csv.str());
    json jk;
    jk["k"] = k_grid[ki];
    jk["file"] = name;
    jk["excluded"] = res.excluded[ki];
    const std::size_t cnt = res.draws[ki].size();
    if (cnt > 1) {
      mean /= cnt;
      double ss = 0.0;
      for (const auto& d : res.draws[ki])
        ss += (d.bias_pct - mean) * (d.bias_pct - mean);
      jk["bias_mean"] = mean;
      jk["bias_sd"] = std::sqrt(ss / (cnt - 1));
    }
    per_k.push_back(jk);
  }
  meta["per_k"] = per_k;
  meta["T"] = T;
  meta["reps"] = reps;
  write_text(out_path(cfg, "summary.json"), meta.dump(2) + "\n");
}

void run_ingest_flows(const RunConfig& cfg, const Params& p) {
  auto flows = load_flows(p.str_req("flows"));
  FlowThreshold thr;
  if (p.has("percentile")) {
    thr.value = p.num_req("percentile");
    thr.is_percentile = true;
  } else {
    thr.value = p.num("cutoff", 0.0);
  }
  auto pruned = symmetrize_and_prune(flows, thr);
  save_edge_list(pruned.graph, out_path(cfg, "graph.csv"));
  std::ostringstream nodes;
  nodes << "new_id,label\n";
  for (NodeId old = 0; old < pruned.node_map.size(); ++old)
    if (pruned.node_map[old] != kNoNode)
      nodes << pruned.node_map[old] << ',' << flows.names[old] << '\n';
  write_text(out_path(cfg, "nodes.csv"), nodes.str());
  json meta = base_meta(cfg);
  meta["cutoff"] = pruned.cutoff;
  meta["nodes"] = pruned.graph.node_count();
  meta["edges"] = pruned.graph.edge_count();
  meta["mean_degree"] = pruned.graph.mean_degree();
  write_text(out_path(cfg, "meta.json"), meta.dump(2) + "\n");
}

}  // namespace

std::string resolved_config_json(const RunConfig& cfg) {
  json j;
  j["experiment"] = cfg.experiment;
  j["seed"] = cfg.seed;
  j["out_dir"] = cfg.out_dir;
  json params = json::object();
  for (const auto& [k, v] : cfg.params) params[k] = v;
  j["params"] = params;
  j["rng"] = kRngName;
  return j.dump(2) + "\n";
}

void run(const RunConfig& cfg) {
  Params p(cfg.params);
  if (cfg.dry_run) return;  // the CLI prints the resolved config itself
  std::filesystem::create_directories(cfg.out_dir);
  if (cfg.experiment == "gen-graph") return run_gen_graph(cfg, p);
  if (cfg.experiment == "stats") return run_stats(cfg, p);
  if (cfg.experiment == "sens-dep") return run_sens_dep(cfg, p);
  if (cfg.experiment == "forecast-ratio") return run_forecast_ratio(cfg, p);
  if (cfg.experiment == "count-jumps") return run_count_jumps(cfg, p);
  if (cfg.experiment == "estimate-p") return run_estimate_p(cfg, p);
  if (cfg.experiment == "beta-sample") return run_beta_sample(cfg, p);
  if (cfg.experiment == "detect") return run_detect(cfg, p);
  if (cfg.experiment == "fit-sir") return run_fit_sir(cfg, p);
  if (cfg.experiment == "msm-fit") return run_msm_fit(cfg, p);
  if (cfg.experiment == "exposure") return run_exposure(cfg, p);
  if (cfg.experiment == "peer-mc") return run_peer_mc(cfg, p);
  if (cfg.experiment == "ingest-flows") return run_ingest_flows(cfg, p);
  throw std::invalid_argument("unknown experiment: " + cfg.experiment);
}

}  // namespace netdiff
