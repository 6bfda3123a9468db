// Command-line front end: subcommand dispatch, config-file merging,
// deterministic seeding. Exit codes: 0 ok, 1 runtime failure, 2 usage.

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "netdiff/run.hpp"

namespace {

struct SubState {
  netdiff::RunConfig cfg;
  std::string config_file;
  // flag -> (param key, captured value); only parsed flags are merged
  std::vector<std::pair<std::string, std::shared_ptr<std::string>>> captures;
  std::vector<CLI::Option*> options;
  bool parsed = false;
};

void add_params(CLI::App* sub, SubState& st,
                const std::vector<std::pair<const char*, const char*>>& opts) {
  for (const auto& [flag, key] : opts) {
    auto holder = std::make_shared<std::string>();
    auto* opt = sub->add_option(flag, *holder);
    st.captures.emplace_back(key, holder);
    st.options.push_back(opt);
  }
}

void load_config_file(const std::string& path,
                      std::map<std::string, std::string>& params) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected key=value");
    auto trim = [](std::string s) {
      auto b2 = s.find_first_not_of(" \t");
      if (b2 == std::string::npos) return std::string();
      auto e2 = s.find_last_not_of(" \t");
      return s.substr(b2, e2 - b2 + 1);
    };
    params[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"network diffusion experiments under graph measurement error"};
  app.require_subcommand(1);

  using Opts = std::vector<std::pair<const char*, const char*>>;
  const Opts graph_opts = {{"--graph", "graph"},   {"--type", "type"},
                           {"--n", "n"},           {"--q", "q"},
                           {"--n-side", "n_side"}, {"--d", "d"}};
  const Opts error_opts = {{"--beta", "beta"},
                           {"--beta-factor", "beta_factor"},
                           {"--delta", "delta"},
                           {"--support", "support"}};
  const Opts diff_opts = {{"--p", "p"}, {"--r0", "r0"}, {"--T", "T"},
                          {"--reps", "reps"}, {"--i0", "i0"}};

  struct Def {
    const char* name;
    const char* help;
    Opts opts;
  };
  auto cat = [](std::initializer_list<Opts> lists, Opts extra = {}) {
    Opts out;
    for (const auto& l : lists) out.insert(out.end(), l.begin(), l.end());
    out.insert(out.end(), extra.begin(), extra.end());
    return out;
  };

  std::vector<Def> defs = {
      {"gen-graph", "generate a base graph and write its edge list",
       cat({graph_opts})},
      {"stats", "graph summary statistics",
       cat({graph_opts}, {{"--sample", "sample"}})},
      {"sens-dep", "seed-perturbation overlap curve",
       cat({graph_opts, error_opts, diff_opts}, {{"--draws", "draws"}})},
      {"forecast-ratio", "observed-vs-true mean activation ratio curve",
       cat({graph_opts, error_opts, diff_opts},
           {{"--p0", "p0"}, {"--lambda", "lambda"}})},
      {"count-jumps", "per-step attributed missed-link transmissions",
       cat({graph_opts, error_opts, diff_opts})},
      {"estimate-p", "single-exposure transmission probability estimator",
       cat({graph_opts, diff_opts})},
      {"beta-sample", "no-link probability in pair-sampled subsets",
       {{"--n", "n"}, {"--beta", "beta"}, {"--m", "m"}, {"--reps", "reps"}}},
      {"detect", "region detection under random testing",
       cat({graph_opts, error_opts, diff_opts}, {{"--alpha", "alpha"}})},
      {"fit-sir", "compartmental fit to a network diffusion trace",
       cat({graph_opts, diff_opts}, {{"--fit-window", "fit_window"}})},
      {"msm-fit", "simulated-moments fit of the passing probability",
       {{"--manifest", "manifest"},
        {"--T", "T"},
        {"--reps", "reps"},
        {"--grid-step", "grid_step"}}},
      {"exposure", "diffusion exposure vector for one village",
       {{"--graph", "graph"},
        {"--seeds", "seeds"},
        {"--p", "p"},
        {"--T", "T"}}},
      {"peer-mc", "peer-effects mismeasurement Monte Carlo",
       {{"--manifest", "manifest"},
        {"--T", "T"},
        {"--reps", "reps"},
        {"--k-grid", "k_grid"},
        {"--hold-p-fixed", "hold_p_fixed"}}},
      {"ingest-flows", "symmetrize and prune an origin-destination table",
       {{"--flows", "flows"},
        {"--cutoff", "cutoff"},
        {"--percentile", "percentile"}}},
  };

  std::vector<std::unique_ptr<SubState>> states;
  for (const auto& def : defs) {
    auto* sub = app.add_subcommand(def.name, def.help);
    auto st = std::make_unique<SubState>();
    st->cfg.experiment = def.name;
    sub->add_option("--seed", st->cfg.seed, "master seed");
    sub->add_option("--threads", st->cfg.threads, "worker threads");
    sub->add_option("--out", st->cfg.out_dir, "output directory");
    sub->add_option("--config", st->config_file, "key=value config file");
    sub->add_flag("--dry-run", st->cfg.dry_run,
                  "print the resolved config and exit");
    add_params(sub, *st, def.opts);
    SubState* raw = st.get();
    sub->callback([raw] { raw->parsed = true; });
    states.push_back(std::move(st));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  for (auto& st : states) {
    if (!st->parsed) continue;
    try {
      if (!st->config_file.empty())
        load_config_file(st->config_file, st->cfg.params);
      for (std::size_t i = 0; i < st->captures.size(); ++i)
        if (st->options[i]->count() > 0)
          st->cfg.params[st->captures[i].first] = *st->captures[i].second;
      if (st->cfg.dry_run) {
        std::cout << netdiff::resolved_config_json(st->cfg);
        return 0;
      }
      netdiff::run(st->cfg);
      return 0;
    } catch (const std::invalid_argument& e) {
      std::cerr << "usage error: " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 2;
}
