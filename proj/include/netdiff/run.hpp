#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace netdiff {

// Resolved experiment invocation. `params` holds experiment-specific keys
// (already merged from config file and flag overrides). Thread count is
// execution detail only: it never reaches output files.
struct RunConfig {
  std::string experiment;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out_dir = ".";
  bool dry_run = false;
};

// Dispatch to the named experiment and write its artifacts under out_dir.
// Throws std::invalid_argument on bad configuration (usage error) and
// std::runtime_error on execution failure.
void run(const RunConfig& cfg);

// The resolved-config echo every run writes (and --dry-run prints).
std::string resolved_config_json(const RunConfig& cfg);

}  // namespace netdiff
