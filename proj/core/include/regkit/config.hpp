#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace regkit {

/**
 * Experiment description. On disk it is a flat list of `key = value` lines;
 * `#` starts a comment. Reserved keys: design, n (comma-separated list),
 * replications, seed, out. Every other key is a design parameter.
 */
struct ExperimentConfig {
  std::string design;
  std::vector<std::size_t> n_list;
  std::size_t replications = 1;
  std::optional<std::uint64_t> seed;
  std::string output_dir;
  std::map<std::string, std::string> params;

  double number(const std::string& key, double fallback) const;
  long integer(const std::string& key, long fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;

  /// Checks the invariants: replications ≥ 1, n strictly increasing, seed present.
  void validate() const;
};

ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

}  // namespace regkit
