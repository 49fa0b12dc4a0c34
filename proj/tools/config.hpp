#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace msgcli {

/// Configuration error with the offending location baked into the message.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything a run needs, parsed from the sectioned key=value config file.
struct ExperimentConfig {
  // [game]
  int channels = 2;
  int max_attack = 1;
  int max_monitor = 1;
  std::vector<double> pu_presence = {0.2, 0.5};
  int n_samples = 1500;
  double false_alarm = 0.1;
  double snr_db = -10.0;

  // [economics]
  double attack_cost = 0.2;
  double monitor_cost = 0.1;
  double penalty_factor = 3.0;
  double network_demand = 0.5;

  // [sweep]
  std::vector<double> demand_grid;
  std::vector<double> penalty_grid;

  // [run]
  unsigned long long seed = 1;
  double tolerance = 1e-9;
  double verify_tolerance = 1e-7;
  int workers = 1;
  long long frames = 1'000'000;
  long long max_cells = 1'000'000;
  int max_support = 2;
  std::vector<int> bench_channels = {2, 3, 4};
};

/// Parses the config text. Unknown sections or keys, malformed numbers and
/// out-of-range values raise ConfigError naming the line and key.
ExperimentConfig parse_config(const std::string& text, const std::string& origin);

/// Reads and parses a config file.
ExperimentConfig load_config(const std::string& path);

/// Grid syntax: either "a, b, c" or "start:stop:steps" (inclusive ends).
std::vector<double> parse_grid(const std::string& value);

}  // namespace msgcli
