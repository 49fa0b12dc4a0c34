#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace msgcli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& value, const std::string& where) {
  try {
    size_t used = 0;
    const double out = std::stod(value, &used);
    if (used != value.size() || !std::isfinite(out)) throw std::invalid_argument("");
    return out;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected a number, got '" + value + "'");
  }
}

long long parse_int(const std::string& value, const std::string& where) {
  try {
    size_t used = 0;
    const long long out = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return out;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected an integer, got '" + value + "'");
  }
}

std::vector<std::string> split(const std::string& value, char sep) {
  std::vector<std::string> parts;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, sep)) parts.push_back(trim(item));
  return parts;
}

}  // namespace

std::vector<double> parse_grid(const std::string& value) {
  if (value.find(':') != std::string::npos) {
    const std::vector<std::string> parts = split(value, ':');
    if (parts.size() != 3) {
      throw ConfigError("grid '" + value + "' must be start:stop:steps");
    }
    const double start = parse_double(parts[0], "grid start");
    const double stop = parse_double(parts[1], "grid stop");
    const long long steps = parse_int(parts[2], "grid steps");
    if (steps < 1) throw ConfigError("grid steps must be >= 1");
    std::vector<double> grid;
    for (long long i = 0; i < steps; ++i) {
      grid.push_back(steps == 1 ? start
                                : start + (stop - start) * static_cast<double>(i) /
                                      static_cast<double>(steps - 1));
    }
    return grid;
  }
  std::vector<double> grid;
  for (const std::string& part : split(value, ',')) {
    if (!part.empty()) grid.push_back(parse_double(part, "grid entry"));
  }
  return grid;
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  ExperimentConfig config;
  std::istringstream stream(text);
  std::string line;
  std::string section;
  int line_no = 0;
  bool pi_seen = false;

  while (std::getline(stream, line)) {
    ++line_no;
    const std::string where = origin + ":" + std::to_string(line_no);
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "game" && section != "economics" && section != "sweep" &&
          section != "run") {
        throw ConfigError(where + ": unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string ctx = where + ": key '" + key + "'";
    if (section.empty()) throw ConfigError(ctx + " appears before any section");

    if (section == "game") {
      if (key == "channels") {
        config.channels = static_cast<int>(parse_int(value, ctx));
      } else if (key == "max_attack") {
        config.max_attack = static_cast<int>(parse_int(value, ctx));
      } else if (key == "max_monitor") {
        config.max_monitor = static_cast<int>(parse_int(value, ctx));
      } else if (key == "pi") {
        config.pu_presence = parse_grid(value);
        pi_seen = true;
        for (double p : config.pu_presence) {
          if (p < 0.0 || p > 1.0) {
            throw ConfigError(ctx + ": pi value " + std::to_string(p) +
                              " outside [0,1]");
          }
        }
      } else if (key == "n_samples") {
        config.n_samples = static_cast<int>(parse_int(value, ctx));
      } else if (key == "false_alarm") {
        config.false_alarm = parse_double(value, ctx);
        if (config.false_alarm <= 0.0 || config.false_alarm >= 1.0) {
          throw ConfigError(ctx + ": false_alarm must be inside (0,1)");
        }
      } else if (key == "snr_db") {
        config.snr_db = parse_double(value, ctx);
      } else {
        throw ConfigError(ctx + " is not a [game] key");
      }
    } else if (section == "economics") {
      double* slot = nullptr;
      if (key == "attack_cost") slot = &config.attack_cost;
      else if (key == "monitor_cost") slot = &config.monitor_cost;
      else if (key == "penalty_factor") slot = &config.penalty_factor;
      else if (key == "network_demand") slot = &config.network_demand;
      else throw ConfigError(ctx + " is not an [economics] key");
      *slot = parse_double(value, ctx);
      if (*slot < 0.0) throw ConfigError(ctx + ": must be >= 0");
    } else if (section == "sweep") {
      if (key == "network_demand") {
        config.demand_grid = parse_grid(value);
      } else if (key == "penalty_factor") {
        config.penalty_grid = parse_grid(value);
      } else {
        throw ConfigError(ctx + " is not a [sweep] key");
      }
    } else {  // run
      if (key == "seed") {
        config.seed = static_cast<unsigned long long>(parse_int(value, ctx));
      } else if (key == "tolerance") {
        config.tolerance = parse_double(value, ctx);
      } else if (key == "verify_tolerance") {
        config.verify_tolerance = parse_double(value, ctx);
      } else if (key == "workers") {
        config.workers = static_cast<int>(parse_int(value, ctx));
      } else if (key == "frames") {
        config.frames = parse_int(value, ctx);
      } else if (key == "max_cells") {
        config.max_cells = parse_int(value, ctx);
      } else if (key == "max_support") {
        config.max_support = static_cast<int>(parse_int(value, ctx));
      } else if (key == "bench_channels") {
        config.bench_channels.clear();
        for (double v : parse_grid(value)) {
          config.bench_channels.push_back(static_cast<int>(v));
        }
      } else {
        throw ConfigError(ctx + " is not a [run] key");
      }
    }
  }

  if (pi_seen &&
      static_cast<int>(config.pu_presence.size()) != config.channels) {
    throw ConfigError(origin + ": key 'pi' lists " +
                      std::to_string(config.pu_presence.size()) +
                      " values for " + std::to_string(config.channels) +
                      " channels");
  }
  if (config.channels < 1) throw ConfigError(origin + ": key 'channels' must be >= 1");
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path);
}

}  // namespace msgcli
