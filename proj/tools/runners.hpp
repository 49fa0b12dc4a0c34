#pragma once

#include <iosfwd>
#include <string>

#include "config.hpp"

namespace msgcli {

struct RunContext {
  ExperimentConfig config;
  std::ostream* out = nullptr;  // CSV sink
  std::ostream* err = nullptr;  // diagnostics
  bool extended_form = false;   // solve/dump on the extended representation
};

// Each runner emits one CSV table and returns the process exit code:
// 0 when every emitted equilibrium passed verification, 1 otherwise.
int run_solve(const RunContext& ctx);
int run_sweep(const RunContext& ctx);
int run_bench(const RunContext& ctx);
int run_simulate(const RunContext& ctx);
int run_dump(const RunContext& ctx, const std::string& path);

}  // namespace msgcli
