#pragma once

#include <cstdint>
#include <vector>

#include "equilibrium.hpp"
#include "game_builder.hpp"

namespace msg {

/// Frame-level tallies from a seeded run. Identical (config, strategies,
/// n_frames, seed, workers) reproduce the report exactly.
struct SimulationReport {
  long long n_frames = 0;
  std::uint64_t seed = 0;
  double mean_attacker_payoff = 0.0;
  double mean_defender_payoff = 0.0;
  double se_attacker_payoff = 0.0;  // sample stdev / sqrt(n_frames)
  double se_defender_payoff = 0.0;
  double capture_rate = 0.0;  // mean captures per frame
  double se_capture = 0.0;

  // Per-channel sensing tallies split by that channel's attack status.
  std::vector<long long> attacked_frames;
  std::vector<long long> attacked_disallowed;
  std::vector<long long> quiet_frames;
  std::vector<long long> quiet_disallowed;
};

/// Plays n_frames independent one-shot rounds: sample PU presence, the attack
/// action, per-channel sensing (detection probability when the channel is
/// attacked or occupied, false alarm otherwise), then the defender's action
/// for the observed outcome. Capture, penalty and capture gain happen only
/// when the monitored, attacked channel is truly vacant; attack and
/// monitoring costs are always paid.
SimulationReport simulate(const GameConfig& config, const AttackerStrategy& attacker,
                          const DefenderStrategy& defender, long long n_frames,
                          std::uint64_t seed, int workers = 1);

}  // namespace msg
