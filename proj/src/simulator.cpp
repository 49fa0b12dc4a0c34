#include "simulator.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace msg {

namespace {

// splitmix64 step, used to derive independent per-chunk seeds.
std::uint64_t mix_seed(std::uint64_t state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct ChunkTallies {
  long long frames = 0;
  double sum_attacker = 0.0;
  double sumsq_attacker = 0.0;
  double sum_defender = 0.0;
  double sumsq_defender = 0.0;
  long long captures = 0;
  long long capture_sq = 0;
  std::vector<long long> attacked_frames;
  std::vector<long long> attacked_disallowed;
  std::vector<long long> quiet_frames;
  std::vector<long long> quiet_disallowed;

  explicit ChunkTallies(int n_channels)
      : attacked_frames(n_channels, 0),
        attacked_disallowed(n_channels, 0),
        quiet_frames(n_channels, 0),
        quiet_disallowed(n_channels, 0) {}

  void merge(const ChunkTallies& other) {
    frames += other.frames;
    sum_attacker += other.sum_attacker;
    sumsq_attacker += other.sumsq_attacker;
    sum_defender += other.sum_defender;
    sumsq_defender += other.sumsq_defender;
    captures += other.captures;
    capture_sq += other.capture_sq;
    for (size_t c = 0; c < attacked_frames.size(); ++c) {
      attacked_frames[c] += other.attacked_frames[c];
      attacked_disallowed[c] += other.attacked_disallowed[c];
      quiet_frames[c] += other.quiet_frames[c];
      quiet_disallowed[c] += other.quiet_disallowed[c];
    }
  }
};

int sample_index(const std::vector<double>& probs, double u) {
  double acc = 0.0;
  for (size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;
}

// One frame: sensing draws per channel, then the defender's move on the
// observed outcome, then payoff realization. The per-channel draw works on
// the (disallowed, vacant-given-disallowed) marginals, which is exactly the
// joint the payoff table conditions on.
ChunkTallies run_chunk(const GameConfig& config,
                       const std::vector<AttackAction>& actions,
                       const AttackerStrategy& attacker,
                       const DefenderStrategy& defender, long long frames,
                       std::uint64_t seed) {
  ChunkTallies t(config.n_channels);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (long long frame = 0; frame < frames; ++frame) {
    const AttackAction action = actions[sample_index(attacker.probs, unit(rng))];

    ChannelMask disallowed = 0;
    ChannelMask vacant = 0;
    for (int c = 0; c < config.n_channels; ++c) {
      const ChannelMask bit = ChannelMask{1} << c;
      const ChannelParams& ch = config.channels[c];
      const bool attacked = (action.channels & bit) != 0;
      const double p_flag =
          attacked ? ch.disallowed_attack : ch.disallowed_no_attack;
      if (attacked) {
        ++t.attacked_frames[c];
      } else {
        ++t.quiet_frames[c];
      }
      if (unit(rng) >= p_flag) continue;
      disallowed |= bit;
      if (attacked) {
        ++t.attacked_disallowed[c];
      } else {
        ++t.quiet_disallowed[c];
      }
      const double p_vacant = attacked ? ch.vacant_attack : ch.vacant_no_attack;
      if (unit(rng) < p_vacant) vacant |= bit;
    }

    const std::vector<DefendAction> menu =
        enumerate_defend_actions(config, {disallowed});
    const DefendAction defend =
        menu[sample_index(defender.probs[static_cast<int>(disallowed)], unit(rng))];

    double pay_attacker = 0.0;
    double pay_defender = 0.0;
    int captures = 0;
    for (int c = 0; c < config.n_channels; ++c) {
      const ChannelMask bit = ChannelMask{1} << c;
      const ChannelParams& ch = config.channels[c];
      if (defend.monitored & bit) pay_defender -= ch.monitor_cost;
      if (!(action.channels & bit)) continue;
      pay_attacker -= ch.attack_cost;
      if (!(disallowed & bit) || !(vacant & bit)) continue;
      if (defend.monitored & bit) {
        pay_attacker -= ch.capture_penalty;
        pay_defender += ch.capture_gain;
        ++captures;
      } else {
        pay_attacker += ch.attack_gain;
      }
    }

    t.sum_attacker += pay_attacker;
    t.sumsq_attacker += pay_attacker * pay_attacker;
    t.sum_defender += pay_defender;
    t.sumsq_defender += pay_defender * pay_defender;
    t.captures += captures;
    t.capture_sq += static_cast<long long>(captures) * captures;
  }
  t.frames = frames;
  return t;
}

double standard_error(double sum, double sumsq, long long n) {
  if (n <= 1) return std::numeric_limits<double>::infinity();
  const double mean = sum / static_cast<double>(n);
  const double var =
      std::max(0.0, (sumsq - static_cast<double>(n) * mean * mean) /
                        static_cast<double>(n - 1));
  return std::sqrt(var / static_cast<double>(n));
}

}  // namespace

SimulationReport simulate(const GameConfig& config, const AttackerStrategy& attacker,
                          const DefenderStrategy& defender, long long n_frames,
                          std::uint64_t seed, int workers) {
  config.validate();
  if (n_frames < 1) throw std::invalid_argument("n_frames must be >= 1");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  const std::vector<AttackAction> actions = enumerate_attack_actions(config);
  if (attacker.probs.size() != actions.size() ||
      defender.probs.size() != static_cast<size_t>(config.outcome_count())) {
    throw std::invalid_argument("strategy sizes do not match the config");
  }

  const int chunks = static_cast<int>(std::min<long long>(workers, n_frames));
  std::vector<std::future<ChunkTallies>> futures;
  std::uint64_t stream = seed;
  for (int c = 0; c < chunks; ++c) {
    const long long lo = n_frames * c / chunks;
    const long long hi = n_frames * (c + 1) / chunks;
    stream = mix_seed(stream);
    futures.push_back(std::async(
        chunks == 1 ? std::launch::deferred : std::launch::async, run_chunk,
        std::cref(config), std::cref(actions), std::cref(attacker),
        std::cref(defender), hi - lo, stream));
  }

  ChunkTallies total(config.n_channels);
  for (auto& f : futures) total.merge(f.get());

  SimulationReport report;
  report.n_frames = total.frames;
  report.seed = seed;
  const double n = static_cast<double>(total.frames);
  report.mean_attacker_payoff = total.sum_attacker / n;
  report.mean_defender_payoff = total.sum_defender / n;
  report.se_attacker_payoff =
      standard_error(total.sum_attacker, total.sumsq_attacker, total.frames);
  report.se_defender_payoff =
      standard_error(total.sum_defender, total.sumsq_defender, total.frames);
  report.capture_rate = static_cast<double>(total.captures) / n;
  report.se_capture = standard_error(static_cast<double>(total.captures),
                                     static_cast<double>(total.capture_sq),
                                     total.frames);
  report.attacked_frames = std::move(total.attacked_frames);
  report.attacked_disallowed = std::move(total.attacked_disallowed);
  report.quiet_frames = std::move(total.quiet_frames);
  report.quiet_disallowed = std::move(total.quiet_disallowed);
  return report;
}

}  // namespace msg
