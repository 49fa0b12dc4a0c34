#include "game_builder.hpp"

#include <ostream>
#include <stdexcept>
#include <string>

namespace msg {

namespace {

// Appends all size-`size` subsets of the channels selected by `pool`, in
// lexicographic order of channel indices.
void append_subsets(const std::vector<int>& pool, int size,
                    std::vector<ChannelMask>* out) {
  std::vector<int> pick(size);
  // Standard combination walk.
  for (int i = 0; i < size; ++i) pick[i] = i;
  const int n = static_cast<int>(pool.size());
  while (true) {
    ChannelMask mask = 0;
    for (int i : pick) mask |= ChannelMask{1} << pool[i];
    out->push_back(mask);
    int i = size - 1;
    while (i >= 0 && pick[i] == n - size + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
  }
}

std::vector<ChannelMask> subsets_up_to(ChannelMask pool_mask, int max_size) {
  std::vector<int> pool;
  for (int t = 0; t < 32; ++t) {
    if (pool_mask & (ChannelMask{1} << t)) pool.push_back(t);
  }
  std::vector<ChannelMask> out;
  out.push_back(0);
  const int cap = std::min<int>(max_size, static_cast<int>(pool.size()));
  for (int size = 1; size <= cap; ++size) append_subsets(pool, size, &out);
  return out;
}

}  // namespace

void GameConfig::validate() const {
  if (n_channels < 1 || n_channels > 16) {
    throw std::domain_error("n_channels must be in [1, 16]");
  }
  if (max_attack < 1) throw std::domain_error("max_attack must be >= 1");
  if (max_monitor < 1) throw std::domain_error("max_monitor must be >= 1");
  if (static_cast<int>(channels.size()) != n_channels) {
    throw std::domain_error("channels list must have n_channels entries");
  }
  for (const ChannelParams& ch : channels) ch.validate();
}

GameConfig make_config(const std::vector<double>& pu_presence,
                       const SensingModel& sensing, const EconomicRatios& econ,
                       int max_attack, int max_monitor) {
  GameConfig config;
  config.n_channels = static_cast<int>(pu_presence.size());
  config.max_attack = max_attack;
  config.max_monitor = max_monitor;
  const double p_detect = detection_probability(sensing);
  for (double pi : pu_presence) {
    config.channels.push_back(
        derive_channel_from_probs(pi, p_detect, sensing.false_alarm, econ));
  }
  config.validate();
  return config;
}

std::vector<AttackAction> enumerate_attack_actions(const GameConfig& config) {
  const ChannelMask all = (ChannelMask{1} << config.n_channels) - 1;
  std::vector<AttackAction> actions;
  for (ChannelMask mask : subsets_up_to(all, config.max_attack)) {
    actions.push_back({mask});
  }
  return actions;
}

std::vector<DefendAction> enumerate_defend_actions(const GameConfig& config,
                                                   SensingOutcome outcome) {
  std::vector<DefendAction> actions;
  for (ChannelMask mask : subsets_up_to(outcome.disallowed, config.max_monitor)) {
    actions.push_back({mask});
  }
  return actions;
}

double chance_probability(const GameConfig& config, AttackAction action,
                          SensingOutcome outcome) {
  double p = 1.0;
  for (int t = 0; t < config.n_channels; ++t) {
    const ChannelMask bit = ChannelMask{1} << t;
    const ChannelParams& ch = config.channels[t];
    const double q = (action.channels & bit) ? ch.disallowed_attack
                                             : ch.disallowed_no_attack;
    p *= (outcome.disallowed & bit) ? q : 1.0 - q;
  }
  return p;
}

PayoffPair aggregate_payoffs(const GameConfig& config, AttackAction action,
                             SensingOutcome outcome, DefendAction defend) {
  if (defend.monitored & ~outcome.disallowed) {
    throw std::invalid_argument("monitored set must lie in the disallowed set");
  }
  PayoffPair total;
  const ChannelMask relevant = action.channels | defend.monitored;
  for (int t = 0; t < config.n_channels; ++t) {
    const ChannelMask bit = ChannelMask{1} << t;
    if (!(relevant & bit)) continue;
    const PayoffCell cell =
        payoff_cell(config.channels[t], (action.channels & bit) != 0,
                    (outcome.disallowed & bit) != 0, (defend.monitored & bit) != 0);
    if (action.channels & bit) total.attacker += cell.attacker;
    if (defend.monitored & bit) total.defender += cell.defender;
  }
  return total;
}

Eigen::MatrixXd SparseMatrix::dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, cols);
  for (const Entry& e : entries) m(e.row, e.col) += e.value;
  return m;
}

int SequenceFormGame::attacker_extension_sequence(int action_index,
                                                  int outcome) const {
  if (form != GameForm::extended) {
    throw std::logic_error("extension sequences exist only in the extended form");
  }
  const int n_actions = static_cast<int>(attack_actions.size());
  return 1 + n_actions + action_index * config.outcome_count() + outcome;
}

long long extended_attacker_sequence_count(int n_channels, int max_attack) {
  long long k1 = 0;
  long long binom = 1;
  const int cap = std::min(max_attack, n_channels);
  for (int i = 1; i <= cap; ++i) {
    binom = binom * (n_channels - i + 1) / i;
    k1 += binom;
  }
  return 1 + (k1 + 1) + (k1 + 1) * (1LL << n_channels);
}

namespace {

// Lays out the parts shared by both forms: actions, defender blocks, F/f.
void build_common(const GameConfig& config, SequenceFormGame* game) {
  game->config = config;
  game->attack_actions = enumerate_attack_actions(config);

  const int n_outcomes = config.outcome_count();
  game->defender_offsets.resize(n_outcomes);
  game->defender_actions.resize(n_outcomes);
  int next = 1;  // sequence 0 is the defender's empty sequence
  for (int k = 0; k < n_outcomes; ++k) {
    game->defender_offsets[k] = next;
    game->defender_actions[k] =
        enumerate_defend_actions(config, {static_cast<ChannelMask>(k)});
    next += static_cast<int>(game->defender_actions[k].size());
  }
  game->n_defender_sequences = next;

  // One row per sensing outcome: the weights of its actions add up to the
  // root weight.
  Eigen::MatrixXd f_mat = Eigen::MatrixXd::Zero(1 + n_outcomes, next);
  f_mat(0, 0) = 1.0;
  for (int k = 0; k < n_outcomes; ++k) {
    f_mat(1 + k, 0) = -1.0;
    const int base = game->defender_offsets[k];
    for (int a = 0; a < static_cast<int>(game->defender_actions[k].size()); ++a) {
      f_mat(1 + k, base + a) = 1.0;
    }
  }
  game->defender_constraints = std::move(f_mat);
  game->defender_rhs = Eigen::VectorXd::Zero(1 + n_outcomes);
  game->defender_rhs(0) = 1.0;
}

}  // namespace

SequenceFormGame build_sequence_form(const GameConfig& config,
                                     const BuildLimits& limits) {
  config.validate();
  SequenceFormGame game;
  game.form = GameForm::extended;
  build_common(config, &game);

  const int n_actions = static_cast<int>(game.attack_actions.size());
  const int n_outcomes = config.outcome_count();
  const long long n_seq = 1 + n_actions + static_cast<long long>(n_actions) * n_outcomes;
  if (n_seq > limits.max_sequences) {
    throw std::length_error("sequence count " + std::to_string(n_seq) +
                            " exceeds the build limit");
  }
  game.n_attacker_sequences = static_cast<int>(n_seq);

  // Root row, one action-level row, and one row per action family tying the
  // extension weights back to the action weight.
  Eigen::MatrixXd e_mat =
      Eigen::MatrixXd::Zero(2 + n_actions, game.n_attacker_sequences);
  e_mat(0, 0) = 1.0;
  e_mat(1, 0) = -1.0;
  for (int i = 0; i < n_actions; ++i) {
    e_mat(1, game.attacker_action_sequence(i)) = 1.0;
    e_mat(2 + i, game.attacker_action_sequence(i)) = -1.0;
    for (int k = 0; k < n_outcomes; ++k) {
      e_mat(2 + i, game.attacker_extension_sequence(i, k)) = 1.0;
    }
  }
  game.attacker_constraints = std::move(e_mat);
  game.attacker_rhs = Eigen::VectorXd::Zero(2 + n_actions);
  game.attacker_rhs(0) = 1.0;

  game.attacker_payoff.rows = game.defender_payoff.rows = game.n_attacker_sequences;
  game.attacker_payoff.cols = game.defender_payoff.cols =
      game.n_defender_sequences - 1;
  for (int i = 0; i < n_actions; ++i) {
    for (int k = 0; k < n_outcomes; ++k) {
      const SensingOutcome outcome{static_cast<ChannelMask>(k)};
      const double chance = chance_probability(config, game.attack_actions[i], outcome);
      const int row = game.attacker_extension_sequence(i, k);
      const auto& defends = game.defender_actions[k];
      for (int a = 0; a < static_cast<int>(defends.size()); ++a) {
        const PayoffPair u =
            aggregate_payoffs(config, game.attack_actions[i], outcome, defends[a]);
        const int col = game.defender_action_sequence(k, a) - 1;
        game.attacker_payoff.entries.push_back({row, col, chance * u.attacker});
        game.defender_payoff.entries.push_back({row, col, chance * u.defender});
        game.leaf_chance.push_back(chance);
        game.leaf_payoff.push_back(u);
      }
    }
  }
  return game;
}

SequenceFormGame build_reduced_sequence_form(const GameConfig& config,
                                             const BuildLimits& limits) {
  config.validate();
  SequenceFormGame game;
  game.form = GameForm::reduced;
  build_common(config, &game);

  const int n_actions = static_cast<int>(game.attack_actions.size());
  const int n_outcomes = config.outcome_count();
  if (1 + n_actions > limits.max_sequences) {
    throw std::length_error("sequence count exceeds the build limit");
  }
  game.n_attacker_sequences = 1 + n_actions;

  Eigen::MatrixXd e_mat = Eigen::MatrixXd::Zero(2, game.n_attacker_sequences);
  e_mat(0, 0) = 1.0;
  e_mat(1, 0) = -1.0;
  for (int i = 0; i < n_actions; ++i) {
    e_mat(1, game.attacker_action_sequence(i)) = 1.0;
  }
  game.attacker_constraints = std::move(e_mat);
  game.attacker_rhs = Eigen::VectorXd::Zero(2);
  game.attacker_rhs(0) = 1.0;

  game.attacker_payoff.rows = game.defender_payoff.rows = game.n_attacker_sequences;
  game.attacker_payoff.cols = game.defender_payoff.cols =
      game.n_defender_sequences - 1;
  for (int i = 0; i < n_actions; ++i) {
    const int row = game.attacker_action_sequence(i);
    for (int k = 0; k < n_outcomes; ++k) {
      const SensingOutcome outcome{static_cast<ChannelMask>(k)};
      const double chance = chance_probability(config, game.attack_actions[i], outcome);
      const auto& defends = game.defender_actions[k];
      for (int a = 0; a < static_cast<int>(defends.size()); ++a) {
        const PayoffPair u =
            aggregate_payoffs(config, game.attack_actions[i], outcome, defends[a]);
        const int col = game.defender_action_sequence(k, a) - 1;
        game.attacker_payoff.entries.push_back({row, col, chance * u.attacker});
        game.defender_payoff.entries.push_back({row, col, chance * u.defender});
        game.leaf_chance.push_back(chance);
        game.leaf_payoff.push_back(u);
      }
    }
  }
  return game;
}

namespace {

void dump_dense(const Eigen::MatrixXd& m, const char* name, std::ostream& out) {
  out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (m(r, c) != 0.0) out << r << ' ' << c << ' ' << m(r, c) << '\n';
    }
  }
}

void dump_sparse(const SparseMatrix& m, const char* name, std::ostream& out) {
  out << name << ' ' << m.rows << ' ' << m.cols << '\n';
  for (const SparseMatrix::Entry& e : m.entries) {
    out << e.row << ' ' << e.col << ' ' << e.value << '\n';
  }
}

}  // namespace

void dump_game(const SequenceFormGame& game, std::ostream& out) {
  out << "form " << (game.form == GameForm::extended ? "extended" : "reduced")
      << '\n';
  dump_dense(game.attacker_constraints, "E", out);
  dump_dense(game.defender_constraints, "F", out);
  dump_sparse(game.attacker_payoff, "PI_A", out);
  dump_sparse(game.defender_payoff, "PI_D", out);
}

}  // namespace msg
