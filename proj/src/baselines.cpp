#include "baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace msg {

double strategic_form_columns(const GameConfig& config) {
  double cols = 1.0;
  for (int k = 0; k < config.outcome_count(); ++k) {
    const auto menu = enumerate_defend_actions(config, {static_cast<ChannelMask>(k)});
    cols *= static_cast<double>(menu.size());
    if (cols > 1e18) return 1e18;
  }
  return cols;
}

NormalFormGame build_normal_form(const GameConfig& config, std::size_t max_cells) {
  config.validate();
  NormalFormGame game;
  game.config = config;
  game.row_actions = enumerate_attack_actions(config);

  const int n_outcomes = config.outcome_count();
  std::vector<std::vector<DefendAction>> menus(n_outcomes);
  for (int k = 0; k < n_outcomes; ++k) {
    menus[k] = enumerate_defend_actions(config, {static_cast<ChannelMask>(k)});
  }

  const double cols = strategic_form_columns(config);
  const double cells = cols * static_cast<double>(game.row_actions.size());
  if (cells > static_cast<double>(max_cells)) {
    throw std::length_error("strategic form needs " + std::to_string(cells) +
                            " cells, over the budget of " + std::to_string(max_cells));
  }
  const int n_cols = static_cast<int>(cols);
  const int n_rows = static_cast<int>(game.row_actions.size());

  // Policies enumerate as a mixed-radix counter over outcomes, the last
  // outcome varying fastest; policy 0 never monitors anything.
  game.col_policies.assign(n_cols, std::vector<int>(n_outcomes, 0));
  for (int j = 1; j < n_cols; ++j) {
    game.col_policies[j] = game.col_policies[j - 1];
    for (int k = n_outcomes - 1; k >= 0; --k) {
      if (++game.col_policies[j][k] < static_cast<int>(menus[k].size())) break;
      game.col_policies[j][k] = 0;
    }
  }

  game.attacker_payoff.resize(n_rows, n_cols);
  game.defender_payoff.resize(n_rows, n_cols);
  // Per-outcome expected payoffs of (action, defend action), assembled once.
  std::vector<std::vector<std::vector<PayoffPair>>> cell(n_rows);
  for (int i = 0; i < n_rows; ++i) {
    cell[i].resize(n_outcomes);
    for (int k = 0; k < n_outcomes; ++k) {
      const SensingOutcome outcome{static_cast<ChannelMask>(k)};
      const double chance = chance_probability(config, game.row_actions[i], outcome);
      cell[i][k].resize(menus[k].size());
      for (size_t a = 0; a < menus[k].size(); ++a) {
        PayoffPair u = aggregate_payoffs(config, game.row_actions[i], outcome, menus[k][a]);
        u.attacker *= chance;
        u.defender *= chance;
        cell[i][k][a] = u;
      }
    }
  }
  for (int i = 0; i < n_rows; ++i) {
    for (int j = 0; j < n_cols; ++j) {
      double ua = 0.0, ud = 0.0;
      for (int k = 0; k < n_outcomes; ++k) {
        const PayoffPair& u = cell[i][k][game.col_policies[j][k]];
        ua += u.attacker;
        ud += u.defender;
      }
      game.attacker_payoff(i, j) = ua;
      game.defender_payoff(i, j) = ud;
    }
  }
  return game;
}

namespace {

constexpr double kFeasTol = 1e-9;

// Walks all size-k index subsets of [0, n).
class SubsetWalker {
 public:
  SubsetWalker(int n, int k) : n_(n), pick_(k) {
    for (int i = 0; i < k; ++i) pick_[i] = i;
    done_ = k > n;
  }
  bool done() const { return done_; }
  const std::vector<int>& current() const { return pick_; }
  void advance() {
    const int k = static_cast<int>(pick_.size());
    int i = k - 1;
    while (i >= 0 && pick_[i] == n_ - k + i) --i;
    if (i < 0) {
      done_ = true;
      return;
    }
    ++pick_[i];
    for (int j = i + 1; j < k; ++j) pick_[j] = pick_[j - 1] + 1;
  }

 private:
  int n_;
  std::vector<int> pick_;
  bool done_ = false;
};

// Solves the indifference system over a support pair: mix over `cols` making
// the `rows` of `payoff` equal. Returns false when the system is singular or
// the mix leaves the simplex.
bool indifference_mix(const Eigen::MatrixXd& payoff, const std::vector<int>& rows,
                      const std::vector<int>& cols, Eigen::VectorXd* mix,
                      double* value) {
  const int s = static_cast<int>(rows.size());
  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(s + 1, s + 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s + 1);
  for (int r = 0; r < s; ++r) {
    for (int c = 0; c < s; ++c) system(r, c) = payoff(rows[r], cols[c]);
    system(r, s) = -1.0;  // common value
  }
  for (int c = 0; c < s; ++c) system(s, c) = 1.0;
  rhs(s) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (!lu.isInvertible()) return false;
  const Eigen::VectorXd sol = lu.solve(rhs);
  for (int c = 0; c < s; ++c) {
    if (sol(c) < -kFeasTol) return false;
  }
  *mix = sol.head(s).cwiseMax(0.0);
  const double total = mix->sum();
  if (total <= 0.0) return false;
  *mix /= total;
  *value = sol(s);
  return true;
}

}  // namespace

std::vector<NormalFormEquilibrium> support_enumeration_ne(
    const NormalFormGame& game, int max_support, std::size_t max_found) {
  const int n_rows = game.rows();
  const int n_cols = game.cols();
  const Eigen::MatrixXd& a = game.attacker_payoff;
  const Eigen::MatrixXd& d = game.defender_payoff;
  std::vector<NormalFormEquilibrium> found;

  const int cap = std::min({max_support, n_rows, n_cols});
  for (int s = 1; s <= cap && found.size() < max_found; ++s) {
    for (SubsetWalker rows_walk(n_rows, s); !rows_walk.done(); rows_walk.advance()) {
      const std::vector<int>& rows = rows_walk.current();
      for (SubsetWalker cols_walk(n_cols, s); !cols_walk.done(); cols_walk.advance()) {
        const std::vector<int>& cols = cols_walk.current();

        Eigen::VectorXd row_mix, col_mix;
        double row_value = 0.0, col_value = 0.0;
        if (s == 1) {
          row_mix = Eigen::VectorXd::Ones(1);
          col_mix = Eigen::VectorXd::Ones(1);
          row_value = a(rows[0], cols[0]);
          col_value = d(rows[0], cols[0]);
        } else {
          // Column mix makes the supported rows indifferent in the attacker
          // payoff; row mix does the same for the defender.
          if (!indifference_mix(a, rows, cols, &col_mix, &row_value)) continue;
          Eigen::MatrixXd dt = Eigen::MatrixXd::Zero(s, s);
          for (int r = 0; r < s; ++r) {
            for (int c = 0; c < s; ++c) dt(r, c) = d(rows[c], cols[r]);
          }
          std::vector<int> identity(s);
          for (int i = 0; i < s; ++i) identity[i] = i;
          if (!indifference_mix(dt, identity, identity, &row_mix, &col_value)) continue;
        }

        // Best-response inequalities over the full action sets.
        bool ok = true;
        for (int r = 0; r < n_rows && ok; ++r) {
          double v = 0.0;
          for (int c = 0; c < s; ++c) v += a(r, cols[c]) * col_mix(c);
          if (v > row_value + kFeasTol) ok = false;
        }
        for (int c = 0; c < n_cols && ok; ++c) {
          double v = 0.0;
          for (int r = 0; r < s; ++r) v += d(rows[r], c) * row_mix(r);
          if (v > col_value + kFeasTol) ok = false;
        }
        if (!ok) continue;

        NormalFormEquilibrium eq;
        eq.row_mix = Eigen::VectorXd::Zero(n_rows);
        eq.col_mix = Eigen::VectorXd::Zero(n_cols);
        for (int i = 0; i < s; ++i) {
          eq.row_mix(rows[i]) = row_mix(i);
          eq.col_mix(cols[i]) = col_mix(i);
        }
        eq.row_value = row_value;
        eq.col_value = col_value;
        found.push_back(std::move(eq));
        if (found.size() >= max_found) return found;
      }
    }
  }
  return found;
}

const char* to_string(SingleChannelRegime regime) {
  switch (regime) {
    case SingleChannelRegime::pure_no_attack: return "pure_no_attack";
    case SingleChannelRegime::pure_attack_no_monitor: return "pure_attack_no_monitor";
    case SingleChannelRegime::interior: return "interior";
  }
  return "unknown";
}

SingleChannelNe solve_single_channel(const ChannelParams& channel) {
  channel.validate();
  const double p_attack = channel.disallowed_attack;
  const double p_quiet = channel.disallowed_no_attack;
  const double vacant = channel.vacant_attack;
  if (p_attack <= 0.0) {
    throw std::domain_error("degenerate channel: disallowed_attack is 0");
  }

  SingleChannelNe ne;
  const double attack_net = -channel.attack_cost + p_attack * vacant * channel.attack_gain;
  if (attack_net <= 0.0) {
    ne.regime = SingleChannelRegime::pure_no_attack;
    return ne;  // attacking never pays, so nobody moves
  }
  const double monitor_net = -channel.monitor_cost + vacant * channel.capture_gain;
  if (monitor_net <= 0.0) {
    // Monitoring loses even against a certain attacker.
    ne.regime = SingleChannelRegime::pure_attack_no_monitor;
    ne.attack_prob = 1.0;
    return ne;
  }

  ne.regime = SingleChannelRegime::interior;
  ne.surveillance_prob =
      (p_attack * vacant * channel.attack_gain - channel.attack_cost) /
      (p_attack * vacant * (channel.attack_gain + channel.capture_penalty));
  // The defender is indifferent when the posterior of an attack behind a
  // disallowed flag hits beta*.
  const double beta = channel.monitor_cost / (vacant * channel.capture_gain);
  ne.attack_prob = beta * p_quiet / (p_attack - beta * (p_attack - p_quiet));
  ne.attack_prob = std::clamp(ne.attack_prob, 0.0, 1.0);
  ne.surveillance_prob = std::clamp(ne.surveillance_prob, 0.0, 1.0);
  return ne;
}

DefenderStrategy uniform_surveillance_strategy(const GameConfig& config) {
  DefenderStrategy strategy;
  strategy.probs.resize(config.outcome_count());
  for (int k = 0; k < config.outcome_count(); ++k) {
    const auto menu = enumerate_defend_actions(config, {static_cast<ChannelMask>(k)});
    std::vector<double> block(menu.size(), 0.0);
    if (menu.size() == 1) {
      block[0] = 1.0;
    } else {
      for (size_t a = 1; a < menu.size(); ++a) {
        block[a] = 1.0 / static_cast<double>(menu.size() - 1);
      }
    }
    strategy.probs[k] = std::move(block);
  }
  return strategy;
}

DefenderStrategy random_strategy(const GameConfig& config) {
  DefenderStrategy strategy;
  strategy.probs.resize(config.outcome_count());
  for (int k = 0; k < config.outcome_count(); ++k) {
    const auto menu = enumerate_defend_actions(config, {static_cast<ChannelMask>(k)});
    strategy.probs[k].assign(menu.size(), 1.0 / static_cast<double>(menu.size()));
  }
  return strategy;
}

DefenderEvaluation evaluate_defender_strategy(const GameConfig& config,
                                              const DefenderStrategy& defender) {
  const std::vector<AttackAction> actions = enumerate_attack_actions(config);
  std::vector<double> attack_values(actions.size());
  double best = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < actions.size(); ++i) {
    attack_values[i] = attacker_action_value(config, actions[i], defender);
    best = std::max(best, attack_values[i]);
  }

  DefenderEvaluation eval;
  eval.attacker_value = best;
  double best_defense = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < actions.size(); ++i) {
    if (attack_values[i] < best - kFeasTol) continue;
    AttackerStrategy pure;
    pure.probs.assign(actions.size(), 0.0);
    pure.probs[i] = 1.0;
    const double d = expected_payoffs(config, pure, defender).defender;
    if (d > best_defense) {
      best_defense = d;
      eval.attacker_action = static_cast<int>(i);
    }
  }
  eval.defender_value = best_defense;
  return eval;
}

double defender_value_against(const GameConfig& config,
                              const AttackerStrategy& attacker,
                              const DefenderStrategy& defender) {
  return expected_payoffs(config, attacker, defender).defender;
}

}  // namespace msg
