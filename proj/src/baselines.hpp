#pragma once

#include <cstdint>
#include <vector>

#include "equilibrium.hpp"
#include "game_builder.hpp"

namespace msg {

/// Strategic-form benchmark: attacker rows are the attack actions, defender
/// columns are complete policies (one defend action per sensing outcome),
/// payoffs are expectations over the sensing chance move.
struct NormalFormGame {
  GameConfig config;
  std::vector<AttackAction> row_actions;
  // col_policies[j][k] indexes into enumerate_defend_actions(outcome k).
  std::vector<std::vector<int>> col_policies;
  Eigen::MatrixXd attacker_payoff;
  Eigen::MatrixXd defender_payoff;

  int rows() const { return static_cast<int>(attacker_payoff.rows()); }
  int cols() const { return static_cast<int>(attacker_payoff.cols()); }
};

/// Number of defender pure policies (product of the per-outcome menu sizes),
/// computed without building anything. Saturates at a large finite double.
double strategic_form_columns(const GameConfig& config);

/// Builds the full matrices. Throws std::length_error when rows*cols exceeds
/// `max_cells` — expected behaviour from N=4 on, which is the point of the
/// sequence-form method.
NormalFormGame build_normal_form(const GameConfig& config,
                                 std::size_t max_cells = 1'000'000);

struct NormalFormEquilibrium {
  Eigen::VectorXd row_mix;
  Eigen::VectorXd col_mix;
  double row_value = 0.0;  // attacker
  double col_value = 0.0;  // defender
};

/// All equilibria with equal-size supports up to `max_support`, each verified
/// against the best-response inequalities. Exhaustive within the budget and
/// deterministic; finds every equilibrium of a nondegenerate game whose
/// support fits the budget.
std::vector<NormalFormEquilibrium> support_enumeration_ne(
    const NormalFormGame& game, int max_support, std::size_t max_found = 512);

enum class SingleChannelRegime {
  pure_no_attack,
  pure_attack_no_monitor,
  interior,
};

const char* to_string(SingleChannelRegime regime);

struct SingleChannelNe {
  double attack_prob = 0.0;        // attacker's attack rate
  double surveillance_prob = 0.0;  // defender's monitor rate given disallowed
  SingleChannelRegime regime = SingleChannelRegime::interior;
};

/// Closed-form Nash equilibrium of the one-channel surveillance game, from
/// the two indifference conditions with boundary regimes clamped.
SingleChannelNe solve_single_channel(const ChannelParams& channel);

/// At each outcome with disallowed channels: uniform over the nonempty
/// monitored subsets, never idle. Idle only when nothing is disallowed.
DefenderStrategy uniform_surveillance_strategy(const GameConfig& config);

/// Uniform over the whole action menu at every outcome, idle included.
DefenderStrategy random_strategy(const GameConfig& config);

struct DefenderEvaluation {
  double defender_value = 0.0;
  double attacker_value = 0.0;
  int attacker_action = 0;  // index of the chosen best response
};

/// Fixes the defender and lets the attacker best-respond over its pure
/// actions. Ties in the attacker's payoff (degenerate at equilibrium by
/// construction) are broken in the defender's favor, deterministically.
DefenderEvaluation evaluate_defender_strategy(const GameConfig& config,
                                              const DefenderStrategy& defender);

/// Variant holding the attacker at a fixed mixed strategy.
double defender_value_against(const GameConfig& config,
                              const AttackerStrategy& attacker,
                              const DefenderStrategy& defender);

}  // namespace msg
