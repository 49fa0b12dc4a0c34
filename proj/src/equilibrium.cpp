#include "equilibrium.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace msg {

namespace {

std::vector<double> normalized_or_uniform(std::vector<double> block) {
  double sum = 0.0;
  for (double& v : block) {
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (sum <= 1e-12) {
    std::fill(block.begin(), block.end(), 1.0 / block.size());
  } else {
    for (double& v : block) v /= sum;
  }
  return block;
}

void check_attacker(const SequenceFormGame& game, const AttackerStrategy& s) {
  if (s.probs.size() != game.attack_actions.size()) {
    throw std::invalid_argument("attacker strategy size mismatch");
  }
}

void check_defender(const SequenceFormGame& game, const DefenderStrategy& s) {
  if (s.probs.size() != game.defender_actions.size()) {
    throw std::invalid_argument("defender strategy size mismatch");
  }
  for (size_t k = 0; k < s.probs.size(); ++k) {
    if (s.probs[k].size() != game.defender_actions[k].size()) {
      throw std::invalid_argument("defender strategy block size mismatch");
    }
  }
}

}  // namespace

RealizationPlan realization_plan(const SequenceFormGame& game,
                                 const AttackerStrategy& strategy) {
  check_attacker(game, strategy);
  RealizationPlan plan{Player::attacker,
                       Eigen::VectorXd::Zero(game.n_attacker_sequences)};
  plan.weights(0) = 1.0;
  const int n_actions = static_cast<int>(game.attack_actions.size());
  for (int i = 0; i < n_actions; ++i) {
    plan.weights(game.attacker_action_sequence(i)) = strategy.probs[i];
  }
  if (game.form == GameForm::extended) {
    for (int i = 0; i < n_actions; ++i) {
      for (int k = 0; k < game.config.outcome_count(); ++k) {
        const double chance = chance_probability(
            game.config, game.attack_actions[i], {static_cast<ChannelMask>(k)});
        plan.weights(game.attacker_extension_sequence(i, k)) =
            strategy.probs[i] * chance;
      }
    }
  }
  return plan;
}

RealizationPlan realization_plan(const SequenceFormGame& game,
                                 const DefenderStrategy& strategy) {
  check_defender(game, strategy);
  RealizationPlan plan{Player::defender,
                       Eigen::VectorXd::Zero(game.n_defender_sequences)};
  plan.weights(0) = 1.0;
  for (size_t k = 0; k < strategy.probs.size(); ++k) {
    for (size_t a = 0; a < strategy.probs[k].size(); ++a) {
      plan.weights(game.defender_action_sequence(static_cast<int>(k),
                                                 static_cast<int>(a))) =
          strategy.probs[k][a];
    }
  }
  return plan;
}

double constraint_residual(const SequenceFormGame& game,
                           const RealizationPlan& plan) {
  const Eigen::MatrixXd& constraints = plan.owner == Player::attacker
                                           ? game.attacker_constraints
                                           : game.defender_constraints;
  const Eigen::VectorXd& rhs =
      plan.owner == Player::attacker ? game.attacker_rhs : game.defender_rhs;
  return (constraints * plan.weights - rhs).cwiseAbs().maxCoeff();
}

PayoffPair expected_payoffs(const GameConfig& config,
                            const AttackerStrategy& attacker,
                            const DefenderStrategy& defender) {
  const std::vector<AttackAction> actions = enumerate_attack_actions(config);
  if (attacker.probs.size() != actions.size() ||
      defender.probs.size() != static_cast<size_t>(config.outcome_count())) {
    throw std::invalid_argument("strategy sizes do not match the config");
  }
  PayoffPair total;
  for (size_t i = 0; i < actions.size(); ++i) {
    if (attacker.probs[i] == 0.0) continue;
    for (int k = 0; k < config.outcome_count(); ++k) {
      const SensingOutcome outcome{static_cast<ChannelMask>(k)};
      const double reach = attacker.probs[i] * chance_probability(config, actions[i], outcome);
      if (reach == 0.0) continue;
      const std::vector<DefendAction> defends = enumerate_defend_actions(config, outcome);
      for (size_t a = 0; a < defends.size(); ++a) {
        const double w = reach * defender.probs[k][a];
        if (w == 0.0) continue;
        const PayoffPair u = aggregate_payoffs(config, actions[i], outcome, defends[a]);
        total.attacker += w * u.attacker;
        total.defender += w * u.defender;
      }
    }
  }
  return total;
}

PayoffPair expected_payoffs_bilinear(const SequenceFormGame& game,
                                     const AttackerStrategy& attacker,
                                     const DefenderStrategy& defender) {
  check_attacker(game, attacker);
  check_defender(game, defender);
  // Realization weight of an attacker sequence: the product of the
  // attacker's own choice probabilities along it, chance moves excluded.
  Eigen::VectorXd x = Eigen::VectorXd::Zero(game.n_attacker_sequences);
  x(0) = 1.0;
  const int n_actions = static_cast<int>(game.attack_actions.size());
  for (int i = 0; i < n_actions; ++i) {
    x(game.attacker_action_sequence(i)) = attacker.probs[i];
    if (game.form == GameForm::extended) {
      for (int k = 0; k < game.config.outcome_count(); ++k) {
        x(game.attacker_extension_sequence(i, k)) = attacker.probs[i];
      }
    }
  }
  const RealizationPlan y = realization_plan(game, defender);
  PayoffPair total;
  for (size_t e = 0; e < game.attacker_payoff.entries.size(); ++e) {
    const SparseMatrix::Entry& ea = game.attacker_payoff.entries[e];
    const double w = x(ea.row) * y.weights(ea.col + 1);
    total.attacker += w * ea.value;
    total.defender += w * game.defender_payoff.entries[e].value;
  }
  return total;
}

double attacker_action_value(const GameConfig& config, AttackAction action,
                             const DefenderStrategy& defender) {
  double value = 0.0;
  for (int k = 0; k < config.outcome_count(); ++k) {
    const SensingOutcome outcome{static_cast<ChannelMask>(k)};
    const double chance = chance_probability(config, action, outcome);
    if (chance == 0.0) continue;
    const std::vector<DefendAction> defends = enumerate_defend_actions(config, outcome);
    double conditional = 0.0;
    for (size_t a = 0; a < defends.size(); ++a) {
      if (defender.probs[k][a] == 0.0) continue;
      conditional += defender.probs[k][a] *
                     aggregate_payoffs(config, action, outcome, defends[a]).attacker;
    }
    value += chance * conditional;
  }
  return value;
}

LcpProblem assemble_equilibrium_lcp(const SequenceFormGame& game) {
  const int nx = game.n_attacker_sequences;
  const int ny = game.n_defender_sequences;
  const int re = static_cast<int>(game.attacker_constraints.rows());
  const int rf = static_cast<int>(game.defender_constraints.rows());

  // Uniform per-leaf shift making both payoff matrices strictly negative.
  // Valid for the reduced form, where every plan pair spreads total mass 1
  // over the leaves; the extended form is left untouched.
  double shift_attacker = 0.0;
  double shift_defender = 0.0;
  if (game.form == GameForm::reduced) {
    for (const PayoffPair& u : game.leaf_payoff) {
      shift_attacker = std::max(shift_attacker, u.attacker);
      shift_defender = std::max(shift_defender, u.defender);
    }
    shift_attacker += 1.0;
    shift_defender += 1.0;
  }

  Eigen::MatrixXd pay_a = Eigen::MatrixXd::Zero(nx, ny);
  Eigen::MatrixXd pay_d = Eigen::MatrixXd::Zero(nx, ny);
  for (size_t e = 0; e < game.attacker_payoff.entries.size(); ++e) {
    const SparseMatrix::Entry& ea = game.attacker_payoff.entries[e];
    const SparseMatrix::Entry& ed = game.defender_payoff.entries[e];
    const double chance = game.leaf_chance[e];
    pay_a(ea.row, ea.col + 1) += ea.value - shift_attacker * chance;
    pay_d(ed.row, ed.col + 1) += ed.value - shift_defender * chance;
  }

  // One-sided formulation with nonnegative duals: the flow equalities relax
  // to E x >= e and F y >= f, and strictly negative payoffs make any
  // complementary point tighten them back to equalities. The resulting M is
  // copositive, which is what the pivoting solver needs.
  const int n = nx + ny + re + rf;
  LcpProblem problem;
  problem.M = Eigen::MatrixXd::Zero(n, n);
  problem.b = Eigen::VectorXd::Zero(n);

  const int ox = 0, oy = nx, op = nx + ny, oq = nx + ny + re;
  const Eigen::MatrixXd& e_mat = game.attacker_constraints;
  const Eigen::MatrixXd& f_mat = game.defender_constraints;

  problem.M.block(ox, oy, nx, ny) = -pay_a;
  problem.M.block(ox, op, nx, re) = -e_mat.transpose();
  problem.M.block(oy, ox, ny, nx) = -pay_d.transpose();
  problem.M.block(oy, oq, ny, rf) = -f_mat.transpose();
  problem.M.block(op, ox, re, nx) = e_mat;
  problem.M.block(oq, oy, rf, ny) = f_mat;

  problem.b.segment(op, re) = -game.attacker_rhs;
  problem.b.segment(oq, rf) = -game.defender_rhs;
  return problem;
}

ExtractedStrategies extract_strategies(const SequenceFormGame& game,
                                       const Eigen::VectorXd& z) {
  const int nx = game.n_attacker_sequences;
  const int ny = game.n_defender_sequences;
  if (z.size() < nx + ny) {
    throw std::invalid_argument("solution vector too short for this game");
  }
  ExtractedStrategies out;
  out.attacker_plan = {Player::attacker, z.segment(0, nx)};
  out.defender_plan = {Player::defender, z.segment(nx, ny)};

  const int n_actions = static_cast<int>(game.attack_actions.size());
  std::vector<double> root(n_actions);
  for (int i = 0; i < n_actions; ++i) {
    root[i] = out.attacker_plan.weights(game.attacker_action_sequence(i));
  }
  out.attacker.probs = normalized_or_uniform(std::move(root));

  out.defender.probs.resize(game.defender_actions.size());
  for (size_t k = 0; k < game.defender_actions.size(); ++k) {
    std::vector<double> block(game.defender_actions[k].size());
    for (size_t a = 0; a < block.size(); ++a) {
      block[a] = out.defender_plan.weights(
          game.defender_action_sequence(static_cast<int>(k), static_cast<int>(a)));
    }
    out.defender.probs[k] = normalized_or_uniform(std::move(block));
  }
  return out;
}

Gaps verify_equilibrium(const GameConfig& config, const AttackerStrategy& attacker,
                        const DefenderStrategy& defender) {
  const std::vector<AttackAction> actions = enumerate_attack_actions(config);
  const PayoffPair played = expected_payoffs(config, attacker, defender);

  double best_attack = -std::numeric_limits<double>::infinity();
  for (const AttackAction& action : actions) {
    best_attack = std::max(best_attack, attacker_action_value(config, action, defender));
  }

  // The defender picks per outcome, so its best response decomposes into a
  // per-outcome argmax of reach-weighted conditional payoffs.
  double best_defense = 0.0;
  for (int k = 0; k < config.outcome_count(); ++k) {
    const SensingOutcome outcome{static_cast<ChannelMask>(k)};
    const std::vector<DefendAction> defends = enumerate_defend_actions(config, outcome);
    double best_here = -std::numeric_limits<double>::infinity();
    for (const DefendAction& defend : defends) {
      double w = 0.0;
      for (size_t i = 0; i < actions.size(); ++i) {
        if (attacker.probs[i] == 0.0) continue;
        w += attacker.probs[i] * chance_probability(config, actions[i], outcome) *
             aggregate_payoffs(config, actions[i], outcome, defend).defender;
      }
      best_here = std::max(best_here, w);
    }
    best_defense += best_here;
  }

  return {best_attack - played.attacker, best_defense - played.defender};
}

std::vector<double> channel_attack_marginals(const GameConfig& config,
                                             const AttackerStrategy& attacker) {
  const std::vector<AttackAction> actions = enumerate_attack_actions(config);
  std::vector<double> marginals(config.n_channels, 0.0);
  for (size_t i = 0; i < actions.size(); ++i) {
    for (int t = 0; t < config.n_channels; ++t) {
      if (actions[i].channels & (ChannelMask{1} << t)) {
        marginals[t] += attacker.probs[i];
      }
    }
  }
  return marginals;
}

namespace {

// Shared accumulation for the monitor-rate variants: outcome reach times the
// probability the defender's action covers channel t.
std::vector<double> monitor_rates_impl(const GameConfig& config,
                                       const AttackerStrategy& attacker,
                                       const DefenderStrategy& defender,
                                       bool condition_on_attack) {
  const std::vector<AttackAction> actions = enumerate_attack_actions(config);
  std::vector<double> monitored(config.n_channels, 0.0);
  std::vector<double> reach(config.n_channels, 0.0);
  for (size_t i = 0; i < actions.size(); ++i) {
    if (attacker.probs[i] == 0.0) continue;
    for (int k = 0; k < config.outcome_count(); ++k) {
      const SensingOutcome outcome{static_cast<ChannelMask>(k)};
      const double p =
          attacker.probs[i] * chance_probability(config, actions[i], outcome);
      if (p == 0.0) continue;
      const std::vector<DefendAction> defends = enumerate_defend_actions(config, outcome);
      for (int t = 0; t < config.n_channels; ++t) {
        const ChannelMask bit = ChannelMask{1} << t;
        if (!(outcome.disallowed & bit)) continue;
        if (condition_on_attack && !(actions[i].channels & bit)) continue;
        reach[t] += p;
        for (size_t a = 0; a < defends.size(); ++a) {
          if (defends[a].monitored & bit) monitored[t] += p * defender.probs[k][a];
        }
      }
    }
  }
  for (int t = 0; t < config.n_channels; ++t) {
    monitored[t] = reach[t] > 0.0 ? monitored[t] / reach[t] : 0.0;
  }
  return monitored;
}

}  // namespace

std::vector<double> channel_monitor_rates(const GameConfig& config,
                                          const AttackerStrategy& attacker,
                                          const DefenderStrategy& defender) {
  return monitor_rates_impl(config, attacker, defender, false);
}

std::vector<double> channel_monitor_rates_under_attack(
    const GameConfig& config, const AttackerStrategy& attacker,
    const DefenderStrategy& defender) {
  const std::vector<double> marginals = channel_attack_marginals(config, attacker);
  std::vector<double> conditioned = monitor_rates_impl(config, attacker, defender, true);
  const std::vector<double> fallback = monitor_rates_impl(config, attacker, defender, false);
  for (int t = 0; t < config.n_channels; ++t) {
    if (marginals[t] <= 1e-9) conditioned[t] = fallback[t];
  }
  return conditioned;
}

EquilibriumResult solve(const GameConfig& config, const SolveOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const SequenceFormGame game = options.form == GameForm::reduced
                                    ? build_reduced_sequence_form(config, options.limits)
                                    : build_sequence_form(config, options.limits);
  const LcpProblem problem = assemble_equilibrium_lcp(game);
  if (problem.b.size() > options.max_lcp_dimension) {
    throw std::length_error("equilibrium LCP dimension " +
                            std::to_string(problem.b.size()) +
                            " exceeds the configured limit");
  }

  LcpOptions lcp_options;
  lcp_options.tolerance = options.lcp_tolerance;
  lcp_options.max_pivots = options.max_pivots;
  lcp_options.pivot_trace = options.pivot_trace;
  const LcpSolution lcp = lemke_solve(problem, lcp_options);

  EquilibriumResult result;
  result.lcp_status = lcp.status;
  result.pivots = lcp.pivots;
  result.complementarity_residual = lcp.complementarity_residual;

  ExtractedStrategies strategies = extract_strategies(game, lcp.z);
  result.attacker = std::move(strategies.attacker);
  result.defender = std::move(strategies.defender);

  const PayoffPair values = expected_payoffs(config, result.attacker, result.defender);
  result.attacker_value = values.attacker;
  result.defender_value = values.defender;
  const Gaps gaps = verify_equilibrium(config, result.attacker, result.defender);
  result.attacker_gap = gaps.attacker;
  result.defender_gap = gaps.defender;
  result.verified = lcp.status == LcpStatus::solved &&
                    lcp.complementarity_residual <= options.lcp_tolerance &&
                    gaps.attacker <= options.verify_tolerance &&
                    gaps.defender <= options.verify_tolerance;
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace msg
