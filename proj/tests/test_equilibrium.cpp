#include <doctest.h>

#include <random>
#include <stdexcept>

#include "baselines.hpp"
#include "equilibrium.hpp"
#include "game_builder.hpp"

using namespace msg;

namespace {

GameConfig reference_config(double penalty_factor, double network_demand,
                            int max_attack = 1, int max_monitor = 1) {
  return make_config({0.2, 0.5}, {1500, 0.1, 0.1},
                     {0.2, 0.1, penalty_factor, network_demand}, max_attack,
                     max_monitor);
}

AttackerStrategy pure_attack(const GameConfig& config, ChannelMask mask) {
  const auto actions = enumerate_attack_actions(config);
  AttackerStrategy strategy;
  strategy.probs.assign(actions.size(), 0.0);
  for (size_t i = 0; i < actions.size(); ++i) {
    if (actions[i].channels == mask) strategy.probs[i] = 1.0;
  }
  return strategy;
}

DefenderStrategy never_monitor(const GameConfig& config) {
  DefenderStrategy strategy;
  strategy.probs.resize(config.outcome_count());
  for (int k = 0; k < config.outcome_count(); ++k) {
    const auto menu = enumerate_defend_actions(config, {static_cast<ChannelMask>(k)});
    strategy.probs[k].assign(menu.size(), 0.0);
    strategy.probs[k][0] = 1.0;
  }
  return strategy;
}

}  // namespace

TEST_CASE("matching pennies through the sequence-form LCP") {
  // Hand-built one-shot 2x2 game embedded as a trivial sequence form.
  SequenceFormGame game;
  game.form = GameForm::reduced;
  game.n_attacker_sequences = 3;
  game.n_defender_sequences = 3;
  game.attack_actions = {{0b01}, {0b10}};
  game.defender_offsets = {1};
  game.defender_actions = {{{0b01}, {0b10}}};
  game.attacker_constraints.resize(2, 3);
  game.attacker_constraints << 1, 0, 0, -1, 1, 1;
  game.attacker_rhs.resize(2);
  game.attacker_rhs << 1, 0;
  game.defender_constraints = game.attacker_constraints;
  game.defender_rhs = game.attacker_rhs;
  game.attacker_payoff.rows = game.defender_payoff.rows = 3;
  game.attacker_payoff.cols = game.defender_payoff.cols = 2;
  const double pay[2][2] = {{1.0, -1.0}, {-1.0, 1.0}};
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      game.attacker_payoff.entries.push_back({1 + r, c, pay[r][c]});
      game.defender_payoff.entries.push_back({1 + r, c, -pay[r][c]});
      game.leaf_chance.push_back(1.0);
      game.leaf_payoff.push_back({-pay[r][c], pay[r][c]});
    }
  }

  const LcpProblem problem = assemble_equilibrium_lcp(game);
  const LcpSolution sol = lemke_solve(problem);
  REQUIRE(sol.status == LcpStatus::solved);
  const ExtractedStrategies strategies = extract_strategies(game, sol.z);
  CHECK(strategies.attacker.probs[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(strategies.attacker.probs[1] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(strategies.defender.probs[0][0] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("expected payoffs collapse to single-cell values") {
  const GameConfig config = reference_config(3.0, 0.5);
  const ChannelParams& ch = config.channels[0];

  SUBCASE("idle attacker earns nothing") {
    const AttackerStrategy attacker = pure_attack(config, 0);
    const PayoffPair value = expected_payoffs(config, attacker, never_monitor(config));
    CHECK(value.attacker == doctest::Approx(0.0));
    CHECK(value.defender == doctest::Approx(0.0));
  }
  SUBCASE("unwatched attack on channel 1") {
    const PayoffPair value = expected_payoffs(config, pure_attack(config, 0b01),
                                              never_monitor(config));
    // Frozen from the stated formula -C_A + p_A * rho_A * G_A with
    // p_A = 0.908, rho_A = 0.8: 0.52664 up to the detector's exact value.
    CHECK(value.attacker ==
          doctest::Approx(-ch.attack_cost +
                          ch.disallowed_attack * ch.vacant_attack * ch.attack_gain)
              .epsilon(1e-12));
    CHECK(value.attacker == doctest::Approx(0.5264).epsilon(2e-3));
    CHECK(value.defender == 0.0);
  }
  SUBCASE("uniform surveillance pays monitoring costs against an idle attacker") {
    const AttackerStrategy attacker = pure_attack(config, 0);
    const DefenderStrategy defender = uniform_surveillance_strategy(config);
    const PayoffPair value = expected_payoffs(config, attacker, defender);
    // Monitoring happens whenever something is disallowed; each watched
    // channel costs monitor_cost.
    const double p1 = config.channels[0].disallowed_no_attack;
    const double p2 = config.channels[1].disallowed_no_attack;
    const double expected = -(p1 + p2 - p1 * p2) * ch.monitor_cost;
    CHECK(value.defender == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("bilinear forms agree with the direct triple sum") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    std::vector<double> pi(n);
    for (double& p : pi) p = 0.05 + 0.9 * unit(rng);
    const GameConfig config =
        make_config(pi, {1500, 0.1, 0.1},
                    {0.05 + 0.5 * unit(rng), 0.02 + 0.4 * unit(rng),
                     0.2 + 10.0 * unit(rng), 0.01 + 1.4 * unit(rng)},
                    1 + static_cast<int>(rng() % n), 1 + static_cast<int>(rng() % n));

    AttackerStrategy attacker;
    const auto actions = enumerate_attack_actions(config);
    attacker.probs.resize(actions.size());
    double total = 0.0;
    for (double& p : attacker.probs) total += (p = unit(rng));
    for (double& p : attacker.probs) p /= total;

    DefenderStrategy defender;
    defender.probs.resize(config.outcome_count());
    for (int k = 0; k < config.outcome_count(); ++k) {
      const auto menu = enumerate_defend_actions(config, {static_cast<ChannelMask>(k)});
      defender.probs[k].resize(menu.size());
      double sum = 0.0;
      for (double& p : defender.probs[k]) sum += (p = unit(rng));
      for (double& p : defender.probs[k]) p /= sum;
    }

    const PayoffPair direct = expected_payoffs(config, attacker, defender);
    const PayoffPair reduced = expected_payoffs_bilinear(
        build_reduced_sequence_form(config), attacker, defender);
    const PayoffPair extended = expected_payoffs_bilinear(
        build_sequence_form(config), attacker, defender);
    CHECK(reduced.attacker == doctest::Approx(direct.attacker).epsilon(1e-9));
    CHECK(reduced.defender == doctest::Approx(direct.defender).epsilon(1e-9));
    CHECK(extended.attacker == doctest::Approx(direct.attacker).epsilon(1e-9));
    CHECK(extended.defender == doctest::Approx(direct.defender).epsilon(1e-9));
  }
}

TEST_CASE("equilibrium LCP solutions satisfy the flow constraints") {
  const GameConfig config = reference_config(3.0, 0.5);
  const SequenceFormGame game = build_reduced_sequence_form(config);
  const LcpProblem problem = assemble_equilibrium_lcp(game);
  const LcpSolution sol = lemke_solve(problem);
  REQUIRE(sol.status == LcpStatus::solved);
  const ExtractedStrategies strategies = extract_strategies(game, sol.z);
  CHECK(constraint_residual(game, strategies.attacker_plan) <= 1e-9);
  CHECK(constraint_residual(game, strategies.defender_plan) <= 1e-9);
}

TEST_CASE("zero-payoff game accepts any plan pair") {
  GameConfig config = reference_config(3.0, 0.5);
  for (ChannelParams& ch : config.channels) {
    ch.attack_cost = 0.0;
    ch.monitor_cost = 0.0;
    ch.capture_gain = 0.0;
    ch.capture_penalty = 0.0;
    ch.attack_gain = 1e-300;  // must stay positive; payoff-irrelevant
    ch.vacant_attack = 0.0;
    ch.vacant_no_attack = 0.0;
  }
  config.channels[0].vacant_attack = 0.0;
  const EquilibriumResult result = solve(config);
  CHECK(result.verified);
  CHECK(result.attacker_value == doctest::Approx(0.0).scale(1.0));
  CHECK(result.defender_value == doctest::Approx(0.0).scale(1.0));
  CHECK(result.attacker_gap <= 1e-9);
  CHECK(result.defender_gap <= 1e-9);
}

TEST_CASE("low network demand: no surveillance, pure attack on the best channel") {
  const EquilibriumResult result = solve(reference_config(0.4, 0.02));
  REQUIRE(result.verified);
  // Attack action order: idle, {1}, {2}; channel 1 has the lower PU load.
  CHECK(result.attacker.probs[1] == doctest::Approx(1.0).epsilon(1e-7));
  const GameConfig config = reference_config(0.4, 0.02);
  const auto rates = channel_monitor_rates(config, result.attacker, result.defender);
  CHECK(rates[0] <= 1e-9);
  CHECK(rates[1] <= 1e-9);
  CHECK(result.defender_value == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("high demand and penalty: both channels attract surveillance") {
  const GameConfig config = reference_config(10.0, 1.0);
  const EquilibriumResult result = solve(config);
  REQUIRE(result.verified);
  const auto rates = channel_monitor_rates(config, result.attacker, result.defender);
  CHECK(rates[0] > 1e-6);
  CHECK(rates[1] > 1e-6);
  // The attacker spreads across both channels.
  CHECK(result.attacker.probs[1] > 1e-6);
  CHECK(result.attacker.probs[2] > 1e-6);
}

TEST_CASE("single channel pipeline matches the closed form") {
  const GameConfig config =
      make_config({0.2}, {1500, 0.1, 0.1}, {0.2, 0.1, 3.0, 1.0}, 1, 1);
  const EquilibriumResult result = solve(config);
  REQUIRE(result.verified);
  const SingleChannelNe ne = solve_single_channel(config.channels[0]);
  REQUIRE(ne.regime == SingleChannelRegime::interior);
  CHECK(result.attacker.probs[1] == doctest::Approx(ne.attack_prob).epsilon(1e-7));
  // Outcome 1 is "channel disallowed": defend menu is (idle, monitor).
  CHECK(result.defender.probs[1][1] ==
        doctest::Approx(ne.surveillance_prob).epsilon(1e-7));
}

TEST_CASE("verification flags non-equilibrium strategies") {
  const GameConfig config = reference_config(10.0, 1.0);
  const EquilibriumResult result = solve(config);
  REQUIRE(result.verified);
  // Against the equilibrium attacker the defender is indifferent, so idling
  // is optimal too; against a committed attacker it is strictly exploitable
  // in the high-demand regime.
  const Gaps vs_ne =
      verify_equilibrium(config, result.attacker, never_monitor(config));
  CHECK(vs_ne.defender >= -1e-12);
  const Gaps vs_pure =
      verify_equilibrium(config, pure_attack(config, 0b01), never_monitor(config));
  CHECK(vs_pure.defender > 1e-3);
}

TEST_CASE("payoff scaling leaves equilibria valid") {
  const GameConfig config = reference_config(3.0, 0.8);
  const EquilibriumResult base = solve(config);
  REQUIRE(base.verified);

  GameConfig scaled = config;
  for (ChannelParams& ch : scaled.channels) {
    ch.attack_cost *= 7.5;
    ch.attack_gain *= 7.5;
    ch.monitor_cost *= 7.5;
    ch.capture_gain *= 7.5;
    ch.capture_penalty *= 7.5;
  }
  const EquilibriumResult rescaled = solve(scaled);
  REQUIRE(rescaled.verified);

  // Either solution remains an equilibrium of the other game.
  const Gaps cross = verify_equilibrium(scaled, base.attacker, base.defender);
  CHECK(cross.attacker <= 7.5 * 1e-7);
  CHECK(cross.defender <= 7.5 * 1e-7);
  CHECK(rescaled.attacker_value == doctest::Approx(7.5 * base.attacker_value)
                                       .epsilon(1e-6)
                                       .scale(1.0));
}

TEST_CASE("extraction normalizes plans and fills unreached sets uniformly") {
  const GameConfig config = reference_config(3.0, 0.5);
  const SequenceFormGame game = build_sequence_form(config);
  Eigen::VectorXd z =
      Eigen::VectorXd::Zero(game.n_attacker_sequences + game.n_defender_sequences);
  z(0) = 1.0;
  z(game.attacker_action_sequence(1)) = 0.3;
  z(game.attacker_action_sequence(2)) = 0.7;
  // Defender block left at zero: every outcome falls back to uniform.
  const ExtractedStrategies strategies = extract_strategies(game, z);
  CHECK(strategies.attacker.probs[0] == doctest::Approx(0.0));
  CHECK(strategies.attacker.probs[1] == doctest::Approx(0.3));
  CHECK(strategies.attacker.probs[2] == doctest::Approx(0.7));
  CHECK(strategies.defender.probs[3].size() == 3);
  CHECK(strategies.defender.probs[3][0] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("extended-form pipeline is verified honestly") {
  // The outcome-extended attacker sequences let plan mass chase favorable
  // sensing outcomes, so the complementarity point it reaches need not be an
  // equilibrium of the actual game. The pipeline must catch that in the
  // best-response check rather than trust the solver.
  SolveOptions options;
  options.form = GameForm::extended;
  const EquilibriumResult result = solve(reference_config(3.0, 0.5), options);
  if (result.lcp_status == LcpStatus::solved && result.verified) {
    CHECK(result.attacker_gap <= options.verify_tolerance);
    CHECK(result.defender_gap <= options.verify_tolerance);
  } else {
    CHECK(!result.verified);
  }
  // On the reference instance the distortion is material and must be flagged.
  CHECK(!result.verified);
  CHECK(result.attacker_gap > 1e-3);
}

TEST_CASE("solve records pivots and wall time") {
  const EquilibriumResult result = solve(reference_config(3.0, 0.5));
  CHECK(result.pivots > 0);
  CHECK(result.wall_seconds > 0.0);
  CHECK(result.complementarity_residual <= 1e-9);
}
