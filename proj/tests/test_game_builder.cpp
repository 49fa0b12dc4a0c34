#include <doctest.h>

#include <stdexcept>
#include <random>
#include <sstream>

#include "equilibrium.hpp"
#include "game_builder.hpp"

using namespace msg;

namespace {

GameConfig test_config(std::vector<double> pi, int max_attack, int max_monitor) {
  return make_config(pi, {1500, 0.1, 0.1}, {0.2, 0.1, 3.0, 0.5}, max_attack,
                     max_monitor);
}

}  // namespace

TEST_CASE("attack action enumeration") {
  SUBCASE("two channels, single attack") {
    const auto actions = enumerate_attack_actions(test_config({0.2, 0.5}, 1, 1));
    REQUIRE(actions.size() == 3);
    CHECK(actions[0].channels == 0u);
    CHECK(actions[1].channels == 0b01u);
    CHECK(actions[2].channels == 0b10u);
  }
  SUBCASE("four channels, single attack") {
    const auto actions =
        enumerate_attack_actions(test_config({0.2, 0.5, 0.3, 0.4}, 1, 1));
    CHECK(actions.size() == 5);
  }
  SUBCASE("full power set when the attacker can hit everything") {
    const auto actions = enumerate_attack_actions(test_config({0.2, 0.5, 0.3}, 3, 1));
    REQUIRE(actions.size() == 8);
    // Canonical order: by size, then lexicographic by channel indices.
    CHECK(actions[3].channels == 0b100u);
    CHECK(actions[4].channels == 0b011u);
    CHECK(actions[7].channels == 0b111u);
  }
  SUBCASE("attack capability above N is clamped") {
    const auto actions = enumerate_attack_actions(test_config({0.2}, 5, 1));
    CHECK(actions.size() == 2);
  }
}

TEST_CASE("defend action enumeration") {
  const GameConfig both = test_config({0.2, 0.5}, 1, 1);
  SUBCASE("one monitor slot, two disallowed") {
    const auto actions = enumerate_defend_actions(both, {0b11});
    REQUIRE(actions.size() == 3);
    CHECK(actions[0].monitored == 0u);
    CHECK(actions[1].monitored == 0b01u);
    CHECK(actions[2].monitored == 0b10u);
  }
  SUBCASE("nothing disallowed leaves only idling") {
    const auto actions = enumerate_defend_actions(both, {0});
    REQUIRE(actions.size() == 1);
    CHECK(actions[0].monitored == 0u);
  }
  SUBCASE("two slots over three disallowed channels") {
    const GameConfig three = test_config({0.2, 0.5, 0.3}, 1, 2);
    const auto actions = enumerate_defend_actions(three, {0b111});
    CHECK(actions.size() == 7);  // idle + 3 singles + 3 pairs
  }
}

TEST_CASE("chance probabilities") {
  const GameConfig config = test_config({0.2, 0.5}, 1, 1);
  const auto& ch = config.channels;

  SUBCASE("single channel factor") {
    const GameConfig one = test_config({0.2}, 1, 1);
    CHECK(chance_probability(one, {0b1}, {0b1}) ==
          doctest::Approx(one.channels[0].disallowed_attack).epsilon(1e-15));
  }
  SUBCASE("product over independent channels") {
    const double expected = ch[0].disallowed_attack * ch[1].disallowed_no_attack;
    CHECK(chance_probability(config, {0b01}, {0b11}) ==
          doctest::Approx(expected).epsilon(1e-15));
  }
  SUBCASE("outcomes partition probability one") {
    for (const GameConfig& cfg :
         {config, test_config({0.1, 0.6, 0.9}, 2, 1),
          test_config({0.3, 0.4, 0.5, 0.6}, 1, 1)}) {
      for (const AttackAction& action : enumerate_attack_actions(cfg)) {
        double total = 0.0;
        for (int k = 0; k < cfg.outcome_count(); ++k) {
          total += chance_probability(cfg, action, {static_cast<ChannelMask>(k)});
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("aggregate payoffs over action pairs") {
  const GameConfig config = test_config({0.2, 0.2}, 2, 1);
  const ChannelParams& ch = config.channels[0];

  SUBCASE("idle attacker, one monitored channel") {
    const PayoffPair u = aggregate_payoffs(config, {0}, {0b01}, {0b01});
    CHECK(u.defender == doctest::Approx(-ch.monitor_cost));
    CHECK(u.attacker == 0.0);
  }
  SUBCASE("lone unmonitored attack on a disallowed channel") {
    const PayoffPair u = aggregate_payoffs(config, {0b01}, {0b01}, {0});
    CHECK(u.attacker ==
          doctest::Approx(-ch.attack_cost + ch.vacant_attack * ch.attack_gain));
    CHECK(u.defender == 0.0);
  }
  SUBCASE("double attack, one channel caught") {
    const PayoffPair u = aggregate_payoffs(config, {0b11}, {0b11}, {0b01});
    const double caught = -ch.attack_cost - ch.vacant_attack * ch.capture_penalty;
    const double free = -ch.attack_cost + ch.vacant_attack * ch.attack_gain;
    CHECK(u.attacker == doctest::Approx(caught + free));
    CHECK(u.defender ==
          doctest::Approx(-ch.monitor_cost + ch.vacant_attack * ch.capture_gain));
  }
  SUBCASE("monitoring outside the disallowed set is a contract violation") {
    CHECK_THROWS_AS(aggregate_payoffs(config, {0b01}, {0b01}, {0b10}),
                    std::invalid_argument);
  }
}

TEST_CASE("extended sequence form sizes") {
  SUBCASE("the four-channel single-capability instance") {
    const auto game = build_sequence_form(test_config({0.2, 0.5, 0.3, 0.4}, 1, 1));
    CHECK(game.payoff_rows() == 86);
    CHECK(game.payoff_cols() == 48);
    CHECK(game.n_attacker_sequences == 86);
    CHECK(game.n_defender_sequences == 49);  // action sequences plus the root
  }
  SUBCASE("two-channel instance") {
    const auto game = build_sequence_form(test_config({0.2, 0.5}, 1, 1));
    CHECK(game.n_attacker_sequences == 16);  // 1 + 3 + 3*4
    CHECK(game.payoff_cols() == 8);          // 1 + 2 + 2 + 3 action sequences
  }
  SUBCASE("sequence-count formula matches enumeration") {
    for (int n = 1; n <= 5; ++n) {
      for (int m = 1; m <= 2; ++m) {
        std::vector<double> pi(n, 0.3);
        const auto game = build_sequence_form(test_config(pi, m, 1));
        CHECK(game.n_attacker_sequences ==
              extended_attacker_sequence_count(n, m));
      }
    }
  }
  SUBCASE("build limit guard") {
    CHECK_THROWS_AS(
        build_sequence_form(test_config({0.2, 0.5, 0.3}, 3, 1), BuildLimits{30}),
        std::length_error);
  }
}

TEST_CASE("reduced sequence form sizes") {
  const auto game = build_reduced_sequence_form(test_config({0.2, 0.5}, 1, 1));
  CHECK(game.n_attacker_sequences == 4);  // root plus three actions
  CHECK(game.payoff_rows() == 4);
  CHECK(game.payoff_cols() == 8);
  CHECK(game.n_defender_sequences == 9);
}

TEST_CASE("constraint matrices accept exactly the flow-consistent plans") {
  for (GameForm form : {GameForm::reduced, GameForm::extended}) {
    const GameConfig config = test_config({0.2, 0.5}, 1, 1);
    const auto game = form == GameForm::reduced
                          ? build_reduced_sequence_form(config)
                          : build_sequence_form(config);

    AttackerStrategy attacker{{0.5, 0.3, 0.2}};
    DefenderStrategy defender{{{1.0}, {0.6, 0.4}, {0.2, 0.8}, {0.1, 0.5, 0.4}}};
    CHECK(constraint_residual(game, realization_plan(game, attacker)) < 1e-12);
    CHECK(constraint_residual(game, realization_plan(game, defender)) < 1e-12);

    // Perturbing any action weight breaks the flow constraints.
    RealizationPlan bad = realization_plan(game, attacker);
    bad.weights(1) += 0.25;
    CHECK(constraint_residual(game, bad) > 0.2);
  }
}

TEST_CASE("payoff entries match leaves one-to-one") {
  const GameConfig config = test_config({0.2, 0.5}, 1, 1);
  const auto game = build_sequence_form(config);
  // Leaf count: every (action, outcome, defend action) triple.
  std::size_t leaves = 0;
  for (int k = 0; k < config.outcome_count(); ++k) {
    leaves += game.defender_actions[k].size();
  }
  leaves *= game.attack_actions.size();
  CHECK(game.attacker_payoff.entries.size() == leaves);
  CHECK(game.leaf_chance.size() == leaves);

  // Entries carry the chance-weighted payoff of their unique leaf.
  for (size_t e = 0; e < game.attacker_payoff.entries.size(); ++e) {
    CHECK(game.attacker_payoff.entries[e].value ==
          doctest::Approx(game.leaf_chance[e] * game.leaf_payoff[e].attacker)
              .epsilon(1e-15));
  }
}

TEST_CASE("matrix dump is parseable and complete") {
  const auto game = build_reduced_sequence_form(test_config({0.2}, 1, 1));
  std::ostringstream out;
  dump_game(game, out);
  const std::string text = out.str();
  CHECK(text.find("E 2 3") != std::string::npos);
  CHECK(text.find("F 3 4") != std::string::npos);
  CHECK(text.find("PI_A 3 3") != std::string::npos);
  CHECK(text.find("PI_D 3 3") != std::string::npos);
}
