#include <doctest.h>

#include <stdexcept>
#include <cmath>
#include <random>

#include "channel_model.hpp"

using namespace msg;

namespace {

SensingModel reference_sensing() { return {1500, 0.1, 0.1}; }  // -10 dB

EconomicRatios reference_econ() { return {0.2, 0.1, 3.0, 0.5}; }

}  // namespace

TEST_CASE("normal quantile inverts the tail function") {
  for (double p : {1e-8, 1e-4, 0.02, 0.1, 0.5, 0.9, 0.975, 1.0 - 1e-6}) {
    const double x = normal_quantile(p);
    CHECK(normal_tail(x) == doctest::Approx(1.0 - p).epsilon(1e-10));
  }
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(normal_quantile(1.0 - 0.1) == doctest::Approx(1.2815515655446004).epsilon(1e-12));
  CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(1.0), std::domain_error);
}

TEST_CASE("detection probability at the reference operating point") {
  const double pd = detection_probability(reference_sensing());
  CHECK(pd > 0.90);
  CHECK(pd < 0.92);
  CHECK(pd == doctest::Approx(0.9083).epsilon(5e-3));
}

TEST_CASE("detection probability reduces to the false alarm rate without signal") {
  SensingModel model = reference_sensing();
  model.snr_linear = 1e-12;
  CHECK(detection_probability(model) == doctest::Approx(0.1).epsilon(1e-4));
}

TEST_CASE("detection probability saturates with many samples") {
  SensingModel model = reference_sensing();
  model.n_samples = 4'000'000;
  CHECK(detection_probability(model) > 1.0 - 1e-9);
}

TEST_CASE("detection probability is monotone in snr and sample count") {
  double previous = 0.0;
  for (double snr : {0.01, 0.03, 0.1, 0.3, 1.0, 3.0}) {
    const double pd = detection_probability({1500, 0.1, snr});
    CHECK(pd >= previous);
    previous = pd;
  }
  previous = 0.0;
  for (int n : {100, 400, 1500, 6000, 24000}) {
    const double pd = detection_probability({n, 0.1, 0.1});
    CHECK(pd >= previous);
    previous = pd;
  }
}

TEST_CASE("detection probability agrees with noncentral chi-square sampling") {
  // Independent oracle: the exact detector statistic for a deterministic
  // signal in unit Gaussian noise is noncentral chi-square with n degrees of
  // freedom and noncentrality n*snr. Sample it directly.
  const SensingModel model = reference_sensing();
  const double n = model.n_samples;
  const double threshold =
      n + normal_quantile(1.0 - model.false_alarm) * std::sqrt(2.0 * n);
  const double delta = std::sqrt(n * model.snr_linear);

  std::mt19937_64 rng(20240911);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::gamma_distribution<double> central_rest((n - 1.0) / 2.0, 2.0);
  const int trials = 400'000;
  int detections = 0;
  for (int i = 0; i < trials; ++i) {
    const double first = normal(rng) + delta;
    const double statistic = first * first + central_rest(rng);
    if (statistic > threshold) ++detections;
  }
  const double empirical = static_cast<double>(detections) / trials;
  CHECK(detection_probability(model) == doctest::Approx(empirical).epsilon(0.006));
}

TEST_CASE("sensing model validation") {
  CHECK_THROWS_AS(detection_probability({1500, 0.0, 0.1}), std::domain_error);
  CHECK_THROWS_AS(detection_probability({1500, 1.0, 0.1}), std::domain_error);
  CHECK_THROWS_AS(detection_probability({0, 0.1, 0.1}), std::domain_error);
  CHECK_THROWS_AS(detection_probability({1500, 0.1, -1.0}), std::domain_error);
}

TEST_CASE("channel derivation from explicit operating points") {
  const ChannelParams ch = derive_channel_from_probs(0.2, 0.9, 0.1, reference_econ());
  CHECK(ch.disallowed_no_attack == doctest::Approx(0.26).epsilon(1e-12));
  CHECK(ch.vacant_no_attack == doctest::Approx(0.08 / 0.26).epsilon(1e-12));
  CHECK(ch.vacant_attack == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(ch.disallowed_attack == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(ch.attack_gain == 1.0);
  CHECK(ch.attack_cost == doctest::Approx(0.2));
  CHECK(ch.monitor_cost == doctest::Approx(0.1));
  CHECK(ch.capture_penalty == doctest::Approx(3.0));
  CHECK(ch.capture_gain == doctest::Approx(1.5));  // network_demand * penalty
}

TEST_CASE("channel derivation limit cases") {
  const ChannelParams never = derive_channel_from_probs(0.0, 0.9, 0.1, reference_econ());
  CHECK(never.disallowed_no_attack == doctest::Approx(0.1));
  CHECK(never.vacant_no_attack == doctest::Approx(1.0));
  CHECK(never.vacant_attack == doctest::Approx(1.0));

  const ChannelParams always = derive_channel_from_probs(1.0, 0.9, 0.1, reference_econ());
  CHECK(always.vacant_no_attack == doctest::Approx(0.0));
  CHECK(always.vacant_attack == doctest::Approx(0.0));
}

TEST_CASE("posterior decompositions add up") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double pi = unit(rng);
    const double pd = 0.5 + 0.49 * unit(rng);
    const double pf = 0.01 + 0.3 * unit(rng);
    const ChannelParams ch = derive_channel_from_probs(pi, pd, pf, reference_econ());
    // Vacant and occupied posterior mass reassembles each conditional.
    CHECK(ch.vacant_no_attack * ch.disallowed_no_attack ==
          doctest::Approx((1.0 - pi) * pf).epsilon(1e-12));
    CHECK((1.0 - ch.vacant_no_attack) * ch.disallowed_no_attack ==
          doctest::Approx(pi * pd).epsilon(1e-12));
    CHECK(ch.vacant_attack * ch.disallowed_attack ==
          doctest::Approx((1.0 - pi) * pd).epsilon(1e-12));
    // Attack never lowers the disallowed rate while detection beats false alarm.
    CHECK(ch.disallowed_attack >= ch.disallowed_no_attack - 1e-15);
  }
}

TEST_CASE("channel derivation from the sensing model matches the direct path") {
  const SensingModel model = reference_sensing();
  const double pd = detection_probability(model);
  const ChannelParams via_model = derive_channel(0.3, model, reference_econ());
  const ChannelParams direct =
      derive_channel_from_probs(0.3, pd, model.false_alarm, reference_econ());
  CHECK(via_model.disallowed_no_attack == direct.disallowed_no_attack);
  CHECK(via_model.disallowed_attack == direct.disallowed_attack);
  CHECK(via_model.vacant_no_attack == direct.vacant_no_attack);
}

TEST_CASE("payoff table cells") {
  EconomicRatios econ;
  econ.attack_cost = 0.2;
  econ.monitor_cost = 0.1;
  econ.penalty_factor = 10.0;
  econ.network_demand = 0.5;
  const ChannelParams ch = derive_channel_from_probs(0.2, 0.9, 0.1, econ);
  // vacant_attack = 0.8, penalty = 10.

  SUBCASE("attack on a monitored disallowed channel") {
    const PayoffCell cell = payoff_cell(ch, true, true, true);
    CHECK(cell.attacker == doctest::Approx(-0.2 - 8.0).epsilon(1e-12));
    CHECK(cell.defender == doctest::Approx(-0.1 + 0.8 * 5.0).epsilon(1e-12));
  }
  SUBCASE("no attack, no surveillance") {
    const PayoffCell cell = payoff_cell(ch, false, true, false);
    CHECK(cell.attacker == 0.0);
    CHECK(cell.defender == 0.0);
  }
  SUBCASE("attack on an unmonitored disallowed channel") {
    const PayoffCell cell = payoff_cell(ch, true, true, false);
    CHECK(cell.attacker == doctest::Approx(-0.2 + 0.8).epsilon(1e-12));
    CHECK(cell.defender == 0.0);
  }
  SUBCASE("attack on an allowed channel sinks the cost") {
    const PayoffCell cell = payoff_cell(ch, true, false, false);
    CHECK(cell.attacker == doctest::Approx(-0.2).epsilon(1e-12));
    CHECK(cell.defender == 0.0);
  }
  SUBCASE("monitoring an honest channel costs the defender") {
    const PayoffCell cell = payoff_cell(ch, false, true, true);
    CHECK(cell.attacker == 0.0);
    CHECK(cell.defender == doctest::Approx(-0.1).epsilon(1e-12));
  }
  SUBCASE("monitoring requires a disallowed flag") {
    CHECK_THROWS_AS(payoff_cell(ch, true, false, true), std::invalid_argument);
  }
}

TEST_CASE("payoff cells are linear in each economic parameter") {
  ChannelParams ch = derive_channel_from_probs(0.2, 0.9, 0.1, reference_econ());
  const auto base = payoff_cell(ch, true, true, true);

  ChannelParams scaled = ch;
  scaled.capture_penalty *= 3.0;
  auto cell = payoff_cell(scaled, true, true, true);
  CHECK(cell.attacker - (-ch.attack_cost) ==
        doctest::Approx(3.0 * (base.attacker + ch.attack_cost)).epsilon(1e-12));

  scaled = ch;
  scaled.capture_gain *= 5.0;
  cell = payoff_cell(scaled, true, true, true);
  CHECK(cell.defender - (-ch.monitor_cost) ==
        doctest::Approx(5.0 * (base.defender + ch.monitor_cost)).epsilon(1e-12));

  scaled = ch;
  scaled.attack_gain *= 7.0;
  cell = payoff_cell(scaled, true, true, false);
  CHECK(cell.attacker + ch.attack_cost ==
        doctest::Approx(7.0 * ch.vacant_attack).epsilon(1e-12));
}

TEST_CASE("channel validation rejects inconsistent posteriors") {
  ChannelParams ch = derive_channel_from_probs(0.5, 0.9, 0.1, reference_econ());
  ch.vacant_attack = 0.9;  // more vacant mass than the PU-absent prior allows
  CHECK_THROWS_AS(ch.validate(), std::domain_error);
}
