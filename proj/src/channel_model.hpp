#pragma once

#include <vector>

namespace msg {

// Standard normal tail probability Q(x) = P(Z > x).
double normal_tail(double x);

// Inverse standard normal CDF, accurate to ~1e-15 on (0, 1).
double normal_quantile(double p);

/// Energy-detector sensing model shared by every channel.
///
/// The detector sums `n_samples` energy samples and compares against a
/// threshold calibrated so the false-alarm probability equals `false_alarm`
/// (constant false alarm rate). `snr_linear` is the received primary-signal
/// SNR as a linear power ratio.
struct SensingModel {
  int n_samples = 1500;
  double false_alarm = 0.1;
  double snr_linear = 0.1;

  void validate() const;
};

/// Detection probability of the energy detector under the central-limit
/// approximation: threshold tau = N + Q^{-1}(P_f) * sqrt(2N) at unit noise
/// power, and P_d = Q((tau - N(1+g)) / sqrt(2N(1+2g))) with g = snr_linear.
double detection_probability(const SensingModel& model);

/// Economic parameters expressed as ratios of the channel-use gain, which is
/// normalized to 1 per channel.
struct EconomicRatios {
  double attack_cost = 0.2;     // attack cost / use gain
  double monitor_cost = 0.1;    // monitoring cost / use gain
  double penalty_factor = 3.0;  // capture penalty / use gain
  double network_demand = 0.5;  // capture gain / capture penalty

  void validate() const;
};

/// Everything the game needs to know about one channel.
struct ChannelParams {
  double pu_presence = 0.0;         // prior probability the PU occupies the channel
  double disallowed_no_attack = 0.0;  // P(sensed disallowed | no attack)
  double disallowed_attack = 0.0;     // P(sensed disallowed | attack)
  double vacant_no_attack = 0.0;      // P(channel actually free | disallowed, no attack)
  double vacant_attack = 0.0;         // P(channel actually free | disallowed, attack)

  double attack_cost = 0.0;     // attacker: cost of mounting the attack
  double attack_gain = 1.0;     // attacker: gain from exclusive use of a free channel
  double monitor_cost = 0.0;    // defender: cost of monitoring the channel
  double capture_gain = 0.0;    // defender: gain for catching an attacker
  double capture_penalty = 0.0; // attacker: penalty when caught

  void validate() const;
};

/// Derives per-channel probabilities from explicit detector operating points.
/// An attack floods the sensor with an emulated primary signal, so the
/// disallowed probability under attack equals the detection probability
/// regardless of the true PU state.
ChannelParams derive_channel_from_probs(double pu_presence, double p_detect,
                                        double p_false_alarm,
                                        const EconomicRatios& econ);

/// Same, with the detection probability computed from the sensing model.
ChannelParams derive_channel(double pu_presence, const SensingModel& model,
                             const EconomicRatios& econ);

struct PayoffCell {
  double defender = 0.0;
  double attacker = 0.0;
};

/// One cell of the per-channel payoff table. `monitored` requires
/// `sensed_disallowed` (surveillance happens only on disallowed channels).
PayoffCell payoff_cell(const ChannelParams& channel, bool attacked,
                       bool sensed_disallowed, bool monitored);

}  // namespace msg
