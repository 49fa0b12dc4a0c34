#include "channel_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace msg {

double normal_tail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

namespace {

// Acklam's rational approximation to the normal quantile, good to ~1e-9.
double normal_quantile_estimate(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

void require_probability(double value, const char* name, bool open_interval) {
  const bool ok = open_interval ? (value > 0.0 && value < 1.0)
                                : (value >= 0.0 && value <= 1.0);
  if (!std::isfinite(value) || !ok) {
    throw std::domain_error(std::string(name) + " out of range: " +
                            std::to_string(value));
  }
}

void require_nonnegative(double value, const char* name) {
  if (!std::isfinite(value) || value < 0.0) {
    throw std::domain_error(std::string(name) + " must be >= 0, got " +
                            std::to_string(value));
  }
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("normal_quantile requires p in (0,1)");
  }
  double x = normal_quantile_estimate(p);
  // One Halley refinement against erfc brings the estimate to full precision.
  const double err = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = err * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

void SensingModel::validate() const {
  if (n_samples < 1) {
    throw std::domain_error("n_samples must be >= 1");
  }
  require_probability(false_alarm, "false_alarm", /*open_interval=*/true);
  if (!std::isfinite(snr_linear) || snr_linear <= 0.0) {
    throw std::domain_error("snr_linear must be > 0");
  }
}

double detection_probability(const SensingModel& model) {
  model.validate();
  const double n = static_cast<double>(model.n_samples);
  const double g = model.snr_linear;
  const double threshold =
      n + normal_quantile(1.0 - model.false_alarm) * std::sqrt(2.0 * n);
  return normal_tail((threshold - n * (1.0 + g)) /
                     std::sqrt(2.0 * n * (1.0 + 2.0 * g)));
}

void EconomicRatios::validate() const {
  require_nonnegative(attack_cost, "attack_cost");
  require_nonnegative(monitor_cost, "monitor_cost");
  require_nonnegative(penalty_factor, "penalty_factor");
  require_nonnegative(network_demand, "network_demand");
}

void ChannelParams::validate() const {
  require_probability(pu_presence, "pu_presence", false);
  require_probability(disallowed_no_attack, "disallowed_no_attack", true);
  require_probability(disallowed_attack, "disallowed_attack", true);
  require_probability(vacant_no_attack, "vacant_no_attack", false);
  require_probability(vacant_attack, "vacant_attack", false);
  // Posterior mass of a vacant-but-disallowed channel cannot exceed the prior
  // mass of PU absence.
  const double slack = 1e-12;
  if (vacant_no_attack * disallowed_no_attack > 1.0 - pu_presence + slack) {
    throw std::domain_error("vacant_no_attack inconsistent with pu_presence");
  }
  if (vacant_attack * disallowed_attack > 1.0 - pu_presence + slack) {
    throw std::domain_error("vacant_attack inconsistent with pu_presence");
  }
  require_nonnegative(attack_cost, "attack_cost");
  if (!(attack_gain > 0.0)) {
    throw std::domain_error("attack_gain must be > 0");
  }
  require_nonnegative(monitor_cost, "monitor_cost");
  require_nonnegative(capture_gain, "capture_gain");
  require_nonnegative(capture_penalty, "capture_penalty");
}

ChannelParams derive_channel_from_probs(double pu_presence, double p_detect,
                                        double p_false_alarm,
                                        const EconomicRatios& econ) {
  require_probability(pu_presence, "pu_presence", false);
  require_probability(p_detect, "p_detect", true);
  require_probability(p_false_alarm, "p_false_alarm", true);
  econ.validate();

  ChannelParams ch;
  ch.pu_presence = pu_presence;
  ch.disallowed_no_attack =
      pu_presence * p_detect + (1.0 - pu_presence) * p_false_alarm;
  if (ch.disallowed_no_attack <= 0.0) {
    throw std::domain_error("degenerate channel: disallowed_no_attack is 0");
  }
  // The emulated signal is indistinguishable from the PU signal and present
  // for the whole sensing slot, so an attacked channel is flagged with the
  // detection probability whether or not the PU is also there.
  ch.disallowed_attack = p_detect;
  ch.vacant_no_attack =
      (1.0 - pu_presence) * p_false_alarm / ch.disallowed_no_attack;
  ch.vacant_attack = 1.0 - pu_presence;

  ch.attack_gain = 1.0;
  ch.attack_cost = econ.attack_cost;
  ch.monitor_cost = econ.monitor_cost;
  ch.capture_penalty = econ.penalty_factor;
  ch.capture_gain = econ.network_demand * econ.penalty_factor;
  ch.validate();
  return ch;
}

ChannelParams derive_channel(double pu_presence, const SensingModel& model,
                             const EconomicRatios& econ) {
  return derive_channel_from_probs(pu_presence, detection_probability(model),
                                   model.false_alarm, econ);
}

PayoffCell payoff_cell(const ChannelParams& channel, bool attacked,
                       bool sensed_disallowed, bool monitored) {
  if (monitored && !sensed_disallowed) {
    throw std::invalid_argument("monitored channel must be sensed disallowed");
  }
  PayoffCell cell;
  if (!attacked) {
    if (monitored) {
      cell.defender = -channel.monitor_cost;
    }
    return cell;
  }
  cell.attacker = -channel.attack_cost;
  if (!sensed_disallowed) {
    return cell;  // attack cost sunk, channel stays open to everyone
  }
  if (monitored) {
    cell.defender = -channel.monitor_cost + channel.vacant_attack * channel.capture_gain;
    cell.attacker += -channel.vacant_attack * channel.capture_penalty;
  } else {
    cell.attacker += channel.vacant_attack * channel.attack_gain;
  }
  return cell;
}

}  // namespace msg
