#include "msgame.h"

#include <cmath>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "baselines.hpp"
#include "channel_model.hpp"
#include "equilibrium.hpp"
#include "game_builder.hpp"
#include "simulator.hpp"

namespace {

thread_local std::string g_last_error;

msg_status fail(msg_status status, const std::string& detail) {
  g_last_error = detail;
  return status;
}

double snr_from_db(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

}  // namespace

struct msg_config {
  int n_channels = 0;
  int max_attack = 1;
  int max_monitor = 1;
  msg::SensingModel sensing;
  msg::EconomicRatios econ;
  std::vector<double> pu_presence;

  msg::GameConfig build() const {
    return msg::make_config(pu_presence, sensing, econ, max_attack, max_monitor);
  }
};

struct msg_result {
  msg::GameConfig game;
  msg::EquilibriumResult eq;
  std::vector<msg::AttackAction> actions;
  std::vector<std::vector<msg::DefendAction>> defend_menus;
  std::vector<double> attack_marginals;
  std::vector<double> monitor_rates;
};

struct msg_sim_report {
  msg::SimulationReport report;
};

extern "C" {

const char* msg_status_message(msg_status status) {
  switch (status) {
    case MSG_OK: return "ok";
    case MSG_ERR_ARGUMENT: return "invalid argument";
    case MSG_ERR_BUDGET: return "size budget exceeded";
    case MSG_ERR_RAY_TERMINATION: return "ray termination in the pivoting solver";
    case MSG_ERR_ITERATION_LIMIT: return "pivot limit reached";
    case MSG_ERR_UNVERIFIED: return "equilibrium failed best-response verification";
    case MSG_ERR_NO_EQUILIBRIUM: return "no equilibrium found within the budget";
    case MSG_ERR_IO: return "i/o failure";
    case MSG_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* msg_last_error(void) { return g_last_error.c_str(); }

msg_config* msg_config_new(int n_channels, int max_attack, int max_monitor) {
  if (n_channels < 1 || n_channels > 16 || max_attack < 1 || max_monitor < 1) {
    g_last_error = "bad game dimensions";
    return nullptr;
  }
  auto* config = new msg_config;
  config->n_channels = n_channels;
  config->max_attack = max_attack;
  config->max_monitor = max_monitor;
  config->pu_presence.assign(n_channels, std::nan(""));
  return config;
}

void msg_config_free(msg_config* config) { delete config; }

msg_status msg_config_set_sensing(msg_config* config, int n_samples,
                                  double false_alarm, double snr_db) {
  if (config == nullptr) return fail(MSG_ERR_ARGUMENT, "null config");
  try {
    msg::SensingModel model{n_samples, false_alarm, snr_from_db(snr_db)};
    model.validate();
    config->sensing = model;
    return MSG_OK;
  } catch (const std::exception& e) {
    return fail(MSG_ERR_ARGUMENT, e.what());
  }
}

msg_status msg_config_set_economics(msg_config* config, double attack_cost,
                                    double monitor_cost, double penalty_factor,
                                    double network_demand) {
  if (config == nullptr) return fail(MSG_ERR_ARGUMENT, "null config");
  try {
    msg::EconomicRatios econ{attack_cost, monitor_cost, penalty_factor,
                             network_demand};
    econ.validate();
    config->econ = econ;
    return MSG_OK;
  } catch (const std::exception& e) {
    return fail(MSG_ERR_ARGUMENT, e.what());
  }
}

msg_status msg_config_set_presence(msg_config* config, int channel,
                                   double pu_presence) {
  if (config == nullptr) return fail(MSG_ERR_ARGUMENT, "null config");
  if (channel < 0 || channel >= config->n_channels) {
    return fail(MSG_ERR_ARGUMENT, "channel index out of range");
  }
  if (!(pu_presence >= 0.0 && pu_presence <= 1.0)) {
    return fail(MSG_ERR_ARGUMENT, "pu_presence out of [0,1]");
  }
  config->pu_presence[channel] = pu_presence;
  return MSG_OK;
}

msg_status msg_config_validate(const msg_config* config) {
  if (config == nullptr) return fail(MSG_ERR_ARGUMENT, "null config");
  try {
    for (int c = 0; c < config->n_channels; ++c) {
      if (std::isnan(config->pu_presence[c])) {
        return fail(MSG_ERR_ARGUMENT,
                    "pu_presence unset for channel " + std::to_string(c + 1));
      }
    }
    config->build().validate();
    return MSG_OK;
  } catch (const std::exception& e) {
    return fail(MSG_ERR_ARGUMENT, e.what());
  }
}

msg_status msg_detection_probability(int n_samples, double false_alarm,
                                     double snr_db, double* out) {
  if (out == nullptr) return fail(MSG_ERR_ARGUMENT, "null output");
  try {
    msg::SensingModel model{n_samples, false_alarm, snr_from_db(snr_db)};
    *out = msg::detection_probability(model);
    return MSG_OK;
  } catch (const std::exception& e) {
    return fail(MSG_ERR_ARGUMENT, e.what());
  }
}

msg_status msg_sequence_form_size(const msg_config* config, int extended,
                                  long long* payoff_rows, long long* payoff_cols) {
  const msg_status valid = msg_config_validate(config);
  if (valid != MSG_OK) return valid;
  try {
    const msg::GameConfig game = config->build();
    const auto built = extended != 0 ? msg::build_sequence_form(game)
                                     : msg::build_reduced_sequence_form(game);
    if (payoff_rows != nullptr) *payoff_rows = built.payoff_rows();
    if (payoff_cols != nullptr) *payoff_cols = built.payoff_cols();
    return MSG_OK;
  } catch (const std::length_error& e) {
    return fail(MSG_ERR_BUDGET, e.what());
  } catch (const std::exception& e) {
    return fail(MSG_ERR_INTERNAL, e.what());
  }
}

msg_status msg_strategic_form_size(const msg_config* config, double* rows,
                                   double* cols) {
  const msg_status valid = msg_config_validate(config);
  if (valid != MSG_OK) return valid;
  try {
    const msg::GameConfig game = config->build();
    if (rows != nullptr) {
      *rows = static_cast<double>(msg::enumerate_attack_actions(game).size());
    }
    if (cols != nullptr) *cols = msg::strategic_form_columns(game);
    return MSG_OK;
  } catch (const std::exception& e) {
    return fail(MSG_ERR_INTERNAL, e.what());
  }
}

void msg_solve_options_init(msg_solve_options* options) {
  if (options == nullptr) return;
  options->use_extended_form = 0;
  options->lcp_tolerance = 1e-9;
  options->verify_tolerance = 1e-7;
  options->max_pivots = 0;
}

msg_status msg_solve(const msg_config* config, const msg_solve_options* options,
                     msg_result** out) {
  if (out == nullptr) return fail(MSG_ERR_ARGUMENT, "null output");
  const msg_status valid = msg_config_validate(config);
  if (valid != MSG_OK) return valid;

  msg_solve_options defaults;
  msg_solve_options_init(&defaults);
  const msg_solve_options& opts = options != nullptr ? *options : defaults;

  try {
    msg::SolveOptions solve_options;
    solve_options.form = opts.use_extended_form != 0 ? msg::GameForm::extended
                                                     : msg::GameForm::reduced;
    solve_options.lcp_tolerance = opts.lcp_tolerance;
    solve_options.verify_tolerance = opts.verify_tolerance;
    solve_options.max_pivots = static_cast<int>(opts.max_pivots);

    auto result = std::make_unique<msg_result>();
    result->game = config->build();
    result->eq = msg::solve(result->game, solve_options);
    result->actions = msg::enumerate_attack_actions(result->game);
    result->defend_menus.resize(result->game.outcome_count());
    for (int k = 0; k < result->game.outcome_count(); ++k) {
      result->defend_menus[k] = msg::enumerate_defend_actions(
          result->game, {static_cast<msg::ChannelMask>(k)});
    }
    result->attack_marginals =
        msg::channel_attack_marginals(result->game, result->eq.attacker);
    result->monitor_rates = msg::channel_monitor_rates(
        result->game, result->eq.attacker, result->eq.defender);

    msg_status status = MSG_OK;
    if (result->eq.lcp_status == msg::LcpStatus::ray_termination) {
      status = fail(MSG_ERR_RAY_TERMINATION, "Lemke pivoting hit a ray");
    } else if (result->eq.lcp_status == msg::LcpStatus::iteration_limit) {
      status = fail(MSG_ERR_ITERATION_LIMIT, "pivot limit reached");
    } else if (!result->eq.verified) {
      status = fail(MSG_ERR_UNVERIFIED, "best-response gaps exceed tolerance");
    }
    *out = result.release();
    return status;
  } catch (const std::length_error& e) {
    return fail(MSG_ERR_BUDGET, e.what());
  } catch (const std::exception& e) {
    return fail(MSG_ERR_INTERNAL, e.what());
  }
}

void msg_result_free(msg_result* result) { delete result; }

double msg_result_attacker_value(const msg_result* r) { return r->eq.attacker_value; }
double msg_result_defender_value(const msg_result* r) { return r->eq.defender_value; }
double msg_result_attacker_gap(const msg_result* r) { return r->eq.attacker_gap; }
double msg_result_defender_gap(const msg_result* r) { return r->eq.defender_gap; }
double msg_result_complementarity(const msg_result* r) {
  return r->eq.complementarity_residual;
}
long msg_result_pivots(const msg_result* r) { return r->eq.pivots; }
double msg_result_wall_seconds(const msg_result* r) { return r->eq.wall_seconds; }
int msg_result_verified(const msg_result* r) { return r->eq.verified ? 1 : 0; }

int msg_result_attack_action_count(const msg_result* r) {
  return static_cast<int>(r->actions.size());
}

msg_status msg_result_attack_action(const msg_result* r, int index,
                                    unsigned* channel_mask, double* probability) {
  if (r == nullptr || index < 0 || index >= static_cast<int>(r->actions.size())) {
    return fail(MSG_ERR_ARGUMENT, "attack action index out of range");
  }
  if (channel_mask != nullptr) *channel_mask = r->actions[index].channels;
  if (probability != nullptr) *probability = r->eq.attacker.probs[index];
  return MSG_OK;
}

int msg_result_outcome_count(const msg_result* r) {
  return r->game.outcome_count();
}

int msg_result_defend_action_count(const msg_result* r, int outcome) {
  if (outcome < 0 || outcome >= r->game.outcome_count()) return 0;
  return static_cast<int>(r->defend_menus[outcome].size());
}

msg_status msg_result_defend_action(const msg_result* r, int outcome, int index,
                                    unsigned* monitored_mask, double* probability) {
  if (r == nullptr || outcome < 0 || outcome >= r->game.outcome_count() ||
      index < 0 || index >= static_cast<int>(r->defend_menus[outcome].size())) {
    return fail(MSG_ERR_ARGUMENT, "defend action index out of range");
  }
  if (monitored_mask != nullptr) {
    *monitored_mask = r->defend_menus[outcome][index].monitored;
  }
  if (probability != nullptr) *probability = r->eq.defender.probs[outcome][index];
  return MSG_OK;
}

msg_status msg_result_channel_rates(const msg_result* r, int channel,
                                    double* attack_marginal, double* monitor_rate) {
  if (r == nullptr || channel < 0 || channel >= r->game.n_channels) {
    return fail(MSG_ERR_ARGUMENT, "channel index out of range");
  }
  if (attack_marginal != nullptr) *attack_marginal = r->attack_marginals[channel];
  if (monitor_rate != nullptr) *monitor_rate = r->monitor_rates[channel];
  return MSG_OK;
}

msg_status msg_single_channel_ne(const msg_config* config, int channel,
                                 double* attack_prob, double* surveillance_prob,
                                 const char** regime) {
  const msg_status valid = msg_config_validate(config);
  if (valid != MSG_OK) return valid;
  if (channel < 0 || channel >= config->n_channels) {
    return fail(MSG_ERR_ARGUMENT, "channel index out of range");
  }
  try {
    const msg::GameConfig game = config->build();
    const msg::SingleChannelNe ne = msg::solve_single_channel(game.channels[channel]);
    if (attack_prob != nullptr) *attack_prob = ne.attack_prob;
    if (surveillance_prob != nullptr) *surveillance_prob = ne.surveillance_prob;
    if (regime != nullptr) *regime = msg::to_string(ne.regime);
    return MSG_OK;
  } catch (const std::exception& e) {
    return fail(MSG_ERR_INTERNAL, e.what());
  }
}

msg_status msg_evaluate_defender(const msg_config* config, msg_defender_kind kind,
                                 double* defender_value) {
  if (defender_value == nullptr) return fail(MSG_ERR_ARGUMENT, "null output");
  const msg_status valid = msg_config_validate(config);
  if (valid != MSG_OK) return valid;
  try {
    const msg::GameConfig game = config->build();
    const msg::DefenderStrategy strategy = kind == MSG_DEFENDER_UNIFORM
                                               ? msg::uniform_surveillance_strategy(game)
                                               : msg::random_strategy(game);
    *defender_value = msg::evaluate_defender_strategy(game, strategy).defender_value;
    return MSG_OK;
  } catch (const std::exception& e) {
    return fail(MSG_ERR_INTERNAL, e.what());
  }
}

msg_status msg_evaluate_result_defender(const msg_result* result,
                                        double* defender_value) {
  if (result == nullptr || defender_value == nullptr) {
    return fail(MSG_ERR_ARGUMENT, "null argument");
  }
  try {
    *defender_value =
        msg::evaluate_defender_strategy(result->game, result->eq.defender)
            .defender_value;
    return MSG_OK;
  } catch (const std::exception& e) {
    return fail(MSG_ERR_INTERNAL, e.what());
  }
}

msg_status msg_solve_strategic(const msg_config* config, long long max_cells,
                               int max_support, double* attacker_value,
                               double* defender_value, long long* equilibria_found) {
  const msg_status valid = msg_config_validate(config);
  if (valid != MSG_OK) return valid;
  if (max_cells < 1 || max_support < 1) {
    return fail(MSG_ERR_ARGUMENT, "budgets must be positive");
  }
  try {
    const msg::GameConfig game = config->build();
    const msg::NormalFormGame normal =
        msg::build_normal_form(game, static_cast<std::size_t>(max_cells));
    const auto equilibria = msg::support_enumeration_ne(normal, max_support);
    if (equilibria_found != nullptr) {
      *equilibria_found = static_cast<long long>(equilibria.size());
    }
    if (equilibria.empty()) {
      return fail(MSG_ERR_NO_EQUILIBRIUM,
                  "no equilibrium within the support budget");
    }
    if (attacker_value != nullptr) *attacker_value = equilibria.front().row_value;
    if (defender_value != nullptr) *defender_value = equilibria.front().col_value;
    return MSG_OK;
  } catch (const std::length_error& e) {
    return fail(MSG_ERR_BUDGET, e.what());
  } catch (const std::exception& e) {
    return fail(MSG_ERR_INTERNAL, e.what());
  }
}

msg_status msg_simulate(const msg_result* result, long long n_frames,
                        unsigned long long seed, int workers,
                        msg_sim_report** out) {
  if (result == nullptr || out == nullptr) {
    return fail(MSG_ERR_ARGUMENT, "null argument");
  }
  try {
    auto report = std::make_unique<msg_sim_report>();
    report->report = msg::simulate(result->game, result->eq.attacker,
                                   result->eq.defender, n_frames, seed, workers);
    *out = report.release();
    return MSG_OK;
  } catch (const std::exception& e) {
    return fail(MSG_ERR_ARGUMENT, e.what());
  }
}

void msg_sim_report_free(msg_sim_report* report) { delete report; }

long long msg_sim_frames(const msg_sim_report* r) { return r->report.n_frames; }
double msg_sim_mean_attacker(const msg_sim_report* r) {
  return r->report.mean_attacker_payoff;
}
double msg_sim_se_attacker(const msg_sim_report* r) {
  return r->report.se_attacker_payoff;
}
double msg_sim_mean_defender(const msg_sim_report* r) {
  return r->report.mean_defender_payoff;
}
double msg_sim_se_defender(const msg_sim_report* r) {
  return r->report.se_defender_payoff;
}
double msg_sim_capture_rate(const msg_sim_report* r) {
  return r->report.capture_rate;
}

msg_status msg_dump_game(const msg_config* config, int extended, const char* path) {
  if (path == nullptr) return fail(MSG_ERR_ARGUMENT, "null path");
  const msg_status valid = msg_config_validate(config);
  if (valid != MSG_OK) return valid;
  try {
    const msg::GameConfig game = config->build();
    const auto built = extended != 0 ? msg::build_sequence_form(game)
                                     : msg::build_reduced_sequence_form(game);
    std::ofstream out(path);
    if (!out) return fail(MSG_ERR_IO, std::string("cannot open ") + path);
    msg::dump_game(built, out);
    return out.good() ? MSG_OK : fail(MSG_ERR_IO, "write failure");
  } catch (const std::exception& e) {
    return fail(MSG_ERR_INTERNAL, e.what());
  }
}

}  // extern "C"
