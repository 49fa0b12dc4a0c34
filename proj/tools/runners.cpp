#include "runners.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <memory>
#include <ostream>
#include <vector>

#include <msgame.h>

#include "csv.hpp"

namespace msgcli {

namespace {

using ConfigHandle = std::unique_ptr<msg_config, decltype(&msg_config_free)>;
using ResultHandle = std::unique_ptr<msg_result, decltype(&msg_result_free)>;
using ReportHandle = std::unique_ptr<msg_sim_report, decltype(&msg_sim_report_free)>;

// Cycles the configured presence list out to n channels (used by the bench
// lane, where one config serves several game sizes).
std::vector<double> presence_for(const ExperimentConfig& config, int n) {
  std::vector<double> pi(n);
  for (int c = 0; c < n; ++c) {
    pi[c] = config.pu_presence[c % config.pu_presence.size()];
  }
  return pi;
}

ConfigHandle make_handle(const ExperimentConfig& config, int n_channels,
                         double penalty_factor, double network_demand,
                         std::string* error) {
  ConfigHandle handle(
      msg_config_new(n_channels, config.max_attack, config.max_monitor),
      &msg_config_free);
  if (handle == nullptr) {
    *error = msg_last_error();
    return handle;
  }
  msg_status status = msg_config_set_sensing(handle.get(), config.n_samples,
                                             config.false_alarm, config.snr_db);
  if (status == MSG_OK) {
    status = msg_config_set_economics(handle.get(), config.attack_cost,
                                      config.monitor_cost, penalty_factor,
                                      network_demand);
  }
  const std::vector<double> pi = presence_for(config, n_channels);
  for (int c = 0; status == MSG_OK && c < n_channels; ++c) {
    status = msg_config_set_presence(handle.get(), c, pi[c]);
  }
  if (status == MSG_OK) status = msg_config_validate(handle.get());
  if (status != MSG_OK) {
    *error = msg_last_error();
    handle.reset();
  }
  return handle;
}

msg_solve_options solve_options(const ExperimentConfig& config, bool extended) {
  msg_solve_options options;
  msg_solve_options_init(&options);
  options.use_extended_form = extended ? 1 : 0;
  options.lcp_tolerance = config.tolerance;
  options.verify_tolerance = config.verify_tolerance;
  return options;
}

std::string status_label(msg_status status) {
  switch (status) {
    case MSG_OK: return "ok";
    case MSG_ERR_RAY_TERMINATION: return "ray_termination";
    case MSG_ERR_ITERATION_LIMIT: return "iteration_limit";
    case MSG_ERR_UNVERIFIED: return "unverified";
    case MSG_ERR_BUDGET: return "budget_exceeded";
    case MSG_ERR_NO_EQUILIBRIUM: return "no_equilibrium";
    default: return "error";
  }
}

std::string channel_set_label(unsigned mask, int n_channels) {
  if (mask == 0) return "none";
  std::string label;
  for (int c = 0; c < n_channels; ++c) {
    if (mask & (1u << c)) label += "c" + std::to_string(c + 1);
  }
  return label;
}

// Column labels shared by the solve and sweep tables. Built from the first
// result so they always match the enumeration order inside the library.
struct StrategyColumns {
  std::vector<std::string> names;
  int n_channels = 0;

  explicit StrategyColumns(const msg_result* result, int n_channels_in) {
    n_channels = n_channels_in;
    for (int i = 0; i < msg_result_attack_action_count(result); ++i) {
      unsigned mask = 0;
      msg_result_attack_action(result, i, &mask, nullptr);
      names.push_back("attack_" + channel_set_label(mask, n_channels));
    }
    for (int c = 0; c < n_channels; ++c) {
      names.push_back("alpha_ch" + std::to_string(c + 1));
    }
    for (int c = 0; c < n_channels; ++c) {
      names.push_back("monitor_ch" + std::to_string(c + 1));
    }
    for (int k = 0; k < msg_result_outcome_count(result); ++k) {
      const std::string outcome =
          channel_set_label(static_cast<unsigned>(k), n_channels);
      for (int a = 0; a < msg_result_defend_action_count(result, k); ++a) {
        unsigned mask = 0;
        msg_result_defend_action(result, k, a, &mask, nullptr);
        names.push_back("def_" + outcome + "_" +
                        channel_set_label(mask, n_channels));
      }
    }
  }

  void append_values(const msg_result* result, std::vector<std::string>* row) const {
    for (int i = 0; i < msg_result_attack_action_count(result); ++i) {
      double p = 0.0;
      msg_result_attack_action(result, i, nullptr, &p);
      row->push_back(format_number(p));
    }
    for (int c = 0; c < n_channels; ++c) {
      double alpha = 0.0;
      msg_result_channel_rates(result, c, &alpha, nullptr);
      row->push_back(format_number(alpha));
    }
    for (int c = 0; c < n_channels; ++c) {
      double rate = 0.0;
      msg_result_channel_rates(result, c, nullptr, &rate);
      row->push_back(format_number(rate));
    }
    for (int k = 0; k < msg_result_outcome_count(result); ++k) {
      for (int a = 0; a < msg_result_defend_action_count(result, k); ++a) {
        double p = 0.0;
        msg_result_defend_action(result, k, a, nullptr, &p);
        row->push_back(format_number(p));
      }
    }
  }
};

void write_row(CsvWriter& csv, const std::vector<std::string>& row) {
  for (const std::string& value : row) csv.field(value);
  csv.end_row();
}

}  // namespace

int run_solve(const RunContext& ctx) {
  std::string error;
  const ConfigHandle handle =
      make_handle(ctx.config, ctx.config.channels, ctx.config.penalty_factor,
                  ctx.config.network_demand, &error);
  if (handle == nullptr) {
    *ctx.err << "config error: " << error << '\n';
    return 2;
  }

  const msg_solve_options options = solve_options(ctx.config, ctx.extended_form);
  msg_result* raw = nullptr;
  const msg_status status = msg_solve(handle.get(), &options, &raw);
  ResultHandle result(raw, &msg_result_free);
  if (result == nullptr) {
    *ctx.err << "solve failed: " << msg_last_error() << '\n';
    return 2;
  }

  const StrategyColumns strategy(result.get(), ctx.config.channels);
  std::vector<std::string> names = {
      "status", "channels", "max_attack",   "max_monitor", "penalty_factor",
      "network_demand", "omega_attacker", "omega_defender", "gap_attacker",
      "gap_defender", "residual", "pivots"};
  names.insert(names.end(), strategy.names.begin(), strategy.names.end());
  for (int c = 0; c < ctx.config.channels; ++c) {
    const std::string suffix = "_ch" + std::to_string(c + 1);
    names.push_back("sc_alpha" + suffix);
    names.push_back("sc_monitor" + suffix);
    names.push_back("sc_regime" + suffix);
  }

  std::vector<std::string> row = {
      status_label(status),
      std::to_string(ctx.config.channels),
      std::to_string(ctx.config.max_attack),
      std::to_string(ctx.config.max_monitor),
      format_number(ctx.config.penalty_factor),
      format_number(ctx.config.network_demand),
      format_number(msg_result_attacker_value(result.get())),
      format_number(msg_result_defender_value(result.get())),
      format_number(msg_result_attacker_gap(result.get())),
      format_number(msg_result_defender_gap(result.get())),
      format_number(msg_result_complementarity(result.get())),
      std::to_string(msg_result_pivots(result.get()))};
  strategy.append_values(result.get(), &row);
  for (int c = 0; c < ctx.config.channels; ++c) {
    double alpha = 0.0, monitor = 0.0;
    const char* regime = "";
    msg_single_channel_ne(handle.get(), c, &alpha, &monitor, &regime);
    row.push_back(format_number(alpha));
    row.push_back(format_number(monitor));
    row.push_back(regime);
  }

  CsvWriter csv(*ctx.out);
  csv.header(names);
  write_row(csv, row);
  return status == MSG_OK ? 0 : 1;
}

namespace {

struct SweepCell {
  std::vector<std::string> row;
  bool ok = false;
};

SweepCell sweep_point(const ExperimentConfig& config, bool extended,
                      double penalty, double demand,
                      const StrategyColumns& strategy,
                      std::size_t total_columns) {
  SweepCell cell;
  cell.row.push_back(format_number(penalty));
  cell.row.push_back(format_number(demand));

  std::string error;
  const ConfigHandle handle =
      make_handle(config, config.channels, penalty, demand, &error);
  if (handle == nullptr) {
    cell.row.push_back("error");
    while (cell.row.size() < total_columns) cell.row.push_back("nan");
    return cell;
  }

  const msg_solve_options options = solve_options(config, extended);
  msg_result* raw = nullptr;
  const msg_status status = msg_solve(handle.get(), &options, &raw);
  ResultHandle result(raw, &msg_result_free);
  cell.row.push_back(status_label(status));
  if (result == nullptr) {
    while (cell.row.size() < total_columns) cell.row.push_back("nan");
    return cell;
  }
  cell.ok = status == MSG_OK;

  cell.row.push_back(format_number(msg_result_attacker_value(result.get())));
  cell.row.push_back(format_number(msg_result_defender_value(result.get())));
  cell.row.push_back(format_number(msg_result_attacker_gap(result.get())));
  cell.row.push_back(format_number(msg_result_defender_gap(result.get())));
  cell.row.push_back(format_number(msg_result_complementarity(result.get())));
  cell.row.push_back(std::to_string(msg_result_pivots(result.get())));
  strategy.append_values(result.get(), &cell.row);

  double ne_value = 0.0, uniform_value = 0.0, random_value = 0.0;
  msg_evaluate_result_defender(result.get(), &ne_value);
  msg_evaluate_defender(handle.get(), MSG_DEFENDER_UNIFORM, &uniform_value);
  msg_evaluate_defender(handle.get(), MSG_DEFENDER_RANDOM, &random_value);
  cell.row.push_back(format_number(ne_value));
  cell.row.push_back(format_number(uniform_value));
  cell.row.push_back(format_number(random_value));
  cell.row.push_back(format_number(ne_value - uniform_value));
  cell.row.push_back(format_number(ne_value - random_value));
  return cell;
}

}  // namespace

int run_sweep(const RunContext& ctx) {
  if (ctx.config.demand_grid.empty()) {
    *ctx.err << "sweep mode needs a [sweep] network_demand grid\n";
    return 2;
  }
  const std::vector<double> penalties = ctx.config.penalty_grid.empty()
                                            ? std::vector<double>{ctx.config.penalty_factor}
                                            : ctx.config.penalty_grid;

  // A throwaway solve pins the column layout.
  std::string error;
  const ConfigHandle probe =
      make_handle(ctx.config, ctx.config.channels, penalties.front(),
                  ctx.config.demand_grid.front(), &error);
  if (probe == nullptr) {
    *ctx.err << "config error: " << error << '\n';
    return 2;
  }
  const msg_solve_options options = solve_options(ctx.config, ctx.extended_form);
  msg_result* probe_raw = nullptr;
  msg_solve(probe.get(), &options, &probe_raw);
  ResultHandle probe_result(probe_raw, &msg_result_free);
  if (probe_result == nullptr) {
    *ctx.err << "solve failed: " << msg_last_error() << '\n';
    return 2;
  }
  const StrategyColumns strategy(probe_result.get(), ctx.config.channels);

  std::vector<std::string> names = {"penalty_factor", "network_demand", "status",
                                    "omega_attacker", "omega_defender",
                                    "gap_attacker", "gap_defender", "residual",
                                    "pivots"};
  names.insert(names.end(), strategy.names.begin(), strategy.names.end());
  names.push_back("omega_defender_ne_br");
  names.push_back("omega_defender_uniform");
  names.push_back("omega_defender_random");
  names.push_back("ne_minus_uniform");
  names.push_back("ne_minus_random");

  struct Task {
    double penalty;
    double demand;
  };
  std::vector<Task> tasks;
  for (double penalty : penalties) {
    for (double demand : ctx.config.demand_grid) tasks.push_back({penalty, demand});
  }

  std::vector<SweepCell> cells(tasks.size());
  const int workers = std::max(1, ctx.config.workers);
  std::vector<std::future<void>> futures;
  for (int w = 0; w < workers; ++w) {
    futures.push_back(std::async(
        workers == 1 ? std::launch::deferred : std::launch::async,
        [&, w]() {
          for (std::size_t i = w; i < tasks.size(); i += workers) {
            cells[i] = sweep_point(ctx.config, ctx.extended_form,
                                   tasks[i].penalty, tasks[i].demand, strategy,
                                   names.size());
          }
        }));
  }
  for (auto& f : futures) f.get();

  CsvWriter csv(*ctx.out);
  csv.header(names);
  bool all_ok = true;
  for (const SweepCell& cell : cells) {
    write_row(csv, cell.row);
    all_ok = all_ok && cell.ok;
  }
  return all_ok ? 0 : 1;
}

namespace {

// Median of three timed runs of `body` (which returns true on success).
template <typename Body>
double median_seconds(Body&& body, bool* ok) {
  std::vector<double> times;
  *ok = true;
  for (int rep = 0; rep < 3; ++rep) {
    const auto start = std::chrono::steady_clock::now();
    *ok = body() && *ok;
    times.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count());
  }
  std::sort(times.begin(), times.end());
  return times[1];
}

}  // namespace

int run_bench(const RunContext& ctx) {
  CsvWriter csv(*ctx.out);
  csv.header({"channels", "max_attack", "max_monitor", "ext_rows", "ext_cols",
              "red_rows", "red_cols", "seq_seconds", "seq_pivots", "seq_status",
              "strat_rows", "strat_cols", "strat_seconds", "strat_status",
              "strat_equilibria"});

  bool all_ok = true;
  for (int n : ctx.config.bench_channels) {
    std::string error;
    const ConfigHandle handle =
        make_handle(ctx.config, n, ctx.config.penalty_factor,
                    ctx.config.network_demand, &error);
    if (handle == nullptr) {
      *ctx.err << "bench config error for " << n << " channels: " << error << '\n';
      all_ok = false;
      continue;
    }

    long long ext_rows = 0, ext_cols = 0, red_rows = 0, red_cols = 0;
    msg_sequence_form_size(handle.get(), 1, &ext_rows, &ext_cols);
    msg_sequence_form_size(handle.get(), 0, &red_rows, &red_cols);
    double strat_rows = 0.0, strat_cols = 0.0;
    msg_strategic_form_size(handle.get(), &strat_rows, &strat_cols);

    const msg_solve_options options = solve_options(ctx.config, ctx.extended_form);
    msg_status seq_status = MSG_OK;
    long pivots = 0;
    bool seq_ok = false;
    const double seq_seconds = median_seconds(
        [&]() {
          msg_result* raw = nullptr;
          seq_status = msg_solve(handle.get(), &options, &raw);
          ResultHandle result(raw, &msg_result_free);
          if (result != nullptr) pivots = msg_result_pivots(result.get());
          return seq_status == MSG_OK;
        },
        &seq_ok);

    msg_status strat_status = MSG_OK;
    long long found = 0;
    bool strat_ok = false;
    const double strat_seconds = median_seconds(
        [&]() {
          strat_status = msg_solve_strategic(handle.get(), ctx.config.max_cells,
                                             ctx.config.max_support, nullptr,
                                             nullptr, &found);
          return strat_status == MSG_OK;
        },
        &strat_ok);

    csv.field(static_cast<long long>(n))
        .field(static_cast<long long>(ctx.config.max_attack))
        .field(static_cast<long long>(ctx.config.max_monitor))
        .field(ext_rows)
        .field(ext_cols)
        .field(red_rows)
        .field(red_cols)
        .field(seq_seconds)
        .field(static_cast<long long>(pivots))
        .field(status_label(seq_status))
        .field(strat_rows)
        .field(strat_cols)
        .field(strat_seconds)
        .field(status_label(strat_status))
        .field(found);
    csv.end_row();
    all_ok = all_ok && seq_ok;
  }
  return all_ok ? 0 : 1;
}

int run_simulate(const RunContext& ctx) {
  std::string error;
  const ConfigHandle handle =
      make_handle(ctx.config, ctx.config.channels, ctx.config.penalty_factor,
                  ctx.config.network_demand, &error);
  if (handle == nullptr) {
    *ctx.err << "config error: " << error << '\n';
    return 2;
  }
  const msg_solve_options options = solve_options(ctx.config, ctx.extended_form);
  msg_result* raw = nullptr;
  const msg_status status = msg_solve(handle.get(), &options, &raw);
  ResultHandle result(raw, &msg_result_free);
  if (result == nullptr) {
    *ctx.err << "solve failed: " << msg_last_error() << '\n';
    return 2;
  }

  msg_sim_report* report_raw = nullptr;
  const msg_status sim_status =
      msg_simulate(result.get(), ctx.config.frames, ctx.config.seed,
                   ctx.config.workers, &report_raw);
  ReportHandle report(report_raw, &msg_sim_report_free);
  if (report == nullptr) {
    *ctx.err << "simulation failed: " << msg_last_error() << '\n';
    return 2;
  }
  (void)sim_status;

  const double analytic_a = msg_result_attacker_value(result.get());
  const double analytic_d = msg_result_defender_value(result.get());
  const double mean_a = msg_sim_mean_attacker(report.get());
  const double se_a = msg_sim_se_attacker(report.get());
  const double mean_d = msg_sim_mean_defender(report.get());
  const double se_d = msg_sim_se_defender(report.get());

  CsvWriter csv(*ctx.out);
  csv.header({"status", "channels", "frames", "seed", "workers",
              "omega_attacker", "omega_defender", "sim_mean_attacker",
              "sim_se_attacker", "z_attacker", "sim_mean_defender",
              "sim_se_defender", "z_defender", "capture_rate"});
  csv.field(status_label(status))
      .field(static_cast<long long>(ctx.config.channels))
      .field(msg_sim_frames(report.get()))
      .field(static_cast<long long>(ctx.config.seed))
      .field(static_cast<long long>(ctx.config.workers))
      .field(analytic_a)
      .field(analytic_d)
      .field(mean_a)
      .field(se_a)
      .field(se_a > 0.0 ? (mean_a - analytic_a) / se_a : 0.0)
      .field(mean_d)
      .field(se_d)
      .field(se_d > 0.0 ? (mean_d - analytic_d) / se_d : 0.0)
      .field(msg_sim_capture_rate(report.get()));
  csv.end_row();
  return status == MSG_OK ? 0 : 1;
}

int run_dump(const RunContext& ctx, const std::string& path) {
  std::string error;
  const ConfigHandle handle =
      make_handle(ctx.config, ctx.config.channels, ctx.config.penalty_factor,
                  ctx.config.network_demand, &error);
  if (handle == nullptr) {
    *ctx.err << "config error: " << error << '\n';
    return 2;
  }
  const msg_status status =
      msg_dump_game(handle.get(), ctx.extended_form ? 1 : 0, path.c_str());
  if (status != MSG_OK) {
    *ctx.err << "dump failed: " << msg_last_error() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace msgcli
