#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "config.hpp"
#include "runners.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string output_path = "-";
  bool extended = false;
  // Optional overrides of the [run] section.
  long long seed = -1;
  long long frames = -1;
  int workers = -1;
  double tolerance = -1.0;
  long long max_cells = -1;
  int max_support = -1;
};

void add_common(CLI::App* cmd, CommonArgs* args, bool with_extended = true) {
  cmd->add_option("-c,--config", args->config_path, "experiment config file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("-o,--output", args->output_path,
                  "CSV destination, '-' for stdout");
  cmd->add_option("--seed", args->seed, "override [run] seed");
  cmd->add_option("--frames", args->frames, "override [run] frames");
  cmd->add_option("--workers", args->workers, "override [run] workers");
  cmd->add_option("--tolerance", args->tolerance, "override [run] tolerance");
  cmd->add_option("--max-cells", args->max_cells,
                  "override the strategic-form cell budget");
  cmd->add_option("--max-support", args->max_support,
                  "override the support-enumeration budget");
  if (with_extended) {
    cmd->add_flag("--extended", args->extended,
                  "use the outcome-extended attacker sequences");
  }
}

int dispatch(const CommonArgs& args, const std::string& mode,
             const std::string& dump_path) {
  msgcli::ExperimentConfig config;
  try {
    config = msgcli::load_config(args.config_path);
  } catch (const msgcli::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  if (args.seed >= 0) config.seed = static_cast<unsigned long long>(args.seed);
  if (args.frames >= 0) config.frames = args.frames;
  if (args.workers >= 0) config.workers = args.workers;
  if (args.tolerance >= 0.0) config.tolerance = args.tolerance;
  if (args.max_cells >= 0) config.max_cells = args.max_cells;
  if (args.max_support >= 0) config.max_support = args.max_support;

  std::ofstream file;
  if (args.output_path != "-") {
    file.open(args.output_path);
    if (!file) {
      std::cerr << "error: cannot open output file " << args.output_path << '\n';
      return 2;
    }
  }
  msgcli::RunContext ctx;
  ctx.config = config;
  ctx.out = args.output_path == "-" ? &std::cout : &file;
  ctx.err = &std::cerr;
  ctx.extended_form = args.extended;

  if (mode == "solve") return msgcli::run_solve(ctx);
  if (mode == "sweep") return msgcli::run_sweep(ctx);
  if (mode == "bench") return msgcli::run_bench(ctx);
  if (mode == "simulate") return msgcli::run_simulate(ctx);
  if (mode == "dump") return msgcli::run_dump(ctx, dump_path);
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Nash-equilibrium solver for the multi-channel PUEA surveillance game"};
  app.require_subcommand(1);

  CommonArgs solve_args, sweep_args, bench_args, sim_args, dump_args;
  std::string dump_path = "game_dump.txt";

  add_common(app.add_subcommand("solve", "solve one instance and verify it"),
             &solve_args);
  add_common(app.add_subcommand(
                 "sweep", "solve over the [sweep] grids with baseline comparisons"),
             &sweep_args);
  add_common(app.add_subcommand(
                 "bench", "time the sequence-form and strategic-form pipelines"),
             &bench_args);
  add_common(app.add_subcommand("simulate",
                                "solve, then replay the equilibrium in Monte Carlo"),
             &sim_args);
  CLI::App* dump_cmd = app.add_subcommand(
      "dump", "write constraint and payoff matrices as triplets");
  add_common(dump_cmd, &dump_args);
  dump_cmd->add_option("--matrices", dump_path, "destination for the triplets");

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand("solve")) return dispatch(solve_args, "solve", "");
  if (app.got_subcommand("sweep")) return dispatch(sweep_args, "sweep", "");
  if (app.got_subcommand("bench")) return dispatch(bench_args, "bench", "");
  if (app.got_subcommand("simulate")) return dispatch(sim_args, "simulate", "");
  return dispatch(dump_args, "dump", dump_path);
}
