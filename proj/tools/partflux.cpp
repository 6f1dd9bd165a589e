// SPDX-License-Identifier: Apache-2.0
//
// Experiment driver: train, solve, compare and bench subcommands. Every configuration key
// can be given as --key value and overrides the value from --config.
//

#include <iostream>
#include <map>
#include <string>
#include <CLI11.hpp>
#include "partflux/error.hpp"
#include "partflux/experiment.hpp"

namespace
{

const char *const kKeys[] = {"grid",          "scenario",     "kappa1",     "kappa2",
                             "scheme",        "dt",           "eps",        "patch_size",
                             "train_kappa1",  "train_kappa2", "bootstrap",  "initial",
                             "spacing_factor", "width_factor", "operators", "output",
                             "repeats",       "seed"};

struct CommandArgs
{
  std::string config_path;
  std::map<std::string, std::string> overrides;
};

CLI::App *AddCommand(CLI::App &app, const std::string &name, const std::string &about,
                     CommandArgs &args)
{
  CLI::App *cmd = app.add_subcommand(name, about);
  cmd->add_option("-c,--config", args.config_path, "key = value configuration file")
      ->check(CLI::ExistingFile);
  for (const char *key : kKeys)
  {
    cmd->add_option_function<std::string>(
        std::string("--") + key,
        [&args, key](const std::string &v) { args.overrides[key] = v; },
        "override of the configuration key");
  }
  return cmd;
}

partflux::RunConfig Resolve(const CommandArgs &args)
{
  partflux::RunConfig config =
      args.config_path.empty() ? partflux::RunConfig{} : partflux::LoadConfig(args.config_path);
  for (const auto &[key, value] : args.overrides)
  {
    config.Set(key, value);
  }
  config.Validate();
  return config;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Partitioned transmission-problem solvers with DMD flux surrogates"};
  app.require_subcommand(1);
  CommandArgs train, solve, compare, bench;
  CLI::App *train_cmd = AddCommand(app, "train", "train flux operators offline", train);
  CLI::App *solve_cmd = AddCommand(app, "solve", "run one scheme and write its solution", solve);
  CLI::App *compare_cmd =
      AddCommand(app, "compare", "errors and speedups against the monolithic run", compare);
  CLI::App *bench_cmd = AddCommand(app, "bench", "median synchronize times", bench);
  CLI11_PARSE(app, argc, argv);

  try
  {
    if (train_cmd->parsed())
    {
      const partflux::RunConfig config = Resolve(train);
      for (const auto &r : partflux::TrainCommand(config))
      {
        std::cout << r.file << " mu=(" << r.mu1 << ", " << r.mu2 << ") rank=" << r.rank << "\n";
      }
    }
    else if (solve_cmd->parsed())
    {
      const partflux::RunConfig config = Resolve(solve);
      const auto result = partflux::SolveCommand(config);
      std::cout << result.scheme << " t=" << result.final_state.t
                << " loop_seconds=" << result.loop_seconds << "\n";
    }
    else if (compare_cmd->parsed())
    {
      const partflux::RunConfig config = Resolve(compare);
      std::cout << "scheme,E0,E1,online_seconds,speedup\n";
      for (const auto &row : partflux::CompareCommand(config))
      {
        std::cout << row.scheme << "," << row.error.l2 << "," << row.error.h1 << ","
                  << row.online_seconds << "," << row.speedup << "\n";
      }
    }
    else if (bench_cmd->parsed())
    {
      const partflux::RunConfig config = Resolve(bench);
      std::cout << "scheme,sync_seconds,loop_seconds\n";
      for (const auto &row : partflux::BenchCommand(config))
      {
        std::cout << row.scheme << "," << row.sync_seconds << "," << row.loop_seconds << "\n";
      }
    }
  }
  catch (const partflux::Error &e)
  {
    std::cerr << "error: " << partflux::ToString(e.kind()) << ": " << e.what() << "\n";
    return 1;
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: Internal: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
