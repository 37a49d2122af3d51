#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "expfit/config.hpp"
#include "expfit/errors.hpp"
#include "expfit/experiments.hpp"
#include "expfit/parallel.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  long long trials = 0;
  bool trials_set = false;
  int threads = 0;
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config_path, "key=value configuration file");
  sub->add_option("--out", args.out_path, "CSV output path (default: stdout)");
  sub->add_option("--seed", args.seed, "RNG seed (overrides the config)")
      ->each([&](const std::string&) { args.seed_set = true; });
  sub->add_option("--trials", args.trials, "trials per setting (overrides the config)")
      ->each([&](const std::string&) { args.trials_set = true; });
  sub->add_option("--threads", args.threads, "worker threads (0 = runtime default)");
}

int run(const std::string& name, const CommonArgs& args) {
  expfit::Config cfg;
  if (!args.config_path.empty()) cfg = expfit::Config::parse_file(args.config_path);
  if (args.seed_set) cfg.set("seed", std::to_string(args.seed));
  if (args.trials_set) cfg.set("trials", std::to_string(args.trials));
  expfit::par::set_threads(args.threads);

  const expfit::RunResult result = expfit::run_subcommand(name, cfg);
  if (!result.message.empty()) std::cerr << result.message << "\n";
  if (args.out_path.empty()) {
    std::cout << result.csv;
  } else {
    std::ofstream out(args.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot open output path: " << args.out_path << "\n";
      return 2;
    }
    out << result.csv;
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "expfit: non-uniform sampling of exponential polynomials, Fourier "
      "decoupling of shift mixtures, and the associated stability certificates"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"span", "metric span and covering report for a points file"},
      {"bounds", "a-priori stability bounds for a sampling configuration"},
      {"fit", "constrained least-squares fit of an exponential polynomial"},
      {"decouple", "reconstruct a shift mixture from Fourier samples"},
      {"exp1", "error vs interior spacing d (fixed endpoints)"},
      {"exp2", "error vs sample count n (fixed range)"},
      {"example3", "worked BOX + DELTAPAIR example across eta values"},
  };

  std::vector<CommonArgs> args(commands.size());
  for (std::size_t i = 0; i < commands.size(); ++i)
    add_common(app.add_subcommand(commands[i].first, commands[i].second), args[i]);

  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < commands.size(); ++i) {
    if (app.got_subcommand(commands[i].first)) {
      try {
        return run(commands[i].first, args[i]);
      } catch (const expfit::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
      } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
      }
    }
  }
  return 2;
}
