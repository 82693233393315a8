// konig: simulate the Konig graph process and check it against brute force.
//
//   konig run --n 1024 --seed 3 --stop pm --out runs/one
//   konig sweep --n 128,256,512 --seeds 10 --jobs 4 --out runs/sweep
//   konig oracle-check --trials 1000 --max-n 9

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "konig/errors.hpp"
#include "konig/experiments.hpp"

namespace {

struct SharedFlags {
  std::string n = "";
  std::string seeds = "";
  std::uint64_t seed = 1;
  std::string mode = "konig";
  std::string phi = "0.05";
  std::uint64_t checkpoint_every = 0;
  bool landmark_checkpoints = false;
  std::string census = "off";
  std::string stop = "exhausted";
  std::string out = "out";
  unsigned jobs = 1;
  bool allow_odd = false;
};

void add_shared(CLI::App* app, SharedFlags& flags, bool sweep) {
  app->add_option("--n", flags.n, sweep ? "comma-separated vertex counts" : "vertex count")->required();
  if (sweep) {
    app->add_option("--seeds", flags.seeds, "K for seeds 1..K, or a comma-separated list")->required();
  } else {
    app->add_option("--seed", flags.seed, "64-bit seed of the pair order");
  }
  app->add_option("--mode", flags.mode, "konig or er")->check(CLI::IsMember({"konig", "er"}));
  app->add_option("--phi", flags.phi, "flexibility margin in [0, 0.5], or 'asymptotic'");
  app->add_option("--checkpoint-every", flags.checkpoint_every, "row spacing in steps (default ceil(n/10))");
  app->add_flag("--checkpoints-paper", flags.landmark_checkpoints, "also record the landmark steps");
  app->add_option("--census", flags.census, "off, lower or exact")->check(CLI::IsMember({"off", "lower", "exact"}));
  app->add_option("--stop", flags.stop, "exhausted, pm or m=<int>");
  app->add_option("--out", flags.out, "output directory");
  app->add_option("--jobs", flags.jobs, "concurrent runs");
  app->add_flag("--allow-odd", flags.allow_odd, "permit odd n");
}

konig::ExperimentConfig to_config(const SharedFlags& flags, bool sweep) {
  konig::ExperimentConfig config;
  config.ns = konig::parse_n_list(flags.n);
  if (sweep) {
    config.seeds = konig::parse_seeds(flags.seeds);
  } else {
    config.seeds = {flags.seed};
  }
  config.mode = konig::parse_mode(flags.mode);
  config.phi = konig::parse_phi(flags.phi, config.ns.front());
  config.checkpoint_every = flags.checkpoint_every;
  config.landmark_checkpoints = flags.landmark_checkpoints;
  config.census = konig::parse_census(flags.census);
  config.stop = konig::parse_stop(flags.stop);
  config.out_dir = flags.out;
  config.jobs = flags.jobs;
  config.allow_odd = flags.allow_odd;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Konig graph process simulator"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML file; keys go under [run], [sweep] or [oracle-check] and mirror the flags");
  app.fallthrough();

  SharedFlags run_flags;
  auto* run = app.add_subcommand("run", "simulate one process and write trace.csv and meta.jsonl");
  add_shared(run, run_flags, false);

  SharedFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "simulate every (n, seed) combination and write aggregate.csv");
  add_shared(sweep, sweep_flags, true);

  konig::OracleCheckConfig oracle;
  std::string dump;
  auto* check = app.add_subcommand("oracle-check", "compare the engine with exhaustive search on small graphs");
  check->add_option("--trials", oracle.trials, "random graphs");
  check->add_option("--max-n", oracle.max_n, "largest random graph")->check(CLI::Range(2, 14));
  check->add_option("--seed", oracle.seed, "seed of the random suite");
  check->add_option("--process-runs", oracle.process_runs, "full process runs checked step by step");
  check->add_option("--process-n", oracle.process_n, "vertex count of those runs")->check(CLI::Range(2, 10));
  check->add_flag("!--no-exhaustive", oracle.exhaustive, "skip the all-graphs suite");
  check->add_flag("--inject-fault", oracle.inject_fault, "negate unit clauses to exercise failure reporting");
  check->add_option("--dump", dump, "file receiving the first counterexample");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return konig::cmd_run(to_config(run_flags, false), std::cout, std::cerr);
    if (*sweep) return konig::cmd_sweep(to_config(sweep_flags, true), std::cout, std::cerr);
    if (!dump.empty()) oracle.dump_path = dump;
    return konig::cmd_oracle_check(oracle, std::cout, std::cerr);
  } catch (const konig::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
