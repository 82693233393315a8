#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "konig/errors.hpp"
#include "konig/experiments.hpp"
#include "konig/stats.hpp"

namespace konig {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::size_t field_count(const std::string& line) { return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1; }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("konig_test_" + name);
  fs::remove_all(dir);
  return dir;
}

TEST(Schema, GoldenHeaders) {
  EXPECT_EQ(kTraceHeader,
            "run_id,seed,n,m,nu,d_size,unique_cover,isolates,quasi_isolates,helpers,flexible,unhelpful,"
            "accepted_total,cover_incident_census,exact_census,window_weight");
  EXPECT_EQ(kAggregateHeader,
            "run_id,seed,n,mode,status,final_step,exhausted,final_nu,tau_pm,tau_unique_cover,tau_no_isolates,"
            "tau_no_j,tau_pm_over_nlogn,final_cover_size,missing_cover_pairs,missing_cover_pairs_over_n,"
            "flexible_window_steps,flexible_fraction");
}

TEST(Schema, RowFormatting) {
  CheckpointRecord r;
  r.run_id = "konig-n4-s1";
  r.seed = 1;
  r.n = 4;
  r.m = 3;
  r.nu = 1;
  r.d_size = 2;
  r.unique_cover = false;
  r.isolates = 1;
  r.helpers = 1;
  r.flexible = true;
  r.unhelpful = false;
  r.accepted_total = 2;
  r.window_weight = 1.0 / 3.0;
  EXPECT_EQ(csv_row(r), "konig-n4-s1,1,4,3,1,2,0,1,0,1,1,0,2,,,0.333333");
  CheckpointRecord er;
  er.run_id = "er-n4-s1";
  EXPECT_EQ(csv_row(er), "er-n4-s1,0,0,0,0,,,0,0,0,,,0,,,");
  EXPECT_EQ(field_count(csv_row(er)), field_count(std::string(kTraceHeader)));
  EXPECT_EQ(format_rate(0.5), "0.500000");
}

TEST(Schema, FailedAggregateRowKeepsTheColumnCount) {
  RunSummary failed;
  failed.run_id = "konig-n8-s2";
  failed.seed = 2;
  failed.n = 8;
  const std::string row = aggregate_row(failed);
  EXPECT_EQ(row.substr(0, 28), "konig-n8-s2,2,8,konig,failed");
  EXPECT_EQ(field_count(row), field_count(std::string(kAggregateHeader)));
}

TEST(Parsers, Stop) {
  EXPECT_EQ(parse_stop("exhausted").kind, StopCondition::Kind::Exhausted);
  EXPECT_EQ(parse_stop("pm").kind, StopCondition::Kind::FirstPerfectMatching);
  const StopCondition at = parse_stop("m=250");
  EXPECT_EQ(at.kind, StopCondition::Kind::AtStep);
  EXPECT_EQ(at.step, 250u);
  EXPECT_THROW(parse_stop("m="), ConfigError);
  EXPECT_THROW(parse_stop("m=-3"), ConfigError);
  EXPECT_THROW(parse_stop("forever"), ConfigError);
}

TEST(Parsers, SeedsAndSizes) {
  EXPECT_EQ(parse_seeds("3"), (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_EQ(parse_seeds("7,5"), (std::vector<std::uint64_t>{7, 5}));
  EXPECT_THROW(parse_seeds("x"), ConfigError);
  EXPECT_EQ(parse_n_list("128,256"), (std::vector<Vertex>{128, 256}));
  EXPECT_THROW(parse_n_list("12a"), ConfigError);
}

TEST(Parsers, PhiAndCensus) {
  EXPECT_DOUBLE_EQ(parse_phi("0.1", 64), 0.1);
  EXPECT_GT(parse_phi("asymptotic", 64), 0.5);
  EXPECT_THROW(parse_phi("", 64), ConfigError);
  EXPECT_THROW(parse_phi("0.1x", 64), ConfigError);
  EXPECT_EQ(parse_census("lower"), CensusMode::Lower);
  EXPECT_THROW(parse_census("all"), ConfigError);
  EXPECT_EQ(parse_mode("er"), Mode::ErdosRenyi);
  EXPECT_THROW(parse_mode("gnp"), ConfigError);
  EXPECT_EQ(run_id_for(Mode::Konig, 256, 1), "konig-n256-s1");
}

TEST(Validate, RejectsBadConfigurations) {
  ExperimentConfig c;
  c.ns = {64};
  c.seeds = {1};
  EXPECT_NO_THROW(validate(c));
  auto expect_bad = [&](auto change) {
    ExperimentConfig d = c;
    change(d);
    EXPECT_THROW(validate(d), ConfigError);
  };
  expect_bad([](ExperimentConfig& d) { d.ns.clear(); });
  expect_bad([](ExperimentConfig& d) { d.seeds.clear(); });
  expect_bad([](ExperimentConfig& d) { d.ns = {63}; });
  expect_bad([](ExperimentConfig& d) { d.ns = {1}; });
  expect_bad([](ExperimentConfig& d) { d.seeds = {2, 2}; });
  expect_bad([](ExperimentConfig& d) { d.phi = 0.6; });
  expect_bad([](ExperimentConfig& d) { d.jobs = 0; });
  expect_bad([](ExperimentConfig& d) {
    d.ns = {128};
    d.census = CensusMode::Exact;
  });
  expect_bad([](ExperimentConfig& d) {
    d.mode = Mode::ErdosRenyi;
    d.census = CensusMode::Lower;
  });
  ExperimentConfig odd = c;
  odd.ns = {63};
  odd.allow_odd = true;
  EXPECT_NO_THROW(validate(odd));
}

TEST(Commands, RunWritesTraceAndMeta) {
  ExperimentConfig c;
  c.ns = {64};
  c.seeds = {3};
  c.landmark_checkpoints = true;
  c.census = CensusMode::Exact;
  c.out_dir = scratch("run");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run(c, out, err), 0) << err.str();
  const auto trace = lines_of(slurp(c.out_dir / "trace.csv"));
  ASSERT_GE(trace.size(), 2u);
  EXPECT_EQ(trace[0], kTraceHeader);
  for (std::size_t i = 1; i < trace.size(); ++i) {
    EXPECT_EQ(field_count(trace[i]), 16u);
    EXPECT_EQ(trace[i].rfind("konig-n64-s3,3,64,", 0), 0u);
  }
  const auto meta = lines_of(slurp(c.out_dir / "meta.jsonl"));
  ASSERT_EQ(meta.size(), 1u);
  const auto json = nlohmann::json::parse(meta[0]);
  EXPECT_EQ(json["seed"], 3);
  EXPECT_EQ(json["version"], std::string(kVersion));
  EXPECT_EQ(json["rng"], std::string(kRngIdentity));
  EXPECT_EQ(json["final_nu"], 32);
  EXPECT_TRUE(json.contains("wall_seconds"));
  EXPECT_NE(out.str().find("tau_pm="), std::string::npos);
  fs::remove_all(c.out_dir);
}

TEST(Commands, RunRejectsAListOfSeeds) {
  ExperimentConfig c;
  c.ns = {64};
  c.seeds = {1, 2};
  c.out_dir = scratch("run_bad");
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(c, out, err), 2);
  c.seeds = {1};
  c.phi = asymptotic_phi(64);
  EXPECT_EQ(cmd_run(c, out, err), 2);
  EXPECT_FALSE(fs::exists(c.out_dir / "trace.csv"));
}

std::map<std::string, std::string> sweep_files(const ExperimentConfig& c) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(c.out_dir)) {
    if (entry.is_regular_file() && entry.path().filename() != "meta.jsonl") {
      out[fs::relative(entry.path(), c.out_dir).string()] = slurp(entry.path());
    }
  }
  return out;
}

TEST(Commands, SweepIsByteIdenticalAcrossJobCounts) {
  ExperimentConfig c;
  c.ns = {128, 256};
  c.seeds = {1, 2, 3};
  c.landmark_checkpoints = true;
  c.out_dir = scratch("sweep1");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_sweep(c, out, err), 0) << err.str();
  const auto serial = sweep_files(c);
  EXPECT_EQ(serial.size(), 7u);
  const auto aggregate = lines_of(serial.at("aggregate.csv"));
  ASSERT_EQ(aggregate.size(), 7u);
  EXPECT_EQ(aggregate[0], kAggregateHeader);
  EXPECT_EQ(aggregate[1].rfind("konig-n128-s1,1,128,konig,ok,", 0), 0u);
  EXPECT_EQ(aggregate[6].rfind("konig-n256-s3,3,256,konig,ok,", 0), 0u);
  EXPECT_EQ(lines_of(slurp(c.out_dir / "meta.jsonl")).size(), 6u);

  ExperimentConfig parallel = c;
  parallel.jobs = 4;
  parallel.out_dir = scratch("sweep4");
  ASSERT_EQ(cmd_sweep(parallel, out, err), 0) << err.str();
  EXPECT_EQ(sweep_files(parallel), serial);
  fs::remove_all(c.out_dir);
  fs::remove_all(parallel.out_dir);
}

TEST(Commands, ErdosRenyiSweepLeavesCoverColumnsEmpty) {
  ExperimentConfig c;
  c.ns = {32};
  c.seeds = {1};
  c.mode = Mode::ErdosRenyi;
  c.out_dir = scratch("sweep_er");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_sweep(c, out, err), 0) << err.str();
  const auto trace = lines_of(slurp(c.out_dir / "traces" / "er-n32-s1.csv"));
  ASSERT_GE(trace.size(), 2u);
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (std::size_t comma; (comma = trace[1].find(',', start)) != std::string::npos; start = comma + 1) {
    fields.push_back(trace[1].substr(start, comma - start));
  }
  fields.push_back(trace[1].substr(start));
  ASSERT_EQ(fields.size(), 16u);
  for (std::size_t i : {5, 6, 10, 11, 13, 14, 15}) EXPECT_TRUE(fields[i].empty()) << i;
  EXPECT_FALSE(fields[4].empty());
  fs::remove_all(c.out_dir);
}

TEST(OracleCheck, SmallSuitePasses) {
  OracleCheckConfig c;
  c.trials = 100;
  c.process_runs = 10;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_oracle_check(c, out, err), 0) << err.str();
  EXPECT_NE(out.str().find(" 0 mismatches"), std::string::npos);
}

TEST(OracleCheck, InjectedFaultIsCaughtAndDumped) {
  OracleCheckConfig c;
  c.trials = 50;
  c.process_runs = 0;
  c.inject_fault = true;
  const fs::path dir = scratch("fault");
  fs::create_directories(dir);
  c.dump_path = dir / "counterexample.txt";
  std::ostringstream out, err;
  EXPECT_EQ(cmd_oracle_check(c, out, err), 1);
  const Graph g = parse_graph_dump(slurp(*c.dump_path));
  EXPECT_GE(g.n(), 2);
  fs::remove_all(dir);
}

TEST(OracleCheck, EmptySuiteWarns) {
  OracleCheckConfig c;
  c.trials = 0;
  c.exhaustive = false;
  c.process_runs = 0;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_oracle_check(c, out, err), 0);
  EXPECT_NE(out.str().find("warning: 0 cases checked"), std::string::npos);
  c.max_n = 40;
  EXPECT_EQ(cmd_oracle_check(c, out, err), 2);
}

int run_cli(const std::string& args) {
  const std::string command = std::string(KONIG_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("cli");
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli(""), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("run --n 64 --seed 1 --phi asymptotic --out " + dir.string()), 2);
  EXPECT_EQ(run_cli("run --n 63 --seed 1 --out " + dir.string()), 2);
  EXPECT_EQ(run_cli("run --n 64 --seed 1 --stop pm --out " + dir.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "trace.csv"));
  EXPECT_EQ(run_cli("sweep --n 32 --seeds 2 --jobs 2 --out " + dir.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "aggregate.csv"));
  EXPECT_EQ(run_cli("oracle-check --trials 20 --process-runs 2"), 0);
  EXPECT_EQ(run_cli("oracle-check --trials 20 --process-runs 0 --inject-fault"), 1);
  fs::remove_all(dir);
}

TEST(Cli, ConfigFile) {
  const fs::path dir = scratch("cli_config");
  fs::create_directories(dir);
  {
    std::ofstream config(dir / "sweep.toml");
    config << "[sweep]\nn = \"32\"\nseeds = \"2\"\nout = \"" << (dir / "out").string() << "\"\n";
  }
  EXPECT_EQ(run_cli("sweep --config " + (dir / "sweep.toml").string()), 0);
  EXPECT_EQ(lines_of(slurp(dir / "out" / "aggregate.csv")).size(), 3u);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace konig
