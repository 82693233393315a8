#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "konig/graph.hpp"
#include "konig/process.hpp"
#include "konig/trace.hpp"

namespace konig {

inline constexpr std::string_view kVersion = "1.0.0";

struct ExperimentConfig {
  std::vector<Vertex> ns;
  std::vector<std::uint64_t> seeds;
  Mode mode = Mode::Konig;
  double phi = 0.05;
  std::uint64_t checkpoint_every = 0;  // 0: ceil(n/10)
  bool landmark_checkpoints = false;      // add the landmark steps to the grid
  CensusMode census = CensusMode::Off;
  StopCondition stop = StopCondition::exhausted();
  std::filesystem::path out_dir = "out";
  unsigned jobs = 1;
  bool allow_odd = false;
};

/// Throws ConfigError on empty lists, odd n without allow_odd, repeated
/// seeds or a phi outside [0, 1/2].
void validate(const ExperimentConfig& config);

/// "exhausted", "pm" or "m=<int>".
StopCondition parse_stop(std::string_view text);
CensusMode parse_census(std::string_view text);
/// A number, or "asymptotic" for (ln n)^(-1/10).
double parse_phi(std::string_view text, Vertex n);
/// "K" means seeds 1..K; "a,b,c" is an explicit list.
std::vector<std::uint64_t> parse_seeds(std::string_view text);
std::vector<Vertex> parse_n_list(std::string_view text);

std::string run_id_for(Mode mode, Vertex n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Output formats. Integers in decimal, rates with six decimals, flags as 0/1,
// inapplicable fields empty.

inline constexpr std::string_view kTraceHeader =
    "run_id,seed,n,m,nu,d_size,unique_cover,isolates,quasi_isolates,helpers,flexible,unhelpful,"
    "accepted_total,cover_incident_census,exact_census,window_weight";

inline constexpr std::string_view kAggregateHeader =
    "run_id,seed,n,mode,status,final_step,exhausted,final_nu,tau_pm,tau_unique_cover,tau_no_isolates,tau_no_j,"
    "tau_pm_over_nlogn,final_cover_size,missing_cover_pairs,missing_cover_pairs_over_n,flexible_window_steps,"
    "flexible_fraction";

std::string format_rate(double value);
std::string csv_row(const CheckpointRecord& row);
void write_trace_csv(std::ostream& out, const Trace& trace);

struct RunSummary {
  std::string run_id;
  std::uint64_t seed = 0;
  Vertex n = 0;
  Mode mode = Mode::Konig;
  std::optional<Trace> trace;  // empty when the run failed
  std::string error;
};

std::string aggregate_row(const RunSummary& run);
/// One JSON object: seed, RNG identity, version, mode, phi, wall time, hitting times.
std::string meta_line(const Trace& trace, double wall_seconds);
/// Human-readable hitting times of one run.
std::string summary_line(const Trace& trace);

std::vector<std::uint64_t> checkpoints_for(const ExperimentConfig& config, Vertex n);
Trace run_single(const ExperimentConfig& config, Vertex n, std::uint64_t seed);

/// Exit codes: 0 ok, 1 a run failed, 2 invalid configuration.
int cmd_run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

// ---------------------------------------------------------------------------
// Oracle equivalence harness

struct OracleCheckConfig {
  std::uint64_t trials = 1000;
  Vertex max_n = 9;
  std::uint64_t seed = 1;
  bool exhaustive = true;        // also every graph with n <= exhaustive_max_n
  Vertex exhaustive_max_n = 5;
  std::uint64_t process_runs = 200;
  Vertex process_n = 8;
  bool inject_fault = false;     // negate the unit clauses of the cover constraints
  std::optional<std::filesystem::path> dump_path;
};

struct OracleCheckReport {
  std::uint64_t graphs = 0;
  std::uint64_t konig_graphs = 0;
  std::uint64_t pairs = 0;
  std::uint64_t process_runs = 0;
  std::uint64_t process_steps = 0;
  std::uint64_t mismatches = 0;
  std::string first_failure;         // empty when none
  std::optional<Graph> counterexample;
};

OracleCheckReport oracle_check(const OracleCheckConfig& config);
int cmd_oracle_check(const OracleCheckConfig& config, std::ostream& out, std::ostream& err);

}  // namespace konig
