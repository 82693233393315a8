// Acceptance gates: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "konig/experiments.hpp"
#include "konig/process.hpp"
#include "konig/stats.hpp"

namespace {

using namespace konig;
namespace fs = std::filesystem;

double n_log_n(Vertex n) { return static_cast<double>(n) * std::log(static_cast<double>(n)); }
std::uint64_t ceil_steps(double x) { return static_cast<std::uint64_t>(std::ceil(x)); }

double median(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const std::size_t k = values.size() / 2;
  return values.size() % 2 ? values[k] : 0.5 * (values[k - 1] + values[k]);
}

std::string fixed(double x, int digits = 4) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << x;
  return out.str();
}

Trace simulate(Vertex n, std::uint64_t seed, Mode mode, StopCondition stop, std::vector<std::uint64_t> grid) {
  KonigProcess process(n, seed, mode);
  RecordOptions options;
  options.run_id = run_id_for(mode, n, seed);
  std::sort(grid.begin(), grid.end());
  return run_to(process, stop, grid, options);
}

const CheckpointRecord* row_at(const Trace& t, std::uint64_t m) {
  for (const auto& row : t.rows) {
    if (row.m == m) return &row;
  }
  return nullptr;
}

struct Gate {
  std::string name;
  std::function<bool(std::string&)> check;
};

// ---------------------------------------------------------------------------

bool oracle_equivalence(std::string& detail) {
  OracleCheckConfig c;
  c.trials = 1000;
  c.max_n = 9;
  c.exhaustive = true;
  c.exhaustive_max_n = 5;
  c.process_runs = 0;
  const auto start = std::chrono::steady_clock::now();
  const OracleCheckReport r = oracle_check(c);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  detail = std::to_string(r.graphs) + " graphs, " + std::to_string(r.pairs) + " absent pairs, " +
           std::to_string(r.mismatches) + " mismatches, " + fixed(seconds, 1) + " s";
  if (r.mismatches) detail += "; first: " + r.first_failure;
  return r.mismatches == 0 && r.graphs >= 1000 && seconds < 120.0;
}

bool step_certification(std::string& detail) {
  OracleCheckConfig c;
  c.trials = 0;
  c.exhaustive = false;
  c.process_runs = 200;
  c.process_n = 8;
  const OracleCheckReport r = oracle_check(c);
  detail = std::to_string(r.process_runs) + " runs at n=8, " + std::to_string(r.process_steps) + " steps, " +
           std::to_string(r.mismatches) + " violations";
  if (r.mismatches) detail += "; first: " + r.first_failure;
  return r.mismatches == 0 && r.process_runs == 200 && r.process_steps == 200 * 28;
}

bool deterministic_finale(std::string& detail) {
  std::size_t runs = 0;
  std::size_t bad = 0;
  for (Vertex n : {2, 4, 6, 8, 16, 32, 64, 128, 256}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const Trace t = simulate(n, seed, Mode::Konig, StopCondition::exhausted(), {});
      ++runs;
      const bool ok = t.exhausted && t.final_nu == static_cast<std::size_t>(n / 2) &&
                      t.final_cover_size == std::optional<std::size_t>(static_cast<std::size_t>(n / 2));
      if (!ok) ++bad;
    }
  }
  detail = std::to_string(runs) + " complete runs, " + std::to_string(bad) + " without nu = n/2 and a cover of size n/2";
  return bad == 0;
}

bool perfect_matching_delay(std::string& detail) {
  const Vertex n = 2048;
  std::vector<double> ratios;
  double slowest = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto start = std::chrono::steady_clock::now();
    const Trace t = simulate(n, seed, Mode::Konig, StopCondition::first_perfect_matching(), {});
    slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    ratios.push_back(t.hitting.perfect_matching ? static_cast<double>(*t.hitting.perfect_matching) / n_log_n(n)
                                                : std::numeric_limits<double>::infinity());
  }
  const double med = median(ratios);
  const double low = *std::min_element(ratios.begin(), ratios.end());
  detail = "median tau_pm/(n ln n) = " + fixed(med) + " (heuristic 0.75), min = " + fixed(low) +
           ", slowest run " + fixed(slowest, 2) + " s";
  return med >= 0.55 && med <= 1.00 && low > 0.5143 && slowest < 60.0;
}

bool isolates_persist(std::string& detail) {
  const Vertex n = 2048;
  const std::uint64_t step = ceil_steps((0.5 + 1.0 / 70.0) * n_log_n(n));
  int with_isolates = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Trace t = simulate(n, seed, Mode::Konig, StopCondition::at_step(step), {step});
    if (row_at(t, step)->isolates > 0) ++with_isolates;
  }
  detail = std::to_string(with_isolates) + "/20 runs have isolates at m = " + std::to_string(step);
  return with_isolates >= 18;
}

bool isolates_at_three_eighths(std::string& detail) {
  const Vertex n = 4096;
  const std::uint64_t step = ceil_steps(0.375 * n_log_n(n));
  const double need = 0.5 * std::pow(static_cast<double>(n), 0.25);
  int enough = 0;
  std::vector<double> counts;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Trace t = simulate(n, seed, Mode::Konig, StopCondition::at_step(step), {step});
    const auto isolates = row_at(t, step)->isolates;
    counts.push_back(static_cast<double>(isolates));
    if (static_cast<double>(isolates) >= need) ++enough;
  }
  detail = std::to_string(enough) + "/20 runs have >= " + fixed(need, 2) + " isolates at m = " + std::to_string(step) +
           " (median " + fixed(median(counts), 1) + ")";
  return enough >= 16;
}

bool unique_cover(std::string& detail) {
  int unique = 0;
  int runs = 0;
  for (Vertex n : {512, 1024}) {
    const std::uint64_t step = std::min(ceil_steps(4.0 * n_log_n(n)), pair_count(static_cast<std::uint64_t>(n)));
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const Trace t = simulate(n, seed, Mode::Konig, StopCondition::at_step(step), {step});
      ++runs;
      if (row_at(t, step)->unique_cover.value_or(false)) ++unique;
    }
  }
  detail = std::to_string(unique) + "/" + std::to_string(runs) + " runs have a unique minimum cover at ceil(4 n ln n)";
  return unique * 10 >= runs * 8;
}

bool missing_pairs_linear(std::string& detail) {
  std::map<Vertex, double> medians;
  for (Vertex n : {128, 256, 512, 1024}) {
    std::vector<double> per_n;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const Trace t = simulate(n, seed, Mode::Konig, StopCondition::exhausted(), {});
      per_n.push_back(t.final_missing_cover_pairs ? static_cast<double>(*t.final_missing_cover_pairs) / n
                                                  : std::nan(""));
    }
    medians[n] = median(per_n);
  }
  detail = "median missing/n:";
  for (const auto& [n, m] : medians) detail += " n=" + std::to_string(n) + ": " + fixed(m, 3);
  return medians[1024] <= 2.0 * medians[128];
}

bool cover_union_concentration(std::string& detail) {
  const Vertex n = 2048;
  const std::uint64_t lo = ceil_steps(static_cast<double>(n) * std::sqrt(std::log(static_cast<double>(n))));
  const std::uint64_t hi = static_cast<std::uint64_t>(std::floor(2.0 * n_log_n(n)));
  std::vector<double> fractions;
  std::uint64_t window = 0;
  std::uint64_t flexible = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Trace t = simulate(n, seed, Mode::Konig, StopCondition::at_step(hi), checkpoint_grid(n, 0, true));
    for (const auto& row : t.rows) {
      if (row.m >= lo && row.m <= hi) fractions.push_back(static_cast<double>(*row.d_size) / n);
    }
    window += t.flexible_window_steps;
    flexible += t.flexible_steps;
  }
  const double med = median(fractions);
  detail = "median |D|/n = " + fixed(med) + " over " + std::to_string(fractions.size()) +
           " checkpoints; phi=0.05 flexible fraction " + fixed(static_cast<double>(flexible) / window) +
           " (asymptotic phi exceeds 1/2 at this size)";
  return med <= 0.55;
}

bool erdos_renyi_baseline(std::string& detail) {
  const Vertex n = 4096;
  const double last = 0.4 * n_log_n(n);
  const std::uint64_t stop = ceil_steps(n_log_n(n));
  std::map<std::uint64_t, double> mean_isolates;
  std::vector<double> ratios;
  const int seeds = 10;
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    const Trace t = simulate(n, seed, Mode::ErdosRenyi, StopCondition::at_step(stop), checkpoint_grid(n, 0, false));
    for (const auto& row : t.rows) {
      if (static_cast<double>(row.m) <= last) mean_isolates[row.m] += static_cast<double>(row.isolates) / seeds;
    }
    ratios.push_back(t.hitting.no_isolates ? static_cast<double>(*t.hitting.no_isolates) / n_log_n(n)
                                           : std::numeric_limits<double>::infinity());
  }
  double worst = 0.0;
  std::uint64_t worst_m = 0;
  for (const auto& [m, mean] : mean_isolates) {
    const double expected = n * std::exp(-2.0 * static_cast<double>(m) / n);
    const double deviation = std::abs(mean - expected) / expected;
    if (deviation > worst) {
      worst = deviation;
      worst_m = m;
    }
  }
  const double med = median(ratios);
  detail = "max relative deviation of mean isolates from n e^{-2m/n} = " + fixed(worst) + " (at m = " +
           std::to_string(worst_m) + ", " + std::to_string(mean_isolates.size()) +
           " checkpoints); median tau_no_isolates/(n ln n) = " + fixed(med);
  return worst <= 0.20 && med >= 0.47 && med <= 0.53;
}

std::map<std::string, std::string> sweep_outputs(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().filename() == "meta.jsonl") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    out[fs::relative(entry.path(), dir).string()] = text.str();
  }
  return out;
}

bool determinism_and_schema(std::string& detail) {
  const bool headers =
      kTraceHeader ==
          "run_id,seed,n,m,nu,d_size,unique_cover,isolates,quasi_isolates,helpers,flexible,unhelpful,"
          "accepted_total,cover_incident_census,exact_census,window_weight" &&
      kAggregateHeader ==
          "run_id,seed,n,mode,status,final_step,exhausted,final_nu,tau_pm,tau_unique_cover,tau_no_isolates,"
          "tau_no_j,tau_pm_over_nlogn,final_cover_size,missing_cover_pairs,missing_cover_pairs_over_n,"
          "flexible_window_steps,flexible_fraction";
  bool same = true;
  std::size_t files = 0;
  for (Mode mode : {Mode::Konig, Mode::ErdosRenyi}) {
    ExperimentConfig c;
    c.ns = {128, 256};
    c.seeds = {1, 2, 3, 4};
    c.mode = mode;
    c.landmark_checkpoints = true;
    if (mode == Mode::Konig) c.census = CensusMode::Lower;
    const fs::path base = fs::temp_directory_path() / "konig_acceptance";
    std::map<std::string, std::string> reference;
    for (unsigned jobs : {1u, 3u}) {
      c.jobs = jobs;
      c.out_dir = base / ("jobs" + std::to_string(jobs));
      fs::remove_all(c.out_dir);
      std::ostringstream out, err;
      if (cmd_sweep(c, out, err) != 0) {
        detail = "sweep failed: " + err.str();
        return false;
      }
      const auto outputs = sweep_outputs(c.out_dir);
      if (jobs == 1) {
        reference = outputs;
        files += outputs.size();
      } else if (outputs != reference) {
        same = false;
      }
    }
    fs::remove_all(base);
  }
  detail = std::to_string(files) + " CSV files compared between 1 and 3 jobs: " + (same ? "identical" : "DIFFERENT") +
           "; headers " + (headers ? "match" : "DIFFER");
  return same && headers && files == 18;
}

}  // namespace

int main() {
  const std::vector<Gate> gates{
      {"oracle equivalence", oracle_equivalence},
      {"step certification", step_certification},
      {"deterministic finale", deterministic_finale},
      {"perfect-matching delay", perfect_matching_delay},
      {"isolates persist", isolates_persist},
      {"isolates at 3/8 n ln n", isolates_at_three_eighths},
      {"unique cover by 4 n ln n", unique_cover},
      {"missing cover pairs linear", missing_pairs_linear},
      {"cover-union concentration", cover_union_concentration},
      {"ER baseline", erdos_renyi_baseline},
      {"determinism and schema", determinism_and_schema},
  };
  int failures = 0;
  for (const auto& gate : gates) {
    std::string detail;
    bool ok = false;
    try {
      ok = gate.check(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++failures;
    std::cout << (ok ? "PASS " : "FAIL ") << gate.name << ": " << detail << std::endl;
  }
  std::cout << (gates.size() - static_cast<std::size_t>(failures)) << "/" << gates.size() << " criteria passed"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
