#include "konig/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "konig/errors.hpp"
#include "konig/ke_cover.hpp"
#include "konig/matching.hpp"
#include "konig/oracle.hpp"
#include "konig/stats.hpp"

namespace konig {

namespace {

template <typename T>
T parse_number(std::string_view text, const char* what) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ConfigError(std::string("invalid ") + what + " '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = text.find(sep);
    out.push_back(text.substr(0, pos));
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  return out;
}

template <typename T>
std::string optional_field(const std::optional<T>& value) {
  return value ? std::to_string(*value) : std::string();
}

std::string flag_field(const std::optional<bool>& value) {
  if (!value) return {};
  return *value ? "1" : "0";
}

std::string csv_escape(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

double n_log_n(Vertex n) { return static_cast<double>(n) * std::log(static_cast<double>(n)); }

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

void validate(const ExperimentConfig& config) {
  if (config.ns.empty()) throw ConfigError("no n given");
  if (config.seeds.empty()) throw ConfigError("no seeds given");
  for (Vertex n : config.ns) {
    if (n < 2) throw ConfigError("n must be at least 2, got " + std::to_string(n));
    if (n % 2 != 0 && !config.allow_odd) throw ConfigError("odd n=" + std::to_string(n) + " needs --allow-odd");
  }
  std::set<std::uint64_t> distinct(config.seeds.begin(), config.seeds.end());
  if (distinct.size() != config.seeds.size()) throw ConfigError("seeds must be distinct");
  if (!(config.phi >= 0.0 && config.phi <= 0.5)) {
    throw ConfigError("phi=" + std::to_string(config.phi) +
                      " is outside [0, 1/2]; the flexible threshold (1/2 + phi) n would exceed n");
  }
  if (config.jobs == 0) throw ConfigError("--jobs must be positive");
  if (config.census == CensusMode::Exact) {
    for (Vertex n : config.ns) {
      if (n > kExactCensusMaxN) throw ConfigError("exact census limited to n <= " + std::to_string(kExactCensusMaxN));
    }
  }
  if (config.census != CensusMode::Off && config.mode != Mode::Konig) {
    throw ConfigError("census applies to konig mode only");
  }
}

StopCondition parse_stop(std::string_view text) {
  if (text == "exhausted") return StopCondition::exhausted();
  if (text == "pm") return StopCondition::first_perfect_matching();
  if (text.starts_with("m=")) return StopCondition::at_step(parse_number<std::uint64_t>(text.substr(2), "stop step"));
  throw ConfigError("unknown stop '" + std::string(text) + "' (expected exhausted, pm or m=<int>)");
}

CensusMode parse_census(std::string_view text) {
  if (text == "off") return CensusMode::Off;
  if (text == "lower") return CensusMode::Lower;
  if (text == "exact") return CensusMode::Exact;
  throw ConfigError("unknown census '" + std::string(text) + "' (expected off, lower or exact)");
}

double parse_phi(std::string_view text, Vertex n) {
  if (text == "asymptotic") return asymptotic_phi(n);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) throw ConfigError("invalid phi '" + std::string(text) + "'");
  return value;
}

std::vector<std::uint64_t> parse_seeds(std::string_view text) {
  std::vector<std::uint64_t> out;
  if (text.find(',') == std::string_view::npos) {
    const auto count = parse_number<std::uint64_t>(text, "seed count");
    for (std::uint64_t s = 1; s <= count; ++s) out.push_back(s);
    return out;
  }
  for (auto part : split(text, ',')) out.push_back(parse_number<std::uint64_t>(part, "seed"));
  return out;
}

std::vector<Vertex> parse_n_list(std::string_view text) {
  std::vector<Vertex> out;
  for (auto part : split(text, ',')) out.push_back(parse_number<Vertex>(part, "n"));
  return out;
}

std::string run_id_for(Mode mode, Vertex n, std::uint64_t seed) {
  return std::string(to_string(mode)) + "-n" + std::to_string(n) + "-s" + std::to_string(seed);
}

// ---------------------------------------------------------------------------
// Formats

std::string format_rate(double value) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6) << value;
  return out.str();
}

std::string csv_row(const CheckpointRecord& row) {
  std::string out;
  auto add = [&](const std::string& field) {
    if (!out.empty()) out += ',';
    out += field;
  };
  out = csv_escape(row.run_id);
  add(std::to_string(row.seed));
  add(std::to_string(row.n));
  add(std::to_string(row.m));
  add(std::to_string(row.nu));
  add(optional_field(row.d_size));
  add(flag_field(row.unique_cover));
  add(std::to_string(row.isolates));
  add(std::to_string(row.quasi_isolates));
  add(std::to_string(row.helpers));
  add(flag_field(row.flexible));
  add(flag_field(row.unhelpful));
  add(std::to_string(row.accepted_total));
  add(optional_field(row.cover_incident_census));
  add(optional_field(row.exact_census));
  add(row.window_weight ? format_rate(*row.window_weight) : std::string());
  return out;
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << kTraceHeader << '\n';
  for (const auto& row : trace.rows) out << csv_row(row) << '\n';
}

std::string aggregate_row(const RunSummary& run) {
  std::vector<std::string> fields{csv_escape(run.run_id), std::to_string(run.seed), std::to_string(run.n),
                                  std::string(to_string(run.mode))};
  if (!run.trace) {
    fields.push_back("failed");
    fields.resize(18);
  } else {
    const Trace& t = *run.trace;
    fields.push_back("ok");
    fields.push_back(std::to_string(t.final_step));
    fields.push_back(t.exhausted ? "1" : "0");
    fields.push_back(std::to_string(t.final_nu));
    fields.push_back(optional_field(t.hitting.perfect_matching));
    fields.push_back(optional_field(t.hitting.unique_cover));
    fields.push_back(optional_field(t.hitting.no_isolates));
    fields.push_back(optional_field(t.hitting.no_j));
    fields.push_back(t.hitting.perfect_matching
                         ? format_rate(static_cast<double>(*t.hitting.perfect_matching) / n_log_n(run.n))
                         : std::string());
    fields.push_back(optional_field(t.final_cover_size));
    fields.push_back(optional_field(t.final_missing_cover_pairs));
    fields.push_back(t.final_missing_cover_pairs
                         ? format_rate(static_cast<double>(*t.final_missing_cover_pairs) / run.n)
                         : std::string());
    const bool konig = run.mode == Mode::Konig;
    fields.push_back(konig ? std::to_string(t.flexible_window_steps) : std::string());
    fields.push_back(konig && t.flexible_window_steps > 0
                         ? format_rate(static_cast<double>(t.flexible_steps) / static_cast<double>(t.flexible_window_steps))
                         : std::string());
  }
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  return out;
}

std::string meta_line(const Trace& trace, double wall_seconds) {
  using nlohmann::json;
  auto opt = [](const std::optional<std::uint64_t>& v) { return v ? json(*v) : json(nullptr); };
  json meta = {
      {"run_id", trace.meta.run_id},
      {"n", trace.meta.n},
      {"seed", trace.meta.seed},
      {"mode", std::string(to_string(trace.meta.mode))},
      {"phi", trace.meta.phi},
      {"rng", trace.meta.rng},
      {"version", std::string(kVersion)},
      {"wall_seconds", wall_seconds},
      {"final_step", trace.final_step},
      {"final_nu", trace.final_nu},
      {"exhausted", trace.exhausted},
      {"tau_pm", opt(trace.hitting.perfect_matching)},
      {"tau_unique_cover", opt(trace.hitting.unique_cover)},
      {"tau_no_isolates", opt(trace.hitting.no_isolates)},
      {"tau_no_j", opt(trace.hitting.no_j)},
  };
  return meta.dump();
}

std::string summary_line(const Trace& trace) {
  auto show = [](const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : std::string("-"); };
  std::ostringstream out;
  out << trace.meta.run_id << ": steps=" << trace.final_step << " nu=" << trace.final_nu
      << " tau_pm=" << show(trace.hitting.perfect_matching);
  if (trace.hitting.perfect_matching) {
    out << " (" << format_rate(static_cast<double>(*trace.hitting.perfect_matching) / n_log_n(trace.meta.n))
        << " n ln n)";
  }
  out << " tau_unique_cover=" << show(trace.hitting.unique_cover)
      << " tau_no_isolates=" << show(trace.hitting.no_isolates) << " tau_no_j=" << show(trace.hitting.no_j);
  if (trace.final_missing_cover_pairs) out << " missing_cover_pairs=" << *trace.final_missing_cover_pairs;
  return out.str();
}

// ---------------------------------------------------------------------------
// Runs

std::vector<std::uint64_t> checkpoints_for(const ExperimentConfig& config, Vertex n) {
  return checkpoint_grid(n, config.checkpoint_every, config.landmark_checkpoints);
}

Trace run_single(const ExperimentConfig& config, Vertex n, std::uint64_t seed) {
  ProcessOptions options;
  options.max_n = std::max(options.max_n, n);
  KonigProcess process(n, seed, config.mode, options);
  RecordOptions record;
  record.run_id = run_id_for(config.mode, n, seed);
  record.phi = config.phi;
  record.census = config.census;
  const auto grid = checkpoints_for(config, n);
  return run_to(process, config.stop, grid, record);
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path.string() + " for writing");
  file << contents;
  if (!file) throw std::runtime_error("write failed for " + path.string());
}

std::string trace_text(const Trace& trace) {
  std::ostringstream out;
  write_trace_csv(out, trace);
  return out.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int cmd_run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    if (config.ns.size() != 1 || config.seeds.size() != 1) throw ConfigError("run takes a single n and a single seed");
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  try {
    const auto start = std::chrono::steady_clock::now();
    const Trace trace = run_single(config, config.ns.front(), config.seeds.front());
    const double wall = seconds_since(start);
    std::filesystem::create_directories(config.out_dir);
    write_file(config.out_dir / "trace.csv", trace_text(trace));
    write_file(config.out_dir / "meta.jsonl", meta_line(trace, wall) + "\n");
    out << summary_line(trace) << '\n';
    return 0;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << '\n';
    return 1;
  }
}

int cmd_sweep(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  struct Job {
    Vertex n;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (Vertex n : config.ns) {
    for (std::uint64_t seed : config.seeds) jobs.push_back({n, seed});
  }
  std::sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) {
    return a.n != b.n ? a.n < b.n : a.seed < b.seed;
  });

  const auto trace_dir = config.out_dir / "traces";
  try {
    std::filesystem::create_directories(trace_dir);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  std::vector<RunSummary> results(jobs.size());
  std::vector<double> wall(jobs.size(), 0.0);
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      RunSummary& r = results[i];
      r.n = jobs[i].n;
      r.seed = jobs[i].seed;
      r.mode = config.mode;
      r.run_id = run_id_for(config.mode, r.n, r.seed);
      const auto start = std::chrono::steady_clock::now();
      try {
        r.trace = run_single(config, r.n, r.seed);
        wall[i] = seconds_since(start);
        write_file(trace_dir / (r.run_id + ".csv"), trace_text(*r.trace));
      } catch (const std::exception& e) {
        r.trace.reset();
        r.error = e.what();
      }
      std::lock_guard lock(log_mutex);
      if (r.trace) {
        out << summary_line(*r.trace) << '\n';
      } else {
        err << r.run_id << " failed: " << r.error << '\n';
      }
    }
  };
  const unsigned threads = std::min<unsigned>(config.jobs, static_cast<unsigned>(jobs.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ostringstream aggregate;
  std::ostringstream meta;
  aggregate << kAggregateHeader << '\n';
  int failures = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    aggregate << aggregate_row(results[i]) << '\n';
    if (results[i].trace) {
      meta << meta_line(*results[i].trace, wall[i]) << '\n';
    } else {
      ++failures;
      meta << nlohmann::json{{"run_id", results[i].run_id}, {"status", "failed"}, {"error", results[i].error}}.dump()
           << '\n';
    }
  }
  try {
    write_file(config.out_dir / "aggregate.csv", aggregate.str());
    write_file(config.out_dir / "meta.jsonl", meta.str());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  out << results.size() << " runs, " << failures << " failed\n";
  return failures == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Oracle harness

namespace {

class OracleRunner {
 public:
  OracleRunner(const OracleCheckConfig& config, OracleCheckReport& report) : config_(config), report_(report) {}

  void check_graph(const Graph& g) {
    ++report_.graphs;
    const Matching m = maximum_matching(g);
    CspFaults faults;
    faults.negate_unit_clauses = config_.inject_fault;
    const CoverAnalysis analysis = analyze_cover(build_cover_constraints(g, m, faults));
    const oracle::OracleResult truth = oracle::brute_cover_union(g);
    if (m.size != truth.nu) return fail(g, "matching size " + std::to_string(m.size) + " != " + std::to_string(truth.nu));
    if (analysis.konig != truth.konig) return fail(g, "konig flag disagrees");
    if (!truth.konig) return;
    ++report_.konig_graphs;
    if (analysis.cover_union != truth.cover_union) return fail(g, "cover union disagrees");
    if (analysis.unique != (truth.min_covers.size() == 1)) return fail(g, "uniqueness disagrees");
    for (Vertex u = 0; u < g.n(); ++u) {
      for (Vertex v = u + 1; v < g.n(); ++v) {
        if (g.has_edge(u, v)) continue;
        ++report_.pairs;
        const bool engine = acceptable(g, m, analysis, u, v) != AcceptReason::Rejected;
        if (engine != oracle::brute_acceptable(g, u, v)) {
          return fail(g, "acceptability of " + std::to_string(u) + "-" + std::to_string(v) + " disagrees");
        }
      }
    }
  }

  void check_process(Vertex n, std::uint64_t seed) {
    ++report_.process_runs;
    KonigProcess process(n, seed, Mode::Konig);
    Graph offered(n);
    while (!process.finished()) {
      const Graph before = process.graph();
      const StepOutcome step = process.step();
      ++report_.process_steps;
      offered.add_edge(step.pair.u, step.pair.v);
      if (step.accepted != oracle::brute_acceptable(before, step.pair.u, step.pair.v)) {
        return fail(before, "process decision on " + std::to_string(step.pair.u) + "-" + std::to_string(step.pair.v) +
                                " at step " + std::to_string(step.m) + " disagrees (seed " + std::to_string(seed) + ")");
      }
      if (!oracle::brute_independent_exposed_matching(process.graph(), offered)) {
        return fail(process.graph(), "no maximum matching with independent exposed set at step " +
                                         std::to_string(step.m) + " (seed " + std::to_string(seed) + ")");
      }
    }
    if (process.nu() != static_cast<std::size_t>(n / 2)) return fail(process.graph(), "final graph lacks a perfect matching");
  }

 private:
  void fail(const Graph& g, const std::string& what) {
    ++report_.mismatches;
    if (report_.first_failure.empty()) {
      report_.first_failure = what;
      report_.counterexample = g;
    }
  }

  const OracleCheckConfig& config_;
  OracleCheckReport& report_;
};

}  // namespace

OracleCheckReport oracle_check(const OracleCheckConfig& config) {
  if (config.max_n < 2 || config.max_n > oracle::kMaxEnumeration) {
    throw ConfigError("oracle-check max-n must lie in [2, " + std::to_string(oracle::kMaxEnumeration) + "]");
  }
  if (config.process_n < 2 || config.process_n > oracle::kMaxMatchingEnumeration) {
    throw ConfigError("oracle-check process n must lie in [2, " + std::to_string(oracle::kMaxMatchingEnumeration) + "]");
  }
  OracleCheckReport report;
  OracleRunner runner(config, report);

  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<Vertex> pick_n(2, config.max_n);
  std::uniform_real_distribution<double> pick_density(0.0, 1.0);
  std::bernoulli_distribution from_process(0.5);
  for (std::uint64_t t = 0; t < config.trials; ++t) {
    const Vertex n = pick_n(rng);
    Graph g(n);
    if (from_process(rng)) {
      // A prefix of a Konig process: every density, always Konig.
      KonigProcess process(n, rng(), Mode::Konig);
      std::uniform_int_distribution<std::uint64_t> pick_m(0, process.total_pairs());
      const std::uint64_t stop = pick_m(rng);
      while (process.m() < stop) process.step();
      g = process.graph();
    } else {
      std::bernoulli_distribution edge(pick_density(rng));
      for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
          if (edge(rng)) g.add_edge(u, v);
        }
      }
    }
    runner.check_graph(g);
  }

  if (config.exhaustive) {
    for (Vertex n = 2; n <= config.exhaustive_max_n; ++n) {
      const std::uint64_t pairs = pair_count(static_cast<std::uint64_t>(n));
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs); ++mask) {
        Graph g(n);
        for (PairCode code = 0; code < pairs; ++code) {
          if ((mask >> code) & 1U) {
            const VertexPair p = pair_decode(code, n);
            g.add_edge(p.u, p.v);
          }
        }
        runner.check_graph(g);
      }
    }
  }

  for (std::uint64_t r = 0; r < config.process_runs; ++r) runner.check_process(config.process_n, config.seed + r);
  return report;
}

int cmd_oracle_check(const OracleCheckConfig& config, std::ostream& out, std::ostream& err) {
  OracleCheckReport report;
  try {
    report = oracle_check(config);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  if (config.trials == 0) out << "warning: random suite has 0 cases\n";
  if (report.graphs == 0 && report.process_runs == 0) out << "warning: 0 cases checked\n";
  out << report.graphs << " graphs (" << report.konig_graphs << " konig), " << report.pairs << " absent pairs, "
      << report.process_runs << " process runs (" << report.process_steps << " steps): " << report.mismatches
      << " mismatches\n";
  if (report.mismatches == 0) return 0;
  err << "first mismatch: " << report.first_failure << '\n';
  if (report.counterexample) {
    const std::string dump = graph_dump(*report.counterexample);
    err << dump;
    if (config.dump_path) {
      try {
        write_file(*config.dump_path, dump);
        err << "counterexample written to " << config.dump_path->string() << '\n';
      } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
      }
    }
  }
  return 1;
}

}  // namespace konig
