#include "konig/process.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "konig/errors.hpp"
#include "konig/stats.hpp"

namespace konig {

std::string_view to_string(Mode mode) { return mode == Mode::Konig ? "konig" : "er"; }

Mode parse_mode(std::string_view text) {
  if (text == "konig") return Mode::Konig;
  if (text == "er") return Mode::ErdosRenyi;
  throw ConfigError("unknown mode '" + std::string(text) + "' (expected konig or er)");
}

// ---------------------------------------------------------------------------
// CoverHistory

void CoverHistory::enter(Vertex v, std::uint64_t step) {
  auto& slot = open_[static_cast<std::size_t>(v)];
  if (slot != kNone) return;
  slot = intervals_.size();
  intervals_.push_back({v, step, CoverInterval::kOpen});
}

void CoverHistory::leave(Vertex v, std::uint64_t step) {
  auto& slot = open_[static_cast<std::size_t>(v)];
  if (slot == kNone) return;
  intervals_[slot].end = step;
  slot = kNone;
}

// ---------------------------------------------------------------------------
// KonigProcess

namespace {

void check_size(Vertex n, const ProcessOptions& options) {
  if (n < 2) throw ConfigError("process needs n >= 2, got " + std::to_string(n));
  if (options.max_n > 65536) throw ConfigError("max_n above 65536 is not supported");
  if (n > options.max_n) {
    throw ConfigError("n=" + std::to_string(n) + " exceeds the memory guard max_n=" + std::to_string(options.max_n));
  }
}

std::vector<std::uint32_t> shuffled_pairs(Vertex n, std::uint64_t seed) {
  std::vector<std::uint32_t> order(pair_count(static_cast<std::uint64_t>(n)));
  std::iota(order.begin(), order.end(), std::uint32_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

}  // namespace

KonigProcess::KonigProcess(Vertex n, std::uint64_t seed, Mode mode, ProcessOptions options)
    : KonigProcess(n, seed, mode, options, (check_size(n, options), shuffled_pairs(n, seed))) {}

KonigProcess KonigProcess::with_order(Vertex n, std::vector<PairCode> order, Mode mode, ProcessOptions options) {
  check_size(n, options);
  const std::uint64_t total = pair_count(static_cast<std::uint64_t>(n));
  std::vector<char> seen(total, 0);
  std::vector<std::uint32_t> narrow;
  narrow.reserve(order.size());
  for (PairCode code : order) {
    if (code >= total || seen[code]) throw ConfigError("with_order: not a prefix of a pair permutation");
    seen[code] = 1;
    narrow.push_back(static_cast<std::uint32_t>(code));
  }
  return KonigProcess(n, 0, mode, options, std::move(narrow));
}

KonigProcess::KonigProcess(Vertex n, std::uint64_t seed, Mode mode, ProcessOptions options,
                           std::vector<std::uint32_t> order)
    : seed_(seed),
      mode_(mode),
      options_(options),
      order_(std::move(order)),
      graph_(n),
      matching_(n),
      isolates_(static_cast<std::size_t>(n)),
      leaf_neighbours_(static_cast<std::size_t>(n), 0),
      weight_closed_(static_cast<std::size_t>(n), 0),
      in_union_since_(static_cast<std::size_t>(n), 0) {
  check_size(n, options_);
  if (mode_ == Mode::Konig) cover_.rebuild(graph_, matching_);
  if (options_.record_cover_history) history_.emplace(n);
}

CoverAnalysis KonigProcess::cover_analysis() const {
  if (mode_ != Mode::Konig) throw ContractViolation("cover_analysis: not tracked in Erdos-Renyi mode");
  return cover_.analysis();
}

std::uint64_t KonigProcess::weight(Vertex v) const {
  const auto i = static_cast<std::size_t>(v);
  std::uint64_t w = weight_closed_[i];
  if (in_cover_union(v)) w += m_ + 1 - in_union_since_[i];
  return w;
}

std::uint64_t KonigProcess::weight_total() const {
  const std::uint64_t open = cover_union_size() * (m_ + 1) - since_sum_;
  return weight_closed_total_ + open;
}

void KonigProcess::ensure_forest() {
  if (forest_valid_) return;
  if (forest_.grow(graph_, matching_)) throw ContractViolation("KonigProcess: matching lost maximality");
  forest_valid_ = true;
}

AcceptReason KonigProcess::decide(Vertex u, Vertex v) {
  if (cover_.in_union(u) || cover_.in_union(v)) return AcceptReason::CoverIncident;
  const std::size_t exposed = static_cast<std::size_t>(n()) - 2 * matching_.size;
  if (exposed < 2) return AcceptReason::Rejected;
  if (matching_.exposed(u) && matching_.exposed(v)) return AcceptReason::Augmenting;
  // An augmenting path through uv needs maximum matchings missing u and v.
  ensure_forest();
  if (!forest_.outer(u) || !forest_.outer(v)) return AcceptReason::Rejected;
  if (forest_.tree_of(u) != forest_.tree_of(v)) return AcceptReason::Augmenting;
  // One factor-critical component never loses two vertices at once.
  if (forest_.blossom_of(u) == forest_.blossom_of(v)) return AcceptReason::Rejected;
  return probe_.grow(graph_, matching_, VertexPair{u, v}) ? AcceptReason::Augmenting : AcceptReason::Rejected;
}

void KonigProcess::track_degrees(Vertex u, Vertex v) {
  auto bump = [&](Vertex center) {
    if (++leaf_neighbours_[static_cast<std::size_t>(center)] >= 2) ++quasi_total_;
  };
  auto drop = [&](Vertex center) {
    if (leaf_neighbours_[static_cast<std::size_t>(center)]-- >= 2) --quasi_total_;
  };
  for (const auto& [x, y] : {std::pair{u, v}, std::pair{v, u}}) {
    const std::size_t d = graph_.degree(x);
    if (d == 1) {
      --isolates_;
      bump(y);
    } else if (d == 2) {
      drop(graph_.neighbors(x)[0]);  // x stopped being a leaf of its first neighbour
    }
  }
}

bool KonigProcess::insert_edge(Vertex u, Vertex v) {
  graph_.add_edge(u, v);
  track_degrees(u, v);
  if (matching_.exposed(u) && matching_.exposed(v)) {
    matching_.match(u, v);
    forest_valid_ = false;
    return true;
  }
  const std::size_t exposed = static_cast<std::size_t>(n()) - 2 * matching_.size;
  if (exposed < 2) return false;

  auto grow_now = [&] {
    if (forest_.grow(graph_, matching_)) {
      forest_.flip_path(matching_);
      forest_valid_ = false;
      return true;
    }
    forest_valid_ = true;  // final forest of the new graph
    return false;
  };
  if (!forest_valid_) return grow_now();

  // The cached forest belongs to the graph without uv. It stays final unless
  // the search would act on uv from an outer endpoint.
  const bool outer_u = forest_.outer(u);
  const bool outer_v = forest_.outer(v);
  if (!outer_u && !outer_v) return false;
  if (outer_u != outer_v) {
    const Vertex other = outer_u ? v : u;
    if (forest_.tree_of(other) == kNoVertex) forest_valid_ = false;  // unreached vertex would get labelled
    return false;
  }
  if (forest_.blossom_of(u) == forest_.blossom_of(v)) return false;
  return grow_now();
}

void KonigProcess::apply_cover_changes() {
  for (Vertex v : cover_.last_changes()) {
    const auto i = static_cast<std::size_t>(v);
    if (cover_.in_union(v)) {
      in_union_since_[i] = m_;
      since_sum_ += m_;
      if (history_) history_->enter(v, m_);
    } else {
      const std::uint64_t span = m_ - in_union_since_[i];
      weight_closed_[i] += span;
      weight_closed_total_ += span;
      since_sum_ -= in_union_since_[i];
      if (history_) history_->leave(v, m_);
    }
  }
}

void KonigProcess::cross_check() const {
  const Matching fresh = maximum_matching(graph_);
  if (fresh.size != matching_.size || !is_valid_matching(graph_, matching_)) {
    throw ContractViolation("cross-check: maintained matching is not maximum");
  }
  if (mode_ != Mode::Konig) return;
  const CoverAnalysis scratch = analyze_cover(build_cover_constraints(graph_, matching_));
  const CoverAnalysis kept = cover_.analysis();
  if (!scratch.konig || scratch.cover_union != kept.cover_union || scratch.forced != kept.forced ||
      scratch.unique != kept.unique) {
    throw ContractViolation("cross-check: incremental cover analysis disagrees with a rebuild at step " +
                            std::to_string(m_));
  }
}

StepOutcome KonigProcess::step() {
  if (finished()) throw EndOfProcess("all " + std::to_string(order_.size()) + " pairs have been offered");
  const VertexPair pair = pair_decode(order_[m_], n());
  StepOutcome out;
  out.pair = pair;
  out.reason = mode_ == Mode::Konig ? decide(pair.u, pair.v) : AcceptReason::ErAlwaysAccept;
  out.accepted = out.reason != AcceptReason::Rejected;
  ++m_;
  if (out.accepted) {
    const bool increased = insert_edge(pair.u, pair.v);
    if (mode_ == Mode::Konig) {
      if (out.reason == AcceptReason::Augmenting && !increased) {
        throw ContractViolation("step: augmenting pair did not enlarge the matching");
      }
      if (increased) {
        cover_.rebuild(graph_, matching_);
      } else {
        cover_.add_edge(pair.u, pair.v);
      }
      apply_cover_changes();
    }
    if (options_.cross_check) cross_check();
  }
  if (history_) history_->advance_to(m_);
  out.m = m_;
  out.nu_after = matching_.size;
  out.d_size_after = cover_union_size();
  return out;
}

// ---------------------------------------------------------------------------

Census acceptable_pair_census(const KonigProcess& process, bool exact) {
  if (process.mode() != Mode::Konig) throw ConfigError("census: Konig mode only");
  if (exact && process.n() > kExactCensusMaxN) {
    throw ConfigError("exact census limited to n <= " + std::to_string(kExactCensusMaxN));
  }
  const auto n = static_cast<std::uint64_t>(process.n());
  const std::uint64_t d = process.cover_union_size();
  std::uint64_t touching = pair_count(n) - pair_count(n - d);
  for (std::uint32_t code : process.offered()) {
    const VertexPair p = pair_decode(code, process.n());
    if (process.in_cover_union(p.u) || process.in_cover_union(p.v)) --touching;
  }
  Census out;
  out.cover_incident = touching;
  if (exact) {
    const CoverAnalysis analysis = process.cover_analysis();
    std::vector<char> offered(pair_count(n), 0);
    for (std::uint32_t code : process.offered()) offered[code] = 1;
    std::uint64_t count = 0;
    for (PairCode code = 0; code < offered.size(); ++code) {
      if (offered[code]) continue;
      const VertexPair p = pair_decode(code, process.n());
      if (acceptable(process.graph(), process.matching(), analysis, p.u, p.v) != AcceptReason::Rejected) ++count;
    }
    out.exact = count;
  }
  return out;
}

std::vector<std::uint64_t> landmark_steps(Vertex n) {
  const double nn = n;
  const double ln = std::log(nn);
  const std::uint64_t total = pair_count(static_cast<std::uint64_t>(n));
  std::vector<std::uint64_t> out;
  for (double value : {3.0 / 8.0 * nn * ln, nn * std::sqrt(ln), (0.5 + 1.0 / 70.0) * nn * ln, 1.1 * nn * ln,
                       2.0 * nn * ln, 4.0 * nn * ln}) {
    const auto step = static_cast<std::uint64_t>(std::ceil(value));
    if (step <= total) out.push_back(step);
  }
  out.push_back(total);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::uint64_t> checkpoint_grid(Vertex n, std::uint64_t every, bool landmarks) {
  const std::uint64_t total = pair_count(static_cast<std::uint64_t>(n));
  if (every == 0) every = (static_cast<std::uint64_t>(n) + 9) / 10;
  std::vector<std::uint64_t> out;
  for (std::uint64_t m = every; m <= total; m += every) out.push_back(m);
  if (landmarks) {
    const auto extra = landmark_steps(n);
    out.insert(out.end(), extra.begin(), extra.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

CheckpointRecord make_record(const KonigProcess& p, const RecordOptions& options, std::uint64_t previous_m,
                             std::uint64_t previous_weight) {
  CheckpointRecord row;
  row.run_id = options.run_id;
  row.seed = p.seed();
  row.n = p.n();
  row.m = p.m();
  row.nu = p.nu();
  row.isolates = p.isolates();
  row.quasi_isolates = p.quasi_isolate_count();
  const std::size_t j = row.isolates + row.quasi_isolates;
  const std::size_t unmatched = static_cast<std::size_t>(p.n()) - 2 * p.nu();
  if (j > unmatched) throw ContractViolation("record: |J| exceeds the unmatched vertex count");
  row.helpers = unmatched - j;
  row.accepted_total = p.accepted_total();
  if (p.mode() == Mode::Konig) {
    row.d_size = p.cover_union_size();
    row.unique_cover = p.unique_cover();
    const StepClass cls = classify_step(*row.d_size, row.helpers, p.n(), options.phi);
    row.flexible = cls.flexible;
    row.unhelpful = cls.unhelpful;
    if (row.m > previous_m) {
      row.window_weight = static_cast<double>(p.weight_total() - previous_weight) / static_cast<double>(row.m - previous_m);
    }
    if (options.census != CensusMode::Off) {
      const Census census = acceptable_pair_census(p, options.census == CensusMode::Exact);
      row.cover_incident_census = census.cover_incident;
      row.exact_census = census.exact;
    }
  }
  return row;
}

}  // namespace

Trace run_to(KonigProcess& process, StopCondition stop, std::span<const std::uint64_t> checkpoints,
             const RecordOptions& options) {
  // Validates phi up front rather than at the first row.
  classify_step(0, 0, process.n(), options.phi);

  Trace trace;
  trace.meta.run_id = options.run_id;
  trace.meta.n = process.n();
  trace.meta.seed = process.seed();
  trace.meta.mode = process.mode();
  trace.meta.phi = options.phi;
  trace.meta.rng = std::string(kRngIdentity);

  const double nn = process.n();
  const double ln = std::log(nn);
  const auto window_lo = static_cast<std::uint64_t>(std::ceil(nn * std::sqrt(ln)));
  const auto window_hi = static_cast<std::uint64_t>(std::floor(2.0 * nn * ln));
  const std::size_t flexible_at = flexible_threshold(process.n(), options.phi);

  std::uint64_t previous_m = process.m();
  std::uint64_t previous_weight = process.weight_total();
  auto record = [&] {
    trace.rows.push_back(make_record(process, options, previous_m, previous_weight));
    previous_m = process.m();
    previous_weight = process.weight_total();
  };

  auto note_events = [&] {
    bool fired = false;
    auto hit = [&](std::optional<std::uint64_t>& slot, bool holds) {
      if (!slot && holds) {
        slot = process.m();
        fired = true;
      }
    };
    hit(trace.hitting.perfect_matching, process.perfect());
    if (process.mode() == Mode::Konig) {
      // The edgeless graph has the empty cover as its only minimum cover; that does not count.
      hit(trace.hitting.unique_cover, process.unique_cover() && process.accepted_total() > 0);
    }
    hit(trace.hitting.no_isolates, process.isolates() == 0);
    hit(trace.hitting.no_j, process.isolates() == 0 && process.quasi_isolate_count() == 0);
    return fired;
  };

  auto done = [&] {
    if (process.finished()) return true;
    switch (stop.kind) {
      case StopCondition::Kind::AtStep: return process.m() >= stop.step;
      case StopCondition::Kind::FirstPerfectMatching: return process.perfect();
      case StopCondition::Kind::Exhausted: return false;
    }
    return true;
  };

  auto next_checkpoint = std::lower_bound(checkpoints.begin(), checkpoints.end(), process.m());
  bool recorded_here = false;
  if (note_events() || (next_checkpoint != checkpoints.end() && *next_checkpoint == process.m())) {
    record();
    recorded_here = true;
  }
  while (!done()) {
    process.step();
    const std::uint64_t m = process.m();
    if (process.mode() == Mode::Konig && m >= window_lo && m <= window_hi) {
      ++trace.flexible_window_steps;
      if (process.cover_union_size() >= flexible_at) ++trace.flexible_steps;
    }
    while (next_checkpoint != checkpoints.end() && *next_checkpoint < m) ++next_checkpoint;
    const bool at_checkpoint = next_checkpoint != checkpoints.end() && *next_checkpoint == m;
    recorded_here = false;
    if (note_events() || at_checkpoint) {
      record();
      recorded_here = true;
    }
  }
  if (!recorded_here) record();

  trace.final_step = process.m();
  trace.final_nu = process.nu();
  trace.exhausted = process.finished();
  if (trace.exhausted && process.mode() == Mode::Konig) {
    const CoverAnalysis analysis = process.cover_analysis();
    trace.final_cover_size = analysis.sample_cover->size();
    trace.final_missing_cover_pairs = missing_cover_pairs(process.graph(), *analysis.sample_cover);
  }
  return trace;
}

}  // namespace konig
