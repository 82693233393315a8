#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "konig/graph.hpp"
#include "konig/ke_cover.hpp"
#include "konig/matching.hpp"
#include "konig/trace.hpp"

namespace konig {

std::string_view to_string(Mode mode);
/// "konig" or "er"; throws ConfigError otherwise.
Mode parse_mode(std::string_view text);

/// Pair permutation: std::shuffle over [0, N) driven by std::mt19937_64(seed).
inline constexpr std::string_view kRngIdentity = "mt19937_64/std::shuffle";

struct ProcessOptions {
  Vertex max_n = Vertex{1} << 14;  // at most 65536
  bool record_cover_history = false;
  /// After every accepted edge recompute matching size and cover analysis
  /// from scratch and throw ContractViolation on any disagreement.
  bool cross_check = false;
};

struct StepOutcome {
  std::uint64_t m = 0;  // steps consumed after this one
  VertexPair pair;
  bool accepted = false;
  AcceptReason reason = AcceptReason::Rejected;
  std::size_t nu_after = 0;
  std::size_t d_size_after = 0;
};

/// The Konig process on K_n (or the accept-everything Erdos-Renyi baseline):
/// every pair is offered once in a seeded uniformly random order.
class KonigProcess {
 public:
  /// Throws ConfigError for n < 2 or n above options.max_n.
  KonigProcess(Vertex n, std::uint64_t seed, Mode mode, ProcessOptions options = {});

  /// Offers pairs in the given order instead of a random one. `order` must
  /// be a permutation of [0, N) or a prefix of one.
  static KonigProcess with_order(Vertex n, std::vector<PairCode> order, Mode mode, ProcessOptions options = {});

  /// Throws EndOfProcess once every scheduled pair has been offered.
  StepOutcome step();

  bool finished() const { return m_ == order_.size(); }

  Vertex n() const { return graph_.n(); }
  std::uint64_t seed() const { return seed_; }
  Mode mode() const { return mode_; }
  std::uint64_t m() const { return m_; }
  std::uint64_t total_pairs() const { return pair_count(static_cast<std::uint64_t>(n())); }
  std::span<const std::uint32_t> order() const { return order_; }
  std::span<const std::uint32_t> offered() const { return std::span<const std::uint32_t>(order_).first(m_); }

  const Graph& graph() const { return graph_; }
  const Matching& matching() const { return matching_; }
  std::size_t nu() const { return matching_.size; }
  bool perfect() const { return matching_.size == static_cast<std::size_t>(n() / 2); }
  std::size_t accepted_total() const { return graph_.edge_count(); }

  /// Cover-union data; Konig mode only (empty/false in Erdos-Renyi mode).
  bool in_cover_union(Vertex v) const { return mode_ == Mode::Konig && cover_.in_union(v); }
  std::size_t cover_union_size() const { return mode_ == Mode::Konig ? cover_.union_size() : 0; }
  bool unique_cover() const { return mode_ == Mode::Konig && cover_.unique(); }
  CoverAnalysis cover_analysis() const;

  std::size_t isolates() const { return isolates_; }
  /// Number of quasi-isolates under the k-1 of k rule.
  std::size_t quasi_isolate_count() const { return quasi_total_; }

  /// |{k in [1, m] : v in D_k}|.
  std::uint64_t weight(Vertex v) const;
  /// Sum over k in [1, m] of |D_k|.
  std::uint64_t weight_total() const;
  const std::optional<CoverHistory>& cover_history() const { return history_; }

 private:
  KonigProcess(Vertex n, std::uint64_t seed, Mode mode, ProcessOptions options, std::vector<std::uint32_t> order);

  AcceptReason decide(Vertex u, Vertex v);
  void ensure_forest();
  bool insert_edge(Vertex u, Vertex v);
  void track_degrees(Vertex u, Vertex v);
  void apply_cover_changes();
  void cross_check() const;

  std::uint64_t seed_ = 0;
  Mode mode_ = Mode::Konig;
  ProcessOptions options_;
  std::vector<std::uint32_t> order_;  // PairCodes; N < 2^32 under the size guard
  std::uint64_t m_ = 0;

  Graph graph_;
  Matching matching_;
  CoverTracker cover_;
  AlternatingForest forest_;
  bool forest_valid_ = false;
  AlternatingForest probe_;

  std::size_t isolates_ = 0;
  std::vector<std::uint32_t> leaf_neighbours_;
  std::size_t quasi_total_ = 0;

  std::vector<std::uint64_t> weight_closed_;
  std::vector<std::uint64_t> in_union_since_;
  std::uint64_t weight_closed_total_ = 0;
  std::uint64_t since_sum_ = 0;
  std::optional<CoverHistory> history_;
};

/// Pairs not yet offered that touch D, and optionally (n <= 64) the exact
/// number of not-yet-offered pairs whose addition keeps the Konig property.
struct Census {
  std::uint64_t cover_incident = 0;
  std::optional<std::uint64_t> exact;
};
inline constexpr Vertex kExactCensusMaxN = 64;
Census acceptable_pair_census(const KonigProcess& process, bool exact);

struct StopCondition {
  enum class Kind { AtStep, FirstPerfectMatching, Exhausted };
  Kind kind = Kind::Exhausted;
  std::uint64_t step = 0;

  static StopCondition at_step(std::uint64_t m) { return {Kind::AtStep, m}; }
  static StopCondition first_perfect_matching() { return {Kind::FirstPerfectMatching, 0}; }
  static StopCondition exhausted() { return {Kind::Exhausted, 0}; }
};

/// Default grid: every ceil(n/10) steps plus, when requested, the landmark
/// steps ceil(c * n ln n) for c in {3/8, 1/2 + 1/70, 1.1, 2, 4}, ceil(n sqrt(ln n)) and N.
std::vector<std::uint64_t> checkpoint_grid(Vertex n, std::uint64_t every, bool landmarks);
std::vector<std::uint64_t> landmark_steps(Vertex n);

enum class CensusMode { Off, Lower, Exact };

struct RecordOptions {
  std::string run_id;
  double phi = 0.05;
  CensusMode census = CensusMode::Off;
};

/// Steps until `stop`, recording a row at every checkpoint, at every hitting
/// event and at the final step.
Trace run_to(KonigProcess& process, StopCondition stop, std::span<const std::uint64_t> checkpoints,
             const RecordOptions& options);

}  // namespace konig
