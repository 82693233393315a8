#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "konig/graph.hpp"

namespace konig {

enum class Mode { Konig, ErdosRenyi };

/// Membership of one vertex in the cover union D over the steps
/// [first, end). `end` is kOpen while the vertex is still in D.
struct CoverInterval {
  static constexpr std::uint64_t kOpen = std::numeric_limits<std::uint64_t>::max();
  Vertex vertex = kNoVertex;
  std::uint64_t first = 0;
  std::uint64_t end = kOpen;
};

/// Step-indexed record of D: D_m is the cover union of the graph after m offers.
class CoverHistory {
 public:
  explicit CoverHistory(Vertex n = 0) : open_(static_cast<std::size_t>(n), kNone) {}

  void enter(Vertex v, std::uint64_t step);
  void leave(Vertex v, std::uint64_t step);
  void advance_to(std::uint64_t step) { steps_ = step; }

  std::uint64_t steps() const { return steps_; }
  const std::vector<CoverInterval>& intervals() const { return intervals_; }
  Vertex n() const { return static_cast<Vertex>(open_.size()); }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<CoverInterval> intervals_;
  std::vector<std::size_t> open_;  // index into intervals_ of v's open interval
  std::uint64_t steps_ = 0;
};

struct HittingTimes {
  std::optional<std::uint64_t> perfect_matching;  // first nu = floor(n/2)
  std::optional<std::uint64_t> unique_cover;
  std::optional<std::uint64_t> no_isolates;
  std::optional<std::uint64_t> no_j;  // no isolates and no quasi-isolates

  friend bool operator==(const HittingTimes&, const HittingTimes&) = default;
};

/// One CSV row. Fields that do not apply (cover data in Erdos-Renyi mode, a
/// census that was not requested) are empty.
struct CheckpointRecord {
  std::string run_id;
  std::uint64_t seed = 0;
  Vertex n = 0;
  std::uint64_t m = 0;
  std::size_t nu = 0;
  std::optional<std::size_t> d_size;
  std::optional<bool> unique_cover;
  std::size_t isolates = 0;
  std::size_t quasi_isolates = 0;
  std::size_t helpers = 0;
  std::optional<bool> flexible;
  std::optional<bool> unhelpful;
  std::size_t accepted_total = 0;
  std::optional<std::uint64_t> cover_incident_census;
  std::optional<std::uint64_t> exact_census;
  std::optional<double> window_weight;  // mean |D_k| over the steps since the previous row

  friend bool operator==(const CheckpointRecord&, const CheckpointRecord&) = default;
};

struct TraceMeta {
  std::string run_id;
  Vertex n = 0;
  std::uint64_t seed = 0;
  Mode mode = Mode::Konig;
  double phi = 0.05;
  std::string rng;
};

struct Trace {
  TraceMeta meta;
  std::vector<CheckpointRecord> rows;
  HittingTimes hitting;
  std::uint64_t final_step = 0;
  std::size_t final_nu = 0;
  bool exhausted = false;
  /// Steps in [n sqrt(ln n), 2 n ln n] that were reached, and how many of them were phi-flexible.
  std::uint64_t flexible_window_steps = 0;
  std::uint64_t flexible_steps = 0;
  /// Size of the final sample cover and its missing incident pairs, filled when the run was exhausted.
  std::optional<std::size_t> final_cover_size;
  std::optional<std::uint64_t> final_missing_cover_pairs;
};

}  // namespace konig
