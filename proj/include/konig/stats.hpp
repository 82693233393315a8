#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "konig/graph.hpp"
#include "konig/process.hpp"
#include "konig/quasi_isolates.hpp"
#include "konig/trace.hpp"

namespace konig {

/// n - 2 nu - |J|: the vertices outside both J and a maximum matching that avoids J.
/// Throws ContractViolation if negative.
std::size_t helper_count(const Graph& g, std::size_t nu, const QuasiIsolateReport& report);

struct StepClass {
  bool flexible = false;   // |D| >= (1/2 + phi) n
  bool unhelpful = false;  // no helpers and not flexible
  std::size_t helpers = 0;
  double phi = 0.0;
};

/// Smallest |D| with |D| >= (1/2 + phi) n, tolerant of rounding in the product.
std::size_t flexible_threshold(Vertex n, double phi);

/// Throws ConfigError unless 0 <= phi <= 1/2.
StepClass classify_step(std::size_t d_size, std::size_t helpers, Vertex n, double phi);

/// (ln n)^(-1/10). Exceeds 1/2 for every n below e^1024.
double asymptotic_phi(Vertex n);

/// W_T(v) = |{m in T : v in D_m}| for T = {m1, ..., m1 + t - 1}.
struct WeightLedger {
  std::uint64_t window_start = 0;
  std::uint64_t window_length = 0;
  std::vector<std::uint64_t> per_vertex;

  std::uint64_t total() const;
  /// (1/t) * sum over S of W_T(v).
  double average(std::span<const Vertex> subset) const;
};

/// Throws RangeError when the window runs past the recorded steps.
WeightLedger window_weights(const CoverHistory& history, std::uint64_t m1, std::uint64_t t);
/// Requires a process built with record_cover_history.
WeightLedger window_weights(const KonigProcess& process, std::uint64_t m1, std::uint64_t t);

/// Absent pairs with at least one endpoint in `cover`. Throws
/// ContractViolation if `cover` misses an edge of g.
std::uint64_t missing_cover_pairs(const Graph& g, std::span<const Vertex> cover);

/// Groups of `group_size` distinct vertices of degree below
/// `degree_threshold` lying pairwise within distance `radius`.
std::vector<std::vector<Vertex>> small_vertex_separation(const Graph& g, std::size_t degree_threshold,
                                                         std::size_t group_size, std::size_t radius = 10);

/// First recorded row at which each event holds. run_to records a row at
/// every event, so these are the exact hitting times. The unique-cover event
/// ignores the edgeless graph, whose only minimum cover is empty.
HittingTimes hitting_times(const Trace& trace);

}  // namespace konig
