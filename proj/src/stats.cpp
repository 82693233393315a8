#include "konig/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "konig/errors.hpp"

namespace konig {

// ---------------------------------------------------------------------------
// Quasi-isolates

Vertex QuasiIsolateReport::partner_of(Vertex q) const {
  for (const auto& group : groups) {
    if (std::binary_search(group.quasi.begin(), group.quasi.end(), q)) return group.partner;
  }
  return kNoVertex;
}

bool QuasiIsolateReport::is_quasi(Vertex v) const {
  return std::binary_search(quasi_isolates.begin(), quasi_isolates.end(), v);
}

QuasiIsolateReport quasi_isolates(const Graph& g, PartnerRule rule) {
  QuasiIsolateReport out;
  for (Vertex w = 0; w < g.n(); ++w) {
    if (g.degree(w) == 0) {
      out.isolates.push_back(w);
      continue;
    }
    std::vector<Vertex> leaves;
    for (Vertex x : g.neighbors(w)) {
      if (g.degree(x) == 1) leaves.push_back(x);
    }
    if (leaves.size() < 2) continue;
    std::sort(leaves.begin(), leaves.end());
    QuasiGroup group;
    group.center = w;
    if (rule == PartnerRule::LowestId) {
      group.partner = leaves.front();
      group.quasi.assign(leaves.begin() + 1, leaves.end());
    } else {
      group.partner = leaves.back();
      group.quasi.assign(leaves.begin(), leaves.end() - 1);
    }
    out.quasi_isolates.insert(out.quasi_isolates.end(), group.quasi.begin(), group.quasi.end());
    out.groups.push_back(std::move(group));
  }
  std::sort(out.quasi_isolates.begin(), out.quasi_isolates.end());
  std::merge(out.isolates.begin(), out.isolates.end(), out.quasi_isolates.begin(), out.quasi_isolates.end(),
             std::back_inserter(out.j_set));
  return out;
}

// ---------------------------------------------------------------------------

std::size_t helper_count(const Graph& g, std::size_t nu, const QuasiIsolateReport& report) {
  const auto n = static_cast<std::size_t>(g.n());
  const std::size_t used = 2 * nu + report.j_set.size();
  if (used > n) {
    throw ContractViolation("helper_count: n - 2nu - |J| is negative (" + std::to_string(n) + " - " +
                            std::to_string(2 * nu) + " - " + std::to_string(report.j_set.size()) + ")");
  }
  return n - used;
}

std::size_t flexible_threshold(Vertex n, double phi) {
  const double exact = (0.5 + phi) * static_cast<double>(n);
  return static_cast<std::size_t>(std::ceil(exact - 1e-9 * std::max(1.0, exact)));
}

StepClass classify_step(std::size_t d_size, std::size_t helpers, Vertex n, double phi) {
  if (!(phi >= 0.0 && phi <= 0.5)) {
    throw ConfigError("phi must lie in [0, 1/2], got " + std::to_string(phi));
  }
  if (d_size > static_cast<std::size_t>(n)) throw ContractViolation("classify_step: |D| exceeds n");
  StepClass out;
  out.phi = phi;
  out.helpers = helpers;
  out.flexible = d_size >= flexible_threshold(n, phi);
  out.unhelpful = helpers == 0 && !out.flexible;
  return out;
}

double asymptotic_phi(Vertex n) { return std::pow(std::log(static_cast<double>(n)), -0.1); }

// ---------------------------------------------------------------------------
// Weights

std::uint64_t WeightLedger::total() const {
  std::uint64_t sum = 0;
  for (auto w : per_vertex) sum += w;
  return sum;
}

double WeightLedger::average(std::span<const Vertex> subset) const {
  if (window_length == 0) return 0.0;
  std::uint64_t sum = 0;
  for (Vertex v : subset) sum += per_vertex.at(static_cast<std::size_t>(v));
  return static_cast<double>(sum) / static_cast<double>(window_length);
}

WeightLedger window_weights(const CoverHistory& history, std::uint64_t m1, std::uint64_t t) {
  if (t > 0 && m1 + t - 1 > history.steps()) {
    throw RangeError("window [" + std::to_string(m1) + ", " + std::to_string(m1 + t - 1) +
                     "] runs past the recorded " + std::to_string(history.steps()) + " steps");
  }
  WeightLedger out;
  out.window_start = m1;
  out.window_length = t;
  out.per_vertex.assign(static_cast<std::size_t>(history.n()), 0);
  const std::uint64_t lo = m1;
  const std::uint64_t hi = m1 + t;  // exclusive
  for (const auto& interval : history.intervals()) {
    const std::uint64_t a = std::max(lo, interval.first);
    const std::uint64_t b = std::min(hi, interval.end);
    if (a < b) out.per_vertex[static_cast<std::size_t>(interval.vertex)] += b - a;
  }
  return out;
}

WeightLedger window_weights(const KonigProcess& process, std::uint64_t m1, std::uint64_t t) {
  if (!process.cover_history()) {
    throw ConfigError("window_weights: process was built without record_cover_history");
  }
  return window_weights(*process.cover_history(), m1, t);
}

// ---------------------------------------------------------------------------

std::uint64_t missing_cover_pairs(const Graph& g, std::span<const Vertex> cover) {
  std::vector<char> in(static_cast<std::size_t>(g.n()), 0);
  for (Vertex v : cover) {
    if (v < 0 || v >= g.n()) throw ContractViolation("missing_cover_pairs: vertex out of range");
    in[static_cast<std::size_t>(v)] = 1;
  }
  std::uint64_t size = 0;
  for (char c : in) size += c ? 1 : 0;
  for (const auto& [u, v] : g.edges()) {
    if (!in[static_cast<std::size_t>(u)] && !in[static_cast<std::size_t>(v)]) {
      throw ContractViolation("missing_cover_pairs: edge " + std::to_string(u) + "-" + std::to_string(v) +
                              " is not covered");
    }
  }
  const auto n = static_cast<std::uint64_t>(g.n());
  const std::uint64_t incident = pair_count(n) - pair_count(n - size);
  return incident - g.edge_count();
}

std::vector<std::vector<Vertex>> small_vertex_separation(const Graph& g, std::size_t degree_threshold,
                                                         std::size_t group_size, std::size_t radius) {
  std::vector<std::vector<Vertex>> out;
  if (group_size == 0) return out;
  std::vector<Vertex> small;
  for (Vertex v = 0; v < g.n(); ++v) {
    if (g.degree(v) < degree_threshold) small.push_back(v);
  }
  if (small.size() < group_size) return out;

  // close[i] lists the indices j > i of small vertices within `radius` of small[i].
  std::vector<int> index_of(static_cast<std::size_t>(g.n()), -1);
  for (std::size_t i = 0; i < small.size(); ++i) index_of[static_cast<std::size_t>(small[i])] = static_cast<int>(i);
  std::vector<std::vector<std::size_t>> close(small.size());
  std::vector<std::size_t> dist(static_cast<std::size_t>(g.n()));
  constexpr std::size_t kFar = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < small.size(); ++i) {
    std::fill(dist.begin(), dist.end(), kFar);
    std::queue<Vertex> queue;
    dist[static_cast<std::size_t>(small[i])] = 0;
    queue.push(small[i]);
    while (!queue.empty()) {
      const Vertex x = queue.front();
      queue.pop();
      const std::size_t dx = dist[static_cast<std::size_t>(x)];
      if (const int j = index_of[static_cast<std::size_t>(x)]; j > static_cast<int>(i)) {
        close[i].push_back(static_cast<std::size_t>(j));
      }
      if (dx == radius) continue;
      for (Vertex y : g.neighbors(x)) {
        if (dist[static_cast<std::size_t>(y)] == kFar) {
          dist[static_cast<std::size_t>(y)] = dx + 1;
          queue.push(y);
        }
      }
    }
    std::sort(close[i].begin(), close[i].end());
  }

  auto near = [&](std::size_t a, std::size_t b) {
    return std::binary_search(close[a].begin(), close[a].end(), b);
  };
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t)> extend = [&](std::size_t from) {
    if (chosen.size() == group_size) {
      std::vector<Vertex> group;
      for (std::size_t i : chosen) group.push_back(small[i]);
      out.push_back(std::move(group));
      return;
    }
    const std::vector<std::size_t>& candidates = close[chosen.back()];
    for (std::size_t c : candidates) {
      if (c < from) continue;
      bool ok = true;
      for (std::size_t k = 0; k + 1 < chosen.size() && ok; ++k) ok = near(chosen[k], c);
      if (!ok) continue;
      chosen.push_back(c);
      extend(c + 1);
      chosen.pop_back();
    }
  };
  for (std::size_t i = 0; i < small.size(); ++i) {
    chosen.assign(1, i);
    extend(i + 1);
  }
  return out;
}

HittingTimes hitting_times(const Trace& trace) {
  HittingTimes out;
  for (const auto& row : trace.rows) {
    if (!out.perfect_matching && row.nu == static_cast<std::size_t>(row.n / 2)) out.perfect_matching = row.m;
    if (!out.unique_cover && row.unique_cover.value_or(false) && row.accepted_total > 0) out.unique_cover = row.m;
    if (!out.no_isolates && row.isolates == 0) out.no_isolates = row.m;
    if (!out.no_j && row.isolates == 0 && row.quasi_isolates == 0) out.no_j = row.m;
  }
  return out;
}

}  // namespace konig
