#pragma once

#include <vector>

#include "konig/graph.hpp"

namespace konig {

/// Degree-one vertices hanging off a common neighbour. One of them (the
/// partner) stays matchable; the rest are quasi-isolates.
struct QuasiGroup {
  Vertex center = kNoVertex;
  Vertex partner = kNoVertex;
  std::vector<Vertex> quasi;  // sorted
};

struct QuasiIsolateReport {
  std::vector<Vertex> isolates;        // degree 0, sorted
  std::vector<Vertex> quasi_isolates;  // sorted
  std::vector<QuasiGroup> groups;      // by center
  std::vector<Vertex> j_set;           // isolates ∪ quasi_isolates, sorted

  /// Partner of quasi-isolate q, or kNoVertex when q is not a quasi-isolate.
  Vertex partner_of(Vertex q) const;
  bool is_quasi(Vertex v) const;
};

enum class PartnerRule { LowestId, HighestId };

/// For every vertex w with k >= 2 degree-one neighbours, one of them becomes
/// the partner (lowest id by default) and the other k-1 are quasi-isolates.
QuasiIsolateReport quasi_isolates(const Graph& g, PartnerRule rule = PartnerRule::LowestId);

}  // namespace konig
