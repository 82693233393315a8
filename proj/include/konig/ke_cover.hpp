#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "konig/graph.hpp"
#include "konig/matching.hpp"

namespace konig {

/// Literal node of the implication graph: 2*var is "lower endpoint of the
/// matched pair is in the cover", 2*var+1 its negation (the upper endpoint).
using Literal = std::int32_t;
constexpr Literal negate(Literal l) { return l ^ 1; }

/// Minimum covers of a graph with nu = tau, written as 2-SAT over the pairs
/// of a maximum matching: each cover takes exactly one endpoint per matched
/// pair and no exposed vertex, and must touch every other edge.
struct CoverCsp {
  Vertex n = 0;
  std::vector<VertexPair> variables;       // matched pairs (lower, upper)
  std::vector<std::int32_t> variable_of;   // per vertex; -1 when exposed
  std::vector<std::pair<Literal, Literal>> clauses;
  std::vector<Literal> unit_clauses;
  std::vector<std::vector<Literal>> implications;  // 2 * variables.size() nodes

  std::size_t variable_count() const { return variables.size(); }
  /// "v is in the cover"; v must be matched.
  Literal cover_literal(Vertex v) const;
  /// Vertex put in the cover when l holds.
  Vertex vertex_of(Literal l) const;
};

/// Fault hooks for exercising the oracle harness. Never set in normal use.
struct CspFaults {
  bool negate_unit_clauses = false;
};

/// Throws ContractViolation when an edge joins two exposed vertices (m was not maximum).
CoverCsp build_cover_constraints(const Graph& g, const Matching& m, CspFaults faults = {});

struct CoverAnalysis {
  bool konig = false;
  std::vector<Vertex> cover_union;  // D: vertices in some minimum cover, sorted
  std::vector<Vertex> forced;       // vertices in every minimum cover, sorted
  bool unique = false;
  std::optional<std::vector<Vertex>> sample_cover;  // present iff konig, sorted

  bool in_union(Vertex v) const;
};

CoverAnalysis analyze_cover(const CoverCsp& csp);

/// nu(g) == tau(g).
bool is_konig(const Graph& g);

enum class AcceptReason { CoverIncident, Augmenting, Rejected, ErAlwaysAccept };
std::string_view to_string(AcceptReason reason);

/// Whether g + uv keeps the Konig property. Checks cover incidence first,
/// then probes for an augmenting path through the new pair without
/// modifying g. Requires m maximum in g, analysis current and konig.
AcceptReason acceptable(const Graph& g, const Matching& m, const CoverAnalysis& analysis, Vertex u, Vertex v);

/// Cover structure of a growing Konig graph, kept current edge by edge.
///
/// While the matching is unchanged a new edge only adds a clause, and for a
/// satisfiable 2-CNF the literals forced by (a or b) are those implied by
/// both a and b, so the backbone grows by an intersection of two
/// reachability sets. A changed matching requires rebuild().
class CoverTracker {
 public:
  void rebuild(const Graph& g, const Matching& m);

  /// Edge (u, v) was inserted and the matching did not change. Throws
  /// ContractViolation if the edge makes the constraints unsatisfiable.
  void add_edge(Vertex u, Vertex v);

  bool konig() const { return konig_; }
  bool in_union(Vertex v) const { return in_union_[static_cast<std::size_t>(v)] != 0; }
  std::size_t union_size() const { return union_size_; }
  bool unique() const { return konig_ && union_size_ == csp_.variable_count(); }

  /// Vertices whose D-membership flipped during the last rebuild()/add_edge().
  const std::vector<Vertex>& last_changes() const { return changes_; }

  /// Full snapshot, including a sample cover.
  CoverAnalysis analysis() const;

 private:
  void set_union(Vertex v, bool member);
  void mark_reachable(Literal from, unsigned stamp, std::vector<Literal>& visited);

  CoverCsp csp_;
  bool konig_ = false;
  std::vector<char> in_union_;
  std::size_t union_size_ = 0;
  std::vector<char> forced_true_;  // per literal
  std::vector<unsigned> seen_;
  unsigned seen_now_ = 0;
  std::vector<Literal> stack_;
  std::vector<Vertex> changes_;
};

}  // namespace konig
