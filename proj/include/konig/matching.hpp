#pragma once

#include <optional>
#include <span>
#include <vector>

#include "konig/graph.hpp"
#include "konig/quasi_isolates.hpp"

namespace konig {

struct Matching {
  Matching() = default;
  explicit Matching(Vertex n) : mate(static_cast<std::size_t>(n), kNoVertex) {}

  std::vector<Vertex> mate;  // kNoVertex when exposed
  std::size_t size = 0;

  Vertex n() const { return static_cast<Vertex>(mate.size()); }
  Vertex mate_of(Vertex v) const { return mate[static_cast<std::size_t>(v)]; }
  bool exposed(Vertex v) const { return mate_of(v) == kNoVertex; }

  void match(Vertex u, Vertex v);
  void unmatch(Vertex v);

  std::vector<Vertex> exposed_vertices() const;
  /// Matched pairs as (u < v), sorted.
  std::vector<VertexPair> pairs() const;

  friend bool operator==(const Matching&, const Matching&) = default;
};

/// mate symmetric, irreflexive, every pair an edge of g, size consistent.
bool is_valid_matching(const Graph& g, const Matching& m);

/// Edmonds' alternating forest grown at once from every exposed vertex.
///
/// When grow() returns false the search has exhausted the graph and the
/// labels describe the Gallai-Edmonds structure: outer vertices are exactly
/// those missed by some maximum matching, and each outer blossom is one
/// component of the graph induced on them.
class AlternatingForest {
 public:
  /// `extra` is treated as an additional edge of g (used to probe a pair
  /// without inserting it). Returns true when an augmenting path exists; the
  /// path is kept and can be applied with flip_path().
  bool grow(const Graph& g, const Matching& m, std::optional<VertexPair> extra = std::nullopt);

  /// Flips the augmenting path found by the last successful grow().
  void flip_path(Matching& m) const;

  bool outer(Vertex v) const { return outer_[static_cast<std::size_t>(v)] != 0; }
  /// Exposed vertex whose tree contains v, or kNoVertex.
  Vertex tree_of(Vertex v) const { return root_[static_cast<std::size_t>(v)]; }
  /// Base vertex of the blossom containing v.
  Vertex blossom_of(Vertex v) const;

 private:
  Vertex find(Vertex v) const;
  void unite_into(Vertex v, Vertex base);
  Vertex common_base(Vertex a, Vertex b, const Matching& m);
  void contract_path(Vertex v, Vertex base, Vertex child, const Matching& m);
  void record_path(Vertex x, Vertex y, const Matching& m);

  std::vector<Vertex> parent_;
  std::vector<Vertex> root_;
  std::vector<char> outer_;
  mutable std::vector<Vertex> uf_;
  std::vector<Vertex> base_;
  std::vector<Vertex> queue_;
  std::vector<Vertex> pending_;
  std::vector<unsigned> stamp_;
  unsigned stamp_now_ = 0;
  std::vector<Vertex> path_;
};

Matching maximum_matching(const Graph& g);

struct AugmentResult {
  Matching matching;
  bool increased = false;
};

/// g must already contain (u, v) and m must be maximum in g - uv. One forest
/// search restores maximality since the size can grow by at most one.
AugmentResult augment_with_edge(const Graph& g, Matching m, Vertex u, Vertex v);

/// Rewrites a maximum matching so that no quasi-isolate is matched and every
/// cover vertex v matched to u has no exposed neighbour of larger degree
/// than u. `cover` must hold exactly one endpoint of each matched pair.
Matching normalize_matching(const Graph& g, Matching m, std::span<const Vertex> cover,
                            const QuasiIsolateReport& quasi);

}  // namespace konig
