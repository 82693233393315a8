#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace konig {

using Vertex = std::int32_t;
inline constexpr Vertex kNoVertex = -1;

/// Lexicographic index of an unordered pair {u < v} among the n(n-1)/2 pairs of K_n.
using PairCode = std::uint64_t;

struct VertexPair {
  Vertex u = kNoVertex;
  Vertex v = kNoVertex;
  friend bool operator==(const VertexPair&, const VertexPair&) = default;
};

/// n(n-1)/2.
constexpr std::uint64_t pair_count(std::uint64_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

PairCode pair_encode(Vertex u, Vertex v, Vertex n);
VertexPair pair_decode(PairCode code, Vertex n);

/// Insert-only simple undirected graph on {0, ..., n-1}.
///
/// Membership is a bit array indexed by PairCode, so has_edge is O(1) and the
/// memory cost is n(n-1)/2 bits regardless of density.
class Graph {
 public:
  Graph() = default;
  explicit Graph(Vertex n);

  Vertex n() const { return n_; }
  std::size_t edge_count() const { return edge_count_; }
  std::size_t degree(Vertex v) const { return adjacency_[static_cast<std::size_t>(v)].size(); }
  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[static_cast<std::size_t>(v)]; }

  bool has_edge(Vertex u, Vertex v) const;
  bool has_pair(PairCode code) const { return (bits_[code >> 6] >> (code & 63)) & 1U; }

  /// Throws ContractViolation on a self-loop, an out-of-range endpoint or a duplicate pair.
  void add_edge(Vertex u, Vertex v);

  /// Edges as (u < v) pairs in increasing PairCode order.
  std::vector<VertexPair> edges() const;

  /// Copy with vertex v renamed to perm[v].
  Graph relabeled(std::span<const Vertex> perm) const;

 private:
  void check_vertex(Vertex v) const;

  Vertex n_ = 0;
  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<std::uint64_t> bits_;
  std::size_t edge_count_ = 0;
};

Graph make_graph(Vertex n, std::initializer_list<std::pair<Vertex, Vertex>> edges);

/// Fixture format: a line `n <n>` followed by one `e <u> <v>` line per edge.
void write_graph_dump(std::ostream& out, const Graph& g);
std::string graph_dump(const Graph& g);
Graph read_graph_dump(std::istream& in);
Graph parse_graph_dump(const std::string& text);

}  // namespace konig
