#pragma once

#include <cstddef>
#include <vector>

#include "konig/graph.hpp"

// Exhaustive ground truth for small graphs. Nothing here shares code with
// the matching or cover routines it is used to check.
namespace konig::oracle {

inline constexpr Vertex kMaxNuTau = 16;
inline constexpr Vertex kMaxEnumeration = 14;
inline constexpr Vertex kMaxMatchingEnumeration = 10;

struct OracleResult {
  std::size_t nu = 0;
  std::size_t tau = 0;
  std::vector<std::vector<Vertex>> min_covers;  // each sorted; list in increasing bitmask order
  std::vector<Vertex> cover_union;              // sorted
  bool konig = false;
};

std::size_t brute_nu(const Graph& g);
std::size_t brute_tau(const Graph& g);
OracleResult brute_cover_union(const Graph& g);
bool brute_acceptable(const Graph& g, Vertex u, Vertex v);

/// Every maximum matching, as sorted lists of (u < v) pairs.
std::vector<std::vector<VertexPair>> brute_maximum_matchings(const Graph& g);

/// Some maximum matching of `accepted` leaves an exposed set that is
/// independent in `offered`.
bool brute_independent_exposed_matching(const Graph& accepted, const Graph& offered);

}  // namespace konig::oracle
