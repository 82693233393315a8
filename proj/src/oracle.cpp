#include "konig/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <unordered_map>

#include "konig/errors.hpp"

namespace konig::oracle {

namespace {

using Mask = std::uint32_t;

void guard(const Graph& g, Vertex limit, const char* what) {
  if (g.n() > limit) {
    throw ConfigError(std::string(what) + ": n=" + std::to_string(g.n()) + " exceeds oracle guard " +
                      std::to_string(limit));
  }
}

std::vector<Mask> adjacency_masks(const Graph& g) {
  std::vector<Mask> adj(static_cast<std::size_t>(g.n()), 0);
  for (Vertex v = 0; v < g.n(); ++v) {
    for (Vertex w : g.neighbors(v)) adj[static_cast<std::size_t>(v)] |= Mask{1} << w;
  }
  return adj;
}

bool covers(const std::vector<Mask>& adj, Mask subset) {
  for (std::size_t v = 0; v < adj.size(); ++v) {
    if ((subset >> v) & 1U) continue;
    // v outside the subset: all its neighbours must be inside.
    if ((adj[v] & ~subset) != 0) return false;
  }
  return true;
}

std::vector<Vertex> members(Mask mask) {
  std::vector<Vertex> out;
  for (Vertex v = 0; mask != 0; ++v, mask >>= 1) {
    if (mask & 1U) out.push_back(v);
  }
  return out;
}

// Calls visit on every subset of {0..n-1} with exactly k elements, in increasing order.
template <typename Visit>
void for_each_subset(Vertex n, int k, Visit&& visit) {
  if (k == 0) {
    visit(Mask{0});
    return;
  }
  if (k > n) return;
  const std::uint64_t limit = std::uint64_t{1} << n;
  std::uint64_t s = (std::uint64_t{1} << k) - 1;
  while (s < limit) {
    visit(static_cast<Mask>(s));
    const std::uint64_t low = s & (~s + 1);
    const std::uint64_t ripple = s + low;
    s = (((ripple ^ s) >> 2) / low) | ripple;
  }
}

std::size_t tau_from(const Graph& g, const std::vector<Mask>& adj) {
  for (int k = 0; k <= g.n(); ++k) {
    bool found = false;
    for_each_subset(g.n(), k, [&](Mask s) {
      if (!found && covers(adj, s)) found = true;
    });
    if (found) return static_cast<std::size_t>(k);
  }
  return static_cast<std::size_t>(g.n());
}

}  // namespace

std::size_t brute_nu(const Graph& g) {
  guard(g, kMaxNuTau, "brute_nu");
  const auto adj = adjacency_masks(g);
  std::unordered_map<Mask, std::size_t> memo;
  // Lowest alive vertex is either left unmatched or matched to an alive neighbour.
  std::function<std::size_t(Mask)> best = [&](Mask alive) -> std::size_t {
    if (alive == 0) return 0;
    if (auto it = memo.find(alive); it != memo.end()) return it->second;
    const int v = std::countr_zero(alive);
    const Mask rest = alive & ~(Mask{1} << v);
    std::size_t result = best(rest);
    Mask options = adj[static_cast<std::size_t>(v)] & rest;
    while (options != 0) {
      const int w = std::countr_zero(options);
      options &= options - 1;
      result = std::max(result, 1 + best(rest & ~(Mask{1} << w)));
    }
    memo.emplace(alive, result);
    return result;
  };
  const Mask all = g.n() == 32 ? ~Mask{0} : (Mask{1} << g.n()) - 1;
  return best(all);
}

std::size_t brute_tau(const Graph& g) {
  guard(g, kMaxNuTau, "brute_tau");
  return tau_from(g, adjacency_masks(g));
}

OracleResult brute_cover_union(const Graph& g) {
  guard(g, kMaxEnumeration, "brute_cover_union");
  const auto adj = adjacency_masks(g);
  OracleResult out;
  out.nu = brute_nu(g);
  out.tau = tau_from(g, adj);
  Mask union_mask = 0;
  std::vector<Mask> found;
  for_each_subset(g.n(), static_cast<int>(out.tau), [&](Mask s) {
    if (covers(adj, s)) found.push_back(s);
  });
  std::sort(found.begin(), found.end());
  for (Mask s : found) {
    union_mask |= s;
    out.min_covers.push_back(members(s));
  }
  out.cover_union = members(union_mask);
  out.konig = out.nu == out.tau;
  return out;
}

bool brute_acceptable(const Graph& g, Vertex u, Vertex v) {
  guard(g, kMaxEnumeration, "brute_acceptable");
  if (g.has_edge(u, v)) throw ContractViolation("brute_acceptable: pair already present");
  Graph extended = g;
  extended.add_edge(u, v);
  return brute_nu(extended) == brute_tau(extended);
}

std::vector<std::vector<VertexPair>> brute_maximum_matchings(const Graph& g) {
  guard(g, kMaxMatchingEnumeration, "brute_maximum_matchings");
  const auto adj = adjacency_masks(g);
  const std::size_t nu = brute_nu(g);
  std::vector<std::vector<VertexPair>> out;
  std::vector<VertexPair> current;
  std::function<void(Mask)> extend = [&](Mask alive) {
    if (current.size() == nu) {
      out.push_back(current);
      return;
    }
    if (alive == 0) return;
    // Prune when too few vertices remain to reach nu.
    if (current.size() + static_cast<std::size_t>(std::popcount(alive)) / 2 < nu) return;
    const int v = std::countr_zero(alive);
    const Mask rest = alive & ~(Mask{1} << v);
    extend(rest);
    Mask options = adj[static_cast<std::size_t>(v)] & rest;
    while (options != 0) {
      const int w = std::countr_zero(options);
      options &= options - 1;
      current.push_back({v, w});
      extend(rest & ~(Mask{1} << w));
      current.pop_back();
    }
  };
  extend((Mask{1} << g.n()) - 1);
  return out;
}

bool brute_independent_exposed_matching(const Graph& accepted, const Graph& offered) {
  if (accepted.n() != offered.n()) throw ContractViolation("brute_independent_exposed_matching: size mismatch");
  for (const auto& matching : brute_maximum_matchings(accepted)) {
    std::vector<char> covered(static_cast<std::size_t>(accepted.n()), 0);
    for (const auto& [u, v] : matching) {
      covered[static_cast<std::size_t>(u)] = 1;
      covered[static_cast<std::size_t>(v)] = 1;
    }
    bool independent = true;
    for (const auto& [u, v] : offered.edges()) {
      if (!covered[static_cast<std::size_t>(u)] && !covered[static_cast<std::size_t>(v)]) {
        independent = false;
        break;
      }
    }
    if (independent) return true;
  }
  return false;
}

}  // namespace konig::oracle
