#include "konig/matching.hpp"

#include <algorithm>
#include <numeric>

#include "konig/errors.hpp"

namespace konig {

void Matching::match(Vertex u, Vertex v) {
  auto& mu = mate[static_cast<std::size_t>(u)];
  auto& mv = mate[static_cast<std::size_t>(v)];
  if (mu != kNoVertex || mv != kNoVertex || u == v) {
    throw ContractViolation("Matching::match: endpoint already matched");
  }
  mu = v;
  mv = u;
  ++size;
}

void Matching::unmatch(Vertex v) {
  const Vertex u = mate_of(v);
  if (u == kNoVertex) return;
  mate[static_cast<std::size_t>(u)] = kNoVertex;
  mate[static_cast<std::size_t>(v)] = kNoVertex;
  --size;
}

std::vector<Vertex> Matching::exposed_vertices() const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < n(); ++v) {
    if (exposed(v)) out.push_back(v);
  }
  return out;
}

std::vector<VertexPair> Matching::pairs() const {
  std::vector<VertexPair> out;
  for (Vertex v = 0; v < n(); ++v) {
    if (mate_of(v) > v) out.push_back({v, mate_of(v)});
  }
  return out;
}

bool is_valid_matching(const Graph& g, const Matching& m) {
  if (m.n() != g.n()) return false;
  std::size_t matched = 0;
  for (Vertex v = 0; v < m.n(); ++v) {
    const Vertex u = m.mate_of(v);
    if (u == kNoVertex) continue;
    if (u < 0 || u >= m.n() || u == v || m.mate_of(u) != v || !g.has_edge(u, v)) return false;
    ++matched;
  }
  return matched == 2 * m.size;
}

// ---------------------------------------------------------------------------
// AlternatingForest

Vertex AlternatingForest::find(Vertex v) const {
  auto idx = static_cast<std::size_t>(v);
  while (uf_[idx] != static_cast<Vertex>(idx)) {
    const auto up = static_cast<std::size_t>(uf_[idx]);
    uf_[idx] = uf_[up];
    idx = static_cast<std::size_t>(uf_[idx]);
  }
  return static_cast<Vertex>(idx);
}

Vertex AlternatingForest::blossom_of(Vertex v) const { return base_[static_cast<std::size_t>(find(v))]; }

void AlternatingForest::unite_into(Vertex v, Vertex base) {
  const Vertex rv = find(v);
  const Vertex rb = find(base);
  if (rv != rb) uf_[static_cast<std::size_t>(rv)] = rb;
  base_[static_cast<std::size_t>(rb)] = base;
}

Vertex AlternatingForest::common_base(Vertex a, Vertex b, const Matching& m) {
  if (++stamp_now_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0U);
    stamp_now_ = 1;
  }
  for (;;) {
    a = blossom_of(a);
    stamp_[static_cast<std::size_t>(a)] = stamp_now_;
    if (m.exposed(a)) break;
    a = parent_[static_cast<std::size_t>(m.mate_of(a))];
  }
  for (;;) {
    b = blossom_of(b);
    if (stamp_[static_cast<std::size_t>(b)] == stamp_now_) return b;
    b = parent_[static_cast<std::size_t>(m.mate_of(b))];
  }
}

void AlternatingForest::contract_path(Vertex v, Vertex base, Vertex child, const Matching& m) {
  // Blossom membership is applied by the caller once both halves are walked,
  // so blossom_of() keeps reporting the pre-contraction structure here.
  while (blossom_of(v) != base) {
    const Vertex w = m.mate_of(v);
    pending_.push_back(v);
    pending_.push_back(w);
    parent_[static_cast<std::size_t>(v)] = child;
    child = w;
    v = parent_[static_cast<std::size_t>(w)];
  }
}

void AlternatingForest::record_path(Vertex x, Vertex y, const Matching& m) {
  auto climb = [&](Vertex s, std::vector<Vertex>& out) {
    out.push_back(s);
    while (!m.exposed(s)) {
      const Vertex inner = m.mate_of(s);
      const Vertex next = parent_[static_cast<std::size_t>(inner)];
      out.push_back(inner);
      out.push_back(next);
      s = next;
    }
  };
  path_.clear();
  climb(x, path_);
  std::reverse(path_.begin(), path_.end());
  climb(y, path_);
}

bool AlternatingForest::grow(const Graph& g, const Matching& m, std::optional<VertexPair> extra) {
  const auto n = static_cast<std::size_t>(g.n());
  parent_.assign(n, kNoVertex);
  root_.assign(n, kNoVertex);
  outer_.assign(n, 0);
  uf_.resize(n);
  std::iota(uf_.begin(), uf_.end(), 0);
  base_.resize(n);
  std::iota(base_.begin(), base_.end(), 0);
  stamp_.resize(n, 0U);
  queue_.clear();
  path_.clear();

  for (Vertex v = 0; v < g.n(); ++v) {
    if (m.exposed(v)) {
      outer_[static_cast<std::size_t>(v)] = 1;
      root_[static_cast<std::size_t>(v)] = v;
      queue_.push_back(v);
    }
  }

  auto scan = [&](Vertex x, Vertex y) {
    if (find(x) == find(y) || m.mate_of(x) == y) return false;
    const auto yi = static_cast<std::size_t>(y);
    const auto xi = static_cast<std::size_t>(x);
    if (outer_[yi]) {
      if (root_[yi] != root_[xi]) {
        record_path(x, y, m);
        return true;
      }
      const Vertex b = common_base(x, y, m);
      pending_.clear();
      contract_path(x, b, y, m);
      contract_path(y, b, x, m);
      for (Vertex w : pending_) {
        unite_into(w, b);
        if (!outer_[static_cast<std::size_t>(w)]) {
          outer_[static_cast<std::size_t>(w)] = 1;
          queue_.push_back(w);
        }
      }
    } else if (parent_[yi] == kNoVertex) {
      // Unreached, hence matched: every exposed vertex is a root.
      parent_[yi] = x;
      root_[yi] = root_[xi];
      const Vertex z = m.mate_of(y);
      outer_[static_cast<std::size_t>(z)] = 1;
      root_[static_cast<std::size_t>(z)] = root_[xi];
      queue_.push_back(z);
    }
    return false;
  };

  for (std::size_t head = 0; head < queue_.size(); ++head) {
    const Vertex x = queue_[head];
    for (Vertex y : g.neighbors(x)) {
      if (scan(x, y)) return true;
    }
    if (extra) {
      if (x == extra->u && scan(x, extra->v)) return true;
      if (x == extra->v && scan(x, extra->u)) return true;
    }
  }
  return false;
}

void AlternatingForest::flip_path(Matching& m) const {
  if (path_.size() < 2 || path_.size() % 2 != 0) throw ContractViolation("flip_path: no augmenting path recorded");
  for (std::size_t i = 0; i < path_.size(); i += 2) {
    m.mate[static_cast<std::size_t>(path_[i])] = path_[i + 1];
    m.mate[static_cast<std::size_t>(path_[i + 1])] = path_[i];
  }
  ++m.size;
}

// ---------------------------------------------------------------------------

Matching maximum_matching(const Graph& g) {
  Matching m(g.n());
  for (Vertex u = 0; u < g.n(); ++u) {
    if (!m.exposed(u)) continue;
    for (Vertex w : g.neighbors(u)) {
      if (m.exposed(w)) {
        m.match(u, w);
        break;
      }
    }
  }
  AlternatingForest forest;
  while (forest.grow(g, m)) forest.flip_path(m);
  return m;
}

AugmentResult augment_with_edge(const Graph& g, Matching m, Vertex u, Vertex v) {
  if (!g.has_edge(u, v)) throw ContractViolation("augment_with_edge: edge must already be inserted");
  if (m.exposed(u) && m.exposed(v)) {
    m.match(u, v);
    return {std::move(m), true};
  }
  AlternatingForest forest;
  if (forest.grow(g, m)) {
    forest.flip_path(m);
    return {std::move(m), true};
  }
  return {std::move(m), false};
}

Matching normalize_matching(const Graph& g, Matching m, std::span<const Vertex> cover,
                            const QuasiIsolateReport& quasi) {
  if (!is_valid_matching(g, m)) throw ContractViolation("normalize_matching: invalid matching");
  std::vector<char> in_cover(static_cast<std::size_t>(g.n()), 0);
  for (Vertex v : cover) in_cover[static_cast<std::size_t>(v)] = 1;
  std::size_t cover_size = 0;
  for (char c : in_cover) cover_size += c != 0 ? 1 : 0;
  for (Vertex v : cover) {
    const Vertex u = m.mate_of(v);
    if (u == kNoVertex || in_cover[static_cast<std::size_t>(u)]) {
      throw ContractViolation("normalize_matching: cover must hold exactly one endpoint of each matched pair");
    }
  }
  if (cover_size != m.size) {
    throw ContractViolation("normalize_matching: cover must hold exactly one endpoint of each matched pair");
  }
  for (const auto& [a, b] : g.edges()) {
    if (!in_cover[static_cast<std::size_t>(a)] && !in_cover[static_cast<std::size_t>(b)]) {
      throw ContractViolation("normalize_matching: cover misses an edge");
    }
  }

  const std::size_t size_before = m.size;

  // (M2): a matched quasi-isolate hands its cover neighbour to its partner.
  for (const auto& group : quasi.groups) {
    for (Vertex q : group.quasi) {
      if (m.exposed(q)) continue;
      const Vertex c = m.mate_of(q);
      if (!m.exposed(group.partner)) throw ContractViolation("normalize_matching: partner unexpectedly matched");
      m.unmatch(q);
      m.match(c, group.partner);
    }
  }

  // (M1): trade u for an exposed neighbour w of larger degree. deg(w) > deg(u) >= 1
  // means w is never a quasi-isolate, so (M2) is preserved.
  bool changed = true;
  while (changed) {
    changed = false;
    for (Vertex v : cover) {
      const Vertex u = m.mate_of(v);
      Vertex best = kNoVertex;
      for (Vertex w : g.neighbors(v)) {
        if (!m.exposed(w) || g.degree(w) <= g.degree(u)) continue;
        if (best == kNoVertex || g.degree(w) > g.degree(best) || (g.degree(w) == g.degree(best) && w < best)) {
          best = w;
        }
      }
      if (best != kNoVertex) {
        m.unmatch(v);
        m.match(v, best);
        changed = true;
      }
    }
  }

  if (m.size != size_before) throw ContractViolation("normalize_matching: size changed");
  return m;
}

}  // namespace konig
