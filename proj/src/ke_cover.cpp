#include "konig/ke_cover.hpp"

#include <algorithm>

#include "konig/errors.hpp"

namespace konig {

namespace {

struct Components {
  std::vector<std::int32_t> of;  // component per node, numbered sinks first
  std::int32_t count = 0;
};

// Iterative Tarjan; components come out in reverse topological order.
Components strongly_connected(const std::vector<std::vector<Literal>>& arcs) {
  const auto n = static_cast<std::int32_t>(arcs.size());
  Components out;
  out.of.assign(arcs.size(), -1);
  std::vector<std::int32_t> index(arcs.size(), -1);
  std::vector<std::int32_t> low(arcs.size(), 0);
  std::vector<char> on_stack(arcs.size(), 0);
  std::vector<std::int32_t> stack;
  std::vector<std::pair<std::int32_t, std::size_t>> call;
  std::int32_t next_index = 0;

  for (std::int32_t start = 0; start < n; ++start) {
    if (index[static_cast<std::size_t>(start)] >= 0) continue;
    call.emplace_back(start, 0);
    while (!call.empty()) {
      auto& [node, edge] = call.back();
      const auto ni = static_cast<std::size_t>(node);
      if (edge == 0 && index[ni] < 0) {
        index[ni] = low[ni] = next_index++;
        stack.push_back(node);
        on_stack[ni] = 1;
      }
      if (edge < arcs[ni].size()) {
        const auto succ = arcs[ni][edge++];
        const auto si = static_cast<std::size_t>(succ);
        if (index[si] < 0) {
          call.emplace_back(succ, 0);
        } else if (on_stack[si]) {
          low[ni] = std::min(low[ni], index[si]);
        }
        continue;
      }
      if (low[ni] == index[ni]) {
        std::int32_t w = 0;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = 0;
          out.of[static_cast<std::size_t>(w)] = out.count;
        } while (w != node);
        ++out.count;
      }
      const std::int32_t finished = node;
      call.pop_back();
      if (!call.empty()) {
        const auto parent = static_cast<std::size_t>(call.back().first);
        low[parent] = std::min(low[parent], low[static_cast<std::size_t>(finished)]);
      }
    }
  }
  return out;
}

// Canonical solution: a literal holds when its component is closer to the sinks.
std::vector<Vertex> sample_cover_of(const CoverCsp& csp, const Components& comps) {
  std::vector<Vertex> cover;
  for (std::size_t i = 0; i < csp.variable_count(); ++i) {
    const bool lower = comps.of[2 * i] < comps.of[2 * i + 1];
    cover.push_back(lower ? csp.variables[i].u : csp.variables[i].v);
  }
  std::sort(cover.begin(), cover.end());
  return cover;
}

void add_clause(CoverCsp& csp, Literal a, Literal b) {
  csp.implications[static_cast<std::size_t>(negate(a))].push_back(b);
  csp.implications[static_cast<std::size_t>(negate(b))].push_back(a);
}

}  // namespace

Literal CoverCsp::cover_literal(Vertex v) const {
  const std::int32_t var = variable_of[static_cast<std::size_t>(v)];
  if (var < 0) throw ContractViolation("cover_literal: vertex " + std::to_string(v) + " is exposed");
  return 2 * var + (variables[static_cast<std::size_t>(var)].u == v ? 0 : 1);
}

Vertex CoverCsp::vertex_of(Literal l) const {
  const auto& pair = variables[static_cast<std::size_t>(l >> 1)];
  return (l & 1) == 0 ? pair.u : pair.v;
}

CoverCsp build_cover_constraints(const Graph& g, const Matching& m, CspFaults faults) {
  CoverCsp csp;
  csp.n = g.n();
  csp.variable_of.assign(static_cast<std::size_t>(g.n()), -1);
  for (const auto& pair : m.pairs()) {
    const auto var = static_cast<std::int32_t>(csp.variables.size());
    csp.variables.push_back(pair);
    csp.variable_of[static_cast<std::size_t>(pair.u)] = var;
    csp.variable_of[static_cast<std::size_t>(pair.v)] = var;
  }
  csp.implications.resize(2 * csp.variables.size());

  for (const auto& [a, b] : g.edges()) {
    if (m.mate_of(a) == b) continue;
    const bool a_matched = !m.exposed(a);
    const bool b_matched = !m.exposed(b);
    if (a_matched && b_matched) {
      const Literal la = csp.cover_literal(a);
      const Literal lb = csp.cover_literal(b);
      csp.clauses.emplace_back(la, lb);
      add_clause(csp, la, lb);
    } else if (a_matched || b_matched) {
      Literal unit = csp.cover_literal(a_matched ? a : b);
      if (faults.negate_unit_clauses) unit = negate(unit);
      csp.unit_clauses.push_back(unit);
      add_clause(csp, unit, unit);
    } else {
      throw ContractViolation("build_cover_constraints: edge (" + std::to_string(a) + ", " + std::to_string(b) +
                              ") joins two exposed vertices; matching is not maximum");
    }
  }
  return csp;
}

bool CoverAnalysis::in_union(Vertex v) const {
  return std::binary_search(cover_union.begin(), cover_union.end(), v);
}

CoverAnalysis analyze_cover(const CoverCsp& csp) {
  CoverAnalysis out;
  const Components comps = strongly_connected(csp.implications);
  for (std::size_t i = 0; i < csp.variable_count(); ++i) {
    if (comps.of[2 * i] == comps.of[2 * i + 1]) return out;
  }
  out.konig = true;

  // Descendant sets over the condensation, filled sinks first.
  const auto count = static_cast<std::size_t>(comps.count);
  const std::size_t words = (count + 63) / 64;
  std::vector<std::uint64_t> reach(count * words, 0);
  std::vector<std::vector<Literal>> members(count);
  for (std::size_t l = 0; l < csp.implications.size(); ++l) members[static_cast<std::size_t>(comps.of[l])].push_back(static_cast<Literal>(l));
  for (std::size_t c = 0; c < count; ++c) {
    std::uint64_t* row = &reach[c * words];
    row[c / 64] |= std::uint64_t{1} << (c % 64);
    for (Literal l : members[c]) {
      for (Literal succ : csp.implications[static_cast<std::size_t>(l)]) {
        const auto d = static_cast<std::size_t>(comps.of[static_cast<std::size_t>(succ)]);
        if (d == c) continue;
        const std::uint64_t* other = &reach[d * words];
        for (std::size_t w = 0; w < words; ++w) row[w] |= other[w];
      }
    }
  }
  auto implies_negation = [&](Literal l) {
    const auto from = static_cast<std::size_t>(comps.of[static_cast<std::size_t>(l)]);
    const auto to = static_cast<std::size_t>(comps.of[static_cast<std::size_t>(negate(l))]);
    return ((reach[from * words + to / 64] >> (to % 64)) & 1U) != 0;
  };

  for (std::size_t i = 0; i < csp.variable_count(); ++i) {
    const auto [lower, upper] = csp.variables[i];
    const bool lower_possible = !implies_negation(static_cast<Literal>(2 * i));
    const bool upper_possible = !implies_negation(static_cast<Literal>(2 * i + 1));
    if (lower_possible) out.cover_union.push_back(lower);
    if (upper_possible) out.cover_union.push_back(upper);
    if (!upper_possible) out.forced.push_back(lower);
    if (!lower_possible) out.forced.push_back(upper);
  }
  std::sort(out.cover_union.begin(), out.cover_union.end());
  std::sort(out.forced.begin(), out.forced.end());
  out.unique = out.cover_union.size() == csp.variable_count();
  out.sample_cover = sample_cover_of(csp, comps);
  return out;
}

bool is_konig(const Graph& g) {
  const Matching m = maximum_matching(g);
  return analyze_cover(build_cover_constraints(g, m)).konig;
}

std::string_view to_string(AcceptReason reason) {
  switch (reason) {
    case AcceptReason::CoverIncident: return "cover_incident";
    case AcceptReason::Augmenting: return "augmenting";
    case AcceptReason::Rejected: return "rejected";
    case AcceptReason::ErAlwaysAccept: return "er_always_accept";
  }
  return "unknown";
}

AcceptReason acceptable(const Graph& g, const Matching& m, const CoverAnalysis& analysis, Vertex u, Vertex v) {
  if (u == v || g.has_edge(u, v)) throw ContractViolation("acceptable: pair already present or a self-loop");
  if (!analysis.konig) throw ContractViolation("acceptable: graph does not have the Konig property");
  if (analysis.in_union(u) || analysis.in_union(v)) return AcceptReason::CoverIncident;
  if (m.exposed(u) && m.exposed(v)) return AcceptReason::Augmenting;
  AlternatingForest forest;
  return forest.grow(g, m, VertexPair{u, v}) ? AcceptReason::Augmenting : AcceptReason::Rejected;
}

// ---------------------------------------------------------------------------
// CoverTracker

void CoverTracker::set_union(Vertex v, bool member) {
  auto& flag = in_union_[static_cast<std::size_t>(v)];
  if ((flag != 0) == member) return;
  flag = member ? 1 : 0;
  if (member) {
    ++union_size_;
  } else {
    --union_size_;
  }
  changes_.push_back(v);
}

void CoverTracker::rebuild(const Graph& g, const Matching& m) {
  csp_ = build_cover_constraints(g, m);
  const CoverAnalysis fresh = analyze_cover(csp_);
  konig_ = fresh.konig;
  changes_.clear();
  in_union_.resize(static_cast<std::size_t>(g.n()), 0);
  std::vector<char> member(static_cast<std::size_t>(g.n()), 0);
  for (Vertex v : fresh.cover_union) member[static_cast<std::size_t>(v)] = 1;
  for (Vertex v = 0; v < g.n(); ++v) set_union(v, member[static_cast<std::size_t>(v)] != 0);

  forced_true_.assign(csp_.implications.size(), 0);
  for (Vertex v = 0; v < g.n(); ++v) {
    // v is forced exactly when its mate can never be in a cover.
    const Vertex mate = m.mate_of(v);
    if (konig_ && mate != kNoVertex && !member[static_cast<std::size_t>(mate)]) {
      forced_true_[static_cast<std::size_t>(csp_.cover_literal(v))] = 1;
    }
  }
  seen_.assign(csp_.implications.size(), 0);
  seen_now_ = 0;
}

void CoverTracker::mark_reachable(Literal from, unsigned stamp, std::vector<Literal>& visited) {
  // Forced literals only reach forced literals, so the search stops there.
  stack_.clear();
  if (forced_true_[static_cast<std::size_t>(from)] || seen_[static_cast<std::size_t>(from)] == stamp) return;
  seen_[static_cast<std::size_t>(from)] = stamp;
  stack_.push_back(from);
  visited.push_back(from);
  while (!stack_.empty()) {
    const Literal l = stack_.back();
    stack_.pop_back();
    for (Literal next : csp_.implications[static_cast<std::size_t>(l)]) {
      const auto ni = static_cast<std::size_t>(next);
      if (forced_true_[ni] || seen_[ni] == stamp) continue;
      seen_[ni] = stamp;
      stack_.push_back(next);
      visited.push_back(next);
    }
  }
}

void CoverTracker::add_edge(Vertex u, Vertex v) {
  changes_.clear();
  if (!konig_) throw ContractViolation("CoverTracker::add_edge: constraints already unsatisfiable");
  const bool u_matched = csp_.variable_of[static_cast<std::size_t>(u)] >= 0;
  const bool v_matched = csp_.variable_of[static_cast<std::size_t>(v)] >= 0;
  if (!u_matched && !v_matched) throw ContractViolation("CoverTracker::add_edge: both endpoints exposed");
  if (u_matched && v_matched && csp_.variable_of[static_cast<std::size_t>(u)] == csp_.variable_of[static_cast<std::size_t>(v)]) {
    return;  // the matched pair itself
  }

  std::vector<Literal> options;
  Literal lu = -1;
  Literal lv = -1;
  if (u_matched) {
    lu = csp_.cover_literal(u);
    if (in_union(u)) options.push_back(lu);
  }
  if (v_matched) {
    lv = csp_.cover_literal(v);
    if (in_union(v)) options.push_back(lv);
  }
  if (u_matched && v_matched) {
    csp_.clauses.emplace_back(lu, lv);
    add_clause(csp_, lu, lv);
  } else {
    const Literal unit = u_matched ? lu : lv;
    csp_.unit_clauses.push_back(unit);
    add_clause(csp_, unit, unit);
  }

  if (options.empty()) {
    konig_ = false;
    throw ContractViolation("CoverTracker::add_edge: edge avoids every minimum cover");
  }
  for (Literal l : options) {
    if (forced_true_[static_cast<std::size_t>(l)]) return;  // every cover already touches the edge
  }

  if (seen_now_ + 2 < seen_now_) {
    std::fill(seen_.begin(), seen_.end(), 0U);
    seen_now_ = 0;
  }
  std::vector<Literal> newly;
  const unsigned first = ++seen_now_;
  mark_reachable(options[0], first, newly);
  if (options.size() == 2) {
    // Forced by (a or b) means implied by both a and b.
    std::vector<Literal> from_second;
    const unsigned second = ++seen_now_;
    mark_reachable(options[1], second, from_second);
    std::erase_if(newly, [&](Literal l) { return seen_[static_cast<std::size_t>(l)] != second; });
  }
  for (Literal l : newly) {
    forced_true_[static_cast<std::size_t>(l)] = 1;
    set_union(csp_.vertex_of(negate(l)), false);
  }
}

CoverAnalysis CoverTracker::analysis() const {
  CoverAnalysis out;
  out.konig = konig_;
  if (!konig_) return out;
  for (Vertex v = 0; v < csp_.n; ++v) {
    if (!in_union(v)) continue;
    out.cover_union.push_back(v);
    if (forced_true_[static_cast<std::size_t>(csp_.cover_literal(v))]) out.forced.push_back(v);
  }
  out.unique = unique();
  out.sample_cover = sample_cover_of(csp_, strongly_connected(csp_.implications));
  return out;
}

}  // namespace konig
