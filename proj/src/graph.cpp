#include "konig/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "konig/errors.hpp"

namespace konig {

namespace {

// Code of the first pair whose smaller endpoint is u.
std::uint64_t row_start(std::uint64_t u, std::uint64_t n) { return u * n - u * (u + 1) / 2; }

}  // namespace

PairCode pair_encode(Vertex u, Vertex v, Vertex n) {
  if (u < 0 || u >= v || v >= n) {
    throw ContractViolation("pair_encode: need 0 <= u < v < n, got (" + std::to_string(u) + ", " +
                            std::to_string(v) + ") with n=" + std::to_string(n));
  }
  const auto uu = static_cast<std::uint64_t>(u);
  const auto vv = static_cast<std::uint64_t>(v);
  return row_start(uu, static_cast<std::uint64_t>(n)) + (vv - uu - 1);
}

VertexPair pair_decode(PairCode code, Vertex n) {
  const auto nn = static_cast<std::uint64_t>(n);
  if (n < 2 || code >= pair_count(nn)) {
    throw ContractViolation("pair_decode: code " + std::to_string(code) + " out of range for n=" +
                            std::to_string(n));
  }
  // Invert row_start(u) <= code with the quadratic formula, then repair rounding.
  const double b = 2.0 * static_cast<double>(nn) - 1.0;
  const double guess = std::floor((b - std::sqrt(b * b - 8.0 * static_cast<double>(code))) / 2.0);
  auto u = static_cast<std::uint64_t>(std::max(0.0, guess));
  while (u > 0 && row_start(u, nn) > code) --u;
  while (u + 1 < nn && row_start(u + 1, nn) <= code) ++u;
  const std::uint64_t v = u + 1 + (code - row_start(u, nn));
  return {static_cast<Vertex>(u), static_cast<Vertex>(v)};
}

Graph::Graph(Vertex n) : n_(n) {
  if (n < 0) throw ContractViolation("Graph: negative vertex count");
  adjacency_.resize(static_cast<std::size_t>(n));
  bits_.assign((pair_count(static_cast<std::uint64_t>(n)) + 63) / 64, 0);
}

void Graph::check_vertex(Vertex v) const {
  if (v < 0 || v >= n_) {
    throw ContractViolation("vertex " + std::to_string(v) + " out of range for n=" + std::to_string(n_));
  }
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  check_vertex(u);
  check_vertex(v);
  if (u == v) return false;
  return has_pair(u < v ? pair_encode(u, v, n_) : pair_encode(v, u, n_));
}

void Graph::add_edge(Vertex u, Vertex v) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw ContractViolation("add_edge: self-loop at " + std::to_string(u));
  const PairCode code = u < v ? pair_encode(u, v, n_) : pair_encode(v, u, n_);
  if (has_pair(code)) {
    throw ContractViolation("add_edge: duplicate pair (" + std::to_string(u) + ", " + std::to_string(v) + ")");
  }
  bits_[code >> 6] |= std::uint64_t{1} << (code & 63);
  adjacency_[static_cast<std::size_t>(u)].push_back(v);
  adjacency_[static_cast<std::size_t>(v)].push_back(u);
  ++edge_count_;
}

std::vector<VertexPair> Graph::edges() const {
  std::vector<VertexPair> out;
  out.reserve(edge_count_);
  for (Vertex u = 0; u < n_; ++u) {
    std::vector<Vertex> higher;
    for (Vertex w : neighbors(u)) {
      if (w > u) higher.push_back(w);
    }
    std::sort(higher.begin(), higher.end());
    for (Vertex w : higher) out.push_back({u, w});
  }
  return out;
}

Graph Graph::relabeled(std::span<const Vertex> perm) const {
  if (perm.size() != static_cast<std::size_t>(n_)) throw ContractViolation("relabeled: permutation size mismatch");
  Graph out(n_);
  for (const auto& [u, v] : edges()) out.add_edge(perm[static_cast<std::size_t>(u)], perm[static_cast<std::size_t>(v)]);
  return out;
}

Graph make_graph(Vertex n, std::initializer_list<std::pair<Vertex, Vertex>> edges) {
  Graph g(n);
  for (const auto& [u, v] : edges) g.add_edge(u, v);
  return g;
}

void write_graph_dump(std::ostream& out, const Graph& g) {
  out << "n " << g.n() << '\n';
  for (const auto& [u, v] : g.edges()) out << "e " << u << ' ' << v << '\n';
}

std::string graph_dump(const Graph& g) {
  std::ostringstream out;
  write_graph_dump(out, g);
  return out.str();
}

Graph read_graph_dump(std::istream& in) {
  std::string line;
  std::optional<Graph> g;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string tag;
    fields >> tag;
    if (tag == "n" && !g) {
      Vertex n = -1;
      if (!(fields >> n) || n < 0) throw ConfigError("graph dump line " + std::to_string(line_no) + ": bad vertex count");
      g.emplace(n);
    } else if (tag == "e" && g) {
      Vertex u = -1;
      Vertex v = -1;
      if (!(fields >> u >> v)) throw ConfigError("graph dump line " + std::to_string(line_no) + ": bad edge");
      try {
        g->add_edge(u, v);
      } catch (const ContractViolation& e) {
        throw ConfigError("graph dump line " + std::to_string(line_no) + ": " + e.what());
      }
    } else {
      throw ConfigError("graph dump line " + std::to_string(line_no) + ": unexpected '" + line + "'");
    }
  }
  if (!g) throw ConfigError("graph dump: missing 'n' line");
  return std::move(*g);
}

Graph parse_graph_dump(const std::string& text) {
  std::istringstream in(text);
  return read_graph_dump(in);
}

}  // namespace konig
