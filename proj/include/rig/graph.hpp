#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace rig {

using vertex_t = std::uint32_t;
using edge_t = std::pair<vertex_t, vertex_t>;

// Finite simple undirected graph in compressed adjacency form. Neighbor lists
// are sorted and duplicate-free; the graph is immutable once built.
class Graph {
 public:
  Graph() : offsets_(1, 0) {}

  // Builds from an edge list. Duplicate edges (in either orientation) collapse;
  // self-loops and out-of-range endpoints are rejected.
  static Graph from_edges(std::size_t n, std::vector<edge_t> edges) {
    for (auto& [u, v] : edges) {
      if (u >= n || v >= n) throw validation_error("edge endpoint out of range");
      if (u == v) throw validation_error("self-loop in simple graph");
      if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    std::vector<std::size_t> deg(n, 0);
    for (auto [u, v] : edges) {
      ++deg[u];
      ++deg[v];
    }
    Graph g;
    g.offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + deg[i];
    g.nbrs_.resize(g.offsets_[n]);
    std::vector<std::size_t> pos(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [u, v] : edges) {
      g.nbrs_[pos[u]++] = v;
      g.nbrs_[pos[v]++] = u;
    }
    for (std::size_t i = 0; i < n; ++i)
      std::sort(g.nbrs_.begin() + g.offsets_[i], g.nbrs_.begin() + g.offsets_[i + 1]);
    return g;
  }

  // Builds from per-vertex neighbor lists that already satisfy the invariants
  // (sorted, unique, symmetric, loop-free). Checked in debug builds only.
  static Graph from_sorted_adjacency(const std::vector<std::vector<vertex_t>>& adj) {
    Graph g;
    const std::size_t n = adj.size();
    g.offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + adj[i].size();
    g.nbrs_.reserve(g.offsets_[n]);
    for (const auto& a : adj) g.nbrs_.insert(g.nbrs_.end(), a.begin(), a.end());
    return g;
  }

  std::size_t vertex_count() const { return offsets_.size() - 1; }
  std::size_t edge_count() const { return nbrs_.size() / 2; }

  std::span<const vertex_t> neighbors(vertex_t v) const {
    return {nbrs_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(vertex_t v) const { return offsets_[v + 1] - offsets_[v]; }

  bool adjacent(vertex_t u, vertex_t v) const {
    if (degree(u) > degree(v)) std::swap(u, v);
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  // Edges with u < v, in lexicographic order.
  std::vector<edge_t> edges() const {
    std::vector<edge_t> out;
    out.reserve(edge_count());
    for (vertex_t u = 0; u < vertex_count(); ++u)
      for (vertex_t v : neighbors(u))
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  // True when every invariant holds; used by tests.
  bool is_valid() const {
    for (vertex_t u = 0; u < vertex_count(); ++u) {
      auto nb = neighbors(u);
      for (std::size_t i = 0; i < nb.size(); ++i) {
        if (nb[i] >= vertex_count() || nb[i] == u) return false;
        if (i > 0 && nb[i - 1] >= nb[i]) return false;
        auto back = neighbors(nb[i]);
        if (!std::binary_search(back.begin(), back.end(), u)) return false;
      }
    }
    return true;
  }

  bool operator==(const Graph& o) const { return offsets_ == o.offsets_ && nbrs_ == o.nbrs_; }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<vertex_t> nbrs_;
};

inline std::vector<std::size_t> degree_sequence(const Graph& g) {
  std::vector<std::size_t> d(g.vertex_count());
  for (vertex_t v = 0; v < g.vertex_count(); ++v) d[v] = g.degree(v);
  return d;
}

inline bool is_connected(const Graph& g) {
  const std::size_t n = g.vertex_count();
  if (n == 0) return true;
  std::vector<char> seen(n, 0);
  std::vector<vertex_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    vertex_t u = stack.back();
    stack.pop_back();
    for (vertex_t w : g.neighbors(u))
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  return count == n;
}

// Two-part graph H = (V1, V2, E) with an edge multiset; edge (u, w) joins
// u in V1 to w in V2. Stored as sorted unique pairs with multiplicities.
class BipartiteMultigraph {
 public:
  struct Edge {
    vertex_t u;
    vertex_t w;
    std::uint32_t mult;
    bool operator==(const Edge&) const = default;
  };

  BipartiteMultigraph() = default;
  BipartiteMultigraph(std::size_t n1, std::size_t n2) : n1_(n1), n2_(n2) {}

  // Each (u, w) occurrence counts once toward the multiplicity of that pair.
  static BipartiteMultigraph from_pairs(std::size_t n1, std::size_t n2,
                                        std::vector<std::pair<vertex_t, vertex_t>> pairs) {
    BipartiteMultigraph h(n1, n2);
    for (auto [u, w] : pairs)
      if (u >= n1 || w >= n2) throw validation_error("bipartite edge endpoint out of range");
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t i = 0; i < pairs.size();) {
      std::size_t j = i;
      while (j < pairs.size() && pairs[j] == pairs[i]) ++j;
      h.edges_.push_back({pairs[i].first, pairs[i].second, static_cast<std::uint32_t>(j - i)});
      i = j;
    }
    return h;
  }

  static BipartiteMultigraph from_edges(std::size_t n1, std::size_t n2, std::vector<Edge> edges) {
    std::vector<std::pair<vertex_t, vertex_t>> pairs;
    for (const auto& e : edges) {
      if (e.mult < 1) throw validation_error("edge multiplicity must be >= 1");
      for (std::uint32_t k = 0; k < e.mult; ++k) pairs.emplace_back(e.u, e.w);
    }
    return from_pairs(n1, n2, std::move(pairs));
  }

  std::size_t n1() const { return n1_; }
  std::size_t n2() const { return n2_; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::size_t total_multiplicity() const {
    std::size_t s = 0;
    for (const auto& e : edges_) s += e.mult;
    return s;
  }

  // Part degrees counted with multiplicity.
  std::vector<std::size_t> part1_degrees() const {
    std::vector<std::size_t> d(n1_, 0);
    for (const auto& e : edges_) d[e.u] += e.mult;
    return d;
  }
  std::vector<std::size_t> part2_degrees() const {
    std::vector<std::size_t> d(n2_, 0);
    for (const auto& e : edges_) d[e.w] += e.mult;
    return d;
  }

  bool operator==(const BipartiteMultigraph&) const = default;

 private:
  std::size_t n1_ = 0;
  std::size_t n2_ = 0;
  std::vector<Edge> edges_;
};

// Graph on V1 where u ~ v iff some w in V2 is adjacent to both.
inline Graph intersection_graph(const BipartiteMultigraph& h) {
  const std::size_t n1 = h.n1(), n2 = h.n2();
  // members of each attribute, and attributes of each vertex (distinct pairs)
  std::vector<std::size_t> moff(n2 + 1, 0), aoff(n1 + 1, 0);
  for (const auto& e : h.edges()) {
    ++moff[e.w + 1];
    ++aoff[e.u + 1];
  }
  std::partial_sum(moff.begin(), moff.end(), moff.begin());
  std::partial_sum(aoff.begin(), aoff.end(), aoff.begin());
  std::vector<vertex_t> members(moff[n2]), attrs(aoff[n1]);
  {
    std::vector<std::size_t> mp(moff.begin(), moff.end() - 1), ap(aoff.begin(), aoff.end() - 1);
    for (const auto& e : h.edges()) {
      members[mp[e.w]++] = e.u;
      attrs[ap[e.u]++] = e.w;
    }
  }
  std::vector<std::vector<vertex_t>> adj(n1);
  std::vector<vertex_t> buf;
  for (vertex_t u = 0; u < n1; ++u) {
    buf.clear();
    for (std::size_t a = aoff[u]; a < aoff[u + 1]; ++a) {
      const vertex_t w = attrs[a];
      for (std::size_t m = moff[w]; m < moff[w + 1]; ++m)
        if (members[m] != u) buf.push_back(members[m]);
    }
    std::sort(buf.begin(), buf.end());
    buf.erase(std::unique(buf.begin(), buf.end()), buf.end());
    adj[u] = buf;
  }
  return Graph::from_sorted_adjacency(adj);
}

// ---------------------------------------------------------------------------
// Edge-list text formats.
//   graph:     header "n m", then m lines "u v"
//   bipartite: header "n1 n2 m", then m lines "u w mult"

inline void write_edge_list(std::ostream& os, const Graph& g) {
  os << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (auto [u, v] : g.edges()) os << u << ' ' << v << '\n';
}

inline Graph read_edge_list(std::istream& is) {
  std::size_t n = 0, m = 0;
  if (!(is >> n >> m)) throw validation_error("edge list: missing header 'n m'");
  std::vector<edge_t> edges;
  edges.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    long long u = 0, v = 0;
    if (!(is >> u >> v)) throw validation_error("edge list: truncated at edge " + std::to_string(i));
    if (u < 0 || v < 0) throw validation_error("edge list: negative vertex index");
    edges.emplace_back(static_cast<vertex_t>(u), static_cast<vertex_t>(v));
  }
  return Graph::from_edges(n, std::move(edges));
}

inline void write_bipartite(std::ostream& os, const BipartiteMultigraph& h) {
  os << h.n1() << ' ' << h.n2() << ' ' << h.edges().size() << '\n';
  for (const auto& e : h.edges()) os << e.u << ' ' << e.w << ' ' << e.mult << '\n';
}

inline BipartiteMultigraph read_bipartite(std::istream& is) {
  std::size_t n1 = 0, n2 = 0, m = 0;
  if (!(is >> n1 >> n2 >> m)) throw validation_error("bipartite list: missing header 'n1 n2 m'");
  std::vector<BipartiteMultigraph::Edge> edges;
  edges.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    long long u = 0, w = 0, mult = 0;
    if (!(is >> u >> w >> mult)) throw validation_error("bipartite list: truncated at edge " + std::to_string(i));
    if (u < 0 || w < 0 || mult < 1) throw validation_error("bipartite list: bad edge line");
    edges.push_back({static_cast<vertex_t>(u), static_cast<vertex_t>(w), static_cast<std::uint32_t>(mult)});
  }
  return BipartiteMultigraph::from_edges(n1, n2, std::move(edges));
}

}  // namespace rig
