#pragma once

#include <cmath>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "canonical.hpp"
#include "graph.hpp"

namespace rig {

// Connected graph with a distinguished root. The canonical code is computed on
// first request and shared between copies; copies are safe to read from any
// thread.
class RootedGraph {
 public:
  RootedGraph() : RootedGraph(Graph::from_edges(1, {}), 0) {}

  RootedGraph(Graph g, vertex_t root) : graph_(std::move(g)), root_(root), cache_(std::make_shared<Cache>()) {
    if (root_ >= graph_.vertex_count()) throw validation_error("RootedGraph: root out of range");
    if (!is_connected(graph_)) throw validation_error("RootedGraph: graph must be connected");
  }

  const Graph& graph() const { return graph_; }
  vertex_t root() const { return root_; }
  std::size_t size() const { return graph_.vertex_count(); }

  const std::string& code() const {
    std::call_once(cache_->once, [this] { cache_->code = canonical_code(graph_, root_); });
    return cache_->code;
  }

  // Root-preserving isomorphism test.
  bool isomorphic(const RootedGraph& other) const {
    if (size() != other.size() || graph_.edge_count() != other.graph_.edge_count()) return false;
    if (graph_.degree(root_) != other.graph_.degree(other.root_)) return false;
    return code() == other.code();
  }

 private:
  struct Cache {
    std::once_flag once;
    std::string code;
  };
  Graph graph_;
  vertex_t root_;
  std::shared_ptr<Cache> cache_;
};

// Reusable r-ball extractor with O(ball size) work per call: keeps a scratch
// index over the host's vertices. One instance per thread.
class BallExtractor {
 public:
  explicit BallExtractor(const Graph& g) : g_(g), local_(g.vertex_count(), kUnset) {}

  // Induced subgraph on {u : dist(u, v) <= r}; vertices relabeled in BFS order
  // from v (neighbors visited in increasing index), so the root is vertex 0.
  RootedGraph operator()(vertex_t v, std::size_t r) {
    if (v >= g_.vertex_count()) throw validation_error("ball: vertex out of range");
    order_.clear();
    dist_.clear();
    order_.push_back(v);
    dist_.push_back(0);
    local_[v] = 0;
    for (std::size_t h = 0; h < order_.size(); ++h) {
      if (dist_[h] == r) continue;
      for (vertex_t w : g_.neighbors(order_[h]))
        if (local_[w] == kUnset) {
          local_[w] = static_cast<vertex_t>(order_.size());
          order_.push_back(w);
          dist_.push_back(dist_[h] + 1);
        }
    }
    std::vector<std::vector<vertex_t>> adj(order_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) {
      for (vertex_t w : g_.neighbors(order_[i]))
        if (local_[w] != kUnset) adj[i].push_back(local_[w]);
      std::sort(adj[i].begin(), adj[i].end());
    }
    for (vertex_t u : order_) local_[u] = kUnset;
    return RootedGraph(Graph::from_sorted_adjacency(adj), 0);
  }

 private:
  static constexpr vertex_t kUnset = static_cast<vertex_t>(-1);
  const Graph& g_;
  std::vector<vertex_t> local_;
  std::vector<vertex_t> order_;
  std::vector<std::size_t> dist_;
};

inline RootedGraph ball(const Graph& g, vertex_t v, std::size_t r) { return BallExtractor(g)(v, r); }
inline RootedGraph ball(const RootedGraph& g, std::size_t r) { return ball(g.graph(), g.root(), r); }

struct LocDistance {
  double value = 1.0;    // 2^-agree_radius
  std::size_t agree_radius = 0;
  bool capped = false;   // balls agreed at every radius up to r_max
};

// 2^-s with s the largest r <= r_max such that B_r(G1) and B_r(G2) are
// root-preserving isomorphic. B_0 always agrees (single vertex), so s >= 0.
inline LocDistance loc_distance(const RootedGraph& a, const RootedGraph& b, std::size_t r_max) {
  LocDistance d;
  BallExtractor ea(a.graph()), eb(b.graph());
  for (std::size_t r = 1; r <= r_max; ++r) {
    if (!ea(a.root(), r).isomorphic(eb(b.root(), r))) {
      d.agree_radius = r - 1;
      d.value = std::ldexp(1.0, -static_cast<int>(r - 1));
      return d;
    }
  }
  d.agree_radius = r_max;
  d.value = std::ldexp(1.0, -static_cast<int>(r_max));
  d.capped = true;
  return d;
}

}  // namespace rig
