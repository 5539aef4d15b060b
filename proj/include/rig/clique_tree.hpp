#pragma once

// Two-type Galton-Watson tree T(D1, D2) and its uncorrelated random clique
// tree G_T: the root has D1 children; a node at odd generation (an attribute)
// has D2* - 1 children; a node at even generation >= 2 has D1* - 1 children.
// G_T is the intersection graph of T with even generations forming V1.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "graph.hpp"
#include "laws.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "rooted.hpp"

namespace rig {

inline constexpr std::size_t kDefaultNodeCap = 10'000'000;

struct GWTree {
  std::vector<std::int64_t> parent;  // -1 for the root
  std::vector<std::uint32_t> generation;

  std::size_t size() const { return parent.size(); }
  // 1 for vertices (even generations), 2 for attributes (odd generations).
  int part(std::size_t u) const { return generation[u] % 2 == 0 ? 1 : 2; }
};

struct CliqueTreeBall {
  RootedGraph ball;
  std::size_t tree_depth = 0;
};

class CliqueTreeSampler {
 public:
  CliqueTreeSampler(DegreeLaw d1, DegreeLaw d2, std::size_t node_cap = kDefaultNodeCap)
      : d1_(std::move(d1)), d2_(std::move(d2)), cap_(node_cap) {
    const double m1 = d1_.mean();
    require(m1 >= 0.0, "D1 mean must be finite");
    if (m1 > 0.0) {
      attr_offspring_ = d2_.offspring();
      vertex_offspring_ = d1_.offspring();
    }
  }

  const DegreeLaw& d1() const { return d1_; }
  const DegreeLaw& d2() const { return d2_; }

  GWTree sample_tree(std::size_t depth, Rng& rng) const {
    GWTree t;
    t.parent.push_back(-1);
    t.generation.push_back(0);
    std::size_t begin = 0, end = 1;
    for (std::size_t gen = 0; gen < depth && begin < end; ++gen) {
      for (std::size_t u = begin; u < end; ++u) {
        long long k = 0;
        if (gen == 0)
          k = d1_.sample(rng);
        else if (gen % 2 == 1)
          k = attr_offspring_->sample(rng);
        else
          k = vertex_offspring_->sample(rng);
        if (t.size() + static_cast<std::size_t>(k) > cap_)
          throw cap_exceeded("clique tree sample exceeded node cap " + std::to_string(cap_));
        for (long long i = 0; i < k; ++i) {
          t.parent.push_back(static_cast<std::int64_t>(u));
          t.generation.push_back(static_cast<std::uint32_t>(gen + 1));
        }
      }
      begin = end;
      end = t.size();
    }
    return t;
  }

  // B_r(G_T) from a tree truncated at depth 2r.
  CliqueTreeBall sample_ball(std::size_t r, Rng& rng) const {
    GWTree t = sample_tree(2 * r, rng);
    return {ball(intersection_of_tree(t), 0, r), 2 * r};
  }

  // Intersection graph of the tree viewed as bipartite by generation parity;
  // vertex i is the i-th even-generation node in tree order (the root is 0).
  static Graph intersection_of_tree(const GWTree& t) {
    std::vector<vertex_t> index(t.size(), 0);
    std::size_t n = 0;
    for (std::size_t u = 0; u < t.size(); ++u)
      if (t.part(u) == 1) index[u] = static_cast<vertex_t>(n++);
    // members of each attribute: its parent followed by its children
    std::vector<std::vector<vertex_t>> cliques(t.size());
    for (std::size_t u = 1; u < t.size(); ++u) {
      const auto p = static_cast<std::size_t>(t.parent[u]);
      if (t.part(u) == 2)
        cliques[u].push_back(index[p]);
      else
        cliques[p].push_back(index[u]);
    }
    std::vector<edge_t> edges;
    for (const auto& m : cliques)
      for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j) edges.emplace_back(m[i], m[j]);
    return Graph::from_edges(n, std::move(edges));
  }

 private:
  DegreeLaw d1_, d2_;
  std::optional<DegreeLaw> attr_offspring_, vertex_offspring_;
  std::size_t cap_;
};

inline GWTree sample_gw_tree(const DegreeLaw& D1, const DegreeLaw& D2, std::size_t depth, Rng& rng,
                             std::size_t node_cap = kDefaultNodeCap) {
  return CliqueTreeSampler(D1, D2, node_cap).sample_tree(depth, rng);
}

inline CliqueTreeBall sample_clique_tree_ball(const DegreeLaw& D1, const DegreeLaw& D2, std::size_t r, Rng& rng,
                                              std::size_t node_cap = kDefaultNodeCap) {
  return CliqueTreeSampler(D1, D2, node_cap).sample_ball(r, rng);
}

// ---------------------------------------------------------------------------

// Counts of canonical codes; `residual` holds samples that could not be
// classified (cap exceeded), included in `total`.
struct BallHistogram {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;
  std::uint64_t residual = 0;

  void add(const std::string& code, std::uint64_t c = 1) {
    counts[code] += c;
    total += c;
  }
  void add_residual(std::uint64_t c = 1) {
    residual += c;
    total += c;
  }
  void merge(const BallHistogram& o) {
    for (const auto& [code, c] : o.counts) counts[code] += c;
    total += o.total;
    residual += o.residual;
  }
  double probability(const std::string& code) const {
    auto it = counts.find(code);
    return (it == counts.end() || total == 0) ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
  }
  double residual_mass() const { return total ? static_cast<double>(residual) / static_cast<double>(total) : 0.0; }

  nlohmann::json to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [code, c] : counts)
      rows.push_back({{"code", to_hex(code)}, {"count", c}, {"probability", probability(code)}});
    return {{"total", total}, {"residual", residual}, {"entries", rows}};
  }
};

// Total variation over canonical codes; codes missing on one side count as
// mass 0 there, and each side's residual mass is treated as sitting on a code
// the other side lacks.
inline double tv_distance(const BallHistogram& a, const BallHistogram& b) {
  double s = 0.0;
  auto ia = a.counts.begin(), ib = b.counts.begin();
  while (ia != a.counts.end() || ib != b.counts.end()) {
    if (ib == b.counts.end() || (ia != a.counts.end() && ia->first < ib->first)) {
      s += a.probability(ia->first);
      ++ia;
    } else if (ia == a.counts.end() || ib->first < ia->first) {
      s += b.probability(ib->first);
      ++ib;
    } else {
      s += std::abs(a.probability(ia->first) - b.probability(ib->first));
      ++ia;
      ++ib;
    }
  }
  s += a.residual_mass() + b.residual_mass();
  return std::min(1.0, 0.5 * s);
}

// Empirical law of B_r(G_T) over `samples` draws; sample i uses substream
// (seed, i), so the result does not depend on the thread count.
inline BallHistogram ball_distribution_mc(const DegreeLaw& D1, const DegreeLaw& D2, std::size_t r,
                                          std::size_t samples, std::uint64_t seed, unsigned threads = 1,
                                          std::size_t node_cap = kDefaultNodeCap) {
  require(samples >= 1, "ball_distribution_mc: samples must be >= 1");
  const CliqueTreeSampler sampler(D1, D2, node_cap);
  std::vector<BallHistogram> parts(std::max(1u, threads));
  parallel_blocks(samples, threads, [&](std::size_t begin, std::size_t end, unsigned t) {
    auto& h = parts[t];
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng = Rng::substream(seed, i);
      try {
        h.add(sampler.sample_ball(r, rng).ball.code());
      } catch (const cap_exceeded&) {
        h.add_residual();
      }
    }
  });
  BallHistogram out;
  for (const auto& p : parts) out.merge(p);
  return out;
}

}  // namespace rig
