#pragma once

// Finite-graph statistics: degree moments and fractions, clustering,
// assortativity and their degree-conditioned versions, r-ball histograms.
// Ratios are formed from exact integer numerators and denominators.

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "clique_tree.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "rooted.hpp"
#include "subgraph.hpp"

namespace rig {

using rational = boost::multiprecision::cpp_rational;

struct StatReport {
  std::string name;
  double value = 0.0;
  bigint numerator = 0;
  bigint denominator = 0;
  bool degenerate = false;

  nlohmann::json to_json() const {
    return {{"name", name},
            {"value", value},
            {"numerator", numerator.str()},
            {"denominator", denominator.str()},
            {"degenerate", degenerate}};
  }
};

namespace detail {

inline double ratio(const bigint& a, const bigint& b) { return static_cast<double>(rational(a, b)); }

inline StatReport make_report(std::string name, bigint num, bigint den) {
  StatReport s;
  s.name = std::move(name);
  s.numerator = std::move(num);
  s.denominator = std::move(den);
  if (s.denominator == 0)
    s.degenerate = true;
  else
    s.value = ratio(s.numerator, s.denominator);
  return s;
}

inline void require_nonempty(const Graph& G, const char* who) {
  if (G.vertex_count() == 0) throw validation_error(std::string(who) + ": empty graph");
}

}  // namespace detail

// (1/n) sum_v d(v)^k
inline double degree_moment(const Graph& G, int k) {
  detail::require_nonempty(G, "degree_moment");
  require(k >= 1, "degree_moment: k must be >= 1");
  bigint s = 0;
  for (vertex_t v = 0; v < G.vertex_count(); ++v) s += boost::multiprecision::pow(bigint(G.degree(v)), k);
  return detail::ratio(s, bigint(G.vertex_count()));
}

// fraction of vertices of degree k
inline double degree_fraction(const Graph& G, std::size_t k) {
  detail::require_nonempty(G, "degree_fraction");
  std::size_t c = 0;
  for (vertex_t v = 0; v < G.vertex_count(); ++v) c += G.degree(v) == k;
  return static_cast<double>(c) / static_cast<double>(G.vertex_count());
}

// All fractions pi_0..pi_maxdeg.
inline std::vector<double> degree_distribution(const Graph& G) {
  detail::require_nonempty(G, "degree_distribution");
  std::vector<std::size_t> c;
  for (vertex_t v = 0; v < G.vertex_count(); ++v) {
    const std::size_t d = G.degree(v);
    if (d >= c.size()) c.resize(d + 1, 0);
    ++c[d];
  }
  std::vector<double> p(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) p[k] = static_cast<double>(c[k]) / static_cast<double>(G.vertex_count());
  return p;
}

// emb(K3) / emb(P3); 0 when there is no path on three vertices.
inline StatReport clustering(const Graph& G, unsigned threads = 1) {
  bigint paths = 0;
  for (vertex_t v = 0; v < G.vertex_count(); ++v) {
    const std::size_t d = G.degree(v);
    paths += bigint(d) * (d ? d - 1 : 0);
  }
  return detail::make_report("alpha", emb_count(Pattern::complete(3), G, threads), paths);
}

// Ordered paths v1-v2-v3 with d(v2) = k, closed fraction.
inline StatReport conditional_clustering(const Graph& G, std::size_t k) {
  require(k >= 2, "conditional_clustering: k must be >= 2");
  bigint closed = 0, paths = 0;
  for (vertex_t v = 0; v < G.vertex_count(); ++v) {
    if (G.degree(v) != k) continue;
    paths += bigint(k) * (k - 1);
    auto nb = G.neighbors(v);
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j) c += G.adjacent(nb[i], nb[j]);
    closed += 2 * c;
  }
  return detail::make_report("alpha_" + std::to_string(k), closed, paths);
}

// Pearson correlation of endpoint degrees over ordered adjacent pairs, as
// (M S1 - S2^2) / (M S3 - S2^2) with M = 2e, S1 = sum over ordered adjacent
// pairs of d(u)d(v), S2 = sum d^2, S3 = sum d^3.
inline StatReport assortativity(const Graph& G) {
  bigint M = 0, S1 = 0, S2 = 0, S3 = 0;
  for (vertex_t v = 0; v < G.vertex_count(); ++v) {
    const bigint d = G.degree(v);
    M += d;
    S2 += d * d;
    S3 += d * d * d;
    for (vertex_t u : G.neighbors(v)) S1 += d * G.degree(u);
  }
  bigint num = M * S1 - S2 * S2, den = M * S3 - S2 * S2;
  if (M == 0) den = 0;
  return detail::make_report("assort", num, den);
}

// Mean neighbour degree over ordered adjacent pairs whose first endpoint has
// degree k.
inline StatReport conditional_assortativity(const Graph& G, std::size_t k) {
  require(k >= 1, "conditional_assortativity: k must be >= 1");
  bigint num = 0, den = 0;
  for (vertex_t v = 0; v < G.vertex_count(); ++v) {
    if (G.degree(v) != k) continue;
    den += k;
    for (vertex_t u : G.neighbors(v)) num += G.degree(u);
  }
  return detail::make_report("r_" + std::to_string(k), num, den);
}

// Histogram of canonical codes of B_r(G, v): over every vertex, or over
// sample_size uniform draws (with replacement; draw i uses substream
// (seed, i)).
inline BallHistogram empirical_ball_dist(const Graph& G, std::size_t r, std::optional<std::size_t> sample_size = {},
                                         std::uint64_t seed = 0, unsigned threads = 1) {
  detail::require_nonempty(G, "empirical_ball_dist");
  const std::size_t n = G.vertex_count();
  const std::size_t m = sample_size ? *sample_size : n;
  require(m >= 1, "empirical_ball_dist: sample_size must be >= 1");
  std::vector<BallHistogram> parts(std::max(1u, threads));
  parallel_blocks(m, threads, [&](std::size_t begin, std::size_t end, unsigned t) {
    BallExtractor ex(G);
    for (std::size_t i = begin; i < end; ++i) {
      vertex_t v = static_cast<vertex_t>(i);
      if (sample_size) v = static_cast<vertex_t>(Rng::substream(seed, i).below(n));
      parts[t].add(ex(v, r).code());
    }
  });
  BallHistogram out;
  for (const auto& p : parts) out.merge(p);
  return out;
}

}  // namespace rig
