#pragma once

// Random bipartite graph models underlying random intersection graphs, the
// degree-sequence synthesis for the configuration model, and clique planting.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <boost/random/binomial_distribution.hpp>

#include "errors.hpp"
#include "graph.hpp"
#include "laws.hpp"
#include "rng.hpp"

namespace rig {

// Uniform k-subset of {0, ..., n-1} by Floyd's algorithm, returned sorted.
inline std::vector<std::uint64_t> sample_subset(Rng& rng, std::uint64_t n, std::uint64_t k) {
  if (k > n) throw validation_error("sample_subset: k > n");
  std::vector<std::uint64_t> out;
  out.reserve(k);
  if (k <= 32) {
    for (std::uint64_t j = n - k; j < n; ++j) {
      const std::uint64_t t = rng.below(j + 1);
      out.push_back(std::find(out.begin(), out.end(), t) == out.end() ? t : j);
    }
  } else {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(2 * k);
    for (std::uint64_t j = n - k; j < n; ++j) {
      const std::uint64_t t = rng.below(j + 1);
      const std::uint64_t pick = seen.count(t) ? j : t;
      seen.insert(pick);
      out.push_back(pick);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline long long sample_binomial(Rng& rng, long long trials, double p) {
  if (trials <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  boost::random::binomial_distribution<long long, double> dist(trials, p);
  return dist(rng);
}

namespace detail {
inline void check_count_law(const DegreeLaw& law, std::size_t limit, const char* who) {
  if (auto hi = law.max_value(); !hi || *hi > static_cast<long long>(limit))
    throw validation_error(std::string(who) + ": law " + law.describe() + " must be supported on {0,...," +
                           std::to_string(limit) + "}");
}
}  // namespace detail

// Each v in V1 draws X_v ~ P and joins a uniform X_v-subset of V2.
inline BipartiteMultigraph gen_active(std::size_t n1, std::size_t n2, const DegreeLaw& P, Rng& rng) {
  detail::check_count_law(P, n2, "gen_active");
  std::vector<std::pair<vertex_t, vertex_t>> pairs;
  for (std::size_t v = 0; v < n1; ++v) {
    const long long x = P.sample(rng);
    if (x < 0 || static_cast<std::size_t>(x) > n2) throw runtime_abort("gen_active: sampled X_v > n2");
    for (auto w : sample_subset(rng, n2, static_cast<std::uint64_t>(x)))
      pairs.emplace_back(static_cast<vertex_t>(v), static_cast<vertex_t>(w));
  }
  return BipartiteMultigraph::from_pairs(n1, n2, std::move(pairs));
}

// Each w in V2 draws X_w ~ P and joins a uniform X_w-subset of V1.
inline BipartiteMultigraph gen_passive(std::size_t n1, std::size_t n2, const DegreeLaw& P, Rng& rng) {
  detail::check_count_law(P, n1, "gen_passive");
  std::vector<std::pair<vertex_t, vertex_t>> pairs;
  for (std::size_t w = 0; w < n2; ++w) {
    const long long x = P.sample(rng);
    if (x < 0 || static_cast<std::size_t>(x) > n1) throw runtime_abort("gen_passive: sampled X_w > n1");
    for (auto v : sample_subset(rng, n1, static_cast<std::uint64_t>(x)))
      pairs.emplace_back(static_cast<vertex_t>(v), static_cast<vertex_t>(w));
  }
  return BipartiteMultigraph::from_pairs(n1, n2, std::move(pairs));
}

// Edge vw present independently with probability min(x_v y_w / sqrt(n1 n2), 1)
// for weights x ~ xi1, y ~ xi2. Part-2 vertices are bucketed by weight in
// [2^b, 2^(b+1)); per (v, bucket) a Binomial(|bucket|, p_max) candidate set is
// drawn uniformly and each candidate kept with probability p_vw / p_max. Each
// pair is thus included with probability exactly p_vw, in O(edges) expected
// time for any weight law.
inline BipartiteMultigraph gen_inhomogeneous(std::size_t n1, std::size_t n2, const WeightLaw& xi1,
                                             const WeightLaw& xi2, Rng& rng) {
  std::vector<double> x(n1), y(n2);
  for (auto& a : x) a = xi1.sample(rng);
  for (auto& b : y) b = xi2.sample(rng);
  const double scale = std::sqrt(static_cast<double>(n1) * static_cast<double>(n2));

  struct Bucket {
    std::vector<vertex_t> members;
    double max_weight = 0.0;
  };
  std::vector<std::pair<int, Bucket>> buckets;
  {
    std::vector<std::pair<int, vertex_t>> keyed;
    for (std::size_t w = 0; w < n2; ++w)
      if (y[w] > 0.0) keyed.emplace_back(std::ilogb(y[w]), static_cast<vertex_t>(w));
    std::sort(keyed.begin(), keyed.end());
    for (auto [b, w] : keyed) {
      if (buckets.empty() || buckets.back().first != b) buckets.push_back({b, Bucket{}});
      auto& bk = buckets.back().second;
      bk.members.push_back(w);
      bk.max_weight = std::max(bk.max_weight, y[w]);
    }
  }

  std::vector<std::pair<vertex_t, vertex_t>> pairs;
  for (std::size_t v = 0; v < n1; ++v) {
    if (x[v] <= 0.0) continue;
    for (const auto& [b, bk] : buckets) {
      const double p_max = std::min(x[v] * bk.max_weight / scale, 1.0);
      const auto size = static_cast<long long>(bk.members.size());
      const long long k = sample_binomial(rng, size, p_max);
      if (k == 0) continue;
      for (auto idx : sample_subset(rng, static_cast<std::uint64_t>(size), static_cast<std::uint64_t>(k))) {
        const vertex_t w = bk.members[idx];
        const double p = std::min(x[v] * y[w] / scale, 1.0);
        if (p >= p_max || rng.uniform01() * p_max < p) pairs.emplace_back(static_cast<vertex_t>(v), w);
      }
    }
  }
  return BipartiteMultigraph::from_pairs(n1, n2, std::move(pairs));
}

// Uniform perfect matching of half-edges: part-2 half-edges are shuffled and
// dealt to part-1 half-edges in order. Multi-edges are kept.
inline BipartiteMultigraph gen_configuration(const std::vector<std::size_t>& d1, const std::vector<std::size_t>& d2,
                                             Rng& rng) {
  std::size_t s1 = 0, s2 = 0;
  for (auto d : d1) s1 += d;
  for (auto d : d2) s2 += d;
  if (s1 != s2)
    throw validation_error("gen_configuration: degree sums differ (" + std::to_string(s1) + " vs " +
                           std::to_string(s2) + ")");
  std::vector<vertex_t> stubs;
  stubs.reserve(s2);
  for (std::size_t w = 0; w < d2.size(); ++w) stubs.insert(stubs.end(), d2[w], static_cast<vertex_t>(w));
  for (std::size_t i = stubs.size(); i > 1; --i) std::swap(stubs[i - 1], stubs[rng.below(i)]);
  std::vector<std::pair<vertex_t, vertex_t>> pairs;
  pairs.reserve(s1);
  std::size_t next = 0;
  for (std::size_t u = 0; u < d1.size(); ++u)
    for (std::size_t k = 0; k < d1[u]; ++k) pairs.emplace_back(static_cast<vertex_t>(u), stubs[next++]);
  return BipartiteMultigraph::from_pairs(d1.size(), d2.size(), std::move(pairs));
}

struct DegreeSequences {
  std::vector<std::size_t> d1, d2;
  std::size_t n2 = 0;  // number of iid part-2 draws
};

// How the sums of the two iid sequences are equalized.
//   single: one extra vertex per side carrying (S_i - S_other)_+ (lengths
//           n1 + 1 and n2 + 1). An appended attribute of degree ~ sqrt(n)
//           becomes a clique in the intersection graph.
//   unit:   the deficit is spread over that many extra vertices of degree 1
//           on the deficient side.
enum class BalanceMode { single, unit };

inline std::string to_string(BalanceMode m) { return m == BalanceMode::single ? "single" : "unit"; }

inline BalanceMode balance_mode_from_string(const std::string& s) {
  if (s == "single") return BalanceMode::single;
  if (s == "unit") return BalanceMode::unit;
  throw validation_error("unknown balance mode '" + s + "' (expected single or unit)");
}

// n2 = floor(n1 E D1 / E D2); n_i iid draws from D_i, then balancing terms
// so the sums agree.
inline DegreeSequences gen_degree_sequences(std::size_t n1, std::optional<double> beta, const DegreeLaw& D1,
                                            const DegreeLaw& D2, Rng& rng,
                                            BalanceMode mode = BalanceMode::single) {
  require(n1 >= 1, "gen_degree_sequences: n1 must be >= 1");
  const double m1 = D1.mean(), m2 = D2.mean();
  require(m1 > 0.0 && m2 > 0.0, "gen_degree_sequences: laws need positive finite means");
  const double ratio = m1 / m2;
  if (beta) require(std::abs(*beta - ratio) <= 1e-9 * std::max(1.0, ratio),
                    "gen_degree_sequences: beta must equal E D1 / E D2 = " + format_number(ratio));
  DegreeSequences out;
  out.n2 = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n1)));
  require(out.n2 >= 1, "gen_degree_sequences: n1 * E D1 / E D2 < 1");
  std::size_t s1 = 0, s2 = 0;
  out.d1.reserve(n1 + 1);
  out.d2.reserve(out.n2 + 1);
  for (std::size_t i = 0; i < n1; ++i) {
    out.d1.push_back(static_cast<std::size_t>(D1.sample(rng)));
    s1 += out.d1.back();
  }
  for (std::size_t i = 0; i < out.n2; ++i) {
    out.d2.push_back(static_cast<std::size_t>(D2.sample(rng)));
    s2 += out.d2.back();
  }
  const std::size_t z1 = s2 > s1 ? s2 - s1 : 0, z2 = s1 > s2 ? s1 - s2 : 0;
  if (mode == BalanceMode::single) {
    out.d1.push_back(z1);
    out.d2.push_back(z2);
  } else {
    out.d1.insert(out.d1.end(), z1, 1);
    out.d2.insert(out.d2.end(), z2, 1);
  }
  return out;
}

// Adds every pair of a uniformly random s-subset of the vertices.
inline Graph plant_clique(const Graph& g, std::size_t s, Rng& rng) {
  const std::size_t n = g.vertex_count();
  if (s < 1 || s > n) throw validation_error("plant_clique: s must be in [1, vertex_count]");
  auto subset = sample_subset(rng, n, s);
  auto edges = g.edges();
  edges.reserve(edges.size() + s * (s - 1) / 2);
  for (std::size_t i = 0; i < subset.size(); ++i)
    for (std::size_t j = i + 1; j < subset.size(); ++j)
      edges.emplace_back(static_cast<vertex_t>(subset[i]), static_cast<vertex_t>(subset[j]));
  return Graph::from_edges(n, std::move(edges));
}

// ---------------------------------------------------------------------------

enum class ModelKind { active, passive, inhomogeneous, configuration };

inline std::string to_string(ModelKind m) {
  switch (m) {
    case ModelKind::active: return "active";
    case ModelKind::passive: return "passive";
    case ModelKind::inhomogeneous: return "inhomogeneous";
    case ModelKind::configuration: return "configuration";
  }
  return "?";
}

inline ModelKind model_kind_from_string(const std::string& s) {
  if (s == "active") return ModelKind::active;
  if (s == "passive") return ModelKind::passive;
  if (s == "inhomogeneous") return ModelKind::inhomogeneous;
  if (s == "configuration") return ModelKind::configuration;
  throw validation_error("unknown model '" + s + "'");
}

// One of the four models with its laws. For the configuration model, D1/D2
// drive gen_degree_sequences and n2 is derived from them.
struct ModelConfig {
  ModelKind model = ModelKind::active;
  std::size_t n1 = 1;
  std::size_t n2 = 1;
  std::optional<DegreeLaw> P;
  std::optional<WeightLaw> xi1, xi2;
  std::optional<DegreeLaw> D1, D2;
  BalanceMode balance = BalanceMode::unit;
  std::uint64_t seed = 0;

  double beta() const { return static_cast<double>(n2) / static_cast<double>(n1); }

  void validate() const {
    require(n1 >= 1 && n2 >= 1, "model: n1 and n2 must be >= 1");
    switch (model) {
      case ModelKind::active:
        require(P.has_value(), "active model needs law P");
        detail::check_count_law(*P, n2, "active model");
        break;
      case ModelKind::passive:
        require(P.has_value(), "passive model needs law P");
        detail::check_count_law(*P, n1, "passive model");
        break;
      case ModelKind::inhomogeneous:
        require(xi1 && xi2, "inhomogeneous model needs weight laws xi1 and xi2");
        require(xi1->mean() > 0.0 && xi2->mean() > 0.0, "inhomogeneous weights need positive finite means");
        break;
      case ModelKind::configuration:
        require(D1 && D2, "configuration model needs laws D1 and D2");
        require(D1->mean() > 0.0 && D2->mean() > 0.0, "configuration laws need positive finite means");
        break;
    }
  }
};

// Samples H_n for the model; advances rng.
inline BipartiteMultigraph generate(const ModelConfig& cfg, Rng& rng) {
  cfg.validate();
  switch (cfg.model) {
    case ModelKind::active: return gen_active(cfg.n1, cfg.n2, *cfg.P, rng);
    case ModelKind::passive: return gen_passive(cfg.n1, cfg.n2, *cfg.P, rng);
    case ModelKind::inhomogeneous: return gen_inhomogeneous(cfg.n1, cfg.n2, *cfg.xi1, *cfg.xi2, rng);
    case ModelKind::configuration: {
      auto seqs = gen_degree_sequences(cfg.n1, std::nullopt, *cfg.D1, *cfg.D2, rng, cfg.balance);
      return gen_configuration(seqs.d1, seqs.d2, rng);
    }
  }
  throw validation_error("unknown model");
}

inline BipartiteMultigraph generate(const ModelConfig& cfg) {
  Rng rng(cfg.seed);
  return generate(cfg, rng);
}

}  // namespace rig
