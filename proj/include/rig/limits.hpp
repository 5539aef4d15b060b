#pragma once

// Limit quantities of the clique-tree limit G_T(D1, D2): moments of Z and d*,
// the degree pmf, clustering and assortativity limits, their conditional
// versions, and Monte Carlo rooted-count expectations.
//
// Z ~ D2* - 1 (one attribute's other members), d* = Z_1 + ... + Z_{D1}.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "clique_tree.hpp"
#include "combinatorics.hpp"
#include "errors.hpp"
#include "generators.hpp"
#include "laws.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "subgraph.hpp"

namespace rig {

enum class Provenance { direct, remark1_active, remark1_passive, remark1_inhomogeneous };

struct LimitSpec {
  DegreeLaw D1 = DegreeLaw::constant(1);
  DegreeLaw D2 = DegreeLaw::constant(1);
  Provenance kind = Provenance::direct;
  std::string provenance = "direct";
  double beta = 1.0;
  std::optional<DegreeLaw> P;  // for remark1-active / remark1-passive
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  bool exact = true;
  double deficit = 0.0;  // truncated probability mass, exact paths only
  bool degenerate = false;

  static Estimate exact_value(double v, double deficit = 0.0) {
    Estimate e;
    e.value = v;
    e.deficit = deficit;
    return e;
  }

  nlohmann::json to_json(const std::string& quantity, const std::string& provenance) const {
    nlohmann::json j = {{"quantity", quantity}, {"value", value},       {"stderr", std_error},
                        {"exact", exact},       {"provenance", provenance}};
    if (!exact) j["samples"] = samples;
    if (deficit > 0.0) j["deficit"] = deficit;
    if (degenerate) j["degenerate"] = true;
    return j;
  }
};

inline LimitSpec direct_limits(DegreeLaw D1, DegreeLaw D2) {
  const double m1 = D1.mean(), m2 = D2.mean();
  require(m1 > 0.0 && m2 > 0.0, "limit spec needs E D1, E D2 in (0, inf)");
  LimitSpec s;
  s.D1 = std::move(D1);
  s.D2 = std::move(D2);
  s.beta = m1 / m2;
  return s;
}

// Limits of the active, passive and inhomogeneous models at ratio beta = n2/n1.
inline LimitSpec remark1_limits(const ModelConfig& cfg, double beta) {
  require(beta > 0.0 && std::isfinite(beta), "remark1_limits: beta must be positive");
  LimitSpec s;
  s.beta = beta;
  switch (cfg.model) {
    case ModelKind::active: {
      require(cfg.P.has_value(), "active model needs law P");
      const double m = cfg.P->mean();
      require(m > 0.0, "remark1_limits: E P must be positive");
      s.D1 = *cfg.P;
      s.D2 = DegreeLaw::poisson(m / beta);
      s.kind = Provenance::remark1_active;
      s.provenance = "remark1-active(P=" + cfg.P->describe() + ",beta=" + format_number(beta) + ")";
      s.P = cfg.P;
      break;
    }
    case ModelKind::passive: {
      require(cfg.P.has_value(), "passive model needs law P");
      const double m = cfg.P->mean();
      require(m > 0.0, "remark1_limits: E P must be positive");
      s.D1 = DegreeLaw::poisson(beta * m);
      s.D2 = *cfg.P;
      s.kind = Provenance::remark1_passive;
      s.provenance = "remark1-passive(P=" + cfg.P->describe() + ",beta=" + format_number(beta) + ")";
      s.P = cfg.P;
      break;
    }
    case ModelKind::inhomogeneous: {
      require(cfg.xi1 && cfg.xi2, "inhomogeneous model needs xi1 and xi2");
      const double e1 = cfg.xi1->mean(), e2 = cfg.xi2->mean();
      require(e1 > 0.0 && e2 > 0.0, "remark1_limits: weight means must be positive");
      s.D1 = DegreeLaw::mixed_poisson(cfg.xi1->scaled(std::sqrt(beta) * e2));
      s.D2 = DegreeLaw::mixed_poisson(cfg.xi2->scaled(e1 / std::sqrt(beta)));
      s.kind = Provenance::remark1_inhomogeneous;
      s.provenance = "remark1-inhomogeneous(xi1=" + cfg.xi1->describe() + ",xi2=" + cfg.xi2->describe() +
                     ",beta=" + format_number(beta) + ")";
      break;
    }
    case ModelKind::configuration:
      throw validation_error("remark1_limits: configuration model uses direct limits");
  }
  const double m1 = s.D1.mean(), m2 = s.D2.mean();
  if (std::abs(beta * m2 - m1) > 1e-9 * std::max(1.0, m1))
    throw runtime_abort("remark1_limits: beta * E D2 != E D1 (" + format_number(beta * m2) + " vs " +
                        format_number(m1) + ")");
  return s;
}

// Limit spec for any model; beta from the config's part sizes.
inline LimitSpec limit_spec(const ModelConfig& cfg) {
  if (cfg.model == ModelKind::configuration) {
    require(cfg.D1 && cfg.D2, "configuration model needs laws D1 and D2");
    auto s = direct_limits(*cfg.D1, *cfg.D2);
    s.provenance = "direct(D1=" + cfg.D1->describe() + ",D2=" + cfg.D2->describe() + ")";
    return s;
  }
  return remark1_limits(cfg, cfg.beta());
}

// ---------------------------------------------------------------------------
// Moments

enum class MomentMode { raw, factorial };

namespace detail {

inline double need(std::optional<double> m, const char* what, const DegreeLaw& law, int j) {
  if (!m || !std::isfinite(*m))
    throw moment_unavailable(std::string(what) + " of order " + std::to_string(j) + " unavailable for " +
                             law.describe());
  return *m;
}

}  // namespace detail

// E (Z)_j = E (D2)_{j+1} / E D2 and E Z^j = sum_m S(j, m) E (Z)_m.
inline Estimate z_moment(const DegreeLaw& D2, int j, MomentMode mode) {
  require(j >= 0, "z_moment: j must be >= 0");
  const double m2 = detail::need(D2.raw_moment(1), "moment", D2, 1);
  require(m2 > 0.0, "z_moment: E D2 must be positive");
  auto falling = [&](int i) { return detail::need(D2.factorial_moment(i + 1), "factorial moment", D2, i + 1) / m2; };
  if (mode == MomentMode::factorial) return Estimate::exact_value(j == 0 ? 1.0 : falling(j));
  if (j == 0) return Estimate::exact_value(1.0);
  double s = 0.0;
  for (int m = 1; m <= j; ++m) s += comb::stirling2(j, m) * falling(m);
  return Estimate::exact_value(s);
}

// E (d*)^k by the composition expansion
//   sum over compositions (k_1..k_j) of k of multinomial * E C(D1, j) * prod E Z^{k_i}.
inline Estimate dstar_moment(const LimitSpec& s, int k) {
  require(k >= 0, "dstar_moment: k must be >= 0");
  if (k == 0) return Estimate::exact_value(1.0);
  std::vector<double> ez(k + 1);
  for (int i = 1; i <= k; ++i) ez[i] = z_moment(s.D2, i, MomentMode::raw).value;
  std::vector<double> choose(k + 1);
  for (int j = 1; j <= k; ++j)
    choose[j] = detail::need(s.D1.factorial_moment(j), "factorial moment", s.D1, j) / comb::factorial(j);
  double total = 0.0;
  comb::for_each_composition(k, [&](const std::vector<int>& parts) {
    double t = comb::multinomial(parts) * choose[parts.size()];
    for (int p : parts) t *= ez[p];
    total += t;
  });
  return Estimate::exact_value(total);
}

// E (d*)_k from raw moments.
inline Estimate dstar_factorial_moment(const LimitSpec& s, int k) {
  double v = 0.0;
  for (int i = 1; i <= k; ++i) v += comb::stirling1_signed(k, i) * dstar_moment(s, i).value;
  return Estimate::exact_value(k == 0 ? 1.0 : v);
}

// ---------------------------------------------------------------------------
// Degree pmf

namespace detail {

// pmf of Z, P(Z = m) = (m + 1) P(D2 = m + 1) / E D2, for m = 0..K.
inline std::optional<std::vector<double>> z_pmf(const DegreeLaw& D2, std::size_t K) {
  const double m2 = D2.mean();
  std::vector<double> z(K + 1);
  for (std::size_t m = 0; m <= K; ++m) {
    auto p = D2.pmf_at(static_cast<long long>(m + 1));
    if (!p) return std::nullopt;
    z[m] = static_cast<double>(m + 1) * *p / m2;
  }
  return z;
}

inline std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b, std::size_t K) {
  std::vector<double> c(K + 1, 0.0);
  for (std::size_t i = 0; i <= K && i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; i + j <= K && j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

// Sums over D1 = j (truncated where the D1 tail is below eps) of
//   P(D1 = j) * sum_m w(m) P(Z = m) P(Z_2 + ... + Z_j = t - m)  * j
// for every t in 0..K, together with P(d* = t) itself.
struct Convolution {
  std::vector<double> pdstar;    // P(d* = t)
  std::vector<double> weighted;  // E sum_i w(Z_i) 1{d* = t}
  double deficit = 0.0;          // dropped D1 mass
};

inline std::optional<Convolution> convolution(const LimitSpec& s, std::size_t K, double eps,
                                              const std::function<double(std::size_t)>* w = nullptr) {
  auto t1 = s.D1.pmf_table(eps);
  if (!t1) return std::nullopt;
  auto z = z_pmf(s.D2, K);
  if (!z) return std::nullopt;
  Convolution out;
  out.pdstar.assign(K + 1, 0.0);
  out.weighted.assign(K + 1, 0.0);
  out.deficit = t1->deficit;
  std::vector<double> wz(K + 1, 0.0);
  if (w)
    for (std::size_t m = 0; m <= K; ++m) wz[m] = (*w)(m) * (*z)[m];
  std::vector<double> power(K + 1, 0.0);  // law of Z_1 + ... + Z_{j-1}
  power[0] = 1.0;
  const double z0 = (*z)[0];
  for (std::size_t j = 0; j < t1->p.size(); ++j) {
    const double pj = t1->p[j];
    if (j > 0) {
      if (w && pj > 0.0) {
        auto c = convolve(wz, power, K);
        for (std::size_t t = 0; t <= K; ++t) out.weighted[t] += pj * static_cast<double>(j) * c[t];
      }
      power = convolve(power, *z, K);
    }
    if (pj > 0.0)
      for (std::size_t t = 0; t <= K; ++t) out.pdstar[t] += pj * power[t];
    // once Z has no mass at 0, sums of more than K terms exceed K
    if (z0 == 0.0 && j > K) break;
  }
  return out;
}

}  // namespace detail

// P(d* = t) for t = 0..K, where K is the first index with tail mass below eps
// (or max_len - 1). Exact up to truncation; nullopt if D1 or D2 lacks pmf
// values in closed form.
inline std::optional<DegreeLaw::Table> limit_degree_table(const LimitSpec& s, double eps = 1e-12,
                                                          std::size_t max_len = 4096) {
  const double target = eps / 2;
  for (std::size_t K = 16;; K *= 2) {
    K = std::min(K, max_len - 1);
    auto c = detail::convolution(s, K, target);
    if (!c) return std::nullopt;
    double cum = 0.0;
    for (std::size_t t = 0; t <= K; ++t) {
      cum += c->pdstar[t];
      if (1.0 - cum < eps) {
        DegreeLaw::Table out;
        out.p.assign(c->pdstar.begin(), c->pdstar.begin() + static_cast<std::ptrdiff_t>(t) + 1);
        out.deficit = std::max(0.0, 1.0 - cum);
        return out;
      }
    }
    if (K == max_len - 1) return std::nullopt;
  }
}

namespace detail {

// d* together with its summands, for Monte Carlo.
struct DstarDraw {
  long long d1 = 0;
  std::vector<long long> z;
  long long total = 0;
};

class DstarSampler {
 public:
  explicit DstarSampler(const LimitSpec& s) : d1_(s.D1), z_(s.D2.offspring()) {}
  void draw(Rng& rng, DstarDraw& out) const {
    out.d1 = d1_.sample(rng);
    out.z.resize(static_cast<std::size_t>(out.d1));
    out.total = 0;
    for (auto& x : out.z) out.total += x = z_.sample(rng);
  }

 private:
  DegreeLaw d1_, z_;
};

inline double mean_stderr(double s1, double s2, double n) {
  if (n < 2) return 0.0;
  const double mean = s1 / n;
  const double var = std::max(0.0, (s2 - n * mean * mean) / (n - 1));
  return std::sqrt(var / n);
}

}  // namespace detail

// P(d* = k): exact convolution when available, otherwise Monte Carlo over
// mc_samples draws (draw i uses substream (seed, i)).
inline Estimate limit_degree_pmf(const LimitSpec& s, long long k, std::size_t mc_samples = 1'000'000,
                                 std::uint64_t seed = 0, unsigned threads = 1) {
  require(k >= 0, "limit_degree_pmf: k must be >= 0");
  if (s.D1.max_value() && *s.D1.max_value() == 0) return Estimate::exact_value(k == 0 ? 1.0 : 0.0);
  if (auto c = detail::convolution(s, static_cast<std::size_t>(k), 1e-13))
    return Estimate::exact_value(c->pdstar[static_cast<std::size_t>(k)], c->deficit);
  require(mc_samples >= 2, "limit_degree_pmf: Monte Carlo needs at least 2 samples");
  const detail::DstarSampler sampler(s);
  std::vector<std::uint64_t> hits(std::max(1u, threads), 0);
  parallel_blocks(mc_samples, threads, [&](std::size_t b, std::size_t e, unsigned t) {
    detail::DstarDraw d;
    for (std::size_t i = b; i < e; ++i) {
      Rng rng = Rng::substream(seed, i);
      sampler.draw(rng, d);
      hits[t] += d.total == k;
    }
  });
  std::uint64_t h = 0;
  for (auto x : hits) h += x;
  Estimate est;
  est.exact = false;
  est.samples = mc_samples;
  const double n = static_cast<double>(mc_samples);
  est.value = static_cast<double>(h) / n;
  est.std_error = detail::mean_stderr(static_cast<double>(h), static_cast<double>(h), n);
  return est;
}

// ---------------------------------------------------------------------------
// Clustering and assortativity

// alpha* = E D1 E D2 E (D2)_3 / (E D1 E D2 E (D2)_3 + E (D1)_2 (E (D2)_2)^2)
inline Estimate limit_clustering(const LimitSpec& s) {
  const double a = detail::need(s.D1.raw_moment(1), "moment", s.D1, 1);
  const double a2 = detail::need(s.D1.factorial_moment(2), "factorial moment", s.D1, 2);
  const double b = detail::need(s.D2.raw_moment(1), "moment", s.D2, 1);
  const double b2 = detail::need(s.D2.factorial_moment(2), "factorial moment", s.D2, 2);
  const double b3 = detail::need(s.D2.factorial_moment(3), "factorial moment", s.D2, 3);
  const double num = a * b * b3;
  const double den = num + a2 * b2 * b2;
  Estimate e;
  if (den <= 0.0) {
    e.degenerate = true;
    return e;
  }
  e.value = num / den;
  auto check = [&](double alt, const char* form) {
    if (std::abs(alt - e.value) > 1e-9 * std::max(1.0, std::abs(alt)))
      throw runtime_abort(std::string("limit_clustering: ") + form + " cross-check failed (" +
                          format_number(e.value) + " vs " + format_number(alt) + ")");
  };
  if (s.kind == Provenance::remark1_active) {
    // E D1 / E D1^2 for D2 Poisson with mean E D1 / beta
    check(a / detail::need(s.D1.raw_moment(2), "moment", s.D1, 2), "active simplification");
  } else if (s.kind == Provenance::remark1_passive) {
    // E (D2)_3 / (E (D2)_3 + beta (E (D2)_2)^2) for D1 Poisson with mean beta E D2
    if (b3 + s.beta * b2 * b2 > 0.0) check(b3 / (b3 + s.beta * b2 * b2), "passive simplification");
  }
  return e;
}

// E hom'(P4' rooted at an inner vertex) = E D1 E Z^3 + E (D1)_2 E Z E Z^2
//   + E (D1)_2 / E D1 * E (d*)^2 * E Z
inline Estimate limit_hom_p4_rooted(const LimitSpec& s) {
  const double a = s.D1.mean();
  const double a2 = detail::need(s.D1.factorial_moment(2), "factorial moment", s.D1, 2);
  const double z1 = z_moment(s.D2, 1, MomentMode::raw).value;
  const double z2 = z_moment(s.D2, 2, MomentMode::raw).value;
  const double z3 = z_moment(s.D2, 3, MomentMode::raw).value;
  const double d2 = dstar_moment(s, 2).value;
  return Estimate::exact_value(a * z3 + a2 * z1 * z2 + a2 / a * d2 * z1);
}

// rho* = (E d* E hom'(P4') - (E d*^2)^2) / (E d* E d*^3 - (E d*^2)^2)
inline Estimate limit_assortativity(const LimitSpec& s) {
  const double m1 = dstar_moment(s, 1).value;
  const double m2 = dstar_moment(s, 2).value;
  const double m3 = dstar_moment(s, 3).value;
  const double var = m2 - m1 * m1;
  if (var <= 1e-12 * std::max(1.0, m2))
    throw degenerate_limit("degenerate: regular limit, Var(d*) = 0 for D1=" + s.D1.describe() +
                           ", D2=" + s.D2.describe());
  const double hp4 = limit_hom_p4_rooted(s).value;
  const double den = m1 * m3 - m2 * m2;
  if (den <= 1e-12 * std::max(1.0, m1 * m3))
    throw degenerate_limit("degenerate: E d* E d*^3 = (E d*^2)^2 for D1=" + s.D1.describe());
  return Estimate::exact_value((m1 * hp4 - m2 * m2) / den);
}

namespace detail {

// Integer sums over a block of samples, merged in sample order.
struct IntSums {
  std::vector<Accumulator> s;
  explicit IntSums(std::size_t k = 0) : s(k) {}
  void merge(const IntSums& o) {
    for (std::size_t i = 0; i < s.size(); ++i) s[i].merge(o.s[i]);
  }
  double get(std::size_t i) const { return static_cast<double>(s[i].value()); }
};

// Runs f(rng, sums) for samples [0, n) with substream (seed, i); sums are
// collected per batch (batch b covers samples [n b / B, n (b+1) / B)).
template <class F>
std::vector<IntSums> batched(std::size_t n, std::size_t batches, std::size_t width, std::uint64_t seed,
                             unsigned threads, F&& f) {
  std::vector<IntSums> out(batches, IntSums(width));
  parallel_blocks(batches, threads, [&](std::size_t b0, std::size_t b1, unsigned) {
    for (std::size_t b = b0; b < b1; ++b)
      for (std::size_t i = n * b / batches; i < n * (b + 1) / batches; ++i) {
        Rng rng = Rng::substream(seed, i);
        f(rng, out[b]);
      }
  });
  return out;
}

inline Estimate batch_estimate(const std::vector<double>& per_batch, double pooled, std::size_t samples) {
  Estimate e;
  e.exact = false;
  e.samples = samples;
  e.value = pooled;
  const double B = static_cast<double>(per_batch.size());
  double s1 = 0.0, s2 = 0.0;
  for (double x : per_batch) {
    s1 += x;
    s2 += x * x;
  }
  e.std_error = mean_stderr(s1, s2, B);
  return e;
}

inline std::size_t add_u(Accumulator& a, unsigned long long x) {
  a.add(static_cast<Accumulator::u128>(x));
  return x;
}

}  // namespace detail

// Monte Carlo rho* over sampled radius-2 neighbourhoods of the clique-tree
// root; stderr by batch means over 32 batches.
inline Estimate limit_assortativity_mc(const LimitSpec& s, std::size_t samples, std::uint64_t seed,
                                       unsigned threads = 1) {
  require(samples >= 64, "limit_assortativity_mc: need at least 64 samples");
  const CliqueTreeSampler sampler(s.D1, s.D2);
  auto batches = detail::batched(samples, 32, 4, seed, threads, [&](Rng& rng, detail::IntSums& acc) {
    Graph g = CliqueTreeSampler::intersection_of_tree(sampler.sample_tree(4, rng));
    const unsigned long long d = g.degree(0);
    unsigned long long nb = 0;
    for (vertex_t u : g.neighbors(0)) nb += g.degree(u);
    detail::add_u(acc.s[0], d);
    detail::add_u(acc.s[1], d * d);
    detail::add_u(acc.s[2], d * d * d);
    detail::add_u(acc.s[3], d * nb);
  });
  auto rho = [](double m1, double m2, double m3, double h) { return (m1 * h - m2 * m2) / (m1 * m3 - m2 * m2); };
  std::vector<double> per;
  detail::IntSums all(4);
  for (const auto& b : batches) {
    all.merge(b);
    per.push_back(rho(b.get(0), b.get(1), b.get(2), b.get(3)));
  }
  const double n = static_cast<double>(samples);
  return detail::batch_estimate(per, rho(all.get(0) / n, all.get(1) / n, all.get(2) / n, all.get(3) / n), samples);
}

// ---------------------------------------------------------------------------
// Conditional statistics

enum class CondMethod { automatic, enumeration, poisson_shortcut, monte_carlo };

inline std::string to_string(CondMethod m) {
  switch (m) {
    case CondMethod::automatic: return "automatic";
    case CondMethod::enumeration: return "enumeration";
    case CondMethod::poisson_shortcut: return "poisson-shortcut";
    case CondMethod::monte_carlo: return "monte-carlo";
  }
  return "?";
}

namespace detail {

inline constexpr double kConditionalTail = 1e-10;

// E(sum_i w(Z_i) | d* = k): exact truncated enumeration, or nullopt.
inline std::optional<Estimate> conditional_enumeration(const LimitSpec& s, long long k,
                                                       const std::function<double(std::size_t)>& w) {
  auto c = convolution(s, static_cast<std::size_t>(k), kConditionalTail, &w);
  if (!c) return std::nullopt;
  const double p = c->pdstar[static_cast<std::size_t>(k)];
  if (p <= 0.0) throw validation_error("P(d* = " + std::to_string(k) + ") = 0");
  return Estimate::exact_value(c->weighted[static_cast<std::size_t>(k)] / p, c->deficit);
}

// E(sum_i w(Z_i) | d* = k) by rejection over mc_samples draws.
inline Estimate conditional_mc(const LimitSpec& s, long long k, std::size_t mc_samples, std::uint64_t seed,
                               unsigned threads, const std::function<unsigned long long(long long)>& w) {
  require(mc_samples >= 2, "conditional Monte Carlo needs at least 2 samples");
  const DstarSampler sampler(s);
  const std::size_t B = std::min<std::size_t>(64, mc_samples);
  auto batches = batched(mc_samples, B, 3, seed, threads, [&](Rng& rng, IntSums& acc) {
    thread_local DstarDraw d;
    sampler.draw(rng, d);
    if (d.total != k) return;
    unsigned long long x = 0;
    for (long long z : d.z) x += w(z);
    add_u(acc.s[0], 1);
    add_u(acc.s[1], x);
    add_u(acc.s[2], x * x);
  });
  IntSums all(3);
  for (const auto& b : batches) all.merge(b);
  const double acc = all.get(0);
  if (acc == 0.0)
    throw runtime_abort("conditional Monte Carlo: no draws with d* = " + std::to_string(k) + " in " +
                        std::to_string(mc_samples) + " samples");
  Estimate e;
  e.exact = false;
  e.samples = mc_samples;
  e.value = all.get(1) / acc;
  e.std_error = mean_stderr(all.get(1), all.get(2), acc);
  return e;
}

inline bool finite_support(const DegreeLaw& l) { return l.max_value().has_value(); }

}  // namespace detail

// alpha_k* = E(sum_i Z_i (Z_i - 1) | d* = k) / (k (k - 1)); for D2 Poisson(l)
// also l P(d* = k - 1) / (k P(d* = k)).
inline Estimate limit_conditional_clustering(const LimitSpec& s, long long k, CondMethod method = CondMethod::automatic,
                                             std::size_t mc_samples = 1'000'000, std::uint64_t seed = 0,
                                             unsigned threads = 1) {
  require(k >= 2, "limit_conditional_clustering: k must be >= 2");
  const double kk = static_cast<double>(k * (k - 1));
  const auto lambda = s.D2.poisson_parameter();
  if (method == CondMethod::automatic) {
    if (detail::finite_support(s.D1) && detail::finite_support(s.D2))
      method = CondMethod::enumeration;
    else if (lambda)
      method = CondMethod::poisson_shortcut;
    else if (s.D1.pmf_at(0) && s.D2.pmf_at(0))
      method = CondMethod::enumeration;
    else
      method = CondMethod::monte_carlo;
  }
  switch (method) {
    case CondMethod::enumeration: {
      auto e = detail::conditional_enumeration(
          s, k, [](std::size_t m) { return static_cast<double>(m) * (static_cast<double>(m) - 1.0); });
      if (!e) throw validation_error("limit_conditional_clustering: laws lack closed-form pmfs for enumeration");
      e->value /= kk;
      return *e;
    }
    case CondMethod::poisson_shortcut: {
      if (!lambda) throw validation_error("limit_conditional_clustering: Poisson shortcut needs D2 Poisson");
      auto c = detail::convolution(s, static_cast<std::size_t>(k), detail::kConditionalTail);
      if (!c) throw validation_error("limit_conditional_clustering: D1 lacks a closed-form pmf");
      const double p = c->pdstar[static_cast<std::size_t>(k)];
      if (p <= 0.0) throw validation_error("P(d* = " + std::to_string(k) + ") = 0");
      return Estimate::exact_value(*lambda * c->pdstar[static_cast<std::size_t>(k - 1)] / (static_cast<double>(k) * p),
                                   c->deficit);
    }
    case CondMethod::monte_carlo: {
      auto e = detail::conditional_mc(s, k, mc_samples, seed, threads, [](long long z) {
        return static_cast<unsigned long long>(z * (z - 1));
      });
      e.value /= kk;
      e.std_error /= kk;
      return e;
    }
    case CondMethod::automatic: break;
  }
  throw validation_error("limit_conditional_clustering: unknown method");
}

// r_k* = k^-1 E(sum_i Z_i^2 | d* = k) + E (D1)_2 E (D2)_2 / (E D1 E D2)
inline Estimate limit_conditional_assortativity(const LimitSpec& s, long long k,
                                                CondMethod method = CondMethod::automatic,
                                                std::size_t mc_samples = 1'000'000, std::uint64_t seed = 0,
                                                unsigned threads = 1) {
  require(k >= 1, "limit_conditional_assortativity: k must be >= 1");
  const double a = s.D1.mean(), b = s.D2.mean();
  const double a2 = detail::need(s.D1.factorial_moment(2), "factorial moment", s.D1, 2);
  const double b2 = detail::need(s.D2.factorial_moment(2), "factorial moment", s.D2, 2);
  const double add = a2 * b2 / (a * b);
  if (method == CondMethod::automatic || method == CondMethod::poisson_shortcut)
    method = (s.D1.pmf_at(0) && s.D2.pmf_at(0)) ? CondMethod::enumeration : CondMethod::monte_carlo;
  Estimate e;
  if (method == CondMethod::enumeration) {
    auto en = detail::conditional_enumeration(
        s, k, [](std::size_t m) { return static_cast<double>(m) * static_cast<double>(m); });
    if (!en) throw validation_error("limit_conditional_assortativity: laws lack closed-form pmfs for enumeration");
    e = *en;
  } else {
    e = detail::conditional_mc(s, k, mc_samples, seed, threads,
                               [](long long z) { return static_cast<unsigned long long>(z * z); });
  }
  e.value = e.value / static_cast<double>(k) + add;
  e.std_error /= static_cast<double>(k);
  return e;
}

// ---------------------------------------------------------------------------
// Rooted counts in the limit

inline std::size_t root_eccentricity(const Pattern& H) {
  require(H.root().has_value(), "pattern has no root");
  const Graph& g = H.graph();
  std::vector<int> dist(g.vertex_count(), -1);
  std::vector<vertex_t> q{*H.root()};
  dist[*H.root()] = 0;
  std::size_t ecc = 0;
  for (std::size_t h = 0; h < q.size(); ++h)
    for (vertex_t w : g.neighbors(q[h]))
      if (dist[w] < 0) {
        dist[w] = dist[q[h]] + 1;
        ecc = std::max<std::size_t>(ecc, static_cast<std::size_t>(dist[w]));
        q.push_back(w);
      }
  return ecc;
}

// Mean of emb'(H', G_T, root) (hom' when hom_mode) over sampled clique trees
// truncated at radius r.
inline Estimate rooted_emb_expectation_mc(const LimitSpec& s, const Pattern& H, std::size_t r, std::size_t samples,
                                          std::uint64_t seed, unsigned threads = 1, bool hom_mode = false) {
  require(samples >= 2, "rooted_emb_expectation_mc: need at least 2 samples");
  if (root_eccentricity(H) > r)
    throw validation_error("rooted_emb_expectation_mc: pattern radius from its root exceeds r");
  const CliqueTreeSampler sampler(s.D1, s.D2);
  const std::size_t B = std::min<std::size_t>(64, samples);
  auto batches = detail::batched(samples, B, 2, seed, threads, [&](Rng& rng, detail::IntSums& acc) {
    Graph g = CliqueTreeSampler::intersection_of_tree(sampler.sample_tree(2 * r, rng));
    const bigint c = rooted_emb_count(H, g, 0, hom_mode);
    acc.s[0].add(c);
    acc.s[1].add(c * c);
  });
  detail::IntSums all(2);
  for (const auto& b : batches) all.merge(b);
  Estimate e;
  e.exact = false;
  e.samples = samples;
  const double n = static_cast<double>(samples);
  e.value = all.get(0) / n;
  e.std_error = detail::mean_stderr(all.get(0), all.get(1), n);
  return e;
}

// Closed form of E emb'(H', G_T, root) where one is known: K2 -> E d*,
// K3 -> E D1 E (Z)_2, K_{1,t} -> E (d*)_t. The value does not depend on the
// rooting.
inline std::optional<Estimate> limit_emb_density(const LimitSpec& s, const Pattern& H) {
  const Graph& g = H.graph();
  const std::size_t h = g.vertex_count(), e = g.edge_count();
  if (h == 2) return dstar_moment(s, 1);
  if (h == 3 && e == 3) return Estimate::exact_value(s.D1.mean() * z_moment(s.D2, 2, MomentMode::factorial).value);
  const vertex_t c = detail::max_degree_vertex(g);
  if (e == h - 1 && g.degree(c) == h - 1) return dstar_factorial_moment(s, static_cast<int>(h - 1));
  return std::nullopt;
}

}  // namespace rig
