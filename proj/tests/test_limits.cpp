#include <gtest/gtest.h>

#include <cmath>

#include "rig/limits.hpp"

using namespace rig;

namespace {

// E g(Z) with P(Z = m) = (m + 1) P(D2 = m + 1) / E D2, summed straight from a
// finite pmf.
double z_expect(const std::vector<std::pair<long long, double>>& d2, double (*g)(double)) {
  double mean = 0, s = 0;
  for (auto [k, p] : d2) mean += static_cast<double>(k) * p;
  for (auto [k, p] : d2) s += static_cast<double>(k) * p * g(static_cast<double>(k - 1));
  return s / mean;
}

double fall(const std::vector<std::pair<long long, double>>& d, int j) {
  double s = 0;
  for (auto [k, p] : d) {
    double f = 1;
    for (int i = 0; i < j; ++i) f *= static_cast<double>(k - i);
    s += p * f;
  }
  return s;
}

std::vector<std::pair<long long, double>> random_pmf(Rng& rng, long long lo) {
  const int atoms = 1 + static_cast<int>(rng.below(4));
  std::vector<std::pair<long long, double>> out;
  double total = 0;
  for (long long k = lo; static_cast<int>(out.size()) < atoms; ++k) {
    if (rng.uniform01() < 0.5 && k < lo + 6) continue;
    const double w = 0.1 + rng.uniform01();
    out.emplace_back(k, w);
    total += w;
  }
  for (auto& a : out) a.second /= total;
  return out;
}

LimitSpec spec(DegreeLaw a, DegreeLaw b) { return direct_limits(std::move(a), std::move(b)); }

bool within(double a, double sa, double b, double sb, double sigmas) {
  return std::abs(a - b) <= sigmas * std::sqrt(sa * sa + sb * sb);
}

}  // namespace

TEST(Remark1, Identification) {
  ModelConfig a;
  a.model = ModelKind::active;
  a.n1 = a.n2 = 100;
  a.P = DegreeLaw::constant(3);
  auto s = limit_spec(a);
  EXPECT_EQ(s.D2.poisson_parameter().value(), 3.0);
  EXPECT_EQ(s.kind, Provenance::remark1_active);
  ModelConfig p;
  p.model = ModelKind::passive;
  p.n1 = 100;
  p.n2 = 200;
  p.P = DegreeLaw::constant(2);
  EXPECT_EQ(limit_spec(p).D1.poisson_parameter().value(), 4.0);
  ModelConfig h;
  h.model = ModelKind::inhomogeneous;
  h.n1 = h.n2 = 50;
  h.xi1 = h.xi2 = WeightLaw::point_mass(1.0);
  auto hs = limit_spec(h);
  EXPECT_DOUBLE_EQ(hs.D1.poisson_parameter().value(), 1.0);
  EXPECT_DOUBLE_EQ(hs.D2.poisson_parameter().value(), 1.0);
  ModelConfig c;
  c.model = ModelKind::configuration;
  EXPECT_THROW(remark1_limits(c, 1.0), validation_error);
  EXPECT_THROW(direct_limits(DegreeLaw::constant(0), DegreeLaw::constant(1)), validation_error);
}

TEST(ZMoment, Examples) {
  EXPECT_DOUBLE_EQ(z_moment(DegreeLaw::constant(2), 1, MomentMode::raw).value, 1.0);
  for (int j = 1; j <= 4; ++j)
    EXPECT_NEAR(z_moment(DegreeLaw::poisson(1.3), j, MomentMode::factorial).value, std::pow(1.3, j), 1e-12);
  EXPECT_DOUBLE_EQ(z_moment(DegreeLaw::pmf({{1, .5}, {3, .5}}), 2, MomentMode::raw).value, 3.0);
  EXPECT_THROW(z_moment(DegreeLaw::mixed_poisson(WeightLaw::pareto(2.5, 1.0)), 2, MomentMode::raw), moment_unavailable);
}

TEST(DstarMoment, Examples) {
  auto d2 = DegreeLaw::pmf({{1, .3}, {4, .7}});
  for (int k = 1; k <= 4; ++k)
    EXPECT_NEAR(dstar_moment(spec(DegreeLaw::constant(1), d2), k).value, z_moment(d2, k, MomentMode::raw).value,
                1e-12);
  EXPECT_DOUBLE_EQ(dstar_moment(spec(DegreeLaw::constant(2), DegreeLaw::constant(2)), 2).value, 4.0);
  EXPECT_DOUBLE_EQ(dstar_moment(spec(DegreeLaw::constant(2), DegreeLaw::constant(2)), 0).value, 1.0);
}

TEST(DstarMoment, MatchesLowOrderExpansions) {
  Rng rng(1);
  auto sq = [](double x) { return x * x; };
  auto cube = [](double x) { return x * x * x; };
  auto id = [](double x) { return x; };
  for (int t = 0; t < 20; ++t) {
    auto d1 = random_pmf(rng, 0), d2 = random_pmf(rng, 1);
    if (fall(d1, 1) == 0) d1.back().first += 1;
    const auto s = spec(DegreeLaw::pmf(d1), DegreeLaw::pmf(d2));
    const double z1 = z_expect(d2, +id), z2 = z_expect(d2, +sq), z3 = z_expect(d2, +cube);
    const double e1 = fall(d1, 1) * z1;
    const double e2 = fall(d1, 1) * z2 + fall(d1, 2) * z1 * z1;
    const double e3 = fall(d1, 1) * z3 + 3 * fall(d1, 2) * z1 * z2 + fall(d1, 3) * z1 * z1 * z1;
    EXPECT_NEAR(dstar_moment(s, 1).value, e1, 1e-9 * std::max(1.0, e1));
    EXPECT_NEAR(dstar_moment(s, 2).value, e2, 1e-9 * std::max(1.0, e2));
    EXPECT_NEAR(dstar_moment(s, 3).value, e3, 1e-9 * std::max(1.0, e3));
  }
}

TEST(DstarMoment, MonteCarloAgreement) {
  const auto s = spec(DegreeLaw::poisson(2.0), DegreeLaw::poisson(1.5));
  detail::DstarSampler sampler(s);
  detail::DstarDraw d;
  const int n = 200000;
  double m[4] = {0, 0, 0, 0}, m2[4] = {0, 0, 0, 0};
  for (int i = 0; i < n; ++i) {
    Rng rng = Rng::substream(3, static_cast<std::uint64_t>(i));
    sampler.draw(rng, d);
    double x = 1;
    for (int k = 1; k <= 3; ++k) {
      x *= static_cast<double>(d.total);
      m[k] += x;
      m2[k] += x * x;
    }
  }
  for (int k = 1; k <= 3; ++k) {
    const double se = detail::mean_stderr(m[k], m2[k], n);
    EXPECT_NEAR(m[k] / n, dstar_moment(s, k).value, 3 * se) << k;
  }
  // E (d*)_2 against the definition
  EXPECT_NEAR(dstar_factorial_moment(s, 2).value, dstar_moment(s, 2).value - dstar_moment(s, 1).value, 1e-9);
}

TEST(DegreePmf, Examples) {
  LimitSpec zero;
  zero.D1 = DegreeLaw::constant(0);
  EXPECT_EQ(limit_degree_pmf(zero, 0).value, 1.0);
  EXPECT_EQ(limit_degree_pmf(zero, 3).value, 0.0);
  const auto two = spec(DegreeLaw::constant(2), DegreeLaw::constant(2));
  EXPECT_EQ(limit_degree_pmf(two, 2).value, 1.0);
  EXPECT_EQ(limit_degree_pmf(two, 1).value, 0.0);
  auto t = limit_degree_table(two);
  ASSERT_TRUE(t);
  EXPECT_EQ(t->p.size(), 3u);
}

TEST(DegreePmf, PoissonCompoundClosedForm) {
  // D1 = Po(a), D2 = Po(b): d* is Poisson(a) compound of Poisson(b), so
  // P(d* = 0) = exp(-a (1 - exp(-b))).
  const auto s = spec(DegreeLaw::poisson(2.0), DegreeLaw::poisson(1.5));
  EXPECT_NEAR(limit_degree_pmf(s, 0).value, std::exp(-2.0 * (1 - std::exp(-1.5))), 1e-12);
  auto t = limit_degree_table(s);
  ASSERT_TRUE(t);
  double sum = 0, mean = 0;
  for (std::size_t k = 0; k < t->p.size(); ++k) {
    sum += t->p[k];
    mean += static_cast<double>(k) * t->p[k];
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_NEAR(mean, dstar_moment(s, 1).value, 1e-9);
}

TEST(DegreePmf, MonteCarloFallback) {
  // heavy-tailed mixed Poisson D1 has no closed-form pmf in the library
  const auto s = spec(DegreeLaw::mixed_poisson(WeightLaw::pareto(3.0, 1.0)), DegreeLaw::constant(2));
  auto e = limit_degree_pmf(s, 1, 100000, 5);
  EXPECT_FALSE(e.exact);
  EXPECT_GT(e.std_error, 0.0);
  auto e4 = limit_degree_pmf(s, 1, 400000, 5);
  EXPECT_NEAR(e.std_error / e4.std_error, 2.0, 0.1);  // stderr scales as n^-1/2
}

TEST(Clustering, Examples) {
  EXPECT_DOUBLE_EQ(limit_clustering(spec(DegreeLaw::constant(1), DegreeLaw::poisson(2.0))).value, 1.0);
  EXPECT_DOUBLE_EQ(limit_clustering(spec(DegreeLaw::poisson(3.0), DegreeLaw::constant(2))).value, 0.0);
  ModelConfig a;
  a.model = ModelKind::active;
  a.n1 = a.n2 = 1000;
  a.P = DegreeLaw::constant(3);
  EXPECT_NEAR(limit_clustering(limit_spec(a)).value, 1.0 / 3.0, 1e-12);
  a.P = DegreeLaw::pmf({{1, .5}, {4, .5}});
  a.n2 = 3000;
  EXPECT_NEAR(limit_clustering(limit_spec(a)).value, 2.5 / 8.5, 1e-12);
  ModelConfig p;
  p.model = ModelKind::passive;
  p.n1 = 1000;
  p.n2 = 500;
  p.P = DegreeLaw::pmf({{2, .5}, {3, .5}});
  const double b2 = 0.5 * 2 + 0.5 * 6, b3 = 0.5 * 6;
  EXPECT_NEAR(limit_clustering(limit_spec(p)).value, b3 / (b3 + 0.5 * b2 * b2), 1e-12);
  auto deg = limit_clustering(spec(DegreeLaw::constant(1), DegreeLaw::constant(1)));
  EXPECT_TRUE(deg.degenerate);
}

TEST(Assortativity, Examples) {
  auto r = limit_assortativity(spec(DegreeLaw::pmf({{1, .5}, {2, .5}}), DegreeLaw::constant(2)));
  EXPECT_NEAR(r.value, 0.0, 1e-12);
  for (long long c : {1, 2, 3})
    EXPECT_THROW(limit_assortativity(spec(DegreeLaw::constant(c), DegreeLaw::constant(c))), degenerate_limit);
  try {
    limit_assortativity(spec(DegreeLaw::constant(2), DegreeLaw::constant(2)));
  } catch (const degenerate_limit& e) {
    EXPECT_NE(std::string(e.what()).find("Var(d*) = 0"), std::string::npos);
  }
}

TEST(Assortativity, HomP4MatchesMonteCarlo) {
  for (auto s : {spec(DegreeLaw::poisson(2.0), DegreeLaw::poisson(1.5)),
                 spec(DegreeLaw::pmf({{1, .5}, {3, .5}}), DegreeLaw::pmf({{1, .4}, {2, .3}, {4, .3}}))}) {
    auto mc = rooted_emb_expectation_mc(s, Pattern::path(4).rooted(1), 2, 100000, 11, 1, true);
    EXPECT_TRUE(within(mc.value, mc.std_error, limit_hom_p4_rooted(s).value, 0, 3)) << mc.value;
  }
}

TEST(Assortativity, MatchesMonteCarlo) {
  for (auto s : {spec(DegreeLaw::poisson(2.0), DegreeLaw::poisson(1.5)),
                 spec(DegreeLaw::pmf({{1, .5}, {2, .5}}), DegreeLaw::constant(2))}) {
    auto mc = limit_assortativity_mc(s, 200000, 4);
    auto ex = limit_assortativity(s);
    EXPECT_TRUE(within(mc.value, mc.std_error, ex.value, 0, 3)) << mc.value << " vs " << ex.value;
  }
}

TEST(Conditional, ClusteringExamples) {
  EXPECT_DOUBLE_EQ(limit_conditional_clustering(spec(DegreeLaw::constant(1), DegreeLaw::constant(3)), 2).value, 1.0);
  EXPECT_DOUBLE_EQ(limit_conditional_clustering(spec(DegreeLaw::constant(2), DegreeLaw::constant(2)), 2).value, 0.0);
  EXPECT_THROW(limit_conditional_clustering(spec(DegreeLaw::constant(2), DegreeLaw::constant(2)), 3),
               validation_error);
  EXPECT_THROW(limit_conditional_clustering(spec(DegreeLaw::constant(2), DegreeLaw::constant(2)), 1),
               validation_error);
}

TEST(Conditional, AssortativityExamples) {
  EXPECT_DOUBLE_EQ(limit_conditional_assortativity(spec(DegreeLaw::constant(2), DegreeLaw::constant(2)), 2).value, 2.0);
  EXPECT_DOUBLE_EQ(limit_conditional_assortativity(spec(DegreeLaw::constant(1), DegreeLaw::constant(2)), 1).value, 1.0);
  EXPECT_NEAR(limit_conditional_assortativity(spec(DegreeLaw::poisson(1.0), DegreeLaw::constant(2)), 3).value, 2.0,
              1e-9);
}

TEST(Conditional, ShortcutMatchesEnumeration) {
  for (auto d1 : {DegreeLaw::poisson(2.0), DegreeLaw::constant(3), DegreeLaw::pmf({{1, .5}, {4, .5}})}) {
    const auto s = spec(d1, DegreeLaw::poisson(1.0));
    for (long long k = 2; k <= 6; ++k) {
      const double a = limit_conditional_clustering(s, k, CondMethod::enumeration).value;
      const double b = limit_conditional_clustering(s, k, CondMethod::poisson_shortcut).value;
      EXPECT_NEAR(a, b, 1e-9) << d1.describe() << " k=" << k;
    }
  }
}

TEST(Conditional, MonteCarloAgreement) {
  const auto s = spec(DegreeLaw::poisson(2.0), DegreeLaw::pmf({{1, .3}, {2, .3}, {3, .4}}));
  for (long long k = 2; k <= 3; ++k) {
    auto mc = limit_conditional_clustering(s, k, CondMethod::monte_carlo, 200000, 8);
    auto ex = limit_conditional_clustering(s, k, CondMethod::enumeration);
    EXPECT_TRUE(within(mc.value, mc.std_error, ex.value, 0, 3)) << k;
    auto rmc = limit_conditional_assortativity(s, k, CondMethod::monte_carlo, 200000, 8);
    auto rex = limit_conditional_assortativity(s, k, CondMethod::enumeration);
    EXPECT_TRUE(within(rmc.value, rmc.std_error, rex.value, 0, 3)) << k;
  }
  EXPECT_THROW(limit_conditional_clustering(s, 60, CondMethod::monte_carlo, 100, 1), runtime_abort);
}

TEST(Conditional, NoEnumerationFallsBackToMonteCarlo) {
  const auto s = spec(DegreeLaw::mixed_poisson(WeightLaw::pareto(4.0, 1.0)), DegreeLaw::constant(3));
  auto e = limit_conditional_clustering(s, 2, CondMethod::automatic, 20000, 1);
  EXPECT_FALSE(e.exact);
  EXPECT_THROW(limit_conditional_clustering(s, 2, CondMethod::poisson_shortcut), validation_error);
}

TEST(RootedCounts, Examples) {
  const auto s = spec(DegreeLaw::poisson(2.0), DegreeLaw::poisson(1.5));
  auto k2 = rooted_emb_expectation_mc(s, Pattern::complete(2).rooted(0), 1, 100000, 2);
  EXPECT_TRUE(within(k2.value, k2.std_error, dstar_moment(s, 1).value, 0, 3));
  const auto t = spec(DegreeLaw::constant(1), DegreeLaw::constant(3));
  EXPECT_DOUBLE_EQ(limit_emb_density(t, Pattern::complete(3))->value, 2.0);
  auto k3 = rooted_emb_expectation_mc(t, Pattern::complete(3).rooted(0), 1, 1000, 2);
  EXPECT_DOUBLE_EQ(k3.value, 2.0);
  EXPECT_EQ(k3.std_error, 0.0);
  EXPECT_THROW(rooted_emb_expectation_mc(s, Pattern::path(4).rooted(0), 2, 100, 1), validation_error);
  EXPECT_FALSE(limit_emb_density(s, Pattern::cycle(4)).has_value());
}

TEST(RootedCounts, RootingsAgree) {
  const auto s = spec(DegreeLaw::poisson(2.0), DegreeLaw::poisson(1.5));
  const double exact = limit_emb_density(s, Pattern::path(3))->value;
  for (const auto& R : Pattern::path(3).rootings()) {
    auto e = rooted_emb_expectation_mc(s, R, root_eccentricity(R), 100000, 3);
    EXPECT_TRUE(within(e.value, e.std_error, exact, 0, 3)) << *R.root() << " " << e.value << " vs " << exact;
  }
  auto tri = rooted_emb_expectation_mc(s, Pattern::complete(3).rooted(0), 1, 100000, 3);
  EXPECT_TRUE(within(tri.value, tri.std_error, limit_emb_density(s, Pattern::complete(3))->value, 0, 3));
}

TEST(Estimate, Json) {
  auto j = Estimate::exact_value(0.5).to_json("alpha", "direct");
  EXPECT_EQ(j["quantity"], "alpha");
  EXPECT_EQ(j["exact"], true);
  EXPECT_FALSE(j.contains("samples"));
}
