#include <gtest/gtest.h>

#include <cmath>

#include "rig/combinatorics.hpp"
#include "rig/laws.hpp"
#include "rig/rng.hpp"

using namespace rig;

namespace {

// Poisson pmf by multiplicative recurrence, independent of the library.
double po(double lambda, long long k) {
  if (k < 0) return 0.0;
  double p = std::exp(-lambda);
  for (long long i = 1; i <= k; ++i) p *= lambda / static_cast<double>(i);
  return p;
}

double pmf(const DegreeLaw& l, long long k) { return l.pmf_at(k).value(); }

}  // namespace

TEST(Rng, SubstreamsAreDeterministicAndDistinct) {
  Rng a = Rng::substream(7, 3), b = Rng::substream(7, 3), c = Rng::substream(7, 4);
  for (int i = 0; i < 10; ++i) {
    const auto x = a(), y = b(), z = c();
    EXPECT_EQ(x, y);
    EXPECT_NE(x, z);
  }
  Rng r(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform01();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(r.below(17), 17u);
  }
}

TEST(Combinatorics, StirlingAndFalling) {
  EXPECT_EQ(comb::stirling2(5, 2), 15.0);
  EXPECT_EQ(comb::stirling2(6, 3), 90.0);
  EXPECT_EQ(comb::stirling1_signed(4, 2), 11.0);
  EXPECT_EQ(comb::falling(5.0, 3), 60.0);
  EXPECT_EQ(comb::falling(2.0, 3), 0.0);
  int count = 0;
  comb::for_each_composition(4, [&](const std::vector<int>&) { ++count; });
  EXPECT_EQ(count, 8);  // 2^(n-1)
  EXPECT_EQ(comb::multinomial({2, 1, 1}), 12.0);
}

TEST(DegreeLaw, SizeBiasedFinite) {
  auto l = DegreeLaw::pmf({{1, 0.5}, {3, 0.5}}).size_biased();
  EXPECT_DOUBLE_EQ(pmf(l, 1), 0.25);
  EXPECT_DOUBLE_EQ(pmf(l, 3), 0.75);
  EXPECT_DOUBLE_EQ(pmf(l, 2), 0.0);
  auto c = DegreeLaw::constant(4).size_biased();
  EXPECT_DOUBLE_EQ(pmf(c, 4), 1.0);
}

TEST(DegreeLaw, SizeBiasedPoissonIsShifted) {
  for (double lambda : {0.5, 1.0, 2.0, 5.0}) {
    auto sb = DegreeLaw::poisson(lambda).size_biased();
    EXPECT_DOUBLE_EQ(pmf(sb, 0), 0.0);
    for (long long k = 1; k <= 30; ++k) EXPECT_NEAR(pmf(sb, k), po(lambda, k - 1), 1e-12) << lambda << " " << k;
  }
}

TEST(DegreeLaw, SizeBiasedMixedPoisson) {
  // X ~ Exp(1): X* ~ Gamma(2, 1); P(Po(X*) = k) = (k + 1) / 2^(k+2)
  auto sb = DegreeLaw::mixed_poisson(WeightLaw::exponential(1.0)).size_biased();
  EXPECT_NEAR(pmf(sb, 0), 0.0, 1e-15);
  for (long long k = 1; k <= 20; ++k) EXPECT_NEAR(pmf(sb, k), static_cast<double>(k) / std::pow(2.0, k + 1), 1e-12);
  // Point-mass weight reduces to a Poisson law.
  auto pm = DegreeLaw::mixed_poisson(WeightLaw::point_mass(2.0));
  for (long long k = 0; k <= 15; ++k) EXPECT_NEAR(pmf(pm, k), po(2.0, k), 1e-13);
}

TEST(DegreeLaw, Offspring) {
  EXPECT_DOUBLE_EQ(pmf(DegreeLaw::constant(2).offspring(), 1), 1.0);
  auto p = DegreeLaw::poisson(3.0).offspring();
  for (long long k = 0; k <= 20; ++k) EXPECT_NEAR(pmf(p, k), po(3.0, k), 1e-13);
  auto f = DegreeLaw::pmf({{1, 0.5}, {3, 0.5}}).offspring();
  EXPECT_DOUBLE_EQ(pmf(f, 0), 0.25);
  EXPECT_DOUBLE_EQ(pmf(f, 2), 0.75);
}

TEST(DegreeLaw, SizeBiasedShiftedAndMixture) {
  // size-biasing a positive shift matches the direct reweighting of its table
  auto base = DegreeLaw::shifted(DegreeLaw::poisson(1.5), 2);
  auto sb = base.size_biased();
  const double mu = 3.5;
  for (long long k = 0; k <= 25; ++k) EXPECT_NEAR(pmf(sb, k), static_cast<double>(k) * pmf(base, k) / mu, 1e-12);
  auto mix = DegreeLaw::mixture({{0.3, DegreeLaw::constant(1)}, {0.7, DegreeLaw::poisson(2.0)}});
  auto msb = mix.size_biased();
  const double mm = 0.3 + 1.4;
  for (long long k = 0; k <= 25; ++k) EXPECT_NEAR(pmf(msb, k), static_cast<double>(k) * pmf(mix, k) / mm, 1e-12);
}

TEST(DegreeLaw, Moments) {
  auto l = DegreeLaw::pmf({{1, 0.5}, {3, 0.5}});
  EXPECT_DOUBLE_EQ(*l.raw_moment(1), 2.0);
  EXPECT_DOUBLE_EQ(*l.raw_moment(2), 5.0);
  EXPECT_DOUBLE_EQ(*l.factorial_moment(2), 3.0);
  EXPECT_DOUBLE_EQ(*l.factorial_moment(3), 3.0);
  auto p = DegreeLaw::poisson(1.7);
  for (int j = 1; j <= 5; ++j) EXPECT_NEAR(*p.factorial_moment(j), std::pow(1.7, j), 1e-10 * std::pow(1.7, j));
  EXPECT_NEAR(*p.raw_moment(2), 1.7 + 1.7 * 1.7, 1e-12);
  auto mp = DegreeLaw::mixed_poisson(WeightLaw::exponential(2.0));  // E(Po(X))_j = E X^j = j!/2^j
  for (int j = 1; j <= 4; ++j) EXPECT_NEAR(*mp.factorial_moment(j), comb::factorial(j) / std::pow(2.0, j), 1e-10);
  auto heavy = DegreeLaw::mixed_poisson(WeightLaw::pareto(1.5, 1.0));
  EXPECT_TRUE(heavy.raw_moment(1).has_value());
  EXPECT_FALSE(heavy.raw_moment(2).has_value());
}

TEST(DegreeLaw, SampleMeansMatch) {
  Rng rng(11);
  for (const auto& l : {DegreeLaw::poisson(2.5), DegreeLaw::pmf({{0, 0.2}, {4, 0.8}}),
                        DegreeLaw::mixed_poisson(WeightLaw::gamma(2.0, 1.0)),
                        DegreeLaw::shifted(DegreeLaw::poisson(1.0), 1)}) {
    const int n = 200000;
    double s = 0;
    for (int i = 0; i < n; ++i) s += static_cast<double>(l.sample(rng));
    const double var = *l.raw_moment(2) - l.mean() * l.mean();
    EXPECT_NEAR(s / n, l.mean(), 4.0 * std::sqrt(var / n)) << l.describe();
  }
}

TEST(DegreeLaw, Validation) {
  EXPECT_THROW(DegreeLaw::pmf({{1, 0.5}, {2, 0.4}}), validation_error);
  EXPECT_THROW(DegreeLaw::pmf({{-1, 1.0}}), validation_error);
  EXPECT_THROW(DegreeLaw::poisson(-1.0), validation_error);
  EXPECT_THROW(DegreeLaw::constant(0).size_biased(), validation_error);
  EXPECT_THROW(DegreeLaw::mixed_poisson(WeightLaw::pareto(0.8, 1.0)).mean(), moment_unavailable);
}

TEST(DegreeLaw, PmfTable) {
  auto t = DegreeLaw::poisson(2.0).pmf_table(1e-12);
  ASSERT_TRUE(t);
  double s = 0;
  for (double p : t->p) s += p;
  EXPECT_LT(1.0 - s, 1e-12);
  auto f = DegreeLaw::pmf({{0, 0.5}, {5, 0.5}}).pmf_table(1e-12);
  ASSERT_TRUE(f);
  EXPECT_EQ(f->p.size(), 6u);
  EXPECT_EQ(f->deficit, 0.0);
}

TEST(WeightLaw, Moments) {
  EXPECT_DOUBLE_EQ(*WeightLaw::exponential(2.0).moment(2), 0.5);
  EXPECT_NEAR(*WeightLaw::gamma(3.0, 2.0).moment(1), 1.5, 1e-12);
  EXPECT_NEAR(*WeightLaw::pareto(3.0, 1.0).moment(1), 1.5, 1e-12);
  EXPECT_FALSE(WeightLaw::pareto(2.0, 1.0).moment(2).has_value());
  auto fin = WeightLaw::finite({{1.0, 0.5}, {3.0, 0.5}});
  EXPECT_DOUBLE_EQ(fin.mean(), 2.0);
  EXPECT_DOUBLE_EQ(*fin.size_biased().moment(1), 2.5);
}
