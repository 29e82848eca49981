#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "gspec/graphon.hpp"
#include "gspec/rng.hpp"
#include "gspec/sampling.hpp"

using namespace gspec;

namespace {

// Kolmogorov limiting distribution Pr[sqrt(n) D_n > x] = 2 sum (-1)^{k-1} e^{-2k^2x^2}.
double kolmogorov_tail(double x) {
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) s += (k % 2 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * x * x);
  return 2.0 * s;
}

double ks_statistic(const std::vector<double>& sorted) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    d = std::max(d, (i + 1) / n - sorted[i]);
    d = std::max(d, sorted[i] - i / n);
  }
  return d;
}

}  // namespace

TEST(Rng, DeriveSeedSeparatesTrials) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t t = 0; t < 1000; ++t) seen.insert(derive_seed(42, t));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(trial_seed(1, 100, 0), trial_seed(1, 200, 0));
  EXPECT_EQ(trial_seed(7, 100, 3), trial_seed(7, 100, 3));
}

TEST(Rng, UniformRange) {
  UniformStream u(3);
  for (int i = 0; i < 10000; ++i) {
    const double v = u();
    ASSERT_GE(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
}

TEST(SampleLatent, DeterministicGrid) {
  const auto s = sample_latent(4, LatentMode::deterministic);
  EXPECT_EQ(s.values, (std::vector<double>{0.25, 0.5, 0.75, 1.0}));
  const auto big = sample_latent(997, LatentMode::deterministic);
  for (std::size_t i = 0; i < big.size(); ++i)
    EXPECT_EQ(big.values[i], static_cast<double>(i + 1) / 997.0);
}

TEST(SampleLatent, StochasticReproducibleSortedPermutation) {
  const auto a = sample_latent(1000, LatentMode::stochastic, 99);
  const auto b = sample_latent(1000, LatentMode::stochastic, 99);
  EXPECT_EQ(a.values, b.values);
  EXPECT_TRUE(std::is_sorted(a.values.begin(), a.values.end()));
  EXPECT_GE(a.values.front(), 0.0);
  EXPECT_LE(a.values.back(), 1.0);

  auto raw = raw_uniforms(1000, 99);
  EXPECT_FALSE(std::is_sorted(raw.begin(), raw.end()));
  std::sort(raw.begin(), raw.end());
  EXPECT_EQ(raw, a.values);

  EXPECT_NE(sample_latent(1000, LatentMode::stochastic, 100).values, a.values);
}

TEST(SampleLatent, RejectsZero) {
  EXPECT_THROW(sample_latent(0, LatentMode::stochastic, 1), ValidationError);
}

TEST(SampleLatent, KolmogorovSmirnov) {
  // The critical value 1.95 sits at the 0.1% level of the Kolmogorov law.
  const double tail = kolmogorov_tail(1.95);
  EXPECT_GT(tail, 0.0009);
  EXPECT_LT(tail, 0.0011);

  const double crit = 1.95 / std::sqrt(1000.0);
  int accepted = 0;
  for (std::uint64_t s = 0; s < 100; ++s)
    if (ks_statistic(sample_latent(1000, LatentMode::stochastic, derive_seed(2024, s)).values) <
        crit)
      ++accepted;
  EXPECT_GE(accepted, 99);
}

TEST(ExpectedAdjacency, Examples) {
  const auto c = make_catalog_graphon(catalog::Constant{0.5});
  const auto m = expected_adjacency(c, sample_latent(3, LatentMode::deterministic));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(m(i, j), i == j ? 0.0 : 0.5);

  const auto prod = make_catalog_graphon(catalog::Product{});
  const auto p = expected_adjacency(prod, sample_latent(2, LatentMode::deterministic));
  EXPECT_EQ(p(0, 0), 0.0);
  EXPECT_EQ(p(0, 1), 0.5);
  EXPECT_EQ(p(1, 0), 0.5);
  EXPECT_EQ(p(1, 1), 0.0);

  const auto sbm = make_catalog_graphon(catalog::Sbm{{0.5}, {{0.5, 0.0}, {0.0, 0.0}}});
  LatentSample lat{{0.2, 0.4, 0.9}, LatentMode::stochastic, 0};
  const auto s = expected_adjacency(sbm, lat);
  const double want[3][3] = {{0, .5, 0}, {.5, 0, 0}, {0, 0, 0}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(s(i, j), want[i][j]);
}

TEST(SampleAdjacency, ZeroAndOne) {
  const Matrix zeros(20);
  EXPECT_EQ(sample_adjacency(zeros, 5), zeros);

  Matrix ones(20, 1.0);
  for (std::size_t i = 0; i < 20; ++i) ones(i, i) = 0.0;
  EXPECT_EQ(sample_adjacency(ones, 5), ones);
}

TEST(SampleAdjacency, RejectsBadProbabilities) {
  Matrix m(3);
  m(0, 1) = m(1, 0) = 1.5;
  EXPECT_THROW(sample_adjacency(m, 1), ValidationError);
}

TEST(SampleAdjacency, StructureAndReproducibility) {
  const auto g = make_catalog_graphon(catalog::Mean{});
  const auto pair = sample_graph_pair(g, 60, LatentMode::stochastic, 11);
  const auto again = sample_graph_pair(g, 60, LatentMode::stochastic, 11);
  EXPECT_EQ(pair.a_random, again.a_random);
  EXPECT_TRUE(pair.a_random.is_symmetric(0.0));
  EXPECT_TRUE(pair.a_expected.is_symmetric(0.0));
  for (std::size_t i = 0; i < 60; ++i) {
    EXPECT_EQ(pair.a_random(i, i), 0.0);
    EXPECT_EQ(pair.a_expected(i, i), 0.0);
    for (std::size_t j = 0; j < 60; ++j) {
      const double a = pair.a_random(i, j);
      EXPECT_TRUE(a == 0.0 || a == 1.0);
      if (i != j) {
        EXPECT_EQ(pair.a_expected(i, j), g(pair.latent.values[i], pair.latent.values[j]));
      }
    }
  }
}

TEST(SampleAdjacency, EdgeDensityConstantHalf) {
  const auto g = make_catalog_graphon(catalog::Constant{0.5});
  const std::size_t n = 200, draws = 500;
  const auto ea = expected_adjacency(g, sample_latent(n, LatentMode::deterministic));
  double edges = 0.0;
  for (std::size_t t = 0; t < draws; ++t) {
    const auto a = sample_adjacency(ea, derive_seed(77, t));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) edges += a(i, j);
  }
  const double pairs = static_cast<double>(draws) * n * (n - 1) / 2.0;
  EXPECT_NEAR(edges / pairs, 0.5, 0.01);
  EXPECT_NEAR(edges / pairs, 0.5, 4.0 * std::sqrt(0.25 / pairs));
}

TEST(SampleAdjacency, ConditionalMean) {
  const auto g = make_catalog_graphon(catalog::Product{});
  const std::size_t n = 25, draws = 2000;
  const auto latent = sample_latent(n, LatentMode::stochastic, 3);
  const auto ea = expected_adjacency(g, latent);
  Matrix sum(n);
  for (std::size_t t = 0; t < draws; ++t) sum += sample_adjacency(ea, derive_seed(5, t));
  const double band = 4.0 * std::sqrt(0.25 / draws);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(sum(i, j) / draws, ea(i, j), band);
}

TEST(SampleAdjacency, ZeroRowsStayEmpty) {
  const auto g = make_catalog_graphon(catalog::Sbm{{0.5}, {{0.5, 0.0}, {0.0, 0.0}}});
  const auto latent = sample_latent(80, LatentMode::stochastic, 9);
  const auto ea = expected_adjacency(g, latent);
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto a = sample_adjacency(ea, derive_seed(1, t));
    for (std::size_t i = 0; i < 80; ++i)
      if (ea.row_sum(i) == 0.0) {
        ASSERT_EQ(a.row_sum(i), 0.0);
      }
  }
}
