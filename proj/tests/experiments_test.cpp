#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "gspec/experiments.hpp"

using namespace gspec;

namespace {

McConfig config(CatalogSpec g, std::vector<std::size_t> ns, std::size_t trials,
                std::uint64_t seed = 17) {
  McConfig c;
  c.graphon = std::move(g);
  c.n_list = std::move(ns);
  c.trials = trials;
  c.master_seed = seed;
  c.nu = 0.05;
  return c;
}

const catalog::Sbm kZeroBlock{{0.5}, {{0.5, 0.0}, {0.0, 0.0}}};

}  // namespace

TEST(McConfig, Validation) {
  auto c = config(catalog::Product{}, {10, 20}, 1);
  EXPECT_NO_THROW(c.validate());
  c.trials = 0;
  EXPECT_THROW(c.validate(), ValidationError);
  c = config(catalog::Product{}, {20, 10}, 1);
  EXPECT_THROW(c.validate(), ValidationError);
  c = config(catalog::Product{}, {}, 1);
  EXPECT_THROW(c.validate(), ValidationError);
  c = config(catalog::Product{}, {10}, 1);
  c.nu = 1.0;
  EXPECT_THROW(c.validate(), ValidationError);
}

TEST(VerifyLemma3, ConstantHalfSmall) {
  const auto rep = verify_lemma3(config(catalog::Constant{0.5}, {60, 120}, 40));
  ASSERT_EQ(rep.per_n.size(), 2u);
  EXPECT_EQ(rep.trials.size(), 80u);
  for (const auto& a : rep.per_n) {
    EXPECT_EQ(a.trials, 40u);
    EXPECT_EQ(a.eig_failures, 0u);
    EXPECT_EQ(a.weyl_failures, 0u);
    EXPECT_EQ(a.assumption_count, 40u);
    EXPECT_LE(a.freq_a, 0.05);
    EXPECT_LE(a.freq_b, 0.10);
    for (double f : {a.freq_a, a.freq_b, a.freq_c, a.freq_e, a.freq_not_assumption}) {
      EXPECT_GE(f, 0.0);
      EXPECT_LE(f, 1.0);
    }
    EXPECT_LE(a.wilson_a.lo, a.freq_a);
    EXPECT_GE(a.wilson_a.hi, a.freq_a);
  }
  for (const auto& r : rep.trials) {
    EXPECT_TRUE(r.weyl_ok);
    EXPECT_GE(r.max_deg_gap, 0.0);
    EXPECT_GE(r.max_mu_gap, r.mu2_gap);
  }
}

TEST(VerifyLemma3, EmptyGraphon) {
  const auto rep =
      verify_lemma3(config(catalog::Sbm{{0.5}, {{0.0, 0.0}, {0.0, 0.0}}}, {5, 30}, 10));
  for (const auto& r : rep.trials) {
    EXPECT_EQ(r.max_deg_gap, 0.0);
    EXPECT_EQ(r.max_mu_gap, 0.0);
    EXPECT_EQ(r.mu2_gap, 0.0);
    EXPECT_EQ(r.d_bar_max, 0.0);
    EXPECT_EQ(r.diff_norm_adj, 0.0);
    EXPECT_EQ(r.chernoff_violations, 0u);
    EXPECT_FALSE(r.deg_assumption);
    EXPECT_TRUE(r.weyl_ok);
  }
  for (const auto& a : rep.per_n) {
    EXPECT_EQ(a.viol_a + a.viol_b + a.viol_c + a.viol_e, 0u);
    EXPECT_EQ(a.freq_not_assumption, 1.0);
  }
}

TEST(VerifyLemma3, ProductAssumptionAlwaysHolds) {
  auto cfg = config(catalog::Product{}, {300}, 100, 5);
  cfg.threads = default_threads();
  const auto rep = verify_lemma3(cfg);
  const auto g = make_catalog_graphon(catalog::Product{});
  for (const auto& r : rep.trials) {
    EXPECT_TRUE(r.deg_assumption);
    // Brute-force d_bar_(N) from the latent sample alone.
    const auto latent = sample_latent(300, LatentMode::stochastic, latent_stream(r.seed));
    double best = 0.0;
    for (std::size_t i = 0; i < 300; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < 300; ++j)
        if (j != i) s += latent.values[i] * latent.values[j];
      best = std::max(best, s);
    }
    EXPECT_NEAR(r.d_bar_max, best, 1e-9);
    EXPECT_GT(r.d_bar_max, 4.174516412786728);
  }
  EXPECT_EQ(rep.per_n[0].assumption_count, 100u);
  EXPECT_EQ(rep.total_weyl_failures(), 0u);
}

TEST(VerifyLemma3, ThreadCountDoesNotChangeReport) {
  auto cfg = config(catalog::Mean{}, {40, 80}, 12, 99);
  cfg.threads = 1;
  const auto one = verify_lemma3(cfg);
  cfg.threads = 4;
  const auto four = verify_lemma3(cfg);
  EXPECT_EQ(lemma3_trials_table(one).str(), lemma3_trials_table(four).str());
  EXPECT_EQ(lemma3_aggregate_table(one).str(), lemma3_aggregate_table(four).str());
}

TEST(VerifyLemma3, DeterministicMode) {
  auto cfg = config(catalog::Sbm{{0.4}, {{0.8, 0.2}, {0.2, 0.5}}}, {50}, 10);
  cfg.mode = LatentMode::deterministic;
  const auto rep = verify_lemma3(cfg);
  EXPECT_EQ(rep.total_weyl_failures(), 0u);
  // Expected side is the same every trial.
  for (const auto& r : rep.trials) EXPECT_EQ(r.d_bar_max, rep.trials.front().d_bar_max);
}

TEST(DegreeLowerBound, ZeroBlockSbm) {
  const auto rep = verify_degree_lower_bound(config(kZeroBlock, {100}, 2000), 0.5, 0.5,
                                             {0.0, 0.5}, {0.0, 0.5});
  ASSERT_EQ(rep.per_n.size(), 1u);
  const auto& a = rep.per_n[0];
  EXPECT_NEAR(a.prob_lb, 0.9980695458637714, 1e-12);
  EXPECT_DOUBLE_EQ(a.stated_bound, 6.25);
  EXPECT_DOUBLE_EQ(a.checked_threshold, 5.75);
  EXPECT_GE(a.success_freq, 0.998069 - 3.0 * std::sqrt(0.998 * 0.002 / 2000));
  EXPECT_TRUE(a.pass);
}

TEST(DegreeLowerBound, ConstantWholeInterval) {
  const auto rep = verify_degree_lower_bound(config(catalog::Constant{0.3}, {2, 10, 50}, 200),
                                             0.3, 1.0, {0.0, 1.0}, {0.0, 1.0});
  for (const auto& a : rep.per_n) EXPECT_EQ(a.successes, a.trials);
  for (const auto& r : rep.trials) EXPECT_NEAR(r.d_bar_max, 0.3 * (r.n - 1), 1e-12);
}

TEST(DegreeLowerBound, DeterministicAlwaysHolds) {
  std::vector<std::size_t> ns;
  for (std::size_t n = 2; n <= 200; ++n) ns.push_back(n);
  auto cfg = config(catalog::Product{}, ns, 1);
  cfg.mode = LatentMode::deterministic;
  const auto rep = verify_degree_lower_bound(cfg, 0.25, 0.5, {0.5, 1.0}, {0.5, 1.0});
  EXPECT_TRUE(rep.all_pass());
}

TEST(DegreeLowerBound, Rejections) {
  const auto cfg = config(kZeroBlock, {100}, 10);
  // W = 0 on the second block.
  EXPECT_THROW(verify_degree_lower_bound(cfg, 0.5, 0.5, {0.0, 0.5}, {0.5, 1.0}), ValidationError);
  EXPECT_THROW(verify_degree_lower_bound(cfg, 0.5, 0.4, {0.0, 0.5}, {0.0, 0.5}), ValidationError);
  EXPECT_THROW(verify_degree_lower_bound(cfg, 0.0, 0.5, {0.0, 0.5}, {0.0, 0.5}), ValidationError);
  auto det = cfg;
  det.mode = LatentMode::deterministic;
  det.n_list = {1};
  EXPECT_THROW(verify_degree_lower_bound(det, 0.5, 0.5, {0.0, 0.5}, {0.0, 0.5}), ValidationError);
}

TEST(RateFit, Rejections) {
  auto cfg = config(catalog::Constant{0.5}, {20, 40, 80, 160, 320}, 3);
  EXPECT_THROW(rate_fit(cfg, 1.0), ValidationError);
  cfg.n_list = {20, 40, 80, 160};
  EXPECT_THROW(rate_fit(cfg, 2.0), ValidationError);
  cfg.n_list = {20, 25, 30, 35, 40};
  EXPECT_THROW(rate_fit(cfg, 2.0), ValidationError);

  auto empty = config(catalog::Sbm{{0.5}, {{0.0, 0.0}, {0.0, 0.0}}}, {10, 20, 40, 80, 160}, 3);
  EXPECT_THROW(rate_fit(empty, 2.0), ValidationError);
}

TEST(RateFit, SmallGridProducesReport) {
  auto cfg = config(catalog::Constant{0.5}, {20, 40, 80, 160, 320}, 6, 3);
  cfg.threads = default_threads();
  const auto rep = rate_fit(cfg, 2.0);
  ASSERT_EQ(rep.points.size(), 5u);
  EXPECT_GT(rep.slope, 0.0);
  EXPECT_GT(rep.slope_stderr, 0.0);
  double resid = 0.0;
  for (const auto& p : rep.points) {
    EXPECT_GT(p.median_gap, 0.0);
    EXPECT_DOUBLE_EQ(p.nu, std::pow(static_cast<double>(p.n), -2.0));
    resid += p.residual;
  }
  EXPECT_NEAR(resid, 0.0, 1e-9);
}

TEST(UniformConvergence, ProductClosedForm) {
  const auto g = make_catalog_graphon(catalog::Product{});
  const auto rep = uniform_convergence_sweep(g, {50, 100, 200, 400}, 401, std::nullopt);
  for (const auto& p : rep.points) {
    EXPECT_NEAR(p.sup_error, 1.0 / (2.0 * p.n), 1e-9);
    EXPECT_EQ(p.argmax_x, 1.0);
    EXPECT_TRUE(p.within_bound);
  }
  EXPECT_TRUE(rep.non_increasing);
  EXPECT_DOUBLE_EQ(rep.constant_c, 2.0);
}

TEST(UniformConvergence, ConstantIsExact) {
  const auto g = make_catalog_graphon(catalog::Constant{0.5});
  const auto rep = uniform_convergence_sweep(g, {7, 100, 333}, 101,
                                             TestFunction{TestFunctionKind::one});
  for (const auto& p : rep.points) EXPECT_LE(p.sup_error, 1e-12);
}

TEST(UniformConvergence, MeanWithIdentity) {
  const auto g = make_catalog_graphon(catalog::Mean{});
  const auto rep = uniform_convergence_sweep(g, {50, 100, 200}, 401,
                                             TestFunction{TestFunctionKind::identity});
  for (std::size_t k = 0; k < rep.points.size(); ++k) {
    const auto& p = rep.points[k];
    EXPECT_LE(p.sup_error, 2.0 / p.n);
    // Closed form of the error at x: x/(4N) + (3N+1)/(12N^2), largest at x = 1.
    const double n = static_cast<double>(p.n);
    EXPECT_NEAR(p.sup_error, 1.0 / (4.0 * n) + (3.0 * n + 1.0) / (12.0 * n * n), 1e-9);
    if (k > 0) {
      EXPECT_LT(p.sup_error, rep.points[k - 1].sup_error);
    }
  }
}

TEST(UniformConvergence, MeanIntegralAgainstFineRiemann) {
  // The quadrature reference agrees with a 10^6-panel midpoint sum.
  const auto g = make_catalog_graphon(catalog::Mean{});
  const TestFunction f{TestFunctionKind::cos_pi};
  const auto rep = uniform_convergence_sweep(g, {50}, 5, f);
  for (const auto& probe : rep.probes) {
    double s = 0.0;
    const int m = 1'000'000;
    for (int k = 0; k < m; ++k) {
      const double y = (k + 0.5) / m;
      s += g(probe.x, y) * f(y);
    }
    EXPECT_NEAR(probe.integral, s / m, 1e-9);
  }
}

TEST(UniformConvergence, RejectsDiscontinuous) {
  const auto g = make_catalog_graphon(kZeroBlock);
  EXPECT_THROW(uniform_convergence_sweep(g, {10}, 11, std::nullopt), ValidationError);
  EXPECT_THROW(test_function_from_name("sin"), ValidationError);
}
