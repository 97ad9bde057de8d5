#include <gtest/gtest.h>

#include <cmath>

#include "progset/experiments.hpp"

namespace progset {
namespace {

SweepConfig ap_sweep() {
  SweepConfig c;
  c.kind = ProgressionKind::Arithmetic;
  c.p = 67;
  c.k = 3;
  c.densities = {0.3, 0.5, 0.7, 0.82, 1.0};
  c.trials = 4;
  c.seed = 3;
  return c;
}

TEST(ThresholdSweep, ApMarkerAndSoundness) {
  const auto r = threshold_sweep(ap_sweep());
  EXPECT_EQ(r.rows.size(), 5u);
  EXPECT_NEAR(r.threshold_density, std::sqrt(2.0) * std::pow(67.0, -0.25), 1e-12);
  EXPECT_TRUE(r.sound());
  for (const auto& row : r.rows) {
    EXPECT_GE(row.success_fraction, 0.0);
    EXPECT_LE(row.success_fraction, 1.0);
    EXPECT_EQ(row.guaranteed_successes, row.guaranteed_pairs);
    if (row.density >= r.exact_threshold_density) { EXPECT_EQ(row.success_fraction, 1.0); }
  }
  EXPECT_EQ(r.rows.back().guaranteed_pairs, 4u);
}

TEST(ThresholdSweep, GpMarker) {
  auto c = ap_sweep();
  c.kind = ProgressionKind::Geometric;
  c.h = 1;
  const auto r = threshold_sweep(c);
  EXPECT_NEAR(r.threshold_density, std::sqrt(8.0) * std::pow(67.0, -0.25), 1e-12);
  // (c^2)^2 >= 64 * 67^3 first holds at c = 67
  EXPECT_DOUBLE_EQ(r.exact_threshold_density, 1.0);
  EXPECT_TRUE(r.sound());
  EXPECT_EQ(r.rows.back().success_fraction, 1.0);
}

TEST(ThresholdSweep, IdenticalAcrossWorkerCounts) {
  auto c = ap_sweep();
  c.workers = 1;
  const auto a = threshold_sweep(c);
  c.workers = 4;
  const auto b = threshold_sweep(c);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].successes, b.rows[i].successes);
    EXPECT_EQ(a.rows[i].mean_longest, b.rows[i].mean_longest);
    EXPECT_EQ(a.rows[i].mean_card_product, b.rows[i].mean_card_product);
  }
}

TEST(ThresholdSweep, ConfigErrors) {
  auto code = [](SweepConfig c) {
    try {
      threshold_sweep(c);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::IoError;
  };
  auto c = ap_sweep();
  c.trials = 0;
  EXPECT_EQ(code(c), Errc::ConfigError);
  c = ap_sweep();
  c.densities = {};
  EXPECT_EQ(code(c), Errc::ConfigError);
  c.densities = {0.0};
  EXPECT_EQ(code(c), Errc::ConfigError);
  c = ap_sweep();
  c.p = 3;
  EXPECT_EQ(code(c), Errc::ConfigError);
  c = ap_sweep();
  c.kind = ProgressionKind::Geometric;
  c.h = 0;
  EXPECT_EQ(code(c), Errc::ConfigError);
  c = ap_sweep();
  c.p = 2;
  c.n = 15;
  c.kind = ProgressionKind::Geometric;
  EXPECT_EQ(code(c), Errc::ConfigError);
}

TEST(Growth, TableShapeAndSanity) {
  GrowthConfig g;
  g.qs = {101, 211};
  g.trials = 3;
  g.seed = 1;
  const auto t = growth_experiment(g);
  ASSERT_EQ(t.rows.size(), 2u);
  for (const auto& r : t.rows) {
    EXPECT_GE(r.min_longest, 3u);
    EXPECT_LE(r.min_longest, r.max_longest);
    EXPECT_GE(r.mean_longest, r.min_longest);
    EXPECT_NEAR(r.log_q, std::log(double(r.q)), 1e-12);
  }
  EXPECT_TRUE(std::isfinite(t.kappa_slope));
  EXPECT_GT(t.kappa_origin, 0.0);
  g.kind = ProgressionKind::Geometric;
  g.qs = {49, 101};
  const auto gp = growth_experiment(g);
  EXPECT_EQ(gp.rows.front().n, 2u);
  EXPECT_GE(gp.rows.front().min_longest, 1u);
}

TEST(Growth, ConfigErrors) {
  GrowthConfig g;
  g.qs = {101};
  g.alpha = 0;
  EXPECT_THROW(growth_experiment(g), Error);
  g.alpha = 0.5;
  g.trials = 0;
  EXPECT_THROW(growth_experiment(g), Error);
  g.trials = 1;
  g.qs = {100};
  EXPECT_THROW(growth_experiment(g), Error);
  g.qs = {};
  EXPECT_THROW(growth_experiment(g), Error);
  g.qs = {32768};
  EXPECT_THROW(growth_experiment(g), Error);
}

TEST(QrExperiment, SmallPrimes) {
  const auto t = qr_experiment({3, 7, 13, 101});
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(t.rows[0].longest_ap, 1u);
  EXPECT_EQ(t.rows[1].qr_size, 3u);
  EXPECT_EQ(t.rows[1].longest_ap, 2u);
  EXPECT_NEAR(t.rows[1].p_quarter, std::pow(7.0, 0.25), 1e-12);
  // QR(13) holds the 4-term progression 10, 12, 1, 3 (difference 2), and 4 > sqrt(13)
  EXPECT_EQ(t.rows[2].longest_ap, 4u);
  EXPECT_FALSE(t.rows[2].within_sanity);
  EXPECT_TRUE(t.all_closed);
  EXPECT_FALSE(t.all_within_sanity);
  for (const auto& r : t.rows) EXPECT_TRUE(r.closed);
  EXPECT_THROW(qr_experiment({2}), Error);
  EXPECT_THROW(qr_experiment({9}), Error);
  EXPECT_THROW(qr_experiment({}), Error);
}

}  // namespace
}  // namespace progset
