#include <gtest/gtest.h>

#include "oracles.hpp"
#include "progset/generators.hpp"
#include "progset/progressions.hpp"

namespace progset {
namespace {

TEST(FindAp, Examples) {
  const auto t7 = build_field(7);
  const auto w = find_ap_of_length(t7, ElementSet::full(7), 7);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->lambda.idx, 0u);
  EXPECT_EQ(w->mu.idx, 1u);
  EXPECT_FALSE(find_ap_of_length(t7, ElementSet::of(7, {1, 2, 4}), 3));
  ASSERT_TRUE(find_ap_of_length(t7, ElementSet::of(7, {1, 2, 4}), 2));
  try {
    find_ap_of_length(build_field(5), ElementSet::full(5), 6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::KExceedsCharacteristic);
  }
  const auto one = find_ap_of_length(t7, ElementSet::of(7, {5}), 1);
  ASSERT_TRUE(one);
  EXPECT_EQ(one->terms.size(), 1u);
  EXPECT_FALSE(find_ap_of_length(t7, ElementSet(7), 1));
}

TEST(LongestAp, Examples) {
  const auto t7 = build_field(7);
  EXPECT_EQ(longest_ap(t7, ElementSet::of(7, {1, 2, 4})).length, 2u);
  const auto t11 = build_field(11);
  const auto l = longest_ap(t11, ElementSet::full_nonzero(11));
  EXPECT_EQ(l.length, 10u);
  EXPECT_EQ(l.witness.lambda.idx, 1u);
  EXPECT_EQ(l.witness.mu.idx, 1u);
  EXPECT_EQ(longest_ap(build_field_q(9), ElementSet::full(9)).length, 3u);
  try {
    longest_ap(t7, ElementSet::of(7, {3}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::SetTooSmall);
  }
  EXPECT_EQ(longest_ap_length(t7, ElementSet::of(7, {3})), 1u);
  EXPECT_EQ(longest_ap_length(t7, ElementSet(7)), 0u);
}

TEST(FindGp, Examples) {
  const auto t7 = build_field(7);
  const auto w = find_gp_of_length(t7, ElementSet::of(7, {1, 2, 4}), 3);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->lambda.idx, 1u);
  EXPECT_EQ(w->mu.idx, 2u);
  EXPECT_EQ(w->terms, (std::vector<FieldElement>{{1}, {2}, {4}}));
  EXPECT_FALSE(find_gp_of_length(t7, ElementSet::of(7, {1, 2, 4}), 4));
  EXPECT_FALSE(find_gp_of_length(t7, ElementSet::of(7, {0}), 2));
}

TEST(LongestGp, Examples) {
  const auto t7 = build_field(7);
  const auto full = longest_gp(t7, ElementSet::full_nonzero(7));
  EXPECT_EQ(full.length, 6u);
  EXPECT_EQ(full.witness.lambda.idx, 1u);
  EXPECT_EQ(full.witness.mu.idx, 3u);
  const auto qr = longest_gp(t7, ElementSet::of(7, {1, 2, 4}));
  EXPECT_EQ(qr.length, 3u);
  EXPECT_EQ(qr.witness.mu.idx, 2u);
  EXPECT_EQ(longest_gp(build_field(5), ElementSet::of(5, {2})).length, 1u);
  EXPECT_THROW(longest_gp(t7, ElementSet::of(7, {0})), Error);
  EXPECT_EQ(longest_gp_length(t7, ElementSet::of(7, {0})), 0u);
}

TEST(MSet, Examples) {
  EXPECT_EQ(compute_m_set(build_field(7), 3), ElementSet::of(7, {2, 3, 4, 5}));
  EXPECT_EQ(compute_m_set(build_field(5), 3), ElementSet::of(5, {2, 3}));
  for (std::uint32_t q : {8u, 9u, 13u}) {
    auto expect = ElementSet::full_nonzero(q);
    expect.erase(1);
    EXPECT_EQ(compute_m_set(build_field_q(q), 2), expect);
  }
}

TEST(MSet, MatchesBruteForceAndSafeBound) {
  for (std::uint32_t q : {3u, 4u, 5u, 7u, 8u, 9u, 16u, 25u, 27u, 31u, 64u, 121u}) {
    const FieldTables t = build_field_q(q);
    const oracle::Field o(t);
    for (std::uint32_t k = 2; k <= 8; ++k) {
      const auto m = compute_m_set(t, k);
      EXPECT_EQ(m, oracle::m_set(o, k)) << q << " " << k;
      EXPECT_GE(static_cast<std::int64_t>(m.size()), std::int64_t(q) - 1 - std::int64_t(k) * (k - 1) / 2);
      EXPECT_LE(m.size(), q - 1);
    }
  }
}

// Every witness re-validates and lengths agree with the naive scans.
class SearchOracle : public ::testing::TestWithParam<std::uint32_t> {};

TEST_P(SearchOracle, LongestMatchesNaiveScan) {
  const std::uint32_t q = GetParam();
  const FieldTables t = build_field_q(q);
  const oracle::Field o(t);
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const double density = 0.2 + 0.03 * double(seed % 20);
    const auto s = random_subset(t, density, seed);
    if (s.size() >= 2) {
      const auto ap = longest_ap(t, s);
      EXPECT_EQ(ap.length, oracle::longest_ap(o, s)) << q << " seed " << seed;
      EXPECT_TRUE(validate_witness(t, ap.witness, s));
      EXPECT_LE(ap.length, t.p());
      if (ap.length < t.p()) { EXPECT_FALSE(find_ap_of_length(t, s, ap.length + 1)); }
    }
    if (!s.without_zero().empty()) {
      const auto gp = longest_gp(t, s);
      EXPECT_EQ(gp.length, oracle::longest_gp(o, s)) << q << " seed " << seed;
      EXPECT_TRUE(validate_witness(t, gp.witness, s));
      EXPECT_LE(gp.length, q - 1);
      EXPECT_FALSE(find_gp_of_length(t, s, gp.length + 1));
    }
  }
}

TEST_P(SearchOracle, WorkerCountDoesNotChangeWitness) {
  const std::uint32_t q = GetParam();
  const FieldTables t = build_field_q(q);
  const auto s = random_subset(t, 0.6, q);
  if (s.size() < 2) return;
  const auto a = longest_ap(t, s, 1), b = longest_ap(t, s, 4);
  EXPECT_EQ(a.length, b.length);
  EXPECT_EQ(a.witness.lambda, b.witness.lambda);
  EXPECT_EQ(a.witness.mu, b.witness.mu);
  const auto g1 = longest_gp(t, s, 1), g2 = longest_gp(t, s, 3);
  EXPECT_EQ(g1.witness.terms, g2.witness.terms);
}

INSTANTIATE_TEST_SUITE_P(Fields, SearchOracle, ::testing::Values(4u, 5u, 7u, 8u, 9u, 13u, 16u, 25u, 27u, 31u));

TEST(Witness, ValidationRejectsBadWitnesses) {
  const auto t = build_field(7);
  const auto s = ElementSet::full(7);
  auto w = make_witness(t, ProgressionKind::Arithmetic, {2}, {3}, 4);
  EXPECT_EQ(w.terms, (std::vector<FieldElement>{{2}, {5}, {1}, {4}}));
  EXPECT_TRUE(validate_witness(t, w, s));
  EXPECT_FALSE(validate_witness(t, w, ElementSet::of(7, {2, 5, 1})));
  auto bad = w;
  bad.terms[2] = {6};
  EXPECT_FALSE(validate_witness(t, bad, s));
  auto zero_mu = make_witness(t, ProgressionKind::Arithmetic, {2}, {0}, 2);
  EXPECT_FALSE(validate_witness(t, zero_mu, s));
  auto repeat = make_witness(t, ProgressionKind::Geometric, {1}, {6}, 3);  // 1, 6, 1
  EXPECT_FALSE(validate_witness(t, repeat, s));
  auto zero_lambda = make_witness(t, ProgressionKind::Geometric, {0}, {3}, 2);
  EXPECT_FALSE(validate_witness(t, zero_lambda, s));
}

TEST(LongestAp, ExtensionFieldCap) {
  const auto t = build_field(2, 6);
  const auto l = longest_ap(t, ElementSet::full(64));
  EXPECT_EQ(l.length, 2u);
  const auto t3 = build_field(3, 4);
  EXPECT_EQ(longest_ap(t3, ElementSet::full_nonzero(81)).length, 3u);
}

}  // namespace
}  // namespace progset
