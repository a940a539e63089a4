#include "brute_force.hpp"
#include "generators.hpp"
#include "partrec/distributions.hpp"
#include "partrec/error.hpp"
#include "partrec/exact.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace partrec;
using partrec::testing::brute_joint;
using partrec::testing::brute_plan_law;

namespace {

ValidatedPlan chained135() { return validate_or_throw(chained_plan(std::vector<Index>{1, 3, 5})); }
ValidatedPlan total(std::size_t j) { return validate_or_throw(total_comparison_plan(j)); }
std::vector<std::size_t> pos(std::initializer_list<std::size_t> p) { return p; }

}  // namespace

TEST(RecordProb, Examples) {
  EXPECT_EQ(record_prob(total(6), 6), Rational(1, 6));
  EXPECT_EQ(record_prob(chained135(), 1), Rational(1));
  EXPECT_EQ(record_prob(chained135(), 3), Rational(1, 3));
  EXPECT_THROW(record_prob(chained135(), 4), Error);
}

TEST(JointRecordProb, Examples) {
  EXPECT_EQ(joint_record_prob(chained135(), pos({2, 3})), Rational(1, 6));
  EXPECT_EQ(joint_record_prob(chained135(), pos({3})), record_prob(chained135(), 3));
  EXPECT_EQ(joint_record_prob(total(4), pos({2, 3, 4})), Rational(1, 24));
  try {
    joint_record_prob(chained135(), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptySelection);
  }
  EXPECT_THROW(joint_record_prob(chained135(), pos({3, 2})), Error);
}

TEST(JointRecordProb, MatchesBruteForceOnGeneratedPlans) {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 60; ++i) {
    auto raw = partrec::testing::random_compatible_plan(gen, 7);
    auto plan = validate_or_throw(raw);
    for (const auto& subset : partrec::testing::all_subsets(plan.size())) {
      ASSERT_EQ(joint_record_prob(plan, subset), brute_joint(raw, subset)) << i;
    }
  }
}

TEST(JointRecordProbBounded, Examples) {
  const auto u = builtin("uniform01");
  EXPECT_NEAR(joint_record_prob_bounded(chained135(), pos({2}), 0.5, u), 0.125, 1e-15);
  EXPECT_NEAR(joint_record_prob_bounded(chained135(), pos({2, 3}), 0.5, u), std::pow(0.5, 3) / 6.0, 1e-15);
  EXPECT_DOUBLE_EQ(joint_record_prob_bounded(chained135(), pos({2, 3}), 1.0, u), 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(joint_record_prob_bounded(chained135(), pos({2, 3}), 3.0, u), 1.0 / 6.0);
  EXPECT_NEAR(joint_record_prob_bounded(chained135(), pos({3}), 0.5, builtin("power", std::vector<double>{2})),
              std::pow(0.25, 3) / 3.0, 1e-15);
  try {
    joint_record_prob_bounded(chained135(), pos({2}), -0.5, u);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NegativeCutoff);
  }
}

TEST(RecordCountMoments, Examples) {
  auto s = record_count_moments_exact(total(3), 3);
  EXPECT_EQ(s.mean, Rational(11, 6));
  EXPECT_EQ(s.variance, Rational(17, 36));
  auto one = record_count_moments_exact(total(1), 1);
  EXPECT_EQ(one.mean, Rational(1));
  EXPECT_EQ(one.variance, Rational(0));
  EXPECT_EQ(record_count_moments_exact(total(20), 20).mean, harmonic_number(20));
  auto d = record_count_moments(total(100), 100);
  EXPECT_NEAR(d.mean, 5.187377517639621, 1e-12);
  EXPECT_NEAR(d.variance, 3.5523936174547273, 1e-12);
}

TEST(RecordCountMoments, MatchesPermutationLaw) {
  for (auto raw : {total_comparison_plan(5), chained_plan(std::vector<Index>{1, 3, 5, 6}),
                   ComparisonPlan{{2, 4, 7}, {{1}, {1, 2, 3}, {1, 2, 3, 4, 6}}}}) {
    auto plan = validate_or_throw(raw);
    auto law = brute_plan_law(raw);
    Rational mean = 0, second = 0;
    for (std::size_t k = 0; k < law.count_pmf.size(); ++k) {
      mean += law.count_pmf[k] * k;
      second += law.count_pmf[k] * k * k;
    }
    auto s = record_count_moments_exact(plan, plan.size());
    EXPECT_EQ(s.mean, mean);
    EXPECT_EQ(s.variance, second - mean * mean);
  }
}

TEST(RecordTimePmf, TotalComparison) {
  auto r1 = record_time_pmf(total(10), 1, 10);
  EXPECT_DOUBLE_EQ(r1.entries.front().probability, 1.0);
  EXPECT_EQ(r1.residual, 0.0);

  auto r2 = record_time_pmf(total(200), 2, 200);
  ASSERT_EQ(r2.entries.front().position, 2u);
  for (const auto& e : r2.entries) {
    const double j = static_cast<double>(e.time_index);
    EXPECT_NEAR(e.probability, 1.0 / (j * (j - 1.0)), 1e-16);
  }
  EXPECT_NEAR(r2.residual, 1.0 / 200.0, 1e-15);  // P(L(2) > 200) = 1/200
}

TEST(RecordTimePmf, ChainedExample) {
  auto pmf = record_time_pmf(chained135(), 2, 3);
  EXPECT_EQ(pmf.entries[0].time_index, 3);
  EXPECT_DOUBLE_EQ(pmf.entries[0].probability, 0.5);
  EXPECT_DOUBLE_EQ(pmf.entries[1].probability, 0.5 * (1.0 / 3.0));
  EXPECT_NEAR(pmf.residual, 1.0 / 3.0, 1e-16);
}

TEST(RecordTimePmf, MatchesPermutationLaw) {
  auto raw = ComparisonPlan{{2, 3, 5, 7}, {{}, {2}, {1, 2, 3}, {1, 2, 3, 5}}};
  auto plan = validate_or_throw(raw);
  auto law = brute_plan_law(raw);
  for (std::size_t r = 1; r <= plan.size(); ++r) {
    auto pmf = record_time_pmf(plan, r, plan.size());
    Rational mass = 0;
    for (const auto& e : pmf.entries) {
      EXPECT_NEAR(e.probability, to_double(law.time_pmf[r - 1][e.position - 1]), 1e-15);
      mass += law.time_pmf[r - 1][e.position - 1];
    }
    EXPECT_NEAR(pmf.residual, to_double(1 - mass), 1e-15);
  }
}

TEST(RecordTimePmf, Errors) {
  try {
    record_time_pmf(total(5), 6, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RankTooLarge);
  }
  EXPECT_THROW(record_time_pmf(total(5), 2, 6), Error);
}

TEST(RecordValueCdf, FirstRecordIsF) {
  const auto s = builtin("smoothstep");
  for (double x : {0.1, 0.5, 0.9}) {
    auto b = record_value_cdf(total(30), 1, x, s, 30);
    EXPECT_NEAR(b.lower, s.cdf(x), 1e-15);
    EXPECT_NEAR(b.upper, s.cdf(x), 1e-15);
  }
}

TEST(RecordValueCdf, SecondRecordSeries) {
  // sum_{j>=2} x^j / (j (j-1)) = x + (1 - x) ln(1 - x)
  const double target = 0.5 + 0.5 * std::log(0.5);
  EXPECT_NEAR(target, 0.15342, 1e-5);
  auto b = record_value_cdf(total(50), 2, 0.5, builtin("uniform01"), 50);
  EXPECT_LE(b.lower, target);
  EXPECT_GE(b.upper, target);
  EXPECT_GE(b.tight_upper, target);
  EXPECT_LE(b.tight_upper, b.upper);
  EXPECT_LT(b.tight_upper - b.lower, 1e-16);
}

TEST(RecordValueCdf, AtUpperEndpoint) {
  auto b = record_value_cdf(total(100), 2, 1.0, builtin("uniform01"), 100);
  EXPECT_NEAR(b.lower, 1.0 - 0.01, 1e-14);
  EXPECT_NEAR(b.upper, 1.0, 1e-14);
}

TEST(RecordValueCdf, ExponentsAgreeForTotalComparison) {
  const auto u = builtin("uniform01");
  auto a = record_value_cdf(total(40), 3, 0.7, u, 40, CdfExponent::Cardinality);
  auto b = record_value_cdf(total(40), 3, 0.7, u, 40, CdfExponent::TimeIndex);
  EXPECT_DOUBLE_EQ(a.lower, b.lower);
  auto chained = validate_or_throw(chained_plan(std::vector<Index>{1, 3, 5, 7}));
  auto c = record_value_cdf(chained, 2, 0.7, u, 4, CdfExponent::Cardinality);
  auto n = record_value_cdf(chained, 2, 0.7, u, 4, CdfExponent::TimeIndex);
  EXPECT_GT(c.lower, n.lower);
}

TEST(HarmonicNumber, Examples) {
  EXPECT_EQ(harmonic_number(1), Rational(1));
  EXPECT_EQ(harmonic_number(3), Rational(11, 6));
  const double gamma = 0.57721566490153286;
  for (std::size_t j : {100u, 1000u, 5000u}) {
    const double gap = to_double(harmonic_number(j)) - std::log(static_cast<double>(j)) - gamma;
    EXPECT_GT(gap, 0.0);
    EXPECT_LT(gap, 1.0 / (2.0 * j));
  }
}
