#include "generators.hpp"
#include "partrec/error.hpp"
#include "partrec/plan.hpp"

#include <gtest/gtest.h>

using namespace partrec;
using partrec::testing::corrupt;
using partrec::testing::random_compatible_plan;

namespace {

ValidationReport report_of(const ComparisonPlan& plan) {
  auto result = validate(plan);
  EXPECT_TRUE(std::holds_alternative<ValidationReport>(result));
  return std::get<ValidationReport>(result);
}

std::vector<std::int64_t> cards(const ValidatedPlan& p) { return p.cardinalities(); }

}  // namespace

TEST(Validate, ChainedExampleIsValid) {
  auto plan = validate_or_throw({{1, 3, 5}, {{}, {1}, {1, 3}}});
  EXPECT_EQ(cards(plan), (std::vector<std::int64_t>{1, 2, 3}));
}

TEST(Validate, NotNestedAtThree) {
  auto report = report_of({{1, 2, 3}, {{}, {1}, {2}}});
  ASSERT_TRUE(report.contains(Violation::NotNested));
  for (const auto& v : report.violations) {
    if (v.kind == Violation::NotNested) EXPECT_EQ(v.position, 3u);
  }
}

TEST(Validate, MissingPredecessorAtTwo) {
  auto report = report_of({{2, 5}, {{1}, {1, 3}}});
  ASSERT_TRUE(report.contains(Violation::MissingPredecessor));
  EXPECT_EQ(report.violations.front().position, 2u);
  EXPECT_NE(report.summary().find("MissingPredecessor"), std::string::npos);
}

TEST(Validate, ReportsEveryViolation) {
  // Out of range at t=1 and missing predecessor at t=2.
  auto report = report_of({{2, 4}, {{2}, {1}}});
  EXPECT_TRUE(report.contains(Violation::SetOutOfRange));
  EXPECT_TRUE(report.contains(Violation::MissingPredecessor));
}

TEST(Validate, EmptyAndMismatched) {
  EXPECT_TRUE(report_of({{}, {}}).contains(Violation::EmptyPlan));
  EXPECT_TRUE(report_of({{1, 2}, {{}}}).contains(Violation::LengthMismatch));
  EXPECT_TRUE(report_of({{1}, {{0}}}).contains(Violation::SetOutOfRange));
  EXPECT_TRUE(report_of({{0}, {{}}}).contains(Violation::SetOutOfRange) ||
              report_of({{0}, {{}}}).contains(Violation::NotStrictlyIncreasingIndices));
  EXPECT_TRUE(report_of({{3, 4}, {{1, 1}, {1, 3}}}).contains(Violation::DuplicateElement));
}

TEST(Validate, ThrowingVariant) {
  try {
    validate_or_throw({{1, 2, 3}, {{}, {1}, {2}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidPlan);
  }
}

TEST(Cardinality, Examples) {
  auto plan = validate_or_throw(chained_plan(std::vector<Index>{1, 3, 5}));
  EXPECT_EQ(cardinality(plan, 1), 1);
  EXPECT_EQ(cardinality(plan, 3), 3);
  auto total = validate_or_throw(total_comparison_plan(7));
  EXPECT_EQ(cardinality(total, 7), 7);
  EXPECT_THROW(cardinality(plan, 0), Error);
  EXPECT_THROW(cardinality(plan, 4), Error);
}

TEST(CumulativeIntensity, Examples) {
  auto plan = validate_or_throw(chained_plan(std::vector<Index>{1, 3, 5}));
  EXPECT_EQ(cumulative_intensity(plan, 3), Rational(11, 6));
  EXPECT_EQ(cumulative_intensity(plan, 1), Rational(1));
  auto total = validate_or_throw(total_comparison_plan(4));
  EXPECT_EQ(cumulative_intensity(total, 4), Rational(25, 12));
  EXPECT_NEAR(cumulative_intensity_value(total, 4), 25.0 / 12.0, 1e-15);
  EXPECT_THROW(cumulative_intensity(plan, 4), Error);
}

TEST(TotalComparisonPlan, Shapes) {
  auto p3 = total_comparison_plan(3);
  EXPECT_EQ(p3.indices, (std::vector<Index>{1, 2, 3}));
  EXPECT_EQ(p3.comparison_sets, (std::vector<std::vector<Index>>{{}, {1}, {1, 2}}));
  auto p1 = total_comparison_plan(1);
  EXPECT_EQ(p1.indices, std::vector<Index>{1});
  EXPECT_TRUE(p1.comparison_sets[0].empty());
  EXPECT_EQ(cards(validate_or_throw(total_comparison_plan(4))), (std::vector<std::int64_t>{1, 2, 3, 4}));
}

TEST(ChainedPlan, Shapes) {
  auto p = chained_plan(std::vector<Index>{1, 3, 5});
  EXPECT_EQ(p.comparison_sets, (std::vector<std::vector<Index>>{{}, {1}, {1, 3}}));
  EXPECT_EQ(chained_plan(std::vector<Index>{1, 2}).comparison_sets, (std::vector<std::vector<Index>>{{}, {1}}));
  EXPECT_EQ(cards(validate_or_throw(chained_plan(std::vector<Index>{1, 4, 9, 16}))),
            (std::vector<std::int64_t>{1, 2, 3, 4}));
  try {
    chained_plan(std::vector<Index>{2, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadFirstIndex);
  }
}

TEST(ValidatedPlan, AccessorsAndRoundTrip) {
  auto raw = ComparisonPlan{{2, 4, 7}, {{1}, {1, 2, 3}, {1, 2, 3, 4, 6}}};
  auto plan = validate_or_throw(raw);
  EXPECT_EQ(plan.increment(2), (std::vector<Index>{2, 3}));
  EXPECT_EQ(plan.comparison_set(3), (std::vector<Index>{1, 2, 3, 4, 6}));
  EXPECT_EQ(plan.support(2), (std::vector<Index>{1, 2, 3, 4}));
  EXPECT_EQ(plan.to_raw().comparison_sets, raw.comparison_sets);
  EXPECT_EQ(plan.prefix(2).size(), 2u);
  EXPECT_EQ(plan.prefix(2).digest(), validate_or_throw({{2, 4}, {{1}, {1, 2, 3}}}).digest());
  EXPECT_NE(plan.digest(), plan.prefix(2).digest());
}

TEST(ValidatedPlan, SetOrderDoesNotMatter) {
  auto a = validate_or_throw({{1, 3, 5}, {{}, {1}, {3, 1}}});
  auto b = validate_or_throw({{1, 3, 5}, {{}, {1}, {1, 3}}});
  EXPECT_EQ(a.digest(), b.digest());
}

TEST(Generator, ExtendsOnDemand) {
  auto plan = generate_plan(total_comparison_generator(), 5);
  EXPECT_EQ(plan.digest(), validate_or_throw(total_comparison_plan(5)).digest());
  auto longer = generate_plan(total_comparison_generator(), 8, plan);
  EXPECT_EQ(longer.size(), 8u);
  EXPECT_EQ(longer.prefix(5).digest(), plan.digest());

  auto odd = generate_plan(chained_generator([](std::size_t t) { return Index(2 * t - 1); }), 3);
  EXPECT_EQ(odd.digest(), validate_or_throw(chained_plan(std::vector<Index>{1, 3, 5})).digest());
}

TEST(Generator, LongTotalComparisonIsLinear) {
  auto plan = generate_plan(total_comparison_generator(), 100000);
  EXPECT_EQ(plan.cardinality(100000), 100000);
  EXPECT_NEAR(cumulative_intensity_value(plan, 100000), 12.090146129863428, 1e-9);
}

TEST(EventQuery, Invariants) {
  EXPECT_THROW(EventQuery({}), Error);
  EXPECT_THROW(EventQuery({{2, false}, {2, true}}), Error);
  EXPECT_THROW(EventQuery({{3, false}, {2, false}}), Error);
  EXPECT_THROW(EventQuery({{2, false}, {3, true}}, 0.5), Error);
  try {
    EventQuery({{1, false}}, -1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NegativeCutoff);
  }
  EXPECT_NO_THROW(EventQuery({{1, true}, {2, false}}, 0.5));
}

// Properties over generated plans.

TEST(ValidateProperty, GeneratedPlansValidateAndRoundTrip) {
  std::mt19937_64 gen(20240601);
  for (int i = 0; i < 400; ++i) {
    auto raw = random_compatible_plan(gen, 12);
    auto result = validate(raw);
    ASSERT_TRUE(std::holds_alternative<ValidatedPlan>(result)) << i;
    const auto& plan = std::get<ValidatedPlan>(result);
    EXPECT_EQ(validate_or_throw(plan.to_raw()).digest(), plan.digest());
    for (std::size_t t = 1; t <= plan.size(); ++t) {
      EXPECT_EQ(plan.cardinality(t), static_cast<std::int64_t>(raw.comparison_sets[t - 1].size()) + 1);
      if (t > 1) EXPECT_GT(plan.cardinality(t), plan.cardinality(t - 1));
    }
  }
}

TEST(ValidateProperty, CorruptionsAreCaught) {
  std::mt19937_64 gen(77);
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    auto raw = random_compatible_plan(gen, 10);
    auto bad = corrupt(gen, raw);
    auto result = validate(bad.plan);
    ASSERT_TRUE(std::holds_alternative<ValidationReport>(result)) << i;
    EXPECT_TRUE(std::get<ValidationReport>(result).contains(bad.expected))
        << i << " expected " << to_string(bad.expected) << " got " << std::get<ValidationReport>(result).summary();
    ++checked;
  }
  EXPECT_EQ(checked, 400);
}
