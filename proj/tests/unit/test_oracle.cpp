#include "brute_force.hpp"
#include "generators.hpp"
#include "partrec/distributions.hpp"
#include "partrec/error.hpp"
#include "partrec/exact.hpp"
#include "partrec/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace partrec;

namespace {

ValidatedPlan chained135() { return validate_or_throw(chained_plan(std::vector<Index>{1, 3, 5})); }
ValidatedPlan total(std::size_t j) { return validate_or_throw(total_comparison_plan(j)); }
std::vector<std::size_t> pos(std::initializer_list<std::size_t> p) { return p; }

}  // namespace

TEST(RelevantIndices, Examples) {
  EXPECT_EQ(relevant_indices(chained135(), EventQuery({{3, false}})), (std::vector<Index>{1, 3, 5}));
  EXPECT_EQ(relevant_indices(total(6), EventQuery({{4, false}})), (std::vector<Index>{1, 2, 3, 4}));
  EXPECT_EQ(relevant_indices(chained135(), EventQuery({{2, false}})), (std::vector<Index>{1, 3}));
}

TEST(ExactJoint, Examples) {
  EXPECT_EQ(exact_joint(chained135(), EventQuery({{2, false}, {3, false}})), Rational(1, 6));
  EXPECT_EQ(exact_joint(total(3), EventQuery({{2, true}, {3, false}})), Rational(1, 6));
  EXPECT_THROW(EventQuery({{2, false}, {2, true}}), Error);
}

TEST(ExactJoint, Guards) {
  try {
    exact_joint(total(12), EventQuery({{12, false}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooManyIndices);
  }
  EXPECT_THROW(exact_joint(total(8), EventQuery({{8, false}}), 7), Error);
  EXPECT_EQ(exact_joint(total(10), EventQuery({{10, false}})), Rational(1, 10));
  EXPECT_THROW(exact_joint(chained135(), EventQuery({{2, false}}, 0.5)), Error);
}

TEST(ExactJoint, ThreadCountDoesNotMatter) {
  const EventQuery q({{2, false}, {4, true}, {6, false}});
  const auto one = exact_joint(total(8), q, 10, 1);
  EXPECT_EQ(exact_joint(total(8), q, 10, 3), one);
  EXPECT_EQ(one, Rational(1, 2) * Rational(3, 4) * Rational(1, 6));
}

TEST(ExactJoint, MatchesBruteForceWithNegations) {
  std::mt19937_64 gen(5);
  for (int i = 0; i < 40; ++i) {
    auto raw = partrec::testing::random_compatible_plan(gen, 7);
    auto plan = validate_or_throw(raw);
    const std::size_t T = plan.size();
    for (std::uint32_t mask = 1; mask < (1u << T); ++mask) {
      // Sign pattern: lowest selected position is negated when mask is odd.
      std::vector<EventTerm> terms;
      std::vector<std::size_t> yes, no;
      for (std::size_t t = 1; t <= T; ++t) {
        if (!(mask & (1u << (t - 1)))) continue;
        const bool neg = (mask & 1u) && terms.empty() && T > 1;
        terms.push_back({t, neg});
        (neg ? no : yes).push_back(t);
      }
      ASSERT_EQ(exact_joint(plan, EventQuery(terms)), partrec::testing::brute_joint(raw, yes, no)) << i;
    }
  }
}

TEST(JointLaw, PatternsSumToOneAndFactorize) {
  auto plan = validate_or_throw({{2, 4, 7}, {{1}, {1, 2, 3}, {1, 2, 3, 4, 6}}});
  auto law = exact_joint_law(plan);
  Rational sum = 0;
  for (std::uint32_t m = 0; m < law.counts.size(); ++m) sum += law.prob_pattern(m);
  EXPECT_EQ(sum, Rational(1));
  for (const auto& subset : partrec::testing::all_subsets(3)) {
    EXPECT_EQ(law.prob_all(subset), joint_record_prob(plan, subset));
  }
  // Full independence: every pattern factorizes, not just intersections.
  for (std::uint32_t m = 0; m < law.counts.size(); ++m) {
    Rational p = 1;
    for (std::size_t t = 1; t <= 3; ++t) {
      const Rational q = record_prob(plan, t);
      p *= (m & (1u << (t - 1))) ? q : 1 - q;
    }
    EXPECT_EQ(law.prob_pattern(m), p);
  }
}

TEST(QuadratureBounded, Examples) {
  const auto u = builtin("uniform01");
  const auto s = builtin("smoothstep");
  EXPECT_NEAR(quadrature_bounded(chained135(), pos({2}), 1.0, u), 0.5, 1e-10);
  EXPECT_NEAR(quadrature_bounded(chained135(), pos({2, 3}), 1.0, u), 1.0 / 6.0, 1e-10);
  EXPECT_NEAR(quadrature_bounded(chained135(), pos({2}), 1.0, s), 0.5, 1e-10);
}

TEST(QuadratureBounded, MatchesClosedFormWithCutoff) {
  const auto plan = validate_or_throw({{2, 4, 7}, {{1}, {1, 2, 3}, {1, 2, 3, 4, 6}}});
  for (const char* name : {"uniform01", "power(2)", "smoothstep", "triangular(0.3)"}) {
    const auto d = builtin_from_spec(name);
    for (double x : {0.3, 0.75}) {
      for (auto sel : {pos({1}), pos({1, 3}), pos({1, 2, 3})}) {
        EXPECT_NEAR(quadrature_bounded(plan, sel, x, d, 1e-9), joint_record_prob_bounded(plan, sel, x, d), 1e-9)
            << name << " x=" << x;
      }
    }
  }
}

TEST(QuadratureBounded, Errors) {
  const auto u = builtin("uniform01");
  EXPECT_THROW(quadrature_bounded(chained135(), {}, 0.5, u), Error);
  EXPECT_THROW(quadrature_bounded(chained135(), pos({2}), 0.0, u), Error);
  EXPECT_THROW(quadrature_bounded(chained135(), pos({2}), 0.5, u, 1e-12), Error);
}
