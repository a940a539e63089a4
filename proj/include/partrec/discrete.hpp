#pragma once

#include "partrec/distributions.hpp"
#include "partrec/exact.hpp"
#include "partrec/plan.hpp"
#include "partrec/rational.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace partrec {

enum class Arithmetic {
  Auto,   // exact rationals when the density supports them
  Float,  // doubles with compensated summation
};

/// Lattice law Y_m with P(Y_m = l) proportional to f(l/m), l = 0..Mm. Values
/// are kept in lattice units: atom l stands for l/m.
struct DiscreteModel {
  int m = 1;
  double upper = 1.0;
  std::vector<double> masses;  // g_m(l), l = 0..Mm
  std::vector<double> cum;     // G_m(l) = sum_{l1 < l} g_m(l1), l = 0..Mm+1
  std::optional<std::vector<Rational>> exact_masses;
  std::optional<std::vector<Rational>> exact_cum;

  std::size_t atoms() const { return masses.size(); }
  bool exact() const { return exact_masses.has_value(); }
};

/// Throws Error(UnboundedSupport), Error(NonIntegerGrid) if M*m is not an
/// integer, Error(ZeroMass) if every f(l/m) vanishes.
DiscreteModel discretize(const Density& density, int m, Arithmetic arithmetic = Arithmetic::Auto);

/// Theta_m(l, r) = (1/m) sum_{l1 < l} F^{r-1}(l1/m) f(l1/m), 0 <= l <= Mm.
double theta(const Density& density, int m, std::int64_t l, int r);

struct LemmaRow {
  std::string relation;
  double deviation = 0.0;  // max over l of the absolute gap (or the single gap)
  double scaled = 0.0;     // deviation * m
  std::optional<Rational> exact_deviation;
};

/// Gaps of the four lattice approximations, each maximized over l = 0..Mm:
///   theta          |Theta_m(l, r) - F^r(l/m)/r|
///   normalization  |(1/m) sum_l f(l/m) - 1|
///   cdf_power      |G_m^r(l) - F^r(l/m)|
///   weighted_sum   |sum_{l1<l} F^{r-1}(l1/m) g_m(l1) - F^r(l/m)/r|
struct LemmaReport {
  int m = 0;
  int r = 0;
  std::vector<LemmaRow> rows;

  const LemmaRow& row(const std::string& relation) const;
};

LemmaReport lemma_checks(const Density& density, int m, int r, Arithmetic arithmetic = Arithmetic::Auto);

struct DiscreteProbability {
  double value = 0.0;
  std::optional<Rational> exact;
};

/// P_m(B_k) for the lattice model by the forward recursion
///   P(B_1(l)) = sum_{l1<l} G^{c(i_1)-1}(l1) g(l1),
///   P(B_k(l)) = sum_{l1<l} G^{c(i_k)-c(i_{k-1})-1}(l1) P(B_{k-1}(l1)) g(l1),
/// returning P(B_k(Mm+1)). Exact when the model carries rational masses and
/// `arithmetic` allows it. O(k * Mm).
DiscreteProbability joint_record_prob_discrete(const ValidatedPlan& plan, std::span<const std::size_t> positions,
                                               const DiscreteModel& model, Arithmetic arithmetic = Arithmetic::Auto);

/// P_m(B_k(l)) for l = 0..Mm+1 (the last entry is the unbounded probability).
std::vector<double> bounded_profile(const ValidatedPlan& plan, std::span<const std::size_t> positions,
                                    const DiscreteModel& model);

/// max_{0<=l<=Mm} |P_m(B_k(l)) - F^e(l/m) / prod c|, with e = c(i_k) or i_k.
double asymptotic_bounded_deviation(const ValidatedPlan& plan, std::span<const std::size_t> positions,
                                    const DiscreteModel& model, const Density& density,
                                    CdfExponent exponent = CdfExponent::Cardinality);

struct SweepRow {
  int m = 0;
  double p_m = 0.0;
  double p_inf = 0.0;
  double abs_err = 0.0;
  double m_times_err = 0.0;
};

/// |P_m - prod 1/c| across grid resolutions, in floating point. Rows follow
/// the order of m_list regardless of `threads`.
std::vector<SweepRow> error_sweep(const ValidatedPlan& plan, std::span<const std::size_t> positions,
                                  const Density& density, std::span<const int> m_list, unsigned threads = 1);

/// Ground truth for the recursion: sums the product masses of every outcome
/// tuple of the relevant variables in which each queried record holds (ties
/// void a record). Throws Error(StateSpaceTooLarge) if (Mm+1)^K > 10^7.
DiscreteProbability exhaustive_discrete_oracle(const ValidatedPlan& plan, std::span<const std::size_t> positions,
                                               const DiscreteModel& model);

}  // namespace partrec
