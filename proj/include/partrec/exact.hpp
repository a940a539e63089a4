#pragma once

#include "partrec/distributions.hpp"
#include "partrec/plan.hpp"
#include "partrec/rational.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace partrec {

/// P(A_{n_t}) = 1/c(n_t).
Rational record_prob(const ValidatedPlan& plan, std::size_t t);

/// P(A_{n_{t_1}} ∩ ... ∩ A_{n_{t_k}}) = prod 1/c(n_{t_i}). Positions must be
/// nonempty and strictly increasing.
Rational joint_record_prob(const ValidatedPlan& plan, std::span<const std::size_t> positions);

/// Joint probability with the cutoff X_{i_k} < x on the largest selected index:
/// joint_record_prob * F(x)^{c(i_k)}.
double joint_record_prob_bounded(const ValidatedPlan& plan, std::span<const std::size_t> positions,
                                 double x, const Density& density);

struct RecordCountStats {
  std::size_t j = 0;
  double mean = 0.0;      // I_j
  double variance = 0.0;  // I_j - sum 1/c^2
};

struct ExactRecordCountStats {
  std::size_t j = 0;
  Rational mean;
  Rational variance;
};

/// Moments of R_j, the number of records among the first j positions.
RecordCountStats record_count_moments(const ValidatedPlan& plan, std::size_t j);
ExactRecordCountStats record_count_moments_exact(const ValidatedPlan& plan, std::size_t j);

struct RecordTimeEntry {
  std::size_t position;  // t
  Index time_index;      // n_t
  double probability;    // P(L(r) = n_t)
};

/// Law of the r-th record time over positions 1..t_max.
struct RecordTimePmf {
  std::size_t r = 0;
  std::vector<RecordTimeEntry> entries;  // t = r..t_max
  double residual = 0.0;                 // P(fewer than r records in 1..t_max)
};

/// Record events along a compatible plan are independent Bernoulli(1/c(n_t))
/// trials, so L(r) is the r-th success time. Forward DP over (t, successes).
/// Throws Error(RankTooLarge) if r > t_max, Error(IndexOutOfRange) if the plan
/// is shorter than t_max.
RecordTimePmf record_time_pmf(const ValidatedPlan& plan, std::size_t r, std::size_t t_max);

/// Which power of F(x) multiplies P(L(r) = n_t) in the record-value series.
enum class CdfExponent {
  Cardinality,  // F^{c(n_t)}: what the bounded-event identity yields
  TimeIndex,    // F^{n_t}: the literal display; equal to the above for total comparisons
};

struct RecordValueBounds {
  double lower = 0.0;  // sum_{t <= t_max} F^{e_t}(x) P(L(r) = n_t)
  double upper = 0.0;  // lower + residual
  /// lower + F^{e_next}(x) * residual, where e_next = c(n_{t_max}) + 1 (or
  /// n_{t_max} + 1) lower-bounds every exponent beyond the horizon.
  double tight_upper = 0.0;
};

/// P(X_{L(r)} < x) bracketed from the truncated series.
RecordValueBounds record_value_cdf(const ValidatedPlan& plan, std::size_t r, double x,
                                   const Density& density, std::size_t t_max,
                                   CdfExponent exponent = CdfExponent::Cardinality);

/// Same bracket from a precomputed pmf (avoids repeating the DP over a grid).
RecordValueBounds record_value_cdf(const ValidatedPlan& plan, const RecordTimePmf& pmf, double x,
                                   const Density& density,
                                   CdfExponent exponent = CdfExponent::Cardinality);

/// H_j = sum_{t<=j} 1/t.
Rational harmonic_number(std::size_t j);

}  // namespace partrec
