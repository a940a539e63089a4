#pragma once

#include "partrec/distributions.hpp"
#include "partrec/plan.hpp"
#include "partrec/rational.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace partrec {

/// Hard cap on enumerated variables: 10! = 3,628,800 rank orders.
inline constexpr std::size_t kMaxOracleIndices = 10;

/// Union of {n_t} and C(n_t) over the queried positions; the queried events
/// depend only on the relative ranks of these variables.
std::vector<Index> relevant_indices(const ValidatedPlan& plan, const EventQuery& query);

/// Exact probability of the query by enumerating every rank order of the
/// relevant variables (i.i.d. continuous draws are exchangeable and tie-free).
/// Throws Error(TooManyIndices) beyond `max_indices` (<= 10) and
/// Error(InvalidQuery) for queries carrying a cutoff.
Rational exact_joint(const ValidatedPlan& plan, const EventQuery& query,
                     std::size_t max_indices = kMaxOracleIndices, unsigned threads = 1);

/// Full joint law of the record indicators at positions 1..T: counts[mask] is
/// the number of rank orders whose record pattern is exactly `mask` (bit t-1
/// for position t), out of `orders` = K!.
struct JointLaw {
  std::size_t positions = 0;
  std::vector<std::uint64_t> counts;
  std::uint64_t orders = 0;

  /// Probability that every position in `selected` records.
  Rational prob_all(std::span<const std::size_t> selected) const;
  Rational prob_pattern(std::uint32_t mask) const;
};

JointLaw exact_joint_law(const ValidatedPlan& plan, std::size_t max_indices = kMaxOracleIndices);

/// P(B_k(x)) by numerically integrating the conditioning recursion
///   P(B_1(x)) = ∫_0^x F^{c(i_1)-1} f,
///   P(B_k(x)) = ∫_0^x F^{c(i_k)-c(i_{k-1})-1}(z) P(B_{k-1}(z)) f(z) dz,
/// with each level tabulated on a uniform grid (monotone cubic between nodes)
/// and the grid doubled until successive results differ by less than `tol`.
/// Throws Error(QuadratureFailure) if that does not happen by 2^16 nodes.
double quadrature_bounded(const ValidatedPlan& plan, std::span<const std::size_t> positions, double x,
                          const Density& density, double tol = 1e-10);

}  // namespace partrec
