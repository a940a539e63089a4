#include "partrec/exact.hpp"

#include "partrec/error.hpp"
#include "partrec/numeric.hpp"

#include <cmath>

namespace partrec {

namespace {

void check_positions(const ValidatedPlan& plan, std::span<const std::size_t> positions) {
  if (positions.empty()) throw Error(ErrorCode::EmptySelection, "no positions selected");
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (positions[i] < 1 || positions[i] > plan.size()) {
      throw Error(ErrorCode::IndexOutOfRange, "position " + std::to_string(positions[i]) +
                                                  " outside 1.." + std::to_string(plan.size()));
    }
    if (i > 0 && positions[i] <= positions[i - 1]) {
      throw Error(ErrorCode::InvalidQuery, "positions must be strictly increasing");
    }
  }
}

void check_horizon(const ValidatedPlan& plan, std::size_t j) {
  if (j < 1 || j > plan.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "horizon " + std::to_string(j) + " outside 1.." +
                                                std::to_string(plan.size()));
  }
}

}  // namespace

Rational record_prob(const ValidatedPlan& plan, std::size_t t) {
  return Rational(1, plan.cardinality(t));
}

Rational joint_record_prob(const ValidatedPlan& plan, std::span<const std::size_t> positions) {
  check_positions(plan, positions);
  BigInt denom = 1;
  for (auto t : positions) denom *= plan.cardinality(t);
  return Rational(BigInt(1), denom);
}

double joint_record_prob_bounded(const ValidatedPlan& plan, std::span<const std::size_t> positions,
                                 double x, const Density& density) {
  check_positions(plan, positions);
  if (!(x > 0.0)) throw Error(ErrorCode::NegativeCutoff, "cutoff x must be positive");
  const double base = to_double(joint_record_prob(plan, positions));
  const auto c_last = static_cast<double>(plan.cardinality(positions.back()));
  return base * std::pow(density.cdf(x), c_last);
}

RecordCountStats record_count_moments(const ValidatedPlan& plan, std::size_t j) {
  check_horizon(plan, j);
  CompensatedSum mean, var;
  for (std::size_t t = j; t >= 1; --t) {
    const double p = 1.0 / static_cast<double>(plan.cardinality(t));
    mean.add(p);
    var.add(p * (1.0 - p));
  }
  return {j, mean.value(), var.value()};
}

ExactRecordCountStats record_count_moments_exact(const ValidatedPlan& plan, std::size_t j) {
  check_horizon(plan, j);
  Rational mean = 0, sq = 0;
  for (std::size_t t = 1; t <= j; ++t) {
    const Rational p(1, plan.cardinality(t));
    mean += p;
    sq += p * p;
  }
  return {j, mean, mean - sq};
}

RecordTimePmf record_time_pmf(const ValidatedPlan& plan, std::size_t r, std::size_t t_max) {
  if (r < 1) throw Error(ErrorCode::RankTooLarge, "record rank starts at 1");
  if (r > t_max) {
    throw Error(ErrorCode::RankTooLarge,
                "rank " + std::to_string(r) + " exceeds horizon " + std::to_string(t_max));
  }
  check_horizon(plan, t_max);

  // state[s] = P(exactly s successes so far), s < r.
  std::vector<long double> state(r, 0.0L);
  state[0] = 1.0L;
  RecordTimePmf pmf;
  pmf.r = r;
  for (std::size_t t = 1; t <= t_max; ++t) {
    const long double p = 1.0L / static_cast<long double>(plan.cardinality(t));
    const long double hit = state[r - 1] * p;
    for (std::size_t s = r - 1; s >= 1; --s) state[s] = state[s] * (1.0L - p) + state[s - 1] * p;
    state[0] *= (1.0L - p);
    if (t >= r) pmf.entries.push_back({t, plan.index(t), static_cast<double>(hit)});
  }
  long double residual = 0.0L;
  for (auto v : state) residual += v;
  pmf.residual = static_cast<double>(residual);
  return pmf;
}

RecordValueBounds record_value_cdf(const ValidatedPlan& plan, const RecordTimePmf& pmf, double x,
                                   const Density& density, CdfExponent exponent) {
  if (!(x > 0.0)) throw Error(ErrorCode::NegativeCutoff, "x must be positive");
  const double F = density.cdf(x);
  auto exponent_at = [&](std::size_t t) {
    return exponent == CdfExponent::Cardinality ? static_cast<double>(plan.cardinality(t))
                                                : static_cast<double>(plan.index(t));
  };
  CompensatedSum lower;
  for (const auto& e : pmf.entries) lower.add(std::pow(F, exponent_at(e.position)) * e.probability);
  RecordValueBounds out;
  out.lower = lower.value();
  out.upper = out.lower + pmf.residual;
  const std::size_t last = pmf.entries.empty() ? pmf.r : pmf.entries.back().position;
  out.tight_upper = out.lower + std::pow(F, exponent_at(last) + 1.0) * pmf.residual;
  return out;
}

RecordValueBounds record_value_cdf(const ValidatedPlan& plan, std::size_t r, double x,
                                   const Density& density, std::size_t t_max, CdfExponent exponent) {
  if (!(x > 0.0)) throw Error(ErrorCode::NegativeCutoff, "x must be positive");
  return record_value_cdf(plan, record_time_pmf(plan, r, t_max), x, density, exponent);
}

Rational harmonic_number(std::size_t j) {
  if (j < 1) throw Error(ErrorCode::IndexOutOfRange, "harmonic numbers start at j = 1");
  Rational h = 0;
  for (std::size_t t = 1; t <= j; ++t) h += Rational(1, static_cast<long long>(t));
  return h;
}

}  // namespace partrec
