#pragma once

#include "partrec/distributions.hpp"
#include "partrec/plan.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace partrec {

struct CollectFlags {
  bool trajectory = false;  // per-j sums of R_j
  std::size_t r_max = 0;    // record times/values for ranks 1..r_max
};

struct SimConfig {
  ValidatedPlan plan;
  Density density;
  std::uint64_t replications = 1;
  std::size_t horizon = 0;  // 0 means the full plan
  std::uint64_t master_seed = 0;
  CollectFlags collect;
  /// Each entry is a strictly increasing position list whose joint
  /// occurrence is tallied.
  std::vector<std::vector<std::size_t>> joint_queries;
  unsigned threads = 1;
  double z = 4.0;

  std::size_t effective_horizon() const { return horizon == 0 ? plan.size() : horizon; }
};

/// Throws Error(InvalidConfig) when the config breaks its invariants.
void check_config(const SimConfig& config);

/// Aggregates are integer tallies, so results are identical for every thread
/// count and schedule.
struct RunResult {
  std::uint64_t replications = 0;
  std::size_t horizon = 0;
  double z = 4.0;

  std::vector<std::uint64_t> event_hits;  // [t-1]
  std::vector<std::uint64_t> joint_hits;  // [query]
  std::uint64_t count_sum = 0;            // sum of R_horizon
  std::uint64_t count_sq_sum = 0;         // sum of R_horizon^2
  std::vector<std::uint64_t> trajectory_sums;           // [j-1] sum of R_j
  std::vector<std::vector<std::uint64_t>> time_hist;    // [r-1][t-1]
  std::vector<std::uint64_t> no_record;                 // [r-1]
  std::vector<std::vector<double>> record_values;       // [r-1][replication], NaN if absent
  std::uint64_t ties = 0;  // draws equal to the running maximum (counted as no record)

  double event_freq(std::size_t t) const;
  double joint_freq(std::size_t query) const;
  double count_mean() const;
  /// Unbiased sample variance of R_horizon.
  double count_var() const;
  /// z * sqrt(p (1 - p) / N) at the estimate p.
  double ci_radius(double p) const;
};

/// Runs every replication; replication k draws X_i from the counter-based
/// stream keyed by (master_seed, k, i).
RunResult run(const SimConfig& config);

/// Draws and indicators of a single replication, for replay checks.
struct Replay {
  std::vector<Index> indices;  // plan.support(horizon)
  std::vector<double> draws;
  std::vector<bool> indicators;
};
Replay replay(const SimConfig& config, std::uint64_t replication);

/// The value of X_index in a given replication.
double draw_value(const SimConfig& config, std::uint64_t replication, Index index);

struct Estimate {
  double value = 0.0;
  double ci_radius = 0.0;
};

/// Frequency with which every selected record event occurs together.
/// Throws Error(EmptySelection).
Estimate estimate_joint(const SimConfig& config, std::span<const std::size_t> positions);

struct EcdfCurve {
  std::vector<double> grid;
  std::vector<double> values;   // #{replications with X_{L(r)} < x} / N
  double no_record_mass = 0.0;  // fraction with no r-th record within the horizon
  std::uint64_t replications = 0;

  /// sqrt(ln(2/alpha) / (2N)).
  double dkw_radius(double alpha) const;
};

/// Empirical CDF of X_{L(r)}. Values are not renormalized: the curve ends at
/// 1 - no_record_mass. Throws Error(RankTooLarge) if r > r_max.
EcdfCurve empirical_record_value_cdf(const RunResult& result, std::size_t r, std::span<const double> grid);
EcdfCurve empirical_record_value_cdf(const SimConfig& config, std::size_t r, std::span<const double> grid);

struct TrajectoryPoint {
  std::size_t j = 0;
  double mean_ratio = 0.0;  // mean over replications of R_j / I_j
  double ci_radius = 0.0;   // z * sqrt(var R_j / N) / I_j with the exact variance
};

std::vector<TrajectoryPoint> strong_law_trajectory(const ValidatedPlan& plan, const RunResult& result);
std::vector<TrajectoryPoint> strong_law_trajectory(const SimConfig& config);

}  // namespace partrec
