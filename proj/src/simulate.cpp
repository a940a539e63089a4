#include "partrec/simulate.hpp"

#include "partrec/error.hpp"
#include "partrec/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace partrec {

void check_config(const SimConfig& config) {
  if (config.replications < 1) throw Error(ErrorCode::InvalidConfig, "replications must be >= 1");
  const std::size_t horizon = config.effective_horizon();
  if (horizon > config.plan.size()) {
    throw Error(ErrorCode::InvalidConfig, "horizon " + std::to_string(horizon) + " exceeds plan length " +
                                              std::to_string(config.plan.size()));
  }
  if (config.collect.r_max > horizon) throw Error(ErrorCode::InvalidConfig, "r_max exceeds the horizon");
  if (!(config.z > 0.0)) throw Error(ErrorCode::InvalidConfig, "z must be positive");
  for (const auto& q : config.joint_queries) {
    if (q.empty()) throw Error(ErrorCode::EmptySelection, "joint query without positions");
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (q[i] < 1 || q[i] > horizon) {
        throw Error(ErrorCode::InvalidConfig, "joint query position " + std::to_string(q[i]) +
                                                  " outside the horizon");
      }
      if (i > 0 && q[i] <= q[i - 1]) {
        throw Error(ErrorCode::InvalidConfig, "joint query positions must be strictly increasing");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// RunResult

double RunResult::event_freq(std::size_t t) const {
  if (t < 1 || t > event_hits.size()) throw Error(ErrorCode::IndexOutOfRange, "position " + std::to_string(t));
  return static_cast<double>(event_hits[t - 1]) / static_cast<double>(replications);
}

double RunResult::joint_freq(std::size_t query) const {
  if (query >= joint_hits.size()) throw Error(ErrorCode::IndexOutOfRange, "joint query " + std::to_string(query));
  return static_cast<double>(joint_hits[query]) / static_cast<double>(replications);
}

double RunResult::count_mean() const {
  return static_cast<double>(count_sum) / static_cast<double>(replications);
}

double RunResult::count_var() const {
  if (replications < 2) return 0.0;
  const auto n = static_cast<__int128>(replications);
  const __int128 num = n * static_cast<__int128>(count_sq_sum) -
                       static_cast<__int128>(count_sum) * static_cast<__int128>(count_sum);
  return static_cast<double>(static_cast<long double>(num) /
                             (static_cast<long double>(replications) * static_cast<long double>(replications - 1)));
}

double RunResult::ci_radius(double p) const {
  return z * std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(replications));
}

// ---------------------------------------------------------------------------
// Engine

namespace {

/// Slot layout of one replication: X values live at plan.support(horizon)
/// order; each position reads its own slot and the slots its comparison set
/// gains over the previous position.
struct Layout {
  std::vector<Index> support;
  std::vector<std::size_t> self;
  std::vector<std::vector<std::size_t>> gained;
};

Layout make_layout(const ValidatedPlan& plan, std::size_t horizon) {
  Layout lay;
  lay.support = plan.support(horizon);
  auto slot = [&](Index idx) {
    return static_cast<std::size_t>(std::lower_bound(lay.support.begin(), lay.support.end(), idx) -
                                    lay.support.begin());
  };
  for (std::size_t t = 1; t <= horizon; ++t) {
    lay.self.push_back(slot(plan.index(t)));
    std::vector<std::size_t> g;
    for (Index e : plan.increment(t)) g.push_back(slot(e));
    lay.gained.push_back(std::move(g));
  }
  return lay;
}

double draw(const Density& density, std::uint64_t seed, std::uint64_t replication, Index index) {
  return density.inverse_cdf(to_open_unit(counter_hash(seed, replication, static_cast<std::uint64_t>(index))));
}

std::uint64_t detect(const Layout& lay, const std::vector<double>& draws, std::vector<bool>& indicators) {
  std::uint64_t ties = 0;
  double running = -std::numeric_limits<double>::infinity();
  for (std::size_t u = 0; u < lay.self.size(); ++u) {
    for (auto s : lay.gained[u]) running = std::max(running, draws[s]);
    const double x = draws[lay.self[u]];
    indicators[u] = x > running;
    if (x == running) ++ties;
  }
  return ties;
}

struct Tally {
  std::vector<std::uint64_t> event_hits;
  std::vector<std::uint64_t> joint_hits;
  std::uint64_t count_sum = 0;
  std::uint64_t count_sq_sum = 0;
  std::vector<std::uint64_t> trajectory_sums;
  std::vector<std::vector<std::uint64_t>> time_hist;
  std::vector<std::uint64_t> no_record;
  std::uint64_t ties = 0;

  Tally(std::size_t horizon, const SimConfig& config)
      : event_hits(horizon, 0),
        joint_hits(config.joint_queries.size(), 0),
        trajectory_sums(config.collect.trajectory ? horizon : 0, 0),
        time_hist(config.collect.r_max, std::vector<std::uint64_t>(horizon, 0)),
        no_record(config.collect.r_max, 0) {}

  void merge(const Tally& o) {
    auto add = [](std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
      for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    };
    add(event_hits, o.event_hits);
    add(joint_hits, o.joint_hits);
    count_sum += o.count_sum;
    count_sq_sum += o.count_sq_sum;
    add(trajectory_sums, o.trajectory_sums);
    for (std::size_t r = 0; r < time_hist.size(); ++r) add(time_hist[r], o.time_hist[r]);
    add(no_record, o.no_record);
    ties += o.ties;
  }
};

}  // namespace

RunResult run(const SimConfig& config) {
  check_config(config);
  const std::size_t horizon = config.effective_horizon();
  const Layout lay = make_layout(config.plan, horizon);
  const std::size_t r_max = config.collect.r_max;
  const std::uint64_t N = config.replications;

  RunResult result;
  result.replications = N;
  result.horizon = horizon;
  result.z = config.z;
  result.record_values.assign(r_max, std::vector<double>(N, std::numeric_limits<double>::quiet_NaN()));

  unsigned threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, N));

  std::vector<Tally> tallies(threads, Tally(horizon, config));
  auto work = [&](unsigned w) {
    Tally& tally = tallies[w];
    const std::uint64_t begin = N * w / threads;
    const std::uint64_t end = N * (w + 1) / threads;
    std::vector<double> draws(lay.support.size());
    std::vector<bool> ind(horizon);
    for (std::uint64_t k = begin; k < end; ++k) {
      for (std::size_t i = 0; i < lay.support.size(); ++i) {
        draws[i] = draw(config.density, config.master_seed, k, lay.support[i]);
      }
      tally.ties += detect(lay, draws, ind);

      std::uint64_t count = 0;
      std::size_t rank = 0;
      for (std::size_t u = 0; u < horizon; ++u) {
        if (!ind[u]) {
          if (!tally.trajectory_sums.empty()) tally.trajectory_sums[u] += count;
          continue;
        }
        ++tally.event_hits[u];
        ++count;
        if (!tally.trajectory_sums.empty()) tally.trajectory_sums[u] += count;
        if (rank < r_max) {
          ++tally.time_hist[rank][u];
          result.record_values[rank][k] = draws[lay.self[u]];
          ++rank;
        }
      }
      for (std::size_t r = rank; r < r_max; ++r) ++tally.no_record[r];
      tally.count_sum += count;
      tally.count_sq_sum += count * count;

      for (std::size_t q = 0; q < config.joint_queries.size(); ++q) {
        const auto& pos = config.joint_queries[q];
        if (std::all_of(pos.begin(), pos.end(), [&](std::size_t t) { return ind[t - 1]; })) {
          ++tally.joint_hits[q];
        }
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  Tally total(horizon, config);
  for (const auto& t : tallies) total.merge(t);
  result.event_hits = std::move(total.event_hits);
  result.joint_hits = std::move(total.joint_hits);
  result.count_sum = total.count_sum;
  result.count_sq_sum = total.count_sq_sum;
  result.trajectory_sums = std::move(total.trajectory_sums);
  result.time_hist = std::move(total.time_hist);
  result.no_record = std::move(total.no_record);
  result.ties = total.ties;
  return result;
}

double draw_value(const SimConfig& config, std::uint64_t replication, Index index) {
  return draw(config.density, config.master_seed, replication, index);
}

Replay replay(const SimConfig& config, std::uint64_t replication) {
  check_config(config);
  const std::size_t horizon = config.effective_horizon();
  const Layout lay = make_layout(config.plan, horizon);
  Replay out;
  out.indices = lay.support;
  for (Index idx : lay.support) out.draws.push_back(draw_value(config, replication, idx));
  out.indicators.assign(horizon, false);
  detect(lay, out.draws, out.indicators);
  return out;
}

Estimate estimate_joint(const SimConfig& config, std::span<const std::size_t> positions) {
  if (positions.empty()) throw Error(ErrorCode::EmptySelection, "no positions selected");
  SimConfig cfg = config;
  cfg.collect = {};
  cfg.joint_queries = {std::vector<std::size_t>(positions.begin(), positions.end())};
  const RunResult res = run(cfg);
  const double p = res.joint_freq(0);
  return {p, res.ci_radius(p)};
}

// ---------------------------------------------------------------------------
// Derived curves

double EcdfCurve::dkw_radius(double alpha) const {
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(replications)));
}

EcdfCurve empirical_record_value_cdf(const RunResult& result, std::size_t r, std::span<const double> grid) {
  if (r < 1 || r > result.record_values.size()) {
    throw Error(ErrorCode::RankTooLarge, "rank " + std::to_string(r) + " was not collected");
  }
  std::vector<double> values;
  values.reserve(result.replications);
  for (double v : result.record_values[r - 1]) {
    if (!std::isnan(v)) values.push_back(v);
  }
  std::sort(values.begin(), values.end());
  EcdfCurve curve;
  curve.replications = result.replications;
  curve.no_record_mass = static_cast<double>(result.no_record[r - 1]) / static_cast<double>(result.replications);
  for (double x : grid) {
    const auto below = std::lower_bound(values.begin(), values.end(), x) - values.begin();
    curve.grid.push_back(x);
    curve.values.push_back(static_cast<double>(below) / static_cast<double>(result.replications));
  }
  return curve;
}

EcdfCurve empirical_record_value_cdf(const SimConfig& config, std::size_t r, std::span<const double> grid) {
  if (r < 1 || r > config.effective_horizon()) {
    throw Error(ErrorCode::RankTooLarge, "rank " + std::to_string(r) + " exceeds the horizon");
  }
  SimConfig cfg = config;
  cfg.collect.r_max = std::max(cfg.collect.r_max, r);
  return empirical_record_value_cdf(run(cfg), r, grid);
}

std::vector<TrajectoryPoint> strong_law_trajectory(const ValidatedPlan& plan, const RunResult& result) {
  if (result.trajectory_sums.size() != result.horizon) {
    throw Error(ErrorCode::InvalidConfig, "run did not collect the R_j trajectory");
  }
  std::vector<TrajectoryPoint> out;
  out.reserve(result.horizon);
  const auto N = static_cast<double>(result.replications);
  double intensity = 0.0, variance = 0.0;
  for (std::size_t j = 1; j <= result.horizon; ++j) {
    const double p = 1.0 / static_cast<double>(plan.cardinality(j));
    intensity += p;
    variance += p * (1.0 - p);
    const double mean_count = static_cast<double>(result.trajectory_sums[j - 1]) / N;
    out.push_back({j, mean_count / intensity, result.z * std::sqrt(variance / N) / intensity});
  }
  return out;
}

std::vector<TrajectoryPoint> strong_law_trajectory(const SimConfig& config) {
  SimConfig cfg = config;
  cfg.collect.trajectory = true;
  return strong_law_trajectory(cfg.plan, run(cfg));
}

}  // namespace partrec
