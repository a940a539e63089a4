#include "partrec/oracle.hpp"

#include "partrec/error.hpp"
#include "partrec/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

namespace partrec {

namespace {

/// A queried event expressed over slots 0..K-1 of the relevant variables.
struct SlotTerm {
  std::size_t self;
  std::vector<std::size_t> compared;
  bool negated;
};

std::size_t slot_of(const std::vector<Index>& relevant, Index idx) {
  return static_cast<std::size_t>(std::lower_bound(relevant.begin(), relevant.end(), idx) - relevant.begin());
}

std::vector<SlotTerm> to_slots(const ValidatedPlan& plan, const std::vector<EventTerm>& terms,
                               const std::vector<Index>& relevant) {
  std::vector<SlotTerm> out;
  for (const auto& term : terms) {
    SlotTerm st{slot_of(relevant, plan.index(term.position)), {}, term.negated};
    for (Index c : plan.comparison_set(term.position)) st.compared.push_back(slot_of(relevant, c));
    out.push_back(std::move(st));
  }
  return out;
}

bool is_record(const SlotTerm& term, const std::vector<std::uint8_t>& rank) {
  for (auto s : term.compared) {
    if (rank[s] > rank[term.self]) return false;
  }
  return true;
}

/// Calls visit(rank) for every permutation of 0..K-1 whose first entry is `head`.
template <typename Visit>
void for_each_order_with_head(std::size_t K, std::uint8_t head, Visit&& visit) {
  std::vector<std::uint8_t> rest;
  for (std::uint8_t v = 0; v < K; ++v) {
    if (v != head) rest.push_back(v);
  }
  std::vector<std::uint8_t> rank(K);
  rank[0] = head;
  do {
    std::copy(rest.begin(), rest.end(), rank.begin() + 1);
    visit(rank);
  } while (std::next_permutation(rest.begin(), rest.end()));
}

std::uint64_t factorial(std::size_t k) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

std::vector<Index> relevant_indices(const ValidatedPlan& plan, const EventQuery& query) {
  std::vector<Index> out;
  for (const auto& term : query.terms()) {
    out.push_back(plan.index(term.position));
    auto set = plan.comparison_set(term.position);
    out.insert(out.end(), set.begin(), set.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Rational exact_joint(const ValidatedPlan& plan, const EventQuery& query, std::size_t max_indices,
                     unsigned threads) {
  if (query.cutoff()) throw Error(ErrorCode::InvalidQuery, "enumeration oracle takes no cutoff");
  for (const auto& term : query.terms()) {
    if (term.position > plan.size()) {
      throw Error(ErrorCode::IndexOutOfRange, "position " + std::to_string(term.position));
    }
  }
  const auto relevant = relevant_indices(plan, query);
  const std::size_t K = relevant.size();
  const std::size_t cap = std::min(max_indices, kMaxOracleIndices);
  if (K > cap) {
    throw Error(ErrorCode::TooManyIndices,
                std::to_string(K) + " relevant indices exceed the guard of " + std::to_string(cap));
  }
  const auto terms = to_slots(plan, query.terms(), relevant);

  // Block b enumerates orders whose slot-0 rank is b; integer tallies make the
  // total independent of the schedule.
  std::vector<std::uint64_t> block_hits(K, 0);
  auto run_block = [&](std::size_t b) {
    std::uint64_t hits = 0;
    for_each_order_with_head(K, static_cast<std::uint8_t>(b), [&](const std::vector<std::uint8_t>& rank) {
      for (const auto& term : terms) {
        if (is_record(term, rank) == term.negated) return;
      }
      ++hits;
    });
    block_hits[b] = hits;
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(K)));
  if (threads == 1) {
    for (std::size_t b = 0; b < K; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t b = w; b < K; b += threads) run_block(b);
      });
    }
    for (auto& th : pool) th.join();
  }
  const std::uint64_t hits = std::accumulate(block_hits.begin(), block_hits.end(), std::uint64_t{0});
  return Rational(BigInt(hits), BigInt(factorial(K)));
}

Rational JointLaw::prob_all(std::span<const std::size_t> selected) const {
  std::uint32_t want = 0;
  for (auto t : selected) {
    if (t < 1 || t > positions) throw Error(ErrorCode::IndexOutOfRange, "position " + std::to_string(t));
    want |= 1u << (t - 1);
  }
  std::uint64_t hits = 0;
  for (std::uint32_t mask = 0; mask < counts.size(); ++mask) {
    if ((mask & want) == want) hits += counts[mask];
  }
  return Rational(BigInt(hits), BigInt(orders));
}

Rational JointLaw::prob_pattern(std::uint32_t mask) const {
  if (mask >= counts.size()) throw Error(ErrorCode::IndexOutOfRange, "pattern outside the law");
  return Rational(BigInt(counts[mask]), BigInt(orders));
}

JointLaw exact_joint_law(const ValidatedPlan& plan, std::size_t max_indices) {
  std::vector<EventTerm> all;
  for (std::size_t t = 1; t <= plan.size(); ++t) all.push_back({t, false});
  const EventQuery query(all);
  const auto relevant = relevant_indices(plan, query);
  const std::size_t K = relevant.size();
  const std::size_t cap = std::min(max_indices, kMaxOracleIndices);
  if (K > cap) {
    throw Error(ErrorCode::TooManyIndices,
                std::to_string(K) + " relevant indices exceed the guard of " + std::to_string(cap));
  }
  const auto terms = to_slots(plan, all, relevant);

  JointLaw law;
  law.positions = plan.size();
  law.counts.assign(std::size_t{1} << plan.size(), 0);
  law.orders = factorial(K);
  for (std::size_t b = 0; b < K; ++b) {
    for_each_order_with_head(K, static_cast<std::uint8_t>(b), [&](const std::vector<std::uint8_t>& rank) {
      std::uint32_t mask = 0;
      for (std::size_t i = 0; i < terms.size(); ++i) {
        if (is_record(terms[i], rank)) mask |= 1u << i;
      }
      ++law.counts[mask];
    });
  }
  return law;
}

// ---------------------------------------------------------------------------
// Quadrature of the conditioning recursion

namespace {

double recursion_on_grid(const ValidatedPlan& plan, std::span<const std::size_t> positions, double upper,
                         const Density& density, std::size_t segments, double seg_tol) {
  std::vector<double> grid(segments + 1);
  for (std::size_t i = 0; i <= segments; ++i) grid[i] = upper * static_cast<double>(i) / segments;

  std::vector<double> level(segments + 1, 0.0);
  std::int64_t prev_c = 0;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    const std::int64_t c = plan.cardinality(positions[k]);
    const double power = static_cast<double>(k == 0 ? c - 1 : c - prev_c - 1);
    std::function<double(double)> integrand;
    MonotoneCubic inner;
    if (k == 0) {
      integrand = [&](double y) { return std::pow(density.cdf(y), power) * density.pdf(y); };
    } else {
      inner = MonotoneCubic(grid, level);
      integrand = [&](double y) { return std::pow(density.cdf(y), power) * inner(y) * density.pdf(y); };
    }
    std::vector<double> next(segments + 1, 0.0);
    CompensatedSum acc;
    for (std::size_t i = 1; i <= segments; ++i) {
      acc.add(adaptive_simpson(integrand, grid[i - 1], grid[i], seg_tol));
      next[i] = acc.value();
    }
    level = std::move(next);
    prev_c = c;
  }
  return level.back();
}

}  // namespace

double quadrature_bounded(const ValidatedPlan& plan, std::span<const std::size_t> positions, double x,
                          const Density& density, double tol) {
  if (positions.empty()) throw Error(ErrorCode::EmptySelection, "no positions selected");
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (positions[i] < 1 || positions[i] > plan.size()) {
      throw Error(ErrorCode::IndexOutOfRange, "position " + std::to_string(positions[i]));
    }
    if (i > 0 && positions[i] <= positions[i - 1]) {
      throw Error(ErrorCode::InvalidQuery, "positions must be strictly increasing");
    }
  }
  if (!(x > 0.0)) throw Error(ErrorCode::NegativeCutoff, "cutoff x must be positive");
  if (!(tol >= 1e-10)) throw Error(ErrorCode::BadParams, "quadrature tolerance must be >= 1e-10");
  const double upper = density.bounded() ? std::min(x, density.upper()) : x;

  std::size_t segments = 2048;
  double previous = recursion_on_grid(plan, positions, upper, density, segments, tol / (10.0 * segments));
  while (segments < (std::size_t{1} << 16)) {
    segments *= 2;
    const double current = recursion_on_grid(plan, positions, upper, density, segments, tol / (10.0 * segments));
    if (std::abs(current - previous) < tol) return current;
    previous = current;
  }
  throw Error(ErrorCode::QuadratureFailure, "grid refinement did not settle within tolerance");
}

}  // namespace partrec
