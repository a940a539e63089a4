#include "generators.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace partrec::testing {

ComparisonPlan random_compatible_plan(std::mt19937_64& gen, Index max_index, std::size_t max_length) {
  std::bernoulli_distribution coin(0.5);
  std::vector<Index> pool;
  for (Index i = 1; i <= max_index; ++i) {
    if (coin(gen)) pool.push_back(i);
  }
  if (pool.empty()) pool.push_back(std::uniform_int_distribution<Index>(1, max_index)(gen));
  if (max_length > 0 && pool.size() > max_length) pool.resize(max_length);

  ComparisonPlan plan;
  std::set<Index> current;
  std::bernoulli_distribution add(0.4);
  for (std::size_t t = 0; t < pool.size(); ++t) {
    const Index n = pool[t];
    if (t > 0) current.insert(pool[t - 1]);
    for (Index i = 1; i < n; ++i) {
      if (!current.count(i) && add(gen)) current.insert(i);
    }
    plan.indices.push_back(n);
    plan.comparison_sets.emplace_back(current.begin(), current.end());
  }
  return plan;
}

Corruption corrupt(std::mt19937_64& gen, const ComparisonPlan& plan) {
  auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(gen); };
  Corruption out{plan, Violation::SetOutOfRange};
  const std::size_t T = plan.indices.size();
  // Try kinds in random order until one applies to this plan's shape.
  std::vector<int> kinds{0, 1, 2, 3, 4};
  std::shuffle(kinds.begin(), kinds.end(), gen);
  for (int kind : kinds) {
    out.plan = plan;
    switch (kind) {
      case 0: {  // element >= n_t
        const std::size_t t = pick(0, T - 1);
        out.plan.comparison_sets[t].push_back(plan.indices[t]);
        out.expected = Violation::SetOutOfRange;
        return out;
      }
      case 1: {  // duplicate element
        const std::size_t t = pick(0, T - 1);
        if (plan.comparison_sets[t].empty()) break;
        out.plan.comparison_sets[t].push_back(plan.comparison_sets[t].front());
        out.expected = Violation::DuplicateElement;
        return out;
      }
      case 2: {  // indices not increasing
        if (T < 2) break;
        const std::size_t t = pick(1, T - 1);
        std::swap(out.plan.indices[t], out.plan.indices[t - 1]);
        out.expected = Violation::NotStrictlyIncreasingIndices;
        return out;
      }
      case 3: {  // drop a non-predecessor element carried from the previous set
        if (T < 2) break;
        const std::size_t t = pick(1, T - 1);
        const auto& prev = plan.comparison_sets[t - 1];
        if (prev.empty()) break;
        auto& cur = out.plan.comparison_sets[t];
        const Index victim = prev[pick(0, prev.size() - 1)];
        cur.erase(std::remove(cur.begin(), cur.end(), victim), cur.end());
        out.expected = Violation::NotNested;
        return out;
      }
      case 4: {  // drop the predecessor n_{t-1}
        if (T < 2) break;
        const std::size_t t = pick(1, T - 1);
        auto& cur = out.plan.comparison_sets[t];
        cur.erase(std::remove(cur.begin(), cur.end(), plan.indices[t - 1]), cur.end());
        out.expected = Violation::MissingPredecessor;
        return out;
      }
    }
  }
  // Length mismatch applies to every plan.
  out.plan = plan;
  out.plan.comparison_sets.pop_back();
  out.expected = Violation::LengthMismatch;
  return out;
}

std::vector<std::vector<std::size_t>> all_subsets(std::size_t T) {
  std::vector<std::vector<std::size_t>> out;
  for (std::uint32_t mask = 1; mask < (1u << T); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t t = 0; t < T; ++t) {
      if (mask & (1u << t)) s.push_back(t + 1);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<ComparisonPlan> plan_corpus(std::uint64_t seed, std::size_t count, Index max_index) {
  std::mt19937_64 gen(seed);
  std::vector<ComparisonPlan> out;
  std::unordered_set<std::uint64_t> seen;
  std::size_t attempts = 0;
  while (out.size() < count && attempts < 100 * count) {
    ++attempts;
    auto plan = random_compatible_plan(gen, max_index);
    const auto digest = validate_or_throw(plan).digest();
    if (seen.insert(digest).second) out.push_back(std::move(plan));
  }
  return out;
}

}  // namespace partrec::testing
