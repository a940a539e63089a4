#include "brute_force.hpp"

#include <algorithm>
#include <numeric>

namespace partrec::testing {

namespace {

Index max_index(const ComparisonPlan& plan) {
  Index n = 0;
  for (auto i : plan.indices) n = std::max(n, i);
  return n;
}

bool record_at(const ComparisonPlan& plan, std::size_t t, const std::vector<int>& value) {
  const Index n = plan.indices[t - 1];
  for (Index c : plan.comparison_sets[t - 1]) {
    if (value[c] >= value[n]) return false;
  }
  return true;
}

template <typename Visit>
void for_each_permutation(Index n, Visit&& visit) {
  std::vector<int> value(n + 1, 0);
  std::iota(value.begin() + 1, value.end(), 0);
  do {
    visit(value);
  } while (std::next_permutation(value.begin() + 1, value.end()));
}

}  // namespace

Rational brute_joint(const ComparisonPlan& plan, const std::vector<std::size_t>& positions,
                     const std::vector<std::size_t>& negated) {
  const Index n = max_index(plan);
  long long hits = 0, total = 0;
  for_each_permutation(n, [&](const std::vector<int>& value) {
    ++total;
    for (auto t : positions) {
      if (!record_at(plan, t, value)) return;
    }
    for (auto t : negated) {
      if (record_at(plan, t, value)) return;
    }
    ++hits;
  });
  return Rational(hits, total);
}

BrutePlanLaw brute_plan_law(const ComparisonPlan& plan) {
  const Index n = max_index(plan);
  const std::size_t T = plan.indices.size();
  std::vector<long long> counts(T + 1, 0);
  std::vector<std::vector<long long>> times(T, std::vector<long long>(T, 0));
  long long total = 0;
  for_each_permutation(n, [&](const std::vector<int>& value) {
    ++total;
    std::size_t seen = 0;
    for (std::size_t t = 1; t <= T; ++t) {
      if (record_at(plan, t, value)) {
        ++times[seen][t - 1];
        ++seen;
      }
    }
    ++counts[seen];
  });
  BrutePlanLaw law;
  for (auto c : counts) law.count_pmf.emplace_back(c, total);
  law.time_pmf.resize(T);
  for (std::size_t r = 0; r < T; ++r) {
    for (auto c : times[r]) law.time_pmf[r].emplace_back(c, total);
  }
  return law;
}

Rational brute_discrete(const ComparisonPlan& plan, const std::vector<std::size_t>& positions,
                        const std::vector<Rational>& masses) {
  // Only variables that appear in the queried events matter; the rest
  // marginalize to 1.
  std::vector<Index> vars;
  for (auto t : positions) {
    vars.push_back(plan.indices[t - 1]);
    for (auto c : plan.comparison_sets[t - 1]) vars.push_back(c);
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());

  const int atoms = static_cast<int>(masses.size());
  std::vector<int> value(max_index(plan) + 1, 0);
  Rational sum = 0;
  std::vector<int> digit(vars.size(), 0);
  while (true) {
    for (std::size_t k = 0; k < vars.size(); ++k) value[vars[k]] = digit[k];
    bool ok = true;
    for (auto t : positions) {
      if (!record_at(plan, t, value)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      Rational w = 1;
      for (auto d : digit) w *= masses[d];
      sum += w;
    }
    std::size_t k = 0;
    while (k < digit.size() && ++digit[k] == atoms) digit[k++] = 0;
    if (k == digit.size()) break;
  }
  return sum;
}

}  // namespace partrec::testing
