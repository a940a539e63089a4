#include "partrec/plan.hpp"

#include "partrec/error.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace partrec {

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::EmptyPlan: return "EmptyPlan";
    case Violation::LengthMismatch: return "LengthMismatch";
    case Violation::NotStrictlyIncreasingIndices: return "NotStrictlyIncreasingIndices";
    case Violation::SetOutOfRange: return "SetOutOfRange";
    case Violation::DuplicateElement: return "DuplicateElement";
    case Violation::NotNested: return "NotNested";
    case Violation::MissingPredecessor: return "MissingPredecessor";
  }
  return "Unknown";
}

bool ValidationReport::contains(Violation kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const ViolationEntry& e) { return e.kind == kind; });
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    const auto& v = violations[i];
    if (i) os << "; ";
    os << to_string(v.kind) << " at t=" << v.position << " (" << v.detail << ")";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// ValidatedPlan

void ValidatedPlan::check_position(std::size_t t) const {
  if (t < 1 || t > size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "position " + std::to_string(t) + " outside 1.." + std::to_string(size()));
  }
}

Index ValidatedPlan::index(std::size_t t) const {
  check_position(t);
  return data_->indices[t - 1];
}

std::int64_t ValidatedPlan::cardinality(std::size_t t) const {
  check_position(t);
  return data_->cards[t - 1];
}

const std::vector<Index>& ValidatedPlan::increment(std::size_t t) const {
  check_position(t);
  return data_->increments[t - 1];
}

std::vector<Index> ValidatedPlan::comparison_set(std::size_t t) const {
  check_position(t);
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(data_->cards[t - 1] - 1));
  for (std::size_t u = 0; u < t; ++u) {
    out.insert(out.end(), data_->increments[u].begin(), data_->increments[u].end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Index> ValidatedPlan::support(std::size_t horizon) const {
  horizon = std::min(horizon, size());
  std::vector<Index> out;
  for (std::size_t u = 0; u < horizon; ++u) {
    out.push_back(data_->indices[u]);
    out.insert(out.end(), data_->increments[u].begin(), data_->increments[u].end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ValidatedPlan ValidatedPlan::prefix(std::size_t length) const {
  if (length < 1 || length > size()) {
    throw Error(ErrorCode::IndexOutOfRange, "prefix length " + std::to_string(length));
  }
  auto d = std::make_shared<Data>();
  d->indices.assign(data_->indices.begin(), data_->indices.begin() + length);
  d->cards.assign(data_->cards.begin(), data_->cards.begin() + length);
  d->increments.assign(data_->increments.begin(), data_->increments.begin() + length);
  return ValidatedPlan(std::move(d));
}

ComparisonPlan ValidatedPlan::to_raw() const {
  ComparisonPlan raw;
  raw.indices = data_->indices;
  for (std::size_t t = 1; t <= size(); ++t) raw.comparison_sets.push_back(comparison_set(t));
  return raw;
}

std::uint64_t ValidatedPlan::digest() const {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(size());
  for (std::size_t u = 0; u < size(); ++u) {
    mix(static_cast<std::uint64_t>(data_->indices[u]));
    mix(data_->increments[u].size());
    for (Index e : data_->increments[u]) mix(static_cast<std::uint64_t>(e));
  }
  return h;
}

// ---------------------------------------------------------------------------
// PlanBuilder

PlanBuilder::PlanBuilder(const ValidatedPlan& base)
    : indices_(base.indices()), cards_(base.cardinalities()) {
  for (std::size_t t = 1; t <= base.size(); ++t) increments_.push_back(base.increment(t));
  if (base.size() > 0) {
    auto set = base.comparison_set(base.size());
    members_.insert(set.begin(), set.end());
  }
}

std::vector<ViolationEntry> PlanBuilder::append(Index n, std::span<const Index> added) {
  std::vector<ViolationEntry> out;
  const std::size_t t = indices_.size() + 1;

  if (n < 1 || (!indices_.empty() && n <= indices_.back())) {
    out.push_back({Violation::NotStrictlyIncreasingIndices, t,
                   "index " + std::to_string(n) + " does not exceed its predecessor"});
  }

  std::vector<Index> inc(added.begin(), added.end());
  std::sort(inc.begin(), inc.end());
  for (std::size_t i = 0; i < inc.size(); ++i) {
    if (inc[i] < 1 || inc[i] > n - 1) {
      out.push_back({Violation::SetOutOfRange, t,
                     "element " + std::to_string(inc[i]) + " outside 1.." + std::to_string(n - 1)});
    }
    if (i > 0 && inc[i] == inc[i - 1]) {
      out.push_back({Violation::DuplicateElement, t, "element " + std::to_string(inc[i]) + " repeated"});
    }
    if (members_.count(inc[i]) != 0) {
      out.push_back({Violation::DuplicateElement, t,
                     "element " + std::to_string(inc[i]) + " already in the previous set"});
    }
  }
  if (!indices_.empty()) {
    if (inc.empty()) {
      out.push_back({Violation::NotNested, t, "comparison set does not strictly grow"});
    }
    const Index prev = indices_.back();
    if (members_.count(prev) == 0 &&
        !std::binary_search(inc.begin(), inc.end(), prev)) {
      out.push_back({Violation::MissingPredecessor, t,
                     "previous index " + std::to_string(prev) + " not in comparison set"});
    }
  }
  if (!out.empty()) return out;

  indices_.push_back(n);
  members_.insert(inc.begin(), inc.end());
  cards_.push_back(static_cast<std::int64_t>(members_.size()) + 1);
  increments_.push_back(std::move(inc));
  return out;
}

ValidatedPlan PlanBuilder::build() const {
  auto d = std::make_shared<ValidatedPlan::Data>();
  d->indices = indices_;
  d->cards = cards_;
  d->increments = increments_;
  return ValidatedPlan(std::move(d));
}

// ---------------------------------------------------------------------------
// validate

namespace {

std::vector<Index> sorted_copy(const std::vector<Index>& v) {
  std::vector<Index> s = v;
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

ValidationResult validate(const ComparisonPlan& plan) {
  ValidationReport report;
  auto& out = report.violations;

  if (plan.indices.empty()) {
    out.push_back({Violation::EmptyPlan, 0, "plan has no indices"});
    return report;
  }
  if (plan.indices.size() != plan.comparison_sets.size()) {
    out.push_back({Violation::LengthMismatch, 0,
                   std::to_string(plan.indices.size()) + " indices but " +
                       std::to_string(plan.comparison_sets.size()) + " comparison sets"});
    return report;
  }

  std::vector<Index> prev_set;
  for (std::size_t u = 0; u < plan.indices.size(); ++u) {
    const std::size_t t = u + 1;
    const Index n = plan.indices[u];
    if (n < 1 || (u > 0 && n <= plan.indices[u - 1])) {
      out.push_back({Violation::NotStrictlyIncreasingIndices, t,
                     "index " + std::to_string(n) + " does not exceed its predecessor"});
    }
    auto set = sorted_copy(plan.comparison_sets[u]);
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (set[i] < 1 || set[i] > n - 1) {
        out.push_back({Violation::SetOutOfRange, t,
                       "element " + std::to_string(set[i]) + " outside 1.." + std::to_string(n - 1)});
      }
      if (i > 0 && set[i] == set[i - 1]) {
        out.push_back({Violation::DuplicateElement, t, "element " + std::to_string(set[i]) + " repeated"});
      }
    }
    set.erase(std::unique(set.begin(), set.end()), set.end());
    if (u > 0) {
      const bool subset = std::includes(set.begin(), set.end(), prev_set.begin(), prev_set.end());
      if (!subset || set.size() == prev_set.size()) {
        out.push_back({Violation::NotNested, t,
                       subset ? "comparison set does not strictly grow"
                              : "previous comparison set is not contained in this one"});
      }
      const Index pred = plan.indices[u - 1];
      if (!std::binary_search(set.begin(), set.end(), pred)) {
        out.push_back({Violation::MissingPredecessor, t,
                       "previous index " + std::to_string(pred) + " not in comparison set"});
      }
    }
    prev_set = std::move(set);
  }
  if (!out.empty()) return report;

  PlanBuilder builder;
  std::vector<Index> prev;
  for (std::size_t u = 0; u < plan.indices.size(); ++u) {
    auto set = sorted_copy(plan.comparison_sets[u]);
    std::vector<Index> added;
    std::set_difference(set.begin(), set.end(), prev.begin(), prev.end(), std::back_inserter(added));
    auto errs = builder.append(plan.indices[u], added);
    // The direct checks above are a superset of the incremental ones.
    if (!errs.empty()) {
      report.violations = std::move(errs);
      return report;
    }
    prev = std::move(set);
  }
  return builder.build();
}

ValidatedPlan validate_or_throw(const ComparisonPlan& plan) {
  auto result = validate(plan);
  if (auto* report = std::get_if<ValidationReport>(&result)) {
    throw Error(ErrorCode::InvalidPlan, report->summary());
  }
  return std::get<ValidatedPlan>(std::move(result));
}

std::int64_t cardinality(const ValidatedPlan& plan, std::size_t t) { return plan.cardinality(t); }

Rational cumulative_intensity(const ValidatedPlan& plan, std::size_t j) {
  if (j < 1 || j > plan.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "horizon " + std::to_string(j));
  }
  Rational sum = 0;
  for (std::size_t t = 1; t <= j; ++t) sum += Rational(1, plan.cardinality(t));
  return sum;
}

double cumulative_intensity_value(const ValidatedPlan& plan, std::size_t j) {
  if (j < 1 || j > plan.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "horizon " + std::to_string(j));
  }
  // Smallest terms first.
  double sum = 0.0;
  for (std::size_t t = j; t >= 1; --t) sum += 1.0 / static_cast<double>(plan.cardinality(t));
  return sum;
}

ComparisonPlan total_comparison_plan(std::size_t j) {
  ComparisonPlan plan;
  std::vector<Index> set;
  for (std::size_t t = 1; t <= j; ++t) {
    plan.indices.push_back(static_cast<Index>(t));
    plan.comparison_sets.push_back(set);
    set.push_back(static_cast<Index>(t));
  }
  return plan;
}

ComparisonPlan chained_plan(std::span<const Index> indices) {
  if (indices.empty() || indices.front() != 1) {
    throw Error(ErrorCode::BadFirstIndex, "chained plans start at n_1 = 1");
  }
  ComparisonPlan plan;
  std::vector<Index> set;
  for (Index n : indices) {
    plan.indices.push_back(n);
    plan.comparison_sets.push_back(set);
    set.push_back(n);
  }
  return plan;
}

PlanGenerator total_comparison_generator() {
  return [](std::size_t t, Index) {
    PlanStep step{static_cast<Index>(t), {}};
    if (t > 1) step.added.push_back(static_cast<Index>(t - 1));
    return step;
  };
}

PlanGenerator chained_generator(std::function<Index(std::size_t)> index_of) {
  return [index_of = std::move(index_of)](std::size_t t, Index previous) {
    PlanStep step{index_of(t), {}};
    if (t == 1 && step.index != 1) {
      throw Error(ErrorCode::BadFirstIndex, "chained plans start at n_1 = 1");
    }
    if (t > 1) step.added.push_back(previous);
    return step;
  };
}

ValidatedPlan generate_plan(const PlanGenerator& gen, std::size_t length,
                            const std::optional<ValidatedPlan>& base) {
  PlanBuilder builder = base ? PlanBuilder(*base) : PlanBuilder();
  Index previous = (base && base->size() > 0) ? base->indices().back() : 0;
  while (builder.size() < length) {
    const std::size_t t = builder.size() + 1;
    PlanStep step = gen(t, previous);
    auto errs = builder.append(step.index, step.added);
    if (!errs.empty()) {
      throw Error(ErrorCode::InvalidPlan, ValidationReport{std::move(errs)}.summary());
    }
    previous = step.index;
  }
  return builder.build();
}

// ---------------------------------------------------------------------------
// EventQuery

EventQuery::EventQuery(std::vector<EventTerm> terms, std::optional<double> cutoff)
    : terms_(std::move(terms)), cutoff_(cutoff) {
  if (terms_.empty()) throw Error(ErrorCode::InvalidQuery, "query needs at least one term");
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].position < 1) throw Error(ErrorCode::InvalidQuery, "positions are 1-based");
    if (i > 0 && terms_[i].position <= terms_[i - 1].position) {
      throw Error(ErrorCode::InvalidQuery, "positions must be strictly increasing");
    }
  }
  if (cutoff_) {
    if (!(*cutoff_ > 0.0)) throw Error(ErrorCode::NegativeCutoff, "cutoff must be positive");
    if (terms_.back().negated) {
      throw Error(ErrorCode::InvalidQuery, "cutoff must attach to a non-negated last term");
    }
  }
}

EventQuery EventQuery::all_of(std::span<const std::size_t> positions) {
  std::vector<EventTerm> terms;
  for (auto p : positions) terms.push_back({p, false});
  return EventQuery(std::move(terms));
}

}  // namespace partrec
