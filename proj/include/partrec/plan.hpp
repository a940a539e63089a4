#pragma once

#include "partrec/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

namespace partrec {

using Index = std::int64_t;

/// Raw, unvalidated plan: a subsequence of time indices n_1 < n_2 < ... and the
/// comparison set C(n_t) for each of them. Positions t are 1-based throughout
/// the public API.
struct ComparisonPlan {
  std::vector<Index> indices;
  std::vector<std::vector<Index>> comparison_sets;
};

enum class Violation {
  EmptyPlan,
  LengthMismatch,
  NotStrictlyIncreasingIndices,
  SetOutOfRange,
  DuplicateElement,
  NotNested,
  MissingPredecessor,
};

std::string_view to_string(Violation v);

struct ViolationEntry {
  Violation kind;
  std::size_t position;  // 1-based t of the offending element
  std::string detail;
};

struct ValidationReport {
  std::vector<ViolationEntry> violations;

  bool contains(Violation kind) const;
  std::string summary() const;
};

/// A plan that satisfies the compatibility conditions. Comparison sets are
/// stored as increments C(n_t) \ C(n_{t-1}); nesting makes the full sets
/// recoverable, and total-comparison plans of length 10^5 stay O(T) in memory.
///
/// Immutable once built; copies share storage.
class ValidatedPlan {
 public:
  std::size_t size() const { return data_->indices.size(); }

  Index index(std::size_t t) const;
  /// c(n_t) = |C(n_t)| + 1.
  std::int64_t cardinality(std::size_t t) const;
  /// Elements added to the comparison set at position t, sorted. For t = 1
  /// this is all of C(n_1).
  const std::vector<Index>& increment(std::size_t t) const;
  /// Full C(n_t), sorted.
  std::vector<Index> comparison_set(std::size_t t) const;

  const std::vector<Index>& indices() const { return data_->indices; }
  const std::vector<std::int64_t>& cardinalities() const { return data_->cards; }

  /// Every index appearing in some n_t or C(n_t) for t <= horizon, sorted.
  std::vector<Index> support(std::size_t horizon) const;

  ValidatedPlan prefix(std::size_t length) const;
  ComparisonPlan to_raw() const;

  /// Stable 64-bit FNV-1a digest over indices and increments.
  std::uint64_t digest() const;

 private:
  friend class PlanBuilder;
  struct Data {
    std::vector<Index> indices;
    std::vector<std::int64_t> cards;
    std::vector<std::vector<Index>> increments;
  };
  explicit ValidatedPlan(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  void check_position(std::size_t t) const;

  std::shared_ptr<const Data> data_;
};

/// Incremental validator: each appended element is checked against the plan so
/// far. Used by `validate` and by generators that extend plans on demand.
class PlanBuilder {
 public:
  PlanBuilder() = default;
  /// Starts from an already validated plan.
  explicit PlanBuilder(const ValidatedPlan& base);

  /// Appends n_t with C(n_t) = C(n_{t-1}) ∪ added. Returns the violations for
  /// this element; the element is kept only when the result is empty.
  std::vector<ViolationEntry> append(Index n, std::span<const Index> added);

  std::size_t size() const { return indices_.size(); }
  ValidatedPlan build() const;

 private:
  std::vector<Index> indices_;
  std::vector<std::int64_t> cards_;
  std::vector<std::vector<Index>> increments_;
  std::unordered_set<Index> members_;  // current comparison set
};

using ValidationResult = std::variant<ValidatedPlan, ValidationReport>;

/// Checks every compatibility condition and reports all failures.
ValidationResult validate(const ComparisonPlan& plan);

/// validate(), throwing Error(InvalidPlan) with the report summary on failure.
ValidatedPlan validate_or_throw(const ComparisonPlan& plan);

std::int64_t cardinality(const ValidatedPlan& plan, std::size_t t);

/// I_j = sum_{t<=j} 1/c(n_t), exact. Denominators grow like lcm(c), so keep j
/// moderate; use cumulative_intensity_value for long horizons.
Rational cumulative_intensity(const ValidatedPlan& plan, std::size_t j);
double cumulative_intensity_value(const ValidatedPlan& plan, std::size_t j);

/// n_t = t, C(t) = {1, ..., t-1}.
ComparisonPlan total_comparison_plan(std::size_t j);

/// C(n_1) = ∅ and C(n_t) = {1} ∪ {n_1, ..., n_{t-1}}; requires n_1 = 1.
ComparisonPlan chained_plan(std::span<const Index> indices);

/// Next element of an unbounded plan: the time index and the elements added
/// to the comparison set relative to the previous position.
struct PlanStep {
  Index index;
  std::vector<Index> added;
};
/// Called with the 1-based position t and n_{t-1} (0 when t = 1).
using PlanGenerator = std::function<PlanStep(std::size_t t, Index previous)>;

PlanGenerator total_comparison_generator();
/// Chained construction over an index rule t -> n_t with n_1 = 1.
PlanGenerator chained_generator(std::function<Index(std::size_t)> index_of);

/// Extends `base` (possibly empty) to `length` positions; throws
/// Error(InvalidPlan) if a generated element violates compatibility.
ValidatedPlan generate_plan(const PlanGenerator& gen, std::size_t length,
                            const std::optional<ValidatedPlan>& base = std::nullopt);

struct EventTerm {
  std::size_t position;
  bool negated = false;
};

/// Intersection of record events (or complements) at plan positions, with an
/// optional cutoff X_{n_t} < x on the last term.
class EventQuery {
 public:
  /// Throws Error(InvalidQuery) unless positions are strictly increasing,
  /// nonempty, and a cutoff (if any) sits on a non-negated last term.
  EventQuery(std::vector<EventTerm> terms, std::optional<double> cutoff = std::nullopt);

  static EventQuery all_of(std::span<const std::size_t> positions);

  const std::vector<EventTerm>& terms() const { return terms_; }
  const std::optional<double>& cutoff() const { return cutoff_; }

 private:
  std::vector<EventTerm> terms_;
  std::optional<double> cutoff_;
};

}  // namespace partrec
