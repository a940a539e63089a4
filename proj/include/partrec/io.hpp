#pragma once

#include "partrec/distributions.hpp"
#include "partrec/plan.hpp"
#include "partrec/rational.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

namespace partrec::io {

/// {"indices": [1,3,5], "comparison_sets": [[],[1],[1,3]]}. Sets are
/// order-insensitive; duplicates surface as DuplicateElement at validation.
/// Throws Error(ParseError) on malformed JSON or missing fields.
ComparisonPlan plan_from_json(const nlohmann::json& doc);
nlohmann::json plan_to_json(const ComparisonPlan& plan);

/// Throws Error(IoError) if the file cannot be read.
ComparisonPlan read_plan(const std::filesystem::path& path);
void write_plan(const std::filesystem::path& path, const ComparisonPlan& plan);

/// Two columns x,f with an optional header row; x strictly increasing from 0.
Density read_tabulated_density(const std::filesystem::path& path);

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double v);

/// {query, value_rational, value_float}
nlohmann::json rational_record(const std::string& query, const Rational& value);

/// Comma-separated rows of pre-formatted cells. Throws Error(IoError) if the
/// file cannot be opened.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);
  void row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace partrec::io
