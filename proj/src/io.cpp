#include "partrec/io.hpp"

#include "partrec/error.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

namespace partrec::io {

using nlohmann::json;

ComparisonPlan plan_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("indices") || !doc.contains("comparison_sets")) {
    throw Error(ErrorCode::ParseError, "plan needs 'indices' and 'comparison_sets'");
  }
  const auto& idx = doc.at("indices");
  const auto& sets = doc.at("comparison_sets");
  if (!idx.is_array() || !sets.is_array()) throw Error(ErrorCode::ParseError, "plan fields must be arrays");
  ComparisonPlan plan;
  for (const auto& v : idx) {
    if (!v.is_number_integer()) throw Error(ErrorCode::ParseError, "indices must be integers");
    plan.indices.push_back(v.get<Index>());
  }
  for (const auto& set : sets) {
    if (!set.is_array()) throw Error(ErrorCode::ParseError, "each comparison set must be an array");
    std::vector<Index> members;
    for (const auto& v : set) {
      if (!v.is_number_integer()) throw Error(ErrorCode::ParseError, "set elements must be integers");
      members.push_back(v.get<Index>());
    }
    plan.comparison_sets.push_back(std::move(members));
  }
  return plan;
}

json plan_to_json(const ComparisonPlan& plan) {
  return json{{"indices", plan.indices}, {"comparison_sets", plan.comparison_sets}};
}

ComparisonPlan read_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return plan_from_json(doc);
}

void write_plan(const std::filesystem::path& path, const ComparisonPlan& plan) {
  write_json(path, plan_to_json(plan));
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

bool parse_double(const std::string& text, double& out) {
  const auto t = trim(text);
  if (t.empty()) return false;
  const auto* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

Density read_tabulated_density(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::vector<double> xs, fs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(lineno) + ": expected x,f");
    }
    double x = 0.0, f = 0.0;
    const bool ok = parse_double(line.substr(0, comma), x) && parse_double(line.substr(comma + 1), f);
    if (!ok) {
      if (lineno == 1 && xs.empty()) continue;  // header
      throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(lineno) + ": not numeric");
    }
    xs.push_back(x);
    fs.push_back(f);
  }
  return tabulated(std::move(xs), std::move(fs), path.stem().string());
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json rational_record(const std::string& query, const Rational& value) {
  return json{{"query", query}, {"value_rational", to_string(value)}, {"value_float", to_double(value)}};
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : out_(path, std::ios::binary) {
  if (!out_) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
  if (!out_) throw Error(ErrorCode::IoError, "write failed");
}

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace partrec::io
