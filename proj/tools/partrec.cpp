#include "partrec/discrete.hpp"
#include "partrec/distributions.hpp"
#include "partrec/error.hpp"
#include "partrec/exact.hpp"
#include "partrec/io.hpp"
#include "partrec/oracle.hpp"
#include "partrec/plan.hpp"
#include "partrec/simulate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace partrec;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr double kDkwAlpha = 1e-6;

enum Exit { kOk = 0, kDomain = 1, kUsage = 2 };

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::IoError:
    case ErrorCode::InvalidConfig:
    case ErrorCode::UnknownFamily:
    case ErrorCode::BadParams:
      return kUsage;
    default:
      return kDomain;
  }
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

std::string fmt(double v) { return io::format_double(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }

Density load_density(const std::string& spec) {
  if (spec.size() > 4 && spec.substr(spec.size() - 4) == ".csv") return io::read_tabulated_density(spec);
  return builtin_from_spec(spec);
}

ValidatedPlan load_plan(const std::string& path) { return validate_or_throw(io::read_plan(path)); }

json plan_echo(const ValidatedPlan& plan) {
  return json{{"hash", hex(plan.digest())}, {"length", plan.size()}};
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error(ErrorCode::IoError, "cannot create " + dir.string());
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& plan_path) {
  const auto raw = io::read_plan(plan_path);
  auto result = validate(raw);
  if (auto* report = std::get_if<ValidationReport>(&result)) {
    std::cout << "invalid plan\n";
    for (const auto& v : report->violations) {
      std::cout << to_string(v.kind) << " at t=" << v.position << ": " << v.detail << '\n';
    }
    return kDomain;
  }
  const auto& plan = std::get<ValidatedPlan>(result);
  std::cout << "valid plan, hash " << hex(plan.digest()) << '\n';
  std::cout << "t,n_t,c,I_t\n";
  double intensity = 0.0;
  for (std::size_t t = 1; t <= plan.size(); ++t) {
    intensity += 1.0 / static_cast<double>(plan.cardinality(t));
    std::cout << t << ',' << plan.index(t) << ',' << plan.cardinality(t) << ',' << fmt(intensity) << '\n';
  }
  if (plan.size() <= 200) std::cout << "I_" << plan.size() << " = " << to_string(cumulative_intensity(plan, plan.size())) << '\n';
  return kOk;
}

struct ExactArgs {
  std::string plan;
  std::vector<std::size_t> positions;
  std::optional<double> x;
  std::string density = "uniform01";
  std::optional<std::size_t> r;
  std::optional<std::size_t> tmax;
};

int cmd_exact(const ExactArgs& a) {
  const auto plan = load_plan(a.plan);
  const auto density = load_density(a.density);
  json out;
  out["config"] = {{"plan", plan_echo(plan)}, {"positions", a.positions}, {"density", density.name()},
                   {"version", kVersion}};
  if (a.x) out["config"]["x"] = *a.x;

  if (!a.positions.empty()) {
    out["joint"] = io::rational_record(join(a.positions), joint_record_prob(plan, a.positions));
    json singles = json::array();
    for (auto t : a.positions) singles.push_back(io::rational_record(std::to_string(t), record_prob(plan, t)));
    out["marginals"] = singles;
    if (a.x) {
      out["bounded"] = {{"query", join(a.positions)},
                        {"x", *a.x},
                        {"value_float", joint_record_prob_bounded(plan, a.positions, *a.x, density)}};
    }
    const std::size_t j = a.positions.back();
    const auto m = record_count_moments_exact(plan, j);
    out["record_count"] = {{"j", j},
                           {"mean", io::rational_record("E R_j", m.mean)},
                           {"variance", io::rational_record("var R_j", m.variance)}};
  }

  if (a.r) {
    const std::size_t tmax = a.tmax.value_or(plan.size());
    out["config"]["r"] = *a.r;
    out["config"]["tmax"] = tmax;
    const auto pmf = record_time_pmf(plan, *a.r, tmax);
    json rows = json::array();
    for (const auto& e : pmf.entries) {
      rows.push_back({{"t", e.position}, {"n_t", e.time_index}, {"probability", e.probability}});
    }
    out["record_time"] = {{"r", *a.r}, {"pmf", rows}, {"residual", pmf.residual}};
    if (a.x) {
      json cdf;
      for (auto [name, e] : {std::pair{"cardinality", CdfExponent::Cardinality},
                             std::pair{"time_index", CdfExponent::TimeIndex}}) {
        const auto b = record_value_cdf(plan, pmf, *a.x, density, e);
        cdf[name] = {{"lower", b.lower}, {"upper", b.upper}, {"tight_upper", b.tight_upper}};
      }
      out["record_value_cdf"] = cdf;
    }
  }
  std::cout << out.dump(2) << '\n';
  return kOk;
}

struct SimArgs {
  std::string plan;
  std::string density;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> positions;
  std::size_t r = 1;
  std::size_t horizon = 0;
  unsigned threads = 1;
  double z = 4.0;
  std::vector<double> grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::string out;
};

int cmd_simulate(const SimArgs& a) {
  const auto plan = load_plan(a.plan);
  SimConfig cfg{.plan = plan, .density = load_density(a.density), .replications = a.n, .horizon = a.horizon,
                .master_seed = a.seed};
  cfg.threads = a.threads;
  cfg.z = a.z;
  cfg.collect = {.trajectory = true, .r_max = a.r};
  if (!a.positions.empty()) cfg.joint_queries = {a.positions};
  check_config(cfg);
  const fs::path dir(a.out);
  prepare_dir(dir);

  const RunResult res = run(cfg);
  const std::size_t horizon = res.horizon;
  bool pass = true;

  json freq_rows = json::array();
  {
    io::CsvWriter csv(dir / "freq.csv");
    csv.row({"t", "n_t", "c", "hits", "freq", "target", "ci_radius", "pass"});
    for (std::size_t t = 1; t <= horizon; ++t) {
      const double target = 1.0 / static_cast<double>(plan.cardinality(t));
      const double p = res.event_freq(t);
      const double radius = cfg.z * std::sqrt(target * (1.0 - target) / static_cast<double>(res.replications));
      const bool ok = std::abs(p - target) <= radius;
      pass = pass && ok;
      csv.row({std::to_string(t), std::to_string(plan.index(t)), std::to_string(plan.cardinality(t)),
               fmt(res.event_hits[t - 1]), fmt(p), fmt(target), fmt(radius), ok ? "1" : "0"});
      if (!ok) freq_rows.push_back(t);
    }
  }

  {
    const auto traj = strong_law_trajectory(plan, res);
    io::CsvWriter csv(dir / "trajectory.csv");
    csv.row({"j", "ratio", "ci"});
    for (const auto& pt : traj) csv.row({std::to_string(pt.j), fmt(pt.mean_ratio), fmt(pt.ci_radius)});
  }

  json ecdf_summary;
  if (a.r >= 1) {
    const auto curve = empirical_record_value_cdf(res, a.r, a.grid);
    const auto pmf = record_time_pmf(plan, a.r, horizon);
    const double dkw = curve.dkw_radius(kDkwAlpha);
    double worst = 0.0;
    bool ok = true;
    io::CsvWriter csv(dir / "ecdf.csv");
    csv.row({"x", "ecdf", "series_lower", "series_tight_upper", "series_time_index", "dkw_radius"});
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
      const double x = curve.grid[i];
      const auto c = record_value_cdf(plan, pmf, x, cfg.density, CdfExponent::Cardinality);
      const auto n = record_value_cdf(plan, pmf, x, cfg.density, CdfExponent::TimeIndex);
      csv.row({fmt(x), fmt(curve.values[i]), fmt(c.lower), fmt(c.tight_upper), fmt(n.lower), fmt(dkw)});
      worst = std::max(worst, std::abs(curve.values[i] - c.lower));
      ok = ok && std::abs(curve.values[i] - c.lower) <= dkw + (c.tight_upper - c.lower);
    }
    pass = pass && ok;
    ecdf_summary = {{"r", a.r},
                    {"max_abs_deviation", worst},
                    {"dkw_radius", dkw},
                    {"no_record_mass", curve.no_record_mass},
                    {"pmf_residual", pmf.residual},
                    {"pass", ok}};
  }

  json summary;
  summary["config"] = {{"command", "simulate"},
                       {"plan", plan_echo(plan)},
                       {"density", cfg.density.name()},
                       {"replications", cfg.replications},
                       {"seed", cfg.master_seed},
                       {"horizon", horizon},
                       {"positions", a.positions},
                       {"r", a.r},
                       {"grid", a.grid},
                       {"tolerances", {{"z", cfg.z}, {"dkw_alpha", kDkwAlpha}}},
                       {"version", kVersion}};
  const auto moments = record_count_moments(plan, horizon);
  const double mean_radius = cfg.z * std::sqrt(moments.variance / static_cast<double>(res.replications));
  const bool mean_ok = std::abs(res.count_mean() - moments.mean) <= mean_radius;
  pass = pass && mean_ok;
  summary["record_count"] = {{"j", horizon},
                             {"mean", res.count_mean()},
                             {"target_mean", moments.mean},
                             {"ci_radius", mean_radius},
                             {"variance", res.count_var()},
                             {"target_variance", moments.variance},
                             {"pass", mean_ok}};
  summary["frequencies"] = {{"positions", horizon}, {"failing", freq_rows}};
  if (!a.positions.empty()) {
    const Rational target = joint_record_prob(plan, a.positions);
    const double p = res.joint_freq(0);
    const double t = to_double(target);
    const double radius = cfg.z * std::sqrt(t * (1.0 - t) / static_cast<double>(res.replications));
    const bool ok = std::abs(p - t) <= radius;
    pass = pass && ok;
    summary["joint"] = {{"positions", a.positions}, {"estimate", p},          {"target", to_string(target)},
                        {"target_float", t},        {"ci_radius", radius},    {"pass", ok}};
  }
  if (!ecdf_summary.is_null()) summary["ecdf"] = ecdf_summary;
  summary["ties"] = res.ties;
  summary["pass"] = pass;
  io::write_json(dir / "summary.json", summary);
  std::cout << (pass ? "PASS" : "FAIL") << " simulate: " << (dir / "summary.json").string() << '\n';
  return pass ? kOk : kDomain;
}

struct SweepArgs {
  std::string plan;
  std::vector<std::size_t> positions;
  std::string density;
  std::vector<int> m;
  std::vector<int> r{1, 2, 3};
  unsigned threads = 1;
  std::string out;
};

int cmd_discrete_sweep(const SweepArgs& a) {
  const auto plan = load_plan(a.plan);
  const auto density = load_density(a.density);
  const fs::path dir(a.out);
  prepare_dir(dir);

  const auto rows = error_sweep(plan, a.positions, density, a.m, a.threads);
  {
    io::CsvWriter csv(dir / "sweep.csv");
    csv.row({"m", "p_m", "p_inf", "abs_err", "m_times_err"});
    for (const auto& row : rows) {
      csv.row({std::to_string(row.m), fmt(row.p_m), fmt(row.p_inf), fmt(row.abs_err), fmt(row.m_times_err)});
    }
  }

  json lemma = json::object();
  for (int r : a.r) {
    for (int m : a.m) {
      const auto report = lemma_checks(density, m, r);
      for (const auto& row : report.rows) {
        json entry = {{"m", m}, {"r", r}, {"deviation", row.deviation}, {"scaled", row.scaled}};
        if (row.exact_deviation) entry["exact_deviation"] = to_string(*row.exact_deviation);
        lemma[row.relation].push_back(entry);
      }
    }
  }

  json bounded = json::array();
  for (int m : a.m) {
    const auto model = discretize(density, m, Arithmetic::Float);
    bounded.push_back(
        {{"m", m},
         {"cardinality", asymptotic_bounded_deviation(plan, a.positions, model, density, CdfExponent::Cardinality)},
         {"time_index", asymptotic_bounded_deviation(plan, a.positions, model, density, CdfExponent::TimeIndex)}});
  }

  json summary;
  summary["config"] = {{"command", "discrete-sweep"}, {"plan", plan_echo(plan)}, {"positions", a.positions},
                       {"density", density.name()},   {"m", a.m},                {"r", a.r},
                       {"version", kVersion}};
  summary["lemma"] = lemma;
  summary["bounded_deviation"] = bounded;
  io::write_json(dir / "lemma.json", lemma);
  io::write_json(dir / "summary.json", summary);
  std::cout << "wrote " << (dir / "sweep.csv").string() << '\n';
  return kOk;
}

int cmd_oracle_check(const std::string& plan_path, std::size_t max_index) {
  const auto plan = load_plan(plan_path);
  const auto law = exact_joint_law(plan, max_index);
  std::size_t checked = 0, mismatches = 0;
  json failures = json::array();
  for (std::uint32_t mask = 1; mask < (1u << plan.size()); ++mask) {
    std::vector<std::size_t> subset;
    for (std::size_t t = 1; t <= plan.size(); ++t) {
      if (mask & (1u << (t - 1))) subset.push_back(t);
    }
    const auto enumerated = law.prob_all(subset);
    const auto product = joint_record_prob(plan, subset);
    ++checked;
    if (enumerated != product) {
      ++mismatches;
      failures.push_back({{"positions", subset}, {"enumerated", to_string(enumerated)}, {"product", to_string(product)}});
    }
  }
  const bool pass = mismatches == 0;
  json out = {{"config", {{"command", "oracle-check"}, {"plan", plan_echo(plan)}, {"max_index", max_index},
                          {"version", kVersion}}},
              {"subsets_checked", checked},
              {"orders", law.orders},
              {"mismatches", failures},
              {"pass", pass}};
  std::cout << out.dump(2) << '\n';
  std::cout << (pass ? "PASS" : "FAIL") << " oracle-check: " << checked << " subsets\n";
  return pass ? kOk : kDomain;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Record statistics under partial comparisons"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string validate_plan;
  auto* validate_cmd = app.add_subcommand("validate", "Check a plan file and print c(n_t) and I_t");
  validate_cmd->add_option("--plan", validate_plan, "Plan JSON file")->required();

  ExactArgs exact_args;
  auto* exact_cmd = app.add_subcommand("exact", "Exact record probabilities, moments and record-time law");
  exact_cmd->add_option("--plan", exact_args.plan)->required();
  exact_cmd->add_option("--positions", exact_args.positions)->delimiter(',');
  exact_cmd->add_option("--x", exact_args.x, "Cutoff for bounded events and record-value CDF");
  exact_cmd->add_option("--density", exact_args.density, "Built-in spec or tabulated CSV path");
  exact_cmd->add_option("--r", exact_args.r, "Record rank for L(r)");
  exact_cmd->add_option("--tmax", exact_args.tmax, "Truncation horizon for the record-time law");

  SimArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo record frequencies and curves");
  sim_cmd->add_option("--plan", sim.plan)->required();
  sim_cmd->add_option("--density", sim.density)->required();
  sim_cmd->add_option("--n", sim.n, "Replications")->required();
  sim_cmd->add_option("--seed", sim.seed)->required();
  sim_cmd->add_option("--positions", sim.positions, "Joint event to estimate")->delimiter(',');
  sim_cmd->add_option("--r", sim.r, "Record rank for the value ECDF");
  sim_cmd->add_option("--horizon", sim.horizon, "Positions to simulate (0 = all)");
  sim_cmd->add_option("--grid", sim.grid, "ECDF grid")->delimiter(',');
  sim_cmd->add_option("--z", sim.z, "Gate width in standard errors");
  sim_cmd->add_option("--threads", sim.threads);
  sim_cmd->add_option("--out", sim.out)->required();

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("discrete-sweep", "Lattice error sweep and lemma checks");
  sweep_cmd->add_option("--plan", sweep.plan)->required();
  sweep_cmd->add_option("--positions", sweep.positions)->delimiter(',')->required();
  sweep_cmd->add_option("--density", sweep.density)->required();
  sweep_cmd->add_option("--m", sweep.m)->delimiter(',')->required();
  sweep_cmd->add_option("--r", sweep.r, "Ranks for the lemma checks")->delimiter(',');
  sweep_cmd->add_option("--threads", sweep.threads);
  sweep_cmd->add_option("--out", sweep.out)->required();

  std::string oracle_plan;
  std::size_t max_index = 8;
  auto* oracle_cmd = app.add_subcommand("oracle-check", "Compare product formula with rank enumeration");
  oracle_cmd->add_option("--plan", oracle_plan)->required();
  oracle_cmd->add_option("--max-index", max_index, "Most relevant indices to enumerate (<= 10)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate_cmd) return cmd_validate(validate_plan);
    if (*exact_cmd) return cmd_exact(exact_args);
    if (*sim_cmd) return cmd_simulate(sim);
    if (*sweep_cmd) return cmd_discrete_sweep(sweep);
    if (*oracle_cmd) return cmd_oracle_check(oracle_plan, max_index);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
