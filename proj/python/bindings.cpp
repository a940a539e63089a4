#include "partrec/discrete.hpp"
#include "partrec/distributions.hpp"
#include "partrec/error.hpp"
#include "partrec/exact.hpp"
#include "partrec/oracle.hpp"
#include "partrec/plan.hpp"
#include "partrec/rng.hpp"
#include "partrec/simulate.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdio>

namespace py = pybind11;
using namespace partrec;

namespace {

// Rationals cross the boundary as "p/q"; the Python layer turns them into Fractions.
std::string q(const Rational& v) { return to_string(v); }

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Density as_density(const py::object& obj) {
  if (py::isinstance<py::str>(obj)) return builtin_from_spec(obj.cast<std::string>());
  return obj.cast<Density>();
}

CdfExponent as_exponent(const std::string& name) {
  if (name == "cardinality") return CdfExponent::Cardinality;
  if (name == "time_index") return CdfExponent::TimeIndex;
  throw Error(ErrorCode::BadParams, "exponent must be 'cardinality' or 'time_index'");
}

py::dict lemma_dict(const LemmaReport& rep) {
  py::dict out;
  for (const auto& row : rep.rows) {
    py::dict r;
    r["deviation"] = row.deviation;
    r["scaled"] = row.scaled;
    r["exact"] = row.exact_deviation ? py::object(py::str(q(*row.exact_deviation))) : py::object(py::none());
    out[py::str(row.relation)] = r;
  }
  return out;
}

py::dict probability_dict(const DiscreteProbability& p) {
  py::dict out;
  out["value"] = p.value;
  out["exact"] = p.exact ? py::object(py::str(q(*p.exact))) : py::object(py::none());
  return out;
}

SimConfig make_config(const ValidatedPlan& plan, const py::object& density, std::uint64_t replications,
                      std::uint64_t seed, std::size_t horizon, unsigned threads, double z) {
  SimConfig cfg{.plan = plan, .density = as_density(density), .replications = replications, .horizon = horizon,
                .master_seed = seed};
  cfg.threads = threads;
  cfg.z = z;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_partrec, m) {
  m.doc() = "Record statistics under partial comparisons";

  static PyObject* error_type = nullptr;
  error_type = py::exception<Error>(m, "PartrecError", PyExc_ValueError).ptr();
  Py_INCREF(error_type);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object type = py::reinterpret_borrow<py::object>(error_type);
      py::object inst = type(e.what());
      inst.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type, inst.ptr());
    }
  });

  // plan -------------------------------------------------------------------

  py::class_<ValidatedPlan>(m, "Plan")
      .def("__len__", &ValidatedPlan::size)
      .def("index", &ValidatedPlan::index, py::arg("t"))
      .def("cardinality", &ValidatedPlan::cardinality, py::arg("t"))
      .def("comparison_set", &ValidatedPlan::comparison_set, py::arg("t"))
      .def_property_readonly("indices", &ValidatedPlan::indices)
      .def_property_readonly("cardinalities", &ValidatedPlan::cardinalities)
      .def_property_readonly("digest", [](const ValidatedPlan& p) { return hex(p.digest()); })
      .def("prefix", &ValidatedPlan::prefix, py::arg("length"))
      .def("to_dict", [](const ValidatedPlan& p) {
        const auto raw = p.to_raw();
        py::dict d;
        d["indices"] = raw.indices;
        d["comparison_sets"] = raw.comparison_sets;
        return d;
      })
      .def("__repr__", [](const ValidatedPlan& p) {
        return "<Plan length=" + std::to_string(p.size()) + " digest=" + hex(p.digest()) + ">";
      });

  m.def(
      "validation_report",
      [](std::vector<Index> indices, std::vector<std::vector<Index>> sets) {
        py::list out;
        auto result = validate(ComparisonPlan{std::move(indices), std::move(sets)});
        if (auto* rep = std::get_if<ValidationReport>(&result)) {
          for (const auto& v : rep->violations) out.append(py::make_tuple(std::string(to_string(v.kind)), v.position, v.detail));
        }
        return out;
      },
      py::arg("indices"), py::arg("comparison_sets"));
  m.def(
      "validate",
      [](std::vector<Index> indices, std::vector<std::vector<Index>> sets) {
        return validate_or_throw(ComparisonPlan{std::move(indices), std::move(sets)});
      },
      py::arg("indices"), py::arg("comparison_sets"));
  m.def("total_comparison_plan", [](std::size_t j) { return validate_or_throw(total_comparison_plan(j)); }, py::arg("j"));
  m.def(
      "chained_plan", [](const std::vector<Index>& idx) { return validate_or_throw(chained_plan(idx)); },
      py::arg("indices"));
  m.def("cumulative_intensity", [](const ValidatedPlan& p, std::size_t j) { return q(cumulative_intensity(p, j)); },
        py::arg("plan"), py::arg("j"));

  // distributions ------------------------------------------------------------

  py::class_<Density>(m, "Density")
      .def_property_readonly("name", &Density::name)
      .def_property_readonly("upper", &Density::upper)
      .def("pdf", &Density::pdf)
      .def("cdf", &Density::cdf)
      .def("inverse_cdf", &Density::inverse_cdf)
      .def(
          "sample",
          [](const Density& d, std::uint64_t seed, std::size_t count, std::uint64_t stream) {
            RngStream s(seed, stream);
            return sample(d, s, count);
          },
          py::arg("seed"), py::arg("count"), py::arg("stream") = 0)
      .def("__repr__", [](const Density& d) { return "<Density " + d.name() + ">"; });
  m.def("density", [](const std::string& spec) { return builtin_from_spec(spec); }, py::arg("spec"));
  m.def("tabulated", &tabulated, py::arg("xs"), py::arg("fs"), py::arg("name") = "tabulated");
  m.def("builtin_names", &builtin_names);

  // exact --------------------------------------------------------------------

  m.def("record_prob", [](const ValidatedPlan& p, std::size_t t) { return q(record_prob(p, t)); }, py::arg("plan"),
        py::arg("t"));
  m.def(
      "joint_record_prob",
      [](const ValidatedPlan& p, const std::vector<std::size_t>& pos) { return q(joint_record_prob(p, pos)); },
      py::arg("plan"), py::arg("positions"));
  m.def(
      "joint_record_prob_bounded",
      [](const ValidatedPlan& p, const std::vector<std::size_t>& pos, double x, const py::object& d) {
        return joint_record_prob_bounded(p, pos, x, as_density(d));
      },
      py::arg("plan"), py::arg("positions"), py::arg("x"), py::arg("density"));
  m.def(
      "record_count_moments",
      [](const ValidatedPlan& p, std::size_t j) {
        const auto s = record_count_moments_exact(p, j);
        py::dict d;
        d["j"] = j;
        d["mean"] = q(s.mean);
        d["variance"] = q(s.variance);
        return d;
      },
      py::arg("plan"), py::arg("j"));
  m.def(
      "record_time_pmf",
      [](const ValidatedPlan& p, std::size_t r, std::size_t t_max) {
        const auto pmf = record_time_pmf(p, r, t_max);
        py::list entries;
        for (const auto& e : pmf.entries) entries.append(py::make_tuple(e.position, e.time_index, e.probability));
        py::dict d;
        d["r"] = r;
        d["entries"] = entries;
        d["residual"] = pmf.residual;
        return d;
      },
      py::arg("plan"), py::arg("r"), py::arg("t_max"));
  m.def(
      "record_value_cdf",
      [](const ValidatedPlan& p, std::size_t r, double x, const py::object& d, std::size_t t_max,
         const std::string& exponent) {
        const auto b = record_value_cdf(p, r, x, as_density(d), t_max, as_exponent(exponent));
        py::dict out;
        out["lower"] = b.lower;
        out["upper"] = b.upper;
        out["tight_upper"] = b.tight_upper;
        return out;
      },
      py::arg("plan"), py::arg("r"), py::arg("x"), py::arg("density"), py::arg("t_max"),
      py::arg("exponent") = "cardinality");
  m.def("harmonic_number", [](std::size_t j) { return q(harmonic_number(j)); }, py::arg("j"));

  // oracle -------------------------------------------------------------------

  m.def(
      "exact_joint",
      [](const ValidatedPlan& p, const std::vector<std::pair<std::size_t, bool>>& terms, std::size_t max_indices,
         unsigned threads) {
        std::vector<EventTerm> t;
        for (auto [pos, neg] : terms) t.push_back({pos, neg});
        py::gil_scoped_release release;
        return q(exact_joint(p, EventQuery(t), max_indices, threads));
      },
      py::arg("plan"), py::arg("terms"), py::arg("max_indices") = kMaxOracleIndices, py::arg("threads") = 1);
  m.def(
      "quadrature_bounded",
      [](const ValidatedPlan& p, const std::vector<std::size_t>& pos, double x, const py::object& d, double tol) {
        return quadrature_bounded(p, pos, x, as_density(d), tol);
      },
      py::arg("plan"), py::arg("positions"), py::arg("x"), py::arg("density"), py::arg("tol") = 1e-10);

  // simulate -----------------------------------------------------------------

  m.def(
      "simulate",
      [](const ValidatedPlan& p, const py::object& d, std::uint64_t replications, std::uint64_t seed,
         std::size_t horizon, std::vector<std::vector<std::size_t>> joint, std::size_t r_max, bool trajectory,
         unsigned threads, double z) {
        auto cfg = make_config(p, d, replications, seed, horizon, threads, z);
        cfg.joint_queries = std::move(joint);
        cfg.collect = {.trajectory = trajectory, .r_max = r_max};
        RunResult res;
        {
          py::gil_scoped_release release;
          res = run(cfg);
        }
        py::dict out;
        std::vector<double> freq;
        for (std::size_t t = 1; t <= res.horizon; ++t) freq.push_back(res.event_freq(t));
        std::vector<double> jf;
        for (std::size_t k = 0; k < res.joint_hits.size(); ++k) jf.push_back(res.joint_freq(k));
        out["replications"] = res.replications;
        out["horizon"] = res.horizon;
        out["event_freq"] = freq;
        out["joint_freq"] = jf;
        out["count_mean"] = res.count_mean();
        out["count_var"] = res.count_var();
        out["ties"] = res.ties;
        out["no_record"] = res.no_record;
        if (trajectory) {
          py::list traj;
          for (const auto& pt : strong_law_trajectory(cfg.plan, res)) {
            traj.append(py::make_tuple(pt.j, pt.mean_ratio, pt.ci_radius));
          }
          out["trajectory"] = traj;
        }
        return out;
      },
      py::arg("plan"), py::arg("density"), py::arg("replications"), py::arg("seed"), py::arg("horizon") = 0,
      py::arg("joint") = std::vector<std::vector<std::size_t>>{}, py::arg("r_max") = 0, py::arg("trajectory") = false,
      py::arg("threads") = 1, py::arg("z") = 4.0);
  m.def(
      "estimate_joint",
      [](const ValidatedPlan& p, const py::object& d, std::uint64_t replications, std::uint64_t seed,
         const std::vector<std::size_t>& pos, unsigned threads) {
        const auto cfg = make_config(p, d, replications, seed, 0, threads, 4.0);
        py::gil_scoped_release release;
        const auto e = estimate_joint(cfg, pos);
        return std::make_pair(e.value, e.ci_radius);
      },
      py::arg("plan"), py::arg("density"), py::arg("replications"), py::arg("seed"), py::arg("positions"),
      py::arg("threads") = 1);
  m.def(
      "empirical_record_value_cdf",
      [](const ValidatedPlan& p, const py::object& d, std::uint64_t replications, std::uint64_t seed, std::size_t r,
         const std::vector<double>& grid, std::size_t horizon, unsigned threads) {
        const auto cfg = make_config(p, d, replications, seed, horizon, threads, 4.0);
        EcdfCurve curve;
        {
          py::gil_scoped_release release;
          curve = empirical_record_value_cdf(cfg, r, grid);
        }
        py::dict out;
        out["grid"] = curve.grid;
        out["values"] = curve.values;
        out["no_record_mass"] = curve.no_record_mass;
        out["dkw_radius"] = curve.dkw_radius(1e-6);
        return out;
      },
      py::arg("plan"), py::arg("density"), py::arg("replications"), py::arg("seed"), py::arg("r"), py::arg("grid"),
      py::arg("horizon") = 0, py::arg("threads") = 1);

  // discrete -----------------------------------------------------------------

  m.def(
      "discretize",
      [](const py::object& d, int mres) {
        const auto model = discretize(as_density(d), mres);
        py::dict out;
        out["m"] = model.m;
        out["masses"] = model.masses;
        out["cum"] = model.cum;
        if (model.exact()) {
          std::vector<std::string> masses;
          for (const auto& v : *model.exact_masses) masses.push_back(q(v));
          out["exact_masses"] = masses;
        }
        return out;
      },
      py::arg("density"), py::arg("m"));
  m.def(
      "theta", [](const py::object& d, int mres, std::int64_t l, int r) { return theta(as_density(d), mres, l, r); },
      py::arg("density"), py::arg("m"), py::arg("l"), py::arg("r"));
  m.def(
      "lemma_checks", [](const py::object& d, int mres, int r) { return lemma_dict(lemma_checks(as_density(d), mres, r)); },
      py::arg("density"), py::arg("m"), py::arg("r"));
  m.def(
      "joint_record_prob_discrete",
      [](const ValidatedPlan& p, const std::vector<std::size_t>& pos, const py::object& d, int mres) {
        return probability_dict(joint_record_prob_discrete(p, pos, discretize(as_density(d), mres)));
      },
      py::arg("plan"), py::arg("positions"), py::arg("density"), py::arg("m"));
  m.def(
      "exhaustive_discrete_oracle",
      [](const ValidatedPlan& p, const std::vector<std::size_t>& pos, const py::object& d, int mres) {
        return probability_dict(exhaustive_discrete_oracle(p, pos, discretize(as_density(d), mres)));
      },
      py::arg("plan"), py::arg("positions"), py::arg("density"), py::arg("m"));
  m.def(
      "error_sweep",
      [](const ValidatedPlan& p, const std::vector<std::size_t>& pos, const py::object& d, const std::vector<int>& ms,
         unsigned threads) {
        const auto density = as_density(d);
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = error_sweep(p, pos, density, ms, threads);
        }
        py::list out;
        for (const auto& r : rows) {
          py::dict row;
          row["m"] = r.m;
          row["p_m"] = r.p_m;
          row["p_inf"] = r.p_inf;
          row["abs_err"] = r.abs_err;
          row["m_times_err"] = r.m_times_err;
          out.append(row);
        }
        return out;
      },
      py::arg("plan"), py::arg("positions"), py::arg("density"), py::arg("m_list"), py::arg("threads") = 1);
}
