#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "dynaa/errors.hpp"
#include "dynaa/harness.hpp"
#include "dynaa/metrics.hpp"
#include "dynaa/synthesizer.hpp"

namespace py = pybind11;
using namespace dynaa;

namespace {

template <class Writer>
std::string to_text(Writer w, const RunReport& r) {
  std::ostringstream os;
  w(os, r);
  return os.str();
}

py::dict row_dict(const SnapshotRow& r) {
  py::dict d;
  d["trial"] = r.trial;
  d["snapshot"] = r.snapshot;
  d["n_vertices"] = r.n_vertices;
  d["n_edges"] = r.n_edges;
  d["n_sybils"] = r.n_sybils;
  d["n_victims"] = r.n_victims;
  d["n_candidates"] = r.n_candidates;
  d["n_mappings_selected"] = r.n_mappings_selected;
  d["success_prob"] = r.success_prob;
  d["success_prob_refined"] = r.success_prob_refined;
  d["edge_edit_pct"] = r.utility.edge_edit_pct;
  d["lcc_var"] = r.utility.lcc_variation;
  d["degree_kl"] = r.utility.degree_kl;
  d["truncated"] = r.truncated;
  d["retrieval_seconds"] = r.retrieval_seconds;
  d["matching_seconds"] = r.matching_seconds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_dynaa, m) {
  m.doc() = "Dynamic active-attack simulator";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def(py::init([](const py::dict& kv) {
             ExperimentConfig c;
             for (auto [k, v] : kv) {
               c.set(py::str(k).cast<std::string>(), py::str(v).cast<std::string>());
             }
             return c;
           }),
           py::arg("settings"))
      .def("set", &ExperimentConfig::set, py::arg("key"), py::arg("value"))
      .def("validate", &ExperimentConfig::validate)
      .def("resolved", &ExperimentConfig::resolved, py::arg("include_runtime") = false)
      .def_readwrite("trials", &ExperimentConfig::trials)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("noise_ratio", &ExperimentConfig::noise_ratio)
      .def_readwrite("threads", &ExperimentConfig::threads);

  m.def("parse_config", [](const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
  });

  py::class_<RunReport>(m, "RunReport")
      .def_readonly("master_seed", &RunReport::master_seed)
      .def_readonly("config_text", &RunReport::config_text)
      .def_property_readonly("rows",
                             [](const RunReport& r) {
                               py::list out;
                               for (const auto& t : r.trials) {
                                 for (const auto& row : t.rows) out.append(row_dict(row));
                               }
                               return out;
                             })
      .def_property_readonly("failed_trials",
                             [](const RunReport& r) {
                               std::vector<std::pair<std::size_t, std::string>> out;
                               for (const auto& t : r.trials) {
                                 if (t.failed) out.emplace_back(t.trial, t.error);
                               }
                               return out;
                             })
      .def_property_readonly("summary",
                             [](const RunReport& r) {
                               py::list out;
                               for (const auto& s : r.summary) {
                                 py::dict d;
                                 d["snapshot"] = s.snapshot;
                                 d["samples"] = s.samples;
                                 for (std::size_t k = 0; k < s.mean.size(); ++k) {
                                   const std::string name(kSummaryMetrics[k]);
                                   d[("mean_" + name).c_str()] = s.mean[k];
                                   d[("var_" + name).c_str()] = s.variance[k];
                                 }
                                 out.append(d);
                               }
                               return out;
                             })
      .def("results_csv", [](const RunReport& r) { return to_text(write_results_csv, r); })
      .def("timings_csv", [](const RunReport& r) { return to_text(write_timings_csv, r); })
      .def("summary_csv", [](const RunReport& r) { return to_text(write_summary_csv, r); });

  m.def("run_experiment", &run_experiment, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("aggregate", [](const std::vector<RunReport>& rs) { return aggregate(rs); });
  m.def("write_outputs", &write_outputs, py::arg("directory"), py::arg("report"),
        py::arg("config"));

  // (vertices, edges) per snapshot of a synthetic dynamic graph.
  m.def(
      "synthesize",
      [](std::size_t n0, std::size_t me, std::size_t nv, double r_delta,
         std::size_t snapshots, std::uint64_t seed) {
        SynthesizerConfig c;
        c.n0 = n0;
        c.me = me;
        c.nv = nv;
        c.r_delta = r_delta;
        c.num_snapshots = snapshots;
        c.seed = seed;
        const DynamicGraph dg = generate(c);
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (const auto& s : dg.snapshots) {
          out.emplace_back(s.graph.num_vertices(), s.graph.num_edges());
        }
        return out;
      },
      py::arg("n0") = 30, py::arg("me") = 5, py::arg("nv") = 200,
      py::arg("r_delta") = 0.05, py::arg("snapshots") = 10, py::arg("seed") = 1);

  m.def("kl_divergence", [](const std::vector<double>& p, const std::vector<double>& q) {
    return kl_divergence(p, q);
  });
}
