#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mvge/cli.hpp"
#include "mvge/config_json.hpp"
#include "mvge/errors.hpp"
#include "mvge/eval.hpp"
#include "mvge/homophily.hpp"
#include "mvge/model.hpp"
#include "mvge/synth.hpp"

namespace py = pybind11;
using namespace mvge;

namespace {

MVGEConfig config_from(const std::string& json_text) {
  if (json_text.empty()) return {};
  return config_from_json(nlohmann::json::parse(json_text));
}

const Labels& labels_of(const Dataset& ds) {
  if (!ds.labels) throw ValidationError("dataset has no labels");
  return *ds.labels;
}

Eigen::Matrix<std::int64_t, Eigen::Dynamic, 2, Eigen::RowMajor> edge_array(const Graph& g) {
  const auto e = g.undirected_edges();
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 2, Eigen::RowMajor> out(static_cast<Eigen::Index>(e.size()), 2);
  for (std::size_t i = 0; i < e.size(); ++i) {
    out(static_cast<Eigen::Index>(i), 0) = e[i].first;
    out(static_cast<Eigen::Index>(i), 1) = e[i].second;
  }
  return out;
}

py::dict report_dict(const EvalReport& r) {
  py::dict d;
  d["task"] = r.task;
  d["metric"] = r.metric;
  d["scores"] = r.scores;
  d["mean"] = r.mean;
  d["std"] = r.std;
  return d;
}

}  // namespace

PYBIND11_MODULE(_mvge, m) {
  m.doc() = "Multi-view graph embedding core";
  m.attr("__version__") = kToolVersion;

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<Dataset>(m, "Dataset")
      .def_readonly("name", &Dataset::name)
      .def_property_readonly("num_nodes", &Dataset::num_nodes)
      .def_property_readonly("num_edges", [](const Dataset& d) { return d.graph.num_edges(); })
      .def_property_readonly("features", [](const Dataset& d) { return d.features; })
      .def_property_readonly("edges", [](const Dataset& d) { return edge_array(d.graph); })
      .def_property_readonly("labels",
                             [](const Dataset& d) -> std::optional<std::vector<int>> {
                               if (!d.labels) return std::nullopt;
                               return d.labels->values;
                             })
      .def_property_readonly("num_classes",
                             [](const Dataset& d) { return d.labels ? d.labels->num_classes : 0; })
      .def("save", [](const Dataset& d, const std::filesystem::path& dir) { save_dataset(d, dir); },
           py::arg("dir"));

  m.def("load_dataset", [](const std::filesystem::path& dir) { return load_dataset(dir); },
        py::arg("dir"));

  m.def(
      "generate_synthetic",
      [](std::size_t n, int c, double h, double d, std::size_t f, double sep, double noise,
         std::uint64_t seed) {
        SynthSpec s;
        s.num_nodes = n;
        s.num_classes = c;
        s.target_homophily = h;
        s.avg_degree = d;
        s.feature_dim = f;
        s.class_separation = sep;
        s.noise_sigma = noise;
        s.seed = seed;
        return generate_synthetic(s);
      },
      py::arg("num_nodes") = SynthSpec{}.num_nodes, py::arg("num_classes") = SynthSpec{}.num_classes,
      py::arg("homophily") = SynthSpec{}.target_homophily, py::arg("avg_degree") = SynthSpec{}.avg_degree,
      py::arg("feature_dim") = SynthSpec{}.feature_dim,
      py::arg("class_separation") = SynthSpec{}.class_separation,
      py::arg("noise_sigma") = SynthSpec{}.noise_sigma, py::arg("seed") = 0);

  m.def("global_homophily", [](const Dataset& d) { return global_homophily(d.graph, labels_of(d)); });
  m.def("local_homophily", [](const Dataset& d) { return local_homophily(d.graph, labels_of(d)); });

  m.def("default_config", [] { return config_to_json(MVGEConfig{}).dump(); },
        "Default training config as a JSON string.");

  m.def(
      "train",
      [](const Dataset& d, const std::string& config_json) {
        const MVGEConfig cfg = config_from(config_json);
        TrainResult r;
        {
          py::gil_scoped_release release;
          r = train(d, cfg);
        }
        py::dict out;
        out["ego"] = r.embeddings.ego;
        out["agg"] = r.embeddings.agg;
        out["merged"] = r.embeddings.merged;
        std::vector<std::vector<double>> trace;
        for (const auto& e : r.trace.epochs) trace.push_back({e.ego, e.agg, e.adj, e.total});
        out["trace"] = trace;
        return out;
      },
      py::arg("dataset"), py::arg("config_json") = "",
      "Train embeddings. Returns a dict with ego, agg, merged arrays and the per-epoch "
      "trace rows (l_ego, l_agg, l_s, l_total).");

  m.def(
      "node_classification_eval",
      [](const Matrix& h, const Dataset& d, std::size_t repeats, double train_fraction,
         std::uint64_t seed) {
        SplitSpec s = SplitSpec::defaults(EvalTask::kNode, seed);
        s.repeats = repeats;
        s.train_fraction = train_fraction;
        return report_dict(node_classification_eval(h, labels_of(d), s));
      },
      py::arg("embeddings"), py::arg("dataset"), py::arg("repeats") = 10,
      py::arg("train_fraction") = 0.3, py::arg("seed") = 0);

  m.def("roc_auc", [](const std::vector<double>& s, const std::vector<int>& y) { return roc_auc(s, y); });
  m.def("micro_f1", [](const std::vector<int>& p, const std::vector<int>& y) { return micro_f1(p, y); });
  m.def("embedding_dim_std", [](const Matrix& h) { return embedding_dim_std(h); });

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the mvge command line in-process. Returns (exit_code, stdout, stderr).");
}
