#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sbc/config.hpp"
#include "sbc/core_math.hpp"
#include "sbc/errors.hpp"
#include "sbc/experiment.hpp"
#include "sbc/grouping.hpp"
#include "sbc/pilot_graph.hpp"
#include "sbc/version.hpp"

namespace py = pybind11;
using namespace sbc;

namespace {

ScenarioConfig config_from_text(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is, "<string>");
}

std::string config_to_text(const ScenarioConfig& c) {
  std::ostringstream os;
  write_config(os, c);
  return os.str();
}

py::dict table_columns(const MetricsTable& t) {
  const auto n = static_cast<py::ssize_t>(t.rows.size());
  py::array_t<double> snr(n), mse(n), sinr(n), se(n);
  py::array_t<int> trial(n), user(n);
  py::list scheme;
  auto a = snr.mutable_unchecked<1>();
  auto b = mse.mutable_unchecked<1>();
  auto c = sinr.mutable_unchecked<1>();
  auto d = se.mutable_unchecked<1>();
  auto e = trial.mutable_unchecked<1>();
  auto f = user.mutable_unchecked<1>();
  for (py::ssize_t i = 0; i < n; ++i) {
    const MetricsRow& r = t.rows[static_cast<std::size_t>(i)];
    scheme.append(to_string(r.scheme));
    a(i) = r.snr_db;
    b(i) = r.mse;
    c(i) = r.sinr;
    d(i) = r.se;
    e(i) = r.trial;
    f(i) = r.user;
  }
  py::dict out;
  out["scheme"] = scheme;
  out["snr_db"] = snr;
  out["trial"] = trial;
  out["user"] = user;
  out["mse"] = mse;
  out["sinr"] = sinr;
  out["se"] = se;
  return out;
}

SpatialSignature make_signature(int user, const std::vector<int>& beams, const std::vector<double>& zeta) {
  if (beams.size() != zeta.size()) throw InvalidParameter("beams and powers differ in length");
  SpatialSignature s;
  s.owner = {0, user, 0};
  s.beams = beams;
  s.zeta_on_beams = zeta;
  s.trace = s.total_power();
  return s;
}

std::vector<SpatialSignature> signatures_from(const std::vector<std::pair<std::vector<int>, std::vector<double>>>& in) {
  std::vector<SpatialSignature> out;
  for (std::size_t i = 0; i < in.size(); ++i) out.push_back(make_signature(static_cast<int>(i), in[i].first, in[i].second));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spatial-basis copilot grouping and pilot allocation simulator";
  m.attr("__version__") = kVersion;

  // Translators registered later are tried first, so the base class goes first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InvalidParameter>(m, "InvalidParameter", PyExc_ValueError);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def_readwrite("M", &ScenarioConfig::M)
      .def_readwrite("K", &ScenarioConfig::K)
      .def_readwrite("n_cells", &ScenarioConfig::n_cells)
      .def_readwrite("tau", &ScenarioConfig::tau)
      .def_readwrite("U", &ScenarioConfig::U)
      .def_readwrite("snr_db", &ScenarioConfig::snr_db)
      .def_readwrite("trials", &ScenarioConfig::trials)
      .def_readwrite("seed", &ScenarioConfig::seed)
      .def("set", [](ScenarioConfig& c, const std::string& key, const std::string& value) {
        apply_setting(c, key, value);
        validate(c);
      }, py::arg("key"), py::arg("value"))
      .def("to_text", &config_to_text)
      .def("__repr__", [](const ScenarioConfig& c) {
        return "<ScenarioConfig M=" + std::to_string(c.M) + " K=" + std::to_string(c.K) +
               " N_c=" + std::to_string(c.n_cells) + " tau=" + std::to_string(c.tau) + ">";
      });

  m.def("load_config", &parse_config_file, py::arg("path"));
  m.def("parse_config", &config_from_text, py::arg("text"));
  m.def("run_experiment", [](const ScenarioConfig& c, int threads) {
    validate(c);
    MetricsTable t;
    {
      py::gil_scoped_release release;
      t = run_experiment(c, threads);
    }
    return table_columns(t);
  }, py::arg("config"), py::arg("threads") = 1);
  m.def("run_experiment_csv", [](const ScenarioConfig& c, int threads) {
    validate(c);
    std::ostringstream os;
    {
      py::gil_scoped_release release;
      write_csv(os, run_experiment(c, threads));
    }
    return os.str();
  }, py::arg("config"), py::arg("threads") = 1);

  m.def("dft_basis", [](int M) {
    const DftBasis F(M);
    py::array_t<cplx> out({M, M});
    auto a = out.mutable_unchecked<2>();
    for (int i = 0; i < M; ++i) {
      for (int s = 0; s < M; ++s) a(i, s) = F.entry(i, s);
    }
    return out;
  }, py::arg("M"));
  m.def("analyze", [](const CVec& v) { return DftBasis(static_cast<int>(v.size())).analyze(v); }, py::arg("v"));
  m.def("array_manifold", &array_manifold, py::arg("theta"), py::arg("M"), py::arg("d_over_lambda") = 0.5);
  m.def("chordal_distance", &chordal_distance, py::arg("a"), py::arg("b"));

  m.def("group_cell", [](const std::vector<std::pair<std::vector<int>, std::vector<double>>>& sigs, int tau, int cap,
                         const std::string& mode) {
    const auto s = signatures_from(sigs);
    const ReuseCaps caps = ReuseCaps::uniform(1, tau, cap);
    if (mode != "aware" && mode != "agnostic") throw InvalidParameter("mode must be 'aware' or 'agnostic'");
    const CellGrouping g = mode == "aware" ? group_cell_power_aware(s, 0, caps) : group_cell_power_agnostic(s, 0, caps);
    std::vector<std::vector<int>> out;
    for (const auto& grp : g.groups) out.push_back(grp.members);
    return out;
  }, py::arg("signatures"), py::arg("tau"), py::arg("cap"), py::arg("mode") = "aware",
     "Groups one cell; each signature is a (beams, powers) pair indexed by user.");
  m.def("grouping_oracle", [](const std::vector<std::pair<std::vector<int>, std::vector<double>>>& sigs, int tau,
                              int cap, const std::string& mode) {
    return brute_force_grouping_oracle(signatures_from(sigs), tau, cap,
                                       mode == "aware" ? GroupingMode::kAware : GroupingMode::kAgnostic);
  }, py::arg("signatures"), py::arg("tau"), py::arg("cap"), py::arg("mode") = "aware");

  m.def("max_tau_cut", [](const std::vector<int>& cell_of, const std::vector<std::vector<double>>& weights, int tau,
                          std::uint64_t seed) {
    std::vector<double> w;
    for (const auto& row : weights) {
      if (row.size() != cell_of.size()) throw InvalidParameter("weight matrix must be square");
      w.insert(w.end(), row.begin(), row.end());
    }
    const InterferenceGraph g(cell_of, w);
    Rng rng = make_stream(seed, Stream::kAllocation);
    const PilotAssignment a = max_tau_cut_assign(g, tau, rng);
    return py::make_tuple(a.pilot_of, a.cut_value, brute_force_cut_oracle(g, tau));
  }, py::arg("cell_of"), py::arg("weights"), py::arg("tau"), py::arg("seed") = 0,
     "Returns (pilot per node, cut value, exact optimum).");
}
