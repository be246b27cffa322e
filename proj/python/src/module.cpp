#include <pybind11/iostream.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>

#include "geoclust/cli.hpp"
#include "geoclust/dissim.hpp"
#include "geoclust/error.hpp"
#include "geoclust/hclust.hpp"
#include "geoclust/inertia.hpp"
#include "geoclust/search.hpp"
#include "geoclust/sim.hpp"

namespace py = pybind11;
using namespace geoclust;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

DissimMatrix to_matrix(const Array& a, const std::string& label) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw InputError("expected a square 2-D array");
  const auto n = static_cast<std::size_t>(a.shape(0));
  std::vector<double> e(a.data(), a.data() + n * n);
  const double m = e.empty() ? 0.0 : *std::max_element(e.begin(), e.end());
  return DissimMatrix(label, n, std::move(e), m == 1.0);
}

Array to_array(const DissimMatrix& d) {
  Array out({d.size(), d.size()});
  std::copy(d.entries().begin(), d.entries().end(), out.mutable_data());
  return out;
}

std::vector<DissimMatrix> to_matrices(const std::vector<Array>& arrays) {
  std::vector<DissimMatrix> ms;
  for (std::size_t p = 0; p < arrays.size(); ++p) ms.push_back(to_matrix(arrays[p], "D" + std::to_string(p)));
  return ms;
}

UnitWeights weights_or_uniform(const std::optional<std::vector<double>>& w, std::size_t n) {
  return w ? UnitWeights(*w) : UnitWeights::uniform(n);
}

Partition from_labels(const std::vector<std::size_t>& labels) { return Partition(labels); }

std::vector<std::size_t> one_based(const Partition& p) {
  std::vector<std::size_t> out(p.labels().begin(), p.labels().end());
  for (auto& x : out) ++x;
  return out;
}

py::dict recovery_dict(const sim::RecoveryScore& s) {
  py::dict d;
  d["accuracy"] = s.accuracy;
  d["precision"] = s.precision;
  d["sensitivity"] = s.sensitivity;
  d["adjusted_rand"] = s.adjusted_rand;
  return d;
}

py::dict outcome_dict(const sim::ScenarioOutcome& o) {
  py::dict d = recovery_dict(o.score);
  d["alpha"] = o.alpha;
  d["joint_inertia"] = o.joint_inertia;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Mixed-dissimilarity Ward clustering with weight search and joint inertia";
  m.attr("__version__") = cli::kVersion;

  auto input_error = py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<DegenerateError>(m, "DegenerateError", PyExc_ArithmeticError);
  (void)input_error;

  m.def("dtw_distance", [](const std::vector<double>& a, const std::vector<double>& b) { return dtw_distance(a, b); },
        py::arg("a"), py::arg("b"));
  m.def(
      "dtw_matrix",
      [](const Array& series) {
        if (series.ndim() != 2) throw InputError("expected a 2-D array of series (units x time)");
        TimeSeriesPanel p;
        const auto n = static_cast<std::size_t>(series.shape(0));
        const auto t = static_cast<std::size_t>(series.shape(1));
        for (std::size_t i = 0; i < n; ++i) p.unit_ids.push_back(std::to_string(i));
        p.variable_names = {"x"};
        for (std::size_t j = 0; j < t; ++j) p.years.push_back(static_cast<int>(j));
        p.values.assign(series.data(), series.data() + n * t);
        p.validate();
        return to_array(feature_dissim(p, "x"));
      },
      py::arg("series"));
  m.def("haversine_km", &haversine_km, py::arg("lat1"), py::arg("lon1"), py::arg("lat2"), py::arg("lon2"));
  m.def(
      "spatial_matrix",
      [](const std::vector<double>& lat, const std::vector<double>& lon) {
        CoordinateSet cs;
        for (std::size_t i = 0; i < lat.size(); ++i) cs.unit_ids.push_back(std::to_string(i));
        cs.lat = lat;
        cs.lon = lon;
        cs.validate();
        return to_array(spatial_dissim(cs));
      },
      py::arg("lat"), py::arg("lon"));
  m.def("normalize_max", [](const Array& d) { return to_array(normalize_max(to_matrix(d, "d"))); }, py::arg("d"));

  m.def(
      "ward_merges",
      [](const Array& d, std::optional<std::vector<double>> w) {
        const auto dm = to_matrix(d, "d");
        const auto tree = ward_tree(dm, weights_or_uniform(w, dm.size()));
        std::vector<std::tuple<std::size_t, std::size_t, double>> out;
        for (const auto& mg : tree.merges()) out.emplace_back(mg.left, mg.right, mg.cost);
        return out;
      },
      py::arg("d"), py::arg("weights") = py::none(),
      "Merge sequence as (left, right, cost); leaves are 0..n-1, step s creates node n+s.");
  m.def(
      "ward_labels",
      [](const Array& d, std::size_t k, std::optional<std::vector<double>> w) {
        const auto dm = to_matrix(d, "d");
        return one_based(cut(ward_tree(dm, weights_or_uniform(w, dm.size())), k));
      },
      py::arg("d"), py::arg("k"), py::arg("weights") = py::none(), "1-based cluster labels of the K-cluster cut.");

  m.def(
      "prop_explained",
      [](const Array& d, const std::vector<std::size_t>& labels) {
        const auto dm = to_matrix(d, "d");
        return prop_explained(dm, from_labels(labels), UnitWeights::uniform(dm.size()));
      },
      py::arg("d"), py::arg("labels"));
  m.def(
      "joint_inertia_two",
      [](const Array& d0, const Array& d1, const std::vector<std::size_t>& labels,
         const std::vector<std::size_t>& pure0, const std::vector<std::size_t>& pure1) {
        const auto a = to_matrix(d0, "d0");
        const auto b = to_matrix(d1, "d1");
        return joint_inertia_two(a, b, from_labels(labels), from_labels(pure0), from_labels(pure1),
                                 UnitWeights::uniform(a.size()));
      },
      py::arg("d0"), py::arg("d1"), py::arg("labels"), py::arg("pure0"), py::arg("pure1"));

  m.def(
      "simplex_grid",
      [](std::size_t parts, double delta_alpha) {
        std::vector<std::vector<double>> out;
        for (const auto& v : simplex_grid(parts, delta_alpha)) out.emplace_back(v.weights().begin(), v.weights().end());
        return out;
      },
      py::arg("parts"), py::arg("delta_alpha"));

  m.def(
      "best_alpha",
      [](const std::vector<Array>& arrays, std::size_t k, double delta_alpha) {
        const auto ms = to_matrices(arrays);
        const auto sel = best_alpha(ms, k, delta_alpha, UnitWeights::uniform(ms.front().size()));
        py::dict d;
        d["alpha"] = std::vector<double>(sel.choice.alpha.weights().begin(), sel.choice.alpha.weights().end());
        d["q_bar"] = sel.choice.q_bar;
        d["labels"] = one_based(sel.partition);
        return d;
      },
      py::arg("matrices"), py::arg("k"), py::arg("delta_alpha") = 0.05);

  m.def(
      "cluster",
      [](const std::vector<Array>& arrays, std::optional<std::size_t> k, std::size_t k_max, double delta_alpha,
         std::optional<std::vector<std::string>> labels) {
        auto ms = to_matrices(arrays);
        if (labels) {
          if (labels->size() != ms.size()) throw InputError("one label per matrix expected");
          for (std::size_t p = 0; p < ms.size(); ++p) ms[p] = ms[p].relabeled((*labels)[p]);
        }
        const auto w = UnitWeights::uniform(ms.front().size());
        std::optional<SearchResult> elbow;
        std::optional<GridTrace> fixed;
        std::size_t kk = 0, g = 0;
        if (k) {
          kk = *k;
          fixed.emplace(evaluate_grid(ms, simplex_grid(ms.size(), delta_alpha), kk, w));
          g = best_alpha(*fixed, kk).grid_index;
        } else {
          elbow = elbow_table(ms, delta_alpha, k_max, w);
          kk = elbow->k_selected;
          g = elbow->row(kk).best.grid_index;
        }
        const GridTrace& trace = elbow ? elbow->trace : *fixed;
        std::vector<AlphaChoice> restricted;
        const auto rep = report_at(ms, trace, g, kk, w, &restricted);
        py::dict d;
        d["k"] = kk;
        d["alpha"] = rep.alpha;
        d["q_bar"] = rep.q_bar;
        d["labels"] = one_based(mixed_partition(ms, trace.grid()[g], kk, w));
        py::list rows;
        for (std::size_t p = 0; p < rep.matrices.size(); ++p) {
          const auto& r = rep.matrices[p];
          py::dict row;
          row["label"] = r.label;
          row["alpha"] = r.alpha;
          row["q"] = r.q;
          row["q_tilde"] = r.q_tilde;
          row["q_tilde_complement"] = r.q_tilde_complement;
          row["joint_inertia"] = r.joint_inertia;
          row["restricted_alpha"] =
              std::vector<double>(restricted[p].alpha.weights().begin(), restricted[p].alpha.weights().end());
          rows.append(row);
        }
        d["matrices"] = rows;
        if (elbow) {
          py::list el;
          for (const auto& r : elbow->rows) el.append(py::make_tuple(r.k, r.best.q_bar, r.delta_q_bar));
          d["elbow"] = el;
          d["knee_tied"] = elbow->knee_tied;
        }
        return d;
      },
      py::arg("matrices"), py::arg("k") = py::none(), py::arg("k_max") = 10, py::arg("delta_alpha") = 0.05,
      py::arg("labels") = py::none(),
      "Weight search plus clustering; fixed k or the elbow over 2..k_max.");

  m.def(
      "adjusted_rand_index",
      [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) { return sim::adjusted_rand_index(a, b); },
      py::arg("a"), py::arg("b"));
  m.def(
      "score_recovery",
      [](const std::vector<std::size_t>& est, const std::vector<std::size_t>& truth) {
        return recovery_dict(sim::score_recovery(est, truth));
      },
      py::arg("estimated"), py::arg("truth"));

  m.def(
      "run_replicate",
      [](double d, std::uint64_t seed, double v, double v_sp, std::size_t n, const std::string& reading,
         double delta_alpha) {
        sim::SimConfig cfg;
        cfg.d = d;
        cfg.seed = seed;
        cfg.v = v;
        cfg.v_sp = v_sp;
        cfg.n = n;
        cfg.reading = sim::parse_spread_reading(reading);
        cfg.delta_alpha = delta_alpha;
        const auto r = sim::run_replicate(cfg);
        py::dict out;
        out["chavent"] = outcome_dict(r.chavent);
        out["morelli"] = outcome_dict(r.morelli);
        return out;
      },
      py::arg("d"), py::arg("seed") = 1, py::arg("v") = 0.4, py::arg("v_sp") = 0.4, py::arg("n") = 100,
      py::arg("reading") = "variance", py::arg("delta_alpha") = 0.05);

  m.def(
      "cli_main",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"geoclust"};
        for (const auto& a : args) argv.push_back(a.c_str());
        py::scoped_ostream_redirect out_redirect;
        return cli::run(static_cast<int>(argv.size()), argv.data(), std::cout, std::cerr);
      },
      py::arg("args"), "Runs the command-line interface in-process and returns its exit code.");
}
