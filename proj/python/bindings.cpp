#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "ordscore/cli.hpp"
#include "ordscore/error.hpp"
#include "ordscore/optimizer.hpp"

namespace py = pybind11;
using namespace ordscore;

namespace {

Design make_design(const Eigen::MatrixXd& x, std::vector<std::string> names) {
  if (names.empty()) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) names.push_back("x" + std::to_string(j));
  }
  if (static_cast<Eigen::Index>(names.size()) != x.cols())
    throw std::invalid_argument("one name per design column");
  return {x, std::move(names)};
}

py::dict fit_dict(const FitResult& fit) {
  py::list coefs;
  for (const auto& c : fit.coefficients) {
    py::dict d;
    d["name"] = c.name;
    d["estimate"] = c.estimate;
    d["std_error"] = c.std_error;
    d["statistic"] = c.statistic;
    d["p_value"] = c.p_value;
    coefs.append(d);
  }
  py::dict out;
  out["family"] = to_string(fit.family);
  out["coefficients"] = coefs;
  out["criterion"] = fit.criterion;
  out["df_residual"] = fit.df_residual;
  out["residual_sd"] = fit.residual_sd;
  out["fitted"] = fit.fitted;
  return out;
}

SplineMethod parse_method(const std::string& m) {
  if (m == "fritsch-carlson") return SplineMethod::FritschCarlson;
  if (m == "hyman") return SplineMethod::Hyman;
  throw std::invalid_argument("method must be 'fritsch-carlson' or 'hyman'");
}

Mapping parse_mapping(const py::dict& d) {
  const auto kind = d["kind"].cast<std::string>();
  if (kind == "integer") return Mapping::integer();
  if (kind == "quantile") return Mapping::quantile();
  if (kind == "poly") return Mapping::poly(d["degree"].cast<int>());
  if (kind == "fixed") return Mapping::fixed_scores(d["scores"].cast<std::vector<double>>());
  if (kind == "spline")
    return Mapping::spline(d.contains("knots") ? d["knots"].cast<int>() : 1,
                           parse_method(d.contains("method") ? d["method"].cast<std::string>()
                                                             : "fritsch-carlson"));
  throw std::invalid_argument("unknown mapping kind '" + kind + "'");
}

}  // namespace

PYBIND11_MODULE(_ordscore, m) {
  m.doc() = "Optimized scores for ordered factors in linear models and GLMs";

  static py::exception<Error> error(m, "OrdscoreError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.def("integer_scores", [](int k) { return integer_scores(k).vector(); }, py::arg("num_levels"));
  m.def("polynomial_contrasts", &polynomial_contrasts, py::arg("num_levels"), py::arg("degree"));
  m.def("normal_quantile", &normal_quantile, py::arg("p"));
  m.def("gh_quantile",
        [](double p, double g, double h) { return gh_quantile(p, GHParams{g, h}); },
        py::arg("p"), py::arg("g") = 0.0, py::arg("h") = 0.0);
  m.def("gh_scores",
        [](int k, double g, double h) { return gh_scores(k, GHParams{g, h}).vector(); },
        py::arg("num_levels"), py::arg("g") = 0.0, py::arg("h") = 0.0);

  py::class_<MonotoneCubic>(m, "MonotoneCubic")
      .def("__call__", &MonotoneCubic::operator(), py::arg("u"))
      .def("derivative", &MonotoneCubic::derivative, py::arg("u"))
      .def_property_readonly("knots_x", &MonotoneCubic::knots_x)
      .def_property_readonly("knots_y", &MonotoneCubic::knots_y)
      .def_property_readonly("slopes", &MonotoneCubic::slopes);

  m.def("build_spline",
        [](int k, std::vector<double> t, std::vector<double> y, const std::string& method) {
          return build_spline(SplineScoreParams{k, std::move(t), std::move(y), parse_method(method)});
        },
        py::arg("num_levels"), py::arg("t"), py::arg("y"), py::arg("method") = "fritsch-carlson");
  m.def("spline_scores",
        [](int k, std::vector<double> t, std::vector<double> y, const std::string& method) {
          const auto s =
              build_spline(SplineScoreParams{k, std::move(t), std::move(y), parse_method(method)});
          return eval_scores(s, k).vector();
        },
        py::arg("num_levels"), py::arg("t"), py::arg("y"), py::arg("method") = "fritsch-carlson");

  m.def("fit_ols",
        [](const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::vector<std::string> names) {
          return fit_dict(fit_ols(make_design(x, std::move(names)), y));
        },
        py::arg("X"), py::arg("y"), py::arg("names") = std::vector<std::string>{});
  m.def("fit_glm",
        [](const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const std::string& family,
           std::vector<std::string> names) {
          return fit_dict(fit_glm(make_design(x, std::move(names)), y, family_from_string(family)));
        },
        py::arg("X"), py::arg("y"), py::arg("family") = "gaussian",
        py::arg("names") = std::vector<std::string>{});

  m.def("optimize",
        [](const Eigen::VectorXd& response, const std::map<std::string, Eigen::VectorXd>& covariates,
           const py::list& factors, const std::string& family, std::uint64_t seed) {
          Dataset data;
          data.response_name = "y";
          data.response = response;
          ModelSpec spec;
          spec.family = family_from_string(family);
          for (const auto& [name, col] : covariates) {
            data.numeric.emplace(name, col);
            spec.covariates.push_back(name);
          }
          for (const auto& item : factors) {
            const auto d = item.cast<py::dict>();
            const auto name = d["name"].cast<std::string>();
            data.factors.emplace(name, OrderedFactor(name, d["levels"].cast<std::vector<std::string>>(),
                                                     d["codes"].cast<std::vector<int>>()));
            spec.factors.push_back({name, parse_mapping(d["mapping"].cast<py::dict>())});
          }
          OptimizeResult r;
          {
            py::gil_scoped_release release;
            SearchOptions opts;
            opts.seed = seed;
            r = optimize(spec, data, opts);
          }
          py::dict out = fit_dict(r.fit);
          py::dict scores;
          for (const auto& fs : r.scores) scores[py::str(fs.factor)] = fs.scores.vector();
          out["scores"] = scores;
          out["start_criterion"] = r.search.start_value;
          out["evaluations"] = r.total_evaluations;
          return out;
        },
        py::arg("response"), py::arg("covariates"), py::arg("factors"),
        py::arg("family") = "gaussian", py::arg("seed") = 0,
        "Each factor is a dict with name, levels, codes (1-based) and mapping "
        "({'kind': 'spline', 'knots': m} | {'kind': 'quantile'} | {'kind': 'poly', 'degree': d} | ...).");

  m.def("run",
        [](const std::filesystem::path& config, std::optional<std::string> mode,
           std::optional<std::filesystem::path> output) {
          auto c = cli::load_config(config);
          if (mode) c.mode = cli::mode_from_string(*mode);
          if (output) c.output_dir = *output;
          std::ostringstream err;
          const int code = cli::run(c, err);
          return py::make_tuple(code, err.str());
        },
        py::arg("config"), py::arg("mode") = py::none(), py::arg("output") = py::none(),
        "Run the CLI pipeline; returns (exit_code, error_text).");
}
