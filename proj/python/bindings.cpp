// Python bindings for the rieszlab core: kernels, weights, shapes, the
// potential operator, Morrey norms, Muckenhoupt diagnostics, the Hardy
// machinery, and the config-driven experiment runner.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rieszlab/common.hpp"
#include "rieszlab/conditions.hpp"
#include "rieszlab/grids.hpp"
#include "rieszlab/hardy.hpp"
#include "rieszlab/harness.hpp"
#include "rieszlab/kernel.hpp"
#include "rieszlab/operators.hpp"
#include "rieszlab/report.hpp"
#include "rieszlab/spaces.hpp"
#include "rieszlab/testfunc.hpp"
#include "rieszlab/weight.hpp"

namespace py = pybind11;

namespace rieszlab {
namespace {

Point to_point(const std::vector<double>& v) {
  if (v.size() > 3) {
    throw ConfigError("points have at most three coordinates");
  }
  Point x{0.0, 0.0, 0.0};
  for (size_t i = 0; i < v.size(); ++i) {
    x[i] = v[i];
  }
  return x;
}

std::vector<Point> to_points(const std::vector<std::vector<double>>& vs) {
  std::vector<Point> out;
  out.reserve(vs.size());
  for (const auto& v : vs) {
    out.push_back(to_point(v));
  }
  return out;
}

py::dict dict_of(const ExtReal& v) {
  py::dict d;
  d["divergent"] = v.divergent;
  d["value"] = v.divergent ? 0.0 : v.value;
  return d;
}

py::dict dict_of(const NormResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["r_star"] = r.r_star;
  d["refined_value"] = r.refined_value;
  d["stable"] = r.stable;
  return d;
}

py::dict dict_of(const TailResult& t) {
  py::dict d;
  d["value"] = t.divergent ? 0.0 : t.value;
  d["est_error"] = t.err;
  d["divergent"] = t.divergent;
  d["blocks"] = t.blocks;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Numerical toolkit for generalized Riesz potentials on generalized "
      "weighted local Morrey spaces";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError",
                                            PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError",
                                       PyExc_ArithmeticError);

  py::class_<Kernel>(m, "Kernel", "Radial kernel rho(t) of the potential")
      .def_static("power", &Kernel::power, py::arg("dim"), py::arg("alpha"),
                  "rho(t) = t^alpha")
      .def_static("power_log", &Kernel::power_log, py::arg("dim"),
                  py::arg("alpha"), py::arg("beta"),
                  "rho(t) = t^alpha (1 + |ln t|)^beta")
      .def_static(
          "table",
          [](int dim, std::vector<std::pair<double, double>> rows) {
            return Kernel::table(dim, std::move(rows));
          },
          py::arg("dim"), py::arg("rows"),
          "log-log interpolated (t, rho) table")
      .def("__call__", &Kernel::operator(), py::arg("t"))
      .def("density", &Kernel::density, py::arg("t"), "rho(t) / t^n")
      .def_property_readonly("dim", &Kernel::dim)
      .def("__repr__", &Kernel::describe);

  py::class_<Weight>(m, "Weight", "Product-of-powers weight on R^n")
      .def_static("constant", &Weight::constant, py::arg("dim"),
                  py::arg("value"))
      .def_static(
          "power",
          [](int dim, double beta, const std::vector<double>& center) {
            return Weight::power(dim, beta, to_point(center));
          },
          py::arg("dim"), py::arg("beta"),
          py::arg("center") = std::vector<double>{},
          "|x - center|^beta")
      .def_static(
          "power_log",
          [](int dim, double beta, double gamma,
             const std::vector<double>& center) {
            return Weight::power_log(dim, beta, gamma, to_point(center));
          },
          py::arg("dim"), py::arg("beta"), py::arg("gamma"),
          py::arg("center") = std::vector<double>{})
      .def_static("product", &Weight::product, py::arg("a"), py::arg("b"))
      .def("__call__",
           [](const Weight& w, const std::vector<double>& x) {
             return w(to_point(x));
           },
           py::arg("x"))
      .def("pow", &Weight::pow, py::arg("e"), "pointwise power w^e")
      .def_property_readonly("dim", &Weight::dim)
      .def("__repr__", &Weight::describe);

  py::class_<PhiFunction>(m, "PhiFunction", "Morrey shape function phi(r)")
      .def_static("morrey_power", &PhiFunction::morrey_power,
                  py::arg("lambda_"), py::arg("dim"), py::arg("p"),
                  "r^{(lambda - n)/p}: the classical M_{p,lambda} shape")
      .def_static("power", &PhiFunction::power, py::arg("e"), "r^e")
      .def_static("power_log", &PhiFunction::power_log, py::arg("e"),
                  py::arg("loge"))
      .def_static(
          "table",
          [](std::vector<std::pair<double, double>> rows) {
            return PhiFunction::table(std::move(rows));
          },
          py::arg("rows"))
      .def("__call__",
           [](const PhiFunction& phi, double r) { return phi(r); },
           py::arg("r"))
      .def("pow", &PhiFunction::pow, py::arg("e"), "pointwise power phi^e")
      .def("__repr__", &PhiFunction::describe);

  py::class_<HalfLineFunction>(m, "HalfLineFunction",
                               "Nonnegative function on (0, inf)")
      .def_static("constant", &HalfLineFunction::constant, py::arg("value"))
      .def_static("power", &HalfLineFunction::power, py::arg("amplitude"),
                  py::arg("gamma"), "amplitude * t^gamma")
      .def_static("power_log", &HalfLineFunction::power_log,
                  py::arg("amplitude"), py::arg("gamma"), py::arg("delta"))
      .def_static(
          "table",
          [](std::vector<std::pair<double, double>> rows) {
            return HalfLineFunction::table(std::move(rows));
          },
          py::arg("rows"))
      .def("__call__", &HalfLineFunction::operator(), py::arg("t"))
      .def_property_readonly("non_decreasing",
                             &HalfLineFunction::non_decreasing)
      .def_property_readonly("in_cone_a", &HalfLineFunction::in_cone_a)
      .def("__repr__", &HalfLineFunction::describe);

  py::class_<TestFunction>(m, "TestFunction",
                           "Finite sum of radial components")
      .def("__call__",
           [](const TestFunction& f, const std::vector<double>& x) {
             return f(to_point(x));
           },
           py::arg("x"))
      .def_property_readonly("dim", &TestFunction::dim)
      .def("__repr__", &TestFunction::describe);

  m.def("library_function", &library_function, py::arg("id"),
        py::arg("dim") = 1,
        "Fixed test-function library: zero, indicator-half, indicator-unit, "
        "indicator-double, gaussian, bump, outer-tail");

  m.def(
      "tail_integral",
      [](const Kernel& k, double tol) { return dict_of(tail_integral(k, tol)); },
      py::arg("kernel"), py::arg("tol") = 1e-8,
      "integral_1^inf rho(t) t^{-n-1} dt with divergence verdict");

  m.def(
      "tilde_rho",
      [](const Kernel& k, double r, double tol) {
        return dict_of(tilde_rho(k, r, tol));
      },
      py::arg("kernel"), py::arg("r"), py::arg("tol") = 1e-8,
      "r^n integral_r^inf rho(t) t^{-n-1} dt");

  m.def(
      "riesz_apply",
      [](const TestFunction& f, const Kernel& k, const std::vector<double>& x,
         double tol) {
        QuadratureSpec spec;
        spec.tolerance = tol;
        return riesz_apply(f, k, to_point(x), spec);
      },
      py::arg("f"), py::arg("kernel"), py::arg("x"), py::arg("tol") = 1e-9,
      "I_rho f(x) = integral rho(|x-y|) |x-y|^{-n} f(y) dy");

  m.def(
      "maximal_apply",
      [](const TestFunction& f, const std::vector<double>& x) {
        return dict_of(maximal_apply(f, to_point(x)));
      },
      py::arg("f"), py::arg("x"),
      "Centered Hardy-Littlewood maximal function over the default radii");

  m.def(
      "morrey_norm_local",
      [](const TestFunction& f, double p, const PhiFunction& phi,
         const Weight& w, double power, const std::vector<double>& x0,
         double tol) {
        return dict_of(morrey_norm_local(make_view(f), p, phi, w, power,
                                         to_point(x0), default_ball_radii(),
                                         tol));
      },
      py::arg("f"), py::arg("p"), py::arg("phi"), py::arg("w"),
      py::arg("power"), py::arg("x0") = std::vector<double>{},
      py::arg("tol") = 1e-8,
      "sup_r phi(r)^{-1} (w^power B(x0,r))^{-1/p} ||f||_{L_p(w^power, B)}");

  m.def(
      "weak_morrey_norm_local",
      [](const TestFunction& f, double q, const PhiFunction& phi,
         const Weight& w, double power, const std::vector<double>& x0) {
        return dict_of(
            weak_morrey_norm_local(make_view(f), q, phi, w, power,
                                   to_point(x0)));
      },
      py::arg("f"), py::arg("q"), py::arg("phi"), py::arg("w"),
      py::arg("power"), py::arg("x0") = std::vector<double>{},
      "Same outer supremum with the weak L_q norm inside");

  m.def(
      "morrey_norm_global",
      [](const TestFunction& f, double p, const PhiFunction& phi,
         const Weight& w, double power,
         const std::vector<std::vector<double>>& centers, double tol) {
        return dict_of(morrey_norm_global(make_view(f), p, phi, w, power,
                                          to_points(centers),
                                          default_ball_radii(), tol));
      },
      py::arg("f"), py::arg("p"), py::arg("phi"), py::arg("w"),
      py::arg("power"),
      py::arg("centers") = std::vector<std::vector<double>>{{0.0}},
      py::arg("tol") = 1e-8,
      "Adds the supremum over centers to the local norm");

  m.def(
      "apq_characteristic",
      [](const Weight& w, double p, double q, double tol) {
        const ApqReport rep =
            apq_characteristic(w, p, q, default_ball_grid(w.dim()), tol);
        py::dict d;
        d["value"] = dict_of(rep.value);
        d["refined_value"] = rep.refined_value;
        d["stable"] = rep.stable;
        d["p"] = rep.p;
        d["q"] = rep.q;
        return d;
      },
      py::arg("w"), py::arg("p"), py::arg("q"), py::arg("tol") = 1e-8,
      "Muckenhoupt A_{p,q} characteristic over the default ball grid");

  m.def(
      "supremal_transform",
      [](const HalfLineFunction& g, double t) {
        return dict_of(supremal_transform(g, t));
      },
      py::arg("g"), py::arg("t"), "ess sup_{s > t} g(s)");

  m.def(
      "weighted_hardy",
      [](const HalfLineFunction& g, const HalfLineFunction& w, double t,
         double tol) { return dict_of(weighted_hardy(g, w, t, tol)); },
      py::arg("g"), py::arg("w"), py::arg("t"), py::arg("tol") = 1e-10,
      "H_w g(t) = integral_t^inf g(s) w(s) ds");

  m.def(
      "best_constant_B",
      [](const HalfLineFunction& w1, const HalfLineFunction& w2,
         const HalfLineFunction& w) {
        const BestConstantReport rep = best_constant_B(w1, w2, w);
        py::dict d;
        d["value"] = dict_of(rep.value);
        d["t_star"] = rep.t_star;
        return d;
      },
      py::arg("w1"), py::arg("w2"), py::arg("w"),
      "sup_t w2(t) integral_t^inf w(s) / (ess sup_{tau>s} w1(tau)) ds");

  m.def("preset_names", &preset_names, "Built-in experiment preset names");

  m.def(
      "run_experiment_json",
      [](const std::string& config_text) {
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(config_text);
        } catch (const nlohmann::json::parse_error& e) {
          throw ConfigError(std::string("config: ") + e.what());
        }
        const ExperimentConfig cfg = parse_config(j);
        const BoundednessReport rep = run_experiment(cfg);
        return to_json(rep).dump(2);
      },
      py::arg("config"),
      "Runs a boundedness experiment from a JSON config string and returns "
      "the JSON report");
}

}  // namespace rieszlab
