#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "kernmetric/embeddings.hpp"
#include "kernmetric/errors.hpp"
#include "kernmetric/kernel_config.hpp"
#include "kernmetric/kernels.hpp"
#include "kernmetric/phi_profile.hpp"
#include "kernmetric/selfcheck.hpp"
#include "kernmetric/spaces.hpp"
#include "kernmetric/stats.hpp"

namespace py = pybind11;
using namespace kernmetric;

namespace {

// Python points are either sequences of floats or DiscreteMeasure objects.
Point to_point(const py::handle& h) {
  if (py::isinstance<DiscreteMeasure>(h)) return Point(h.cast<DiscreteMeasure>());
  if (py::isinstance<py::float_>(h) || py::isinstance<py::int_>(h)) return Point(Vector{h.cast<double>()});
  return Point(h.cast<Vector>());
}

std::vector<Point> to_points(const py::iterable& xs) {
  std::vector<Point> out;
  for (const auto& h : xs) out.push_back(to_point(h));
  return out;
}

py::object from_point(const Point& p) {
  if (p.is_measure()) return py::cast(p.measure());
  return py::cast(p.coords());
}

}  // namespace

PYBIND11_MODULE(_kernmetric, m) {
  m.doc() = "Characteristic kernels, mean embeddings and kernel two-sample statistics";

  auto base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
  py::register_exception<ClassError>(m, "ClassError", base.ptr());
  py::register_exception<InjectivityError>(m, "InjectivityError", base.ptr());
  py::register_exception<NondegeneracyError>(m, "NondegeneracyError", base.ptr());
  py::register_exception<NumericError>(m, "NumericError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  py::class_<PhiProfile>(m, "PhiProfile")
      .def_static("discrete_laplace",
                  [](const std::vector<std::pair<double, double>>& atoms) {
                    std::vector<PhiProfile::Atom> a;
                    for (auto [rate, weight] : atoms) a.push_back({rate, weight});
                    return PhiProfile::discrete_laplace(std::move(a));
                  },
                  py::arg("atoms"), "atoms: list of (rate, weight)")
      .def_static("gaussian", &PhiProfile::gaussian, py::arg("alpha"))
      .def_static("exp_sqrt", &PhiProfile::exp_sqrt, py::arg("c"))
      .def_static("inverse_rational", &PhiProfile::inverse_rational, py::arg("beta"), py::arg("scale"))
      .def("__call__", &PhiProfile::operator(), py::arg("t"))
      .def("at_zero", &PhiProfile::at_zero)
      .def("is_strictly_pd_class", &PhiProfile::is_strictly_pd_class)
      .def_property_readonly("family", &PhiProfile::family)
      .def("__repr__", [](const PhiProfile& p) { return "<PhiProfile " + profile_to_json(p).dump() + ">"; });

  m.def("complete_monotonicity_check",
        [](const py::object& phi, const Vector& grid, int max_order) {
          if (py::isinstance<PhiProfile>(phi)) return complete_monotonicity_check(phi.cast<PhiProfile>(), grid, max_order);
          auto f = phi.cast<std::function<double(double)>>();
          return complete_monotonicity_check(f, grid, max_order);
        },
        py::arg("phi"), py::arg("t_grid"), py::arg("max_order"));

  py::class_<QuadratureGrid, std::shared_ptr<QuadratureGrid>>(m, "QuadratureGrid")
      .def(py::init<Vector, Vector, double, double>(), py::arg("nodes"), py::arg("weights"), py::arg("a"),
           py::arg("b"))
      .def_static("trapezoid", [](double a, double b, std::size_t n) {
        return std::make_shared<QuadratureGrid>(QuadratureGrid::trapezoid(a, b, n));
      }, py::arg("a"), py::arg("b"), py::arg("m"))
      .def_property_readonly("nodes", &QuadratureGrid::nodes)
      .def_property_readonly("weights", &QuadratureGrid::weights)
      .def_property_readonly("lower", &QuadratureGrid::lower)
      .def_property_readonly("upper", &QuadratureGrid::upper)
      .def("__len__", &QuadratureGrid::size);

  py::class_<PointSpace>(m, "PointSpace")
      .def_static("euclidean", &PointSpace::euclidean, py::arg("dim"))
      .def_static("func_lp",
                  [](const std::shared_ptr<QuadratureGrid>& g, double p) { return PointSpace::func_lp(g, p); },
                  py::arg("grid"), py::arg("p") = 2.0)
      .def_static("measures_over", &PointSpace::measures_over, py::arg("base"))
      .def_property_readonly("coordinate_count", &PointSpace::coordinate_count)
      .def("is_measure", &PointSpace::is_measure)
      .def("__eq__", &PointSpace::same_as)
      .def("__repr__", &PointSpace::describe);

  py::class_<DiscreteMeasure>(m, "DiscreteMeasure")
      .def(py::init([](const PointSpace& s, const py::iterable& pts, const Vector& w) {
             return DiscreteMeasure(s, to_points(pts), w);
           }),
           py::arg("space"), py::arg("points"), py::arg("weights"))
      .def_static("empirical",
                  [](const PointSpace& s, const py::iterable& pts) {
                    return DiscreteMeasure::empirical(s, to_points(pts));
                  },
                  py::arg("space"), py::arg("points"))
      .def_property_readonly("space", &DiscreteMeasure::space)
      .def_property_readonly("weights", &DiscreteMeasure::weights)
      .def_property_readonly("points", [](const DiscreteMeasure& d) {
        py::list out;
        for (const auto& p : d.points()) out.append(from_point(p));
        return out;
      })
      .def("total_mass", &DiscreteMeasure::total_mass)
      .def("is_probability", &DiscreteMeasure::is_probability)
      .def("scaled", &DiscreteMeasure::scaled, py::arg("factor"))
      .def("__sub__", &measure_difference)
      .def("__len__", &DiscreteMeasure::size);

  py::class_<MetricSpec>(m, "MetricSpec")
      .def_static("euclidean", &MetricSpec::euclidean, py::arg("dim"))
      .def_static("lp",
                  [](const std::shared_ptr<QuadratureGrid>& g, double p) { return MetricSpec::lp(g, p); },
                  py::arg("grid"), py::arg("p"))
      .def("__call__", [](const MetricSpec& ms, const py::handle& x, const py::handle& y) {
        return ms(to_point(x), to_point(y));
      });

  py::class_<MapSpec>(m, "MapSpec")
      .def_static("identity", &MapSpec::identity)
      .def_static("diagonal_scale", &MapSpec::diagonal_scale, py::arg("factors"))
      .def_static("linear", &MapSpec::linear, py::arg("matrix"));

  py::class_<Kernel>(m, "Kernel")
      .def("__call__", [](const Kernel& k, const py::handle& x, const py::handle& y) {
        return k(to_point(x), to_point(y));
      })
      .def_property_readonly("space", &Kernel::space)
      .def_property_readonly("kind", &Kernel::kind)
      .def_property_readonly("phi_at_zero", &Kernel::phi_at_zero)
      .def("is_bounded", &Kernel::is_bounded)
      .def("__repr__", [](const Kernel& k) { return "<Kernel " + k.kind() + " on " + k.space().describe() + ">"; });

  m.def("make_radial_hilbert", &make_radial_hilbert, py::arg("phi"), py::arg("space"));
  m.def("make_tee_radial", &make_tee_radial, py::arg("phi"), py::arg("map"), py::arg("space"));
  m.def("make_lp_operator",
        [](const PhiProfile& phi, const Kernel& k1, const std::shared_ptr<QuadratureGrid>& g, double p) {
          return make_lp_operator(phi, k1, g, p);
        },
        py::arg("phi"), py::arg("k1"), py::arg("grid"), py::arg("p"));
  m.def("make_metric_phi", &make_metric_phi, py::arg("phi"), py::arg("metric"));
  m.def("make_distance_kernel",
        [](const MetricSpec& ms, const py::handle& z0) { return make_distance_kernel(ms, to_point(z0)); },
        py::arg("metric"), py::arg("z0"));
  m.def("make_mixture", &make_mixture, py::arg("components"), "components: list of (Kernel, weight)");
  m.def("make_kme_measure", &make_kme_measure, py::arg("phi"), py::arg("k1"));
  m.def("make_fourier_measure", &make_fourier_measure, py::arg("phi"), py::arg("freqs"), py::arg("freq_weights"));
  m.def("gaussian_frequencies", &gaussian_frequencies, py::arg("dim"), py::arg("n"), py::arg("seed"));
  m.def("make_quantile_monge",
        [](const PhiProfile& phi, const std::shared_ptr<QuadratureGrid>& u) { return make_quantile_monge(phi, u); },
        py::arg("phi"), py::arg("u_grid"));
  m.def("quantile_sq_distance", &quantile_sq_distance, py::arg("mu"), py::arg("nu"));
  m.def("kernel_from_json",
        [](const std::string& text) { return kernel_from_json(nlohmann::json::parse(text), ConfigContext{}); },
        py::arg("spec"), "Build a kernel from a JSON spec string");

  m.def("gram",
        [](const Kernel& k, const py::iterable& pts) { return gram(k, to_points(pts)).entries; },
        py::arg("kernel"), py::arg("points"));
  m.def("kme_sq_norm", &kme_sq_norm, py::arg("kernel"), py::arg("mu"));
  m.def("kme_inner", &kme_inner, py::arg("kernel"), py::arg("mu"), py::arg("nu"));
  m.def("min_eigenvalue", py::overload_cast<const Eigen::MatrixXd&>(&min_eigenvalue), py::arg("matrix"));

  py::enum_<Estimator>(m, "Estimator")
      .value("exact_discrete", Estimator::exact_discrete)
      .value("u_statistic", Estimator::u_statistic)
      .value("v_statistic", Estimator::v_statistic);

  py::class_<TestResult>(m, "TestResult")
      .def_readonly("statistic", &TestResult::statistic)
      .def_readonly("p_value", &TestResult::p_value)
      .def_readonly("n_permutations", &TestResult::n_permutations)
      .def_readonly("seed", &TestResult::seed)
      .def_readonly("estimator", &TestResult::estimator)
      .def("__eq__", [](const TestResult& a, const TestResult& b) { return a == b; })
      .def("__repr__", [](const TestResult& r) {
        return "<TestResult statistic=" + std::to_string(r.statistic) + " p_value=" + std::to_string(r.p_value) + ">";
      });

  m.def("mmd", &mmd, py::arg("kernel"), py::arg("p"), py::arg("q"));
  m.def("kernel_score",
        [](const Kernel& k, const DiscreteMeasure& f, const py::handle& x) { return kernel_score(k, f, to_point(x)); },
        py::arg("kernel"), py::arg("forecast"), py::arg("x"));
  m.def("expected_score", &expected_score, py::arg("kernel"), py::arg("forecast"), py::arg("truth"));
  m.def("divergence", &divergence, py::arg("kernel"), py::arg("p"), py::arg("q"));
  m.def("mmd_u_statistic",
        [](const Kernel& k, const py::iterable& xs, const py::iterable& ys) {
          return mmd_u_statistic(k, to_points(xs), to_points(ys));
        },
        py::arg("kernel"), py::arg("xs"), py::arg("ys"));
  m.def("permutation_test",
        [](const Kernel& k, const py::iterable& xs, const py::iterable& ys, std::size_t n_perm, std::uint64_t seed) {
          const auto px = to_points(xs);
          const auto py_ = to_points(ys);
          py::gil_scoped_release release;
          return permutation_test(k, px, py_, n_perm, seed);
        },
        py::arg("kernel"), py::arg("xs"), py::arg("ys"), py::arg("n_permutations") = 999, py::arg("seed") = 0);
  m.def("energy_distance", &energy_distance, py::arg("metric"), py::arg("p"), py::arg("q"));

  m.def("selfcheck", [](bool inject_fault) {
    py::list out;
    for (const auto& r : run_invariants(inject_fault)) out.append(py::make_tuple(r.name, r.passed, r.detail));
    return out;
  }, py::arg("inject_fault") = false, "Run the built-in invariant suite; returns (name, passed, detail) tuples");
}
