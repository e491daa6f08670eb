// Python bindings for gcalc.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gcalc/cochain.hpp"
#include "gcalc/config.hpp"
#include "gcalc/dw_tqft.hpp"
#include "gcalc/error.hpp"
#include "gcalc/experiments.hpp"
#include "gcalc/integrate.hpp"
#include "gcalc/moyal.hpp"
#include "gcalc/simplicial.hpp"
#include "gcalc/stochastic.hpp"
#include "gcalc/van_est.hpp"

namespace py = pybind11;
using namespace gcalc;

namespace {

Point to_point(const std::vector<double>& v) {
  if (v.size() > 3) throw Error("cochain", "points have at most 3 coordinates");
  Point p{0, 0, 0};
  for (std::size_t i = 0; i < v.size(); ++i) p[i] = v[i];
  return p;
}

// Wraps a Python callable taking a list of points (each a 3-tuple).
Cochain python_cochain(int degree, py::function f, const std::string& name) {
  return Cochain(
      degree,
      [f](PointSpan t) {
        py::gil_scoped_acquire gil;
        py::list pts;
        for (const Point& p : t) pts.append(py::make_tuple(p[0], p[1], p[2]));
        return f(pts).cast<double>();
      },
      Symmetry::none, name);
}

py::dict limit_dict(const RiemannSumResult& r) {
  py::dict d;
  d["sums"] = r.sums;
  d["mesh"] = r.mesh;
  d["cells"] = r.cells;
  d["limit"] = r.limit;
  d["order"] = r.order;
  d["orders"] = r.orders;
  d["exact"] = r.exact;
  d["converged"] = r.converged;
  return d;
}

}  // namespace

PYBIND11_MODULE(_gcalc, m) {
  m.doc() = "Groupoid cochain calculus: Riemann sums, van Est jets, Wiener integrals, DW and Moyal";

  static py::exception<Error> error_type(m, "GcalcError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error_type.ptr(), e.what());
    }
  });

  py::class_<SimplicialComplex>(m, "Complex")
      .def_property_readonly("dimension", &SimplicialComplex::dimension)
      .def_property_readonly("num_cells", &SimplicialComplex::num_cells)
      .def_property_readonly("depth", &SimplicialComplex::depth)
      .def("count", &SimplicialComplex::count)
      .def("euler_characteristic", &SimplicialComplex::euler_characteristic)
      .def("mesh_size", &SimplicialComplex::mesh_size)
      .def("subdivide",
           [](const SimplicialComplex& k, const std::string& scheme, int depth) {
             return subdivide(k, {parse_subdivision(scheme), depth});
           },
           py::arg("scheme") = "barycentric", py::arg("depth") = 1)
      .def("boundary", [](const SimplicialComplex& k) { return boundary_complex(k); })
      .def("to_json", [](const SimplicialComplex& k) { return to_json_text(k); })
      .def("__repr__", [](const SimplicialComplex& k) {
        return "<Complex " + std::string(manifold_name(k.manifold())) + " dim=" + std::to_string(k.dimension()) +
               " cells=" + std::to_string(k.num_cells()) + ">";
      });

  m.def("mesh", [](const std::string& spec) { return parse_mesh_spec(spec); }, py::arg("spec"),
        "Mesh from 'builtin:<name>[:res]' or a JSON complex file.");
  m.def("complex_from_json", [](const std::string& text) { return complex_from_json_text(text); });

  py::class_<Cochain>(m, "Cochain")
      .def_property_readonly("degree", &Cochain::degree)
      .def_property_readonly("name", &Cochain::name)
      .def("__call__",
           [](const Cochain& c, const std::vector<std::vector<double>>& pts) {
             std::vector<Point> p;
             for (const auto& v : pts) p.push_back(to_point(v));
             return c(p);
           })
      .def("antisymmetrize", [](const Cochain& c) { return antisymmetrize(c); })
      .def("coboundary", [](const Cochain& c) { return coboundary(c); });

  m.def("cochain", [](const std::string& spec) { return parse_cochain(spec); }, py::arg("spec"));
  m.def("cochain_from_callable", &python_cochain, py::arg("degree"), py::arg("f"), py::arg("name") = "python",
        "Cochain evaluating f(list of (x, y, z) tuples). Sums over it run on one thread.");

  m.def(
      "riemann_sum",
      [](const Cochain& c, const SimplicialComplex& k, unsigned threads) {
        py::gil_scoped_release release;
        return riemann_sum(c, k, threads);
      },
      py::arg("cochain"), py::arg("complex"), py::arg("threads") = 1);
  m.def(
      "refine_limit",
      [](const Cochain& c, const SimplicialComplex& k, const std::string& scheme, int depth, double tol) {
        RiemannSumResult r;
        {
          py::gil_scoped_release release;
          r = refine_limit(c, k, parse_subdivision(scheme), depth, tol, 1);
        }
        return limit_dict(r);
      },
      py::arg("cochain"), py::arg("complex"), py::arg("scheme") = "barycentric", py::arg("depth") = 4,
      py::arg("tol") = 1e-10);
  m.def("euler_sum", &euler_sum);

  m.def(
      "ve1",
      [](const Cochain& c, double x) {
        py::gil_scoped_release release;
        const Jet1 j = ve1_deg1(c, x);
        return std::tuple{j.c0, j.c1, j.c2};
      },
      py::arg("cochain"), py::arg("x"), "Jet (c0, c1, c2) of c(x, x + s) at s = 0.");

  m.def(
      "wiener_estimate",
      [](const std::string& potential, int mesh_log2, std::size_t samples, std::uint64_t seed, bool perturbed) {
        const Field V = field_from_text(potential);
        Thm21Options o;
        o.samples = samples;
        o.seed = seed;
        const auto data = perturbed ? CochainData::perturbed(V) : CochainData::feynman(V);
        Estimate e;
        {
          py::gil_scoped_release release;
          e = thm21_estimate(data, [](const std::vector<double>&) { return 1.0; },
                             TimeGrid::uniform(std::size_t{1} << mesh_log2), o);
        }
        return std::tuple{e.mean, e.stderr_};
      },
      py::arg("potential"), py::arg("mesh_log2") = 5, py::arg("samples") = 10000, py::arg("seed") = 1,
      py::arg("perturbed") = false, "E[exp(-int V)] estimate and standard error, observable 1.");

  m.def(
      "dw_partition_function",
      [](const SimplicialComplex& k, const std::string& group, const std::string& cocycle) {
        const FiniteGroup g = parse_group(group);
        CocycleTable w = cocycle == "trivial" ? CocycleTable::trivial(g) : cocycle_from_json_text(cocycle, g);
        w.validate(g);
        return partition_function(k, g, w);
      },
      py::arg("complex"), py::arg("group"), py::arg("cocycle") = "trivial");
  m.def("mednykh_oracle", [](const std::string& group, int genus) { return mednykh_oracle(parse_group(group), genus); });

  m.def(
      "star",
      [](const std::string& f, const std::string& g) { return star_series(ExactPoly::parse(f), ExactPoly::parse(g)).to_string(); },
      py::arg("f"), py::arg("g"), "Exact star product of two polynomials in p, q (hbar symbolic).");
  m.def(
      "star_value",
      [](const std::string& f, const std::string& g, double p, double q, double hbar) {
        return star_series(ExactPoly::parse(f), ExactPoly::parse(g))(p, q, hbar);
      },
      py::arg("f"), py::arg("g"), py::arg("p"), py::arg("q"), py::arg("hbar"));

  m.def("config_roundtrip", [](const std::string& text) { return to_config_text(parse_config_text(text)); });
  m.def("_run_command_json", [](const std::string& config_text) {
    const ExperimentConfig c = parse_config_text(config_text);
    CommandResult r;
    {
      py::gil_scoped_release release;
      r = run_command(c);
    }
    return std::tuple{r.report.dump(), r.exit_code};
  });
  m.def("_run_criterion_json", [](int id, std::uint64_t seed) {
    CriterionResult r;
    {
      py::gil_scoped_release release;
      r = run_criterion(id, {0, seed});
    }
    return gcalc::to_json(r).dump();
  });
}
