#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "coarsedim/cli.hpp"
#include "coarsedim/components.hpp"
#include "coarsedim/covers.hpp"
#include "coarsedim/dim_estimate.hpp"
#include "coarsedim/function_dim.hpp"
#include "coarsedim/gallery.hpp"
#include "coarsedim/io.hpp"
#include "coarsedim/proptest.hpp"

namespace py = pybind11;
using namespace coarsedim;

namespace {

// Scales arrive as ints or strings ("3/2", "inf").
Distance to_distance(const py::handle& v) {
  if (py::isinstance<py::bool_>(v)) throw py::type_error("a scale cannot be a bool");
  if (py::isinstance<py::int_>(v)) return Distance(v.cast<std::int64_t>());
  if (py::isinstance<py::str>(v)) return Distance::parse(v.cast<std::string>());
  throw py::type_error("a scale must be an int or a string");
}

std::string dist_str(const Distance& d) {
  std::ostringstream os;
  os << d;
  return os.str();
}

PointSubset subset_of(const FiniteMetricSpace& space, const std::optional<std::vector<std::string>>& names) {
  return names ? PointSubset::from_names(space, *names) : PointSubset::all(space);
}

std::vector<std::vector<std::string>> blocks_of(const ComponentPartition& p) {
  std::vector<std::vector<std::string>> out;
  for (const auto& b : p.blocks) out.push_back(b.names());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Scale-indexed covers and components of finite metric spaces";

  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<InvalidSpace>(m, "InvalidSpace", PyExc_ValueError);
  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_ValueError);
  py::register_exception<PreconditionFailure>(m, "PreconditionFailure", PyExc_RuntimeError);

  py::class_<FiniteMetricSpace>(m, "Space")
      .def_static(
          "from_matrix",
          [](std::vector<std::string> names, const std::vector<std::vector<py::object>>& rows) {
            std::vector<Distance> flat;
            for (const auto& row : rows) {
              if (row.size() != names.size()) throw FormatError("matrix rows must have one entry per point");
              for (const auto& v : row) flat.push_back(to_distance(v));
            }
            return FiniteMetricSpace::from_matrix(std::move(names), std::move(flat));
          },
          py::arg("names"), py::arg("matrix"))
      .def_static(
          "from_coordinates",
          [](const std::vector<std::vector<std::int64_t>>& rows, const std::string& norm) {
            CoordinateTable t;
            t.norm = parse_norm(norm);
            t.dims = rows.empty() ? 0 : rows[0].size();
            for (const auto& r : rows) {
              if (r.size() != t.dims) throw FormatError("coordinate rows must have equal length");
              t.values.insert(t.values.end(), r.begin(), r.end());
            }
            return FiniteMetricSpace::from_coordinates(std::move(t));
          },
          py::arg("rows"), py::arg("norm") = "l1")
      .def_static(
          "from_json", [](const std::string& text) { return space_from_json(Json::parse(text)); }, py::arg("text"))
      .def("to_json", [](const FiniteMetricSpace& s) { return space_to_json(s).dump(); })
      .def("__len__", &FiniteMetricSpace::size)
      .def("names",
           [](const FiniteMetricSpace& s) {
             std::vector<std::string> out;
             for (PointId p = 0; p < s.size(); ++p) out.push_back(s.name(p));
             return out;
           })
      .def(
          "distance",
          [](const FiniteMetricSpace& s, const std::string& a, const std::string& b) {
            return dist_str(s.distance(s.at(a), s.at(b)));
          },
          py::arg("a"), py::arg("b"))
      .def(
          "diameter",
          [](const FiniteMetricSpace& s, std::optional<std::vector<std::string>> subset) {
            return dist_str(diameter(subset_of(s, subset)));
          },
          py::arg("subset") = py::none());

  m.def("zd_ball", [](std::size_t d, std::int64_t radius) { return zd_ball(d, radius); }, py::arg("d"),
        py::arg("radius"));
  m.def("interval", [](std::int64_t lo, std::int64_t hi) { return interval_space(lo, hi); }, py::arg("lo"),
        py::arg("hi"));
  m.def(
      "torsion_sum", [](int n, std::int64_t cutoff) { return torsion_sum_space(n, cutoff); }, py::arg("n"),
      py::arg("cutoff"));
  m.def(
      "segments",
      [](int n) {
        const auto seg = segments_space(n);
        std::vector<std::string> image;
        for (PointId p = 0; p < seg.x.size(); ++p) image.push_back(seg.y.name(seg.f(p)));
        return py::make_tuple(seg.x, seg.y, image);
      },
      py::arg("n"));
  m.def(
      "tower_params",
      [](int n) {
        const auto p = tower_params(n);
        return py::make_tuple(p.r, p.s, p.t);
      },
      py::arg("n"));

  m.def(
      "r_components",
      [](const FiniteMetricSpace& s, const py::object& r, std::optional<std::vector<std::string>> subset) {
        return blocks_of(r_components(subset_of(s, subset), to_distance(r)));
      },
      py::arg("space"), py::arg("r"), py::arg("subset") = py::none());

  m.def(
      "cover",
      [](const FiniteMetricSpace& s, const std::string& base, int k, const py::object& r) {
        const auto dec = make_space_decomposer(base, k);
        return cover_to_json(dec.decompose(PointSubset::all(s), to_distance(r))).dump();
      },
      py::arg("space"), py::arg("base"), py::arg("k"), py::arg("r"),
      "k-family cover of the whole space as a JSON document");
  m.def(
      "verify_cover",
      [](const FiniteMetricSpace& s, const std::string& cover) {
        return cover_report_to_json(verify_kcover(cover_from_json(Json::parse(cover), s)), s).dump();
      },
      py::arg("space"), py::arg("cover"));

  m.def(
      "fit",
      [](const std::vector<std::pair<py::object, py::object>>& pairs, const std::string& tolerance) {
        std::vector<ProfileSample> samples;
        for (const auto& [r, b] : pairs) {
          ProfileSample s;
          s.r = to_distance(r);
          s.bound = to_distance(b);
          samples.push_back(s);
        }
        FitOptions opt;
        opt.tolerance = Rational::parse(tolerance);
        return model_to_json(fit_control_model(samples, opt)).dump();
      },
      py::arg("samples"), py::arg("tolerance") = "1/10");

  m.def(
      "proptest",
      [](const std::string& suite, std::size_t cases, std::uint64_t seed) {
        const auto report = run_proptest(suite, cases, seed);
        py::dict out;
        for (const auto& s : report.suites) out[py::str(s.suite)] = s.violations;
        return out;
      },
      py::arg("suite"), py::arg("cases"), py::arg("seed"), "Violation count per suite");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a command line; returns (exit code, stdout, stderr)");
}
