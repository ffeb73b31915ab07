#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cpspdc/dispersion.hpp"
#include "cpspdc/error.hpp"
#include "cpspdc/hom.hpp"
#include "cpspdc/jsa.hpp"
#include "cpspdc/manifest.hpp"
#include "cpspdc/phasematch.hpp"
#include "cpspdc/schmidt.hpp"
#include "cpspdc/sweep.hpp"

namespace py = pybind11;
using namespace cpspdc;

namespace {

PmType pm(const std::string& text) { return parse_pm_type(text); }

JsaOptions options(const std::string& span, std::size_t n) {
  JsaOptions o;
  o.n = n;
  if (span == "auto") {
    o.span = SpanRule::automatic();
  } else if (span.rfind("fixed:", 0) == 0) {
    o.span = SpanRule::fixed(std::stod(span.substr(6)));
  } else {
    throw ValidationError("span: expected 'auto' or 'fixed:<nm>', got '" + span + "'");
  }
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Phase-matching, joint spectra and HOM interference for KTP-family crystals";
  m.attr("__version__") = std::string(version());

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<SolverError>(m, "SolverError", base.ptr());
  py::register_exception<GridBoundaryError>(m, "GridBoundaryError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<CrystalDatabase>(m, "CrystalDatabase")
      .def_property_readonly("names", &CrystalDatabase::names)
      .def_property_readonly("checksum", &CrystalDatabase::checksum)
      .def("__len__", &CrystalDatabase::size)
      .def("__contains__", [](const CrystalDatabase& db, const std::string& n) { return db.contains(n); });

  m.def("load_database", &load_database, py::arg("path"));
  m.def("default_database_path", &default_database_path);

  m.def(
      "refractive_index",
      [](const CrystalDatabase& db, const std::string& crystal, const std::string& axis, double nm) {
        return refractive_index(db, crystal, parse_axis(axis), nm);
      },
      py::arg("db"), py::arg("crystal"), py::arg("axis"), py::arg("wavelength_nm"));
  m.def(
      "group_index",
      [](const CrystalDatabase& db, const std::string& crystal, const std::string& axis, double nm) {
        return group_index(db, crystal, parse_axis(axis), nm);
      },
      py::arg("db"), py::arg("crystal"), py::arg("axis"), py::arg("wavelength_nm"));

  m.def(
      "poling_period",
      [](const CrystalDatabase& db, const std::string& crystal, const std::string& type, double l0) {
        return poling_period(db, crystal, pm(type), l0);
      },
      py::arg("db"), py::arg("crystal"), py::arg("pm_type"), py::arg("lambda0_nm"));
  m.def(
      "tilt_angle",
      [](const CrystalDatabase& db, const std::string& crystal, const std::string& type, double l0) {
        return tilt_angle(db, crystal, pm(type), l0);
      },
      py::arg("db"), py::arg("crystal"), py::arg("pm_type"), py::arg("lambda0_nm"));
  m.def(
      "gvm_wavelength",
      [](const CrystalDatabase& db, const std::string& crystal, const std::string& type) {
        return gvm_wavelength(db, crystal, pm(type));
      },
      py::arg("db"), py::arg("crystal"), py::arg("pm_type"));

  py::class_<JsaMatrix>(m, "Jsa")
      .def_property_readonly("signal_nm", [](const JsaMatrix& j) { return j.grid().signal_nm; })
      .def_property_readonly("idler_nm", [](const JsaMatrix& j) { return j.grid().idler_nm; })
      .def_property_readonly("amplitudes", &JsaMatrix::amplitudes)
      .def_property_readonly("norm_squared", &JsaMatrix::norm_squared)
      .def("transposed", &JsaMatrix::transposed)
      .def("write_csv", [](const JsaMatrix& j, const std::filesystem::path& p) { write_jsa_csv(j, p); })
      .def("write_binary", [](const JsaMatrix& j, const std::filesystem::path& p) { write_jsa_binary(j, p); });

  m.def(
      "compute_jsa",
      [](const CrystalDatabase& db, const std::string& crystal, const std::string& type, double l0,
         double length_mm, double width_nm, std::optional<double> period_nm, const std::string& span,
         std::size_t n) {
        const double period = period_nm ? *period_nm : poling_period(db, crystal, pm(type), l0);
        const PhaseMatchConfig c{crystal, pm(type), l0, period, length_mm};
        return compute_jsa(db, c, PumpSpec{l0, width_nm}, options(span, n));
      },
      py::arg("db"), py::arg("crystal"), py::arg("pm_type"), py::arg("lambda0_nm"), py::arg("length_mm"),
      py::arg("width_nm"), py::arg("period_nm") = py::none(), py::arg("span") = "auto", py::arg("n") = 200);
  m.def("read_jsa", &read_jsa, py::arg("path"));

  m.def("purity", py::overload_cast<const JsaMatrix&>(&purity), py::arg("jsa"));
  m.def(
      "schmidt_coefficients", [](const JsaMatrix& j) { return decompose(j).coefficients; }, py::arg("jsa"));
  m.def(
      "schmidt_number", [](const JsaMatrix& j) { return schmidt_number(decompose(j)); }, py::arg("jsa"));

  m.def(
      "marginals",
      [](const JsaMatrix& j) {
        const MarginalPair mp = marginal_spectra(j, EdgePolicy::NaN);
        py::dict d;
        d["signal_nm"] = mp.signal.axis_nm;
        d["signal"] = mp.signal.intensity;
        d["signal_fwhm_nm"] = mp.signal.fwhm_nm;
        d["idler_nm"] = mp.idler.axis_nm;
        d["idler"] = mp.idler.intensity;
        d["idler_fwhm_nm"] = mp.idler.fwhm_nm;
        return d;
      },
      py::arg("jsa"));
  m.def("bandwidth_nm_to_ghz", &bandwidth_nm_to_ghz, py::arg("center_nm"), py::arg("fwhm_nm"));

  py::class_<HomCurve>(m, "HomCurve")
      .def_readonly("delays_ps", &HomCurve::delays_ps)
      .def_readonly("p4", &HomCurve::p4)
      .def_readonly("baseline", &HomCurve::baseline)
      .def_readonly("minimum", &HomCurve::minimum)
      .def_readonly("visibility", &HomCurve::visibility)
      .def_readonly("dip_fwhm_ps", &HomCurve::dip_fwhm_ps)
      .def_readonly("half_depth_width_ps", &HomCurve::half_depth_width_ps);

  m.def(
      "hom",
      [](const JsaMatrix& f1, const JsaMatrix& f2, const std::string& pair,
         std::optional<std::vector<double>> delays) {
        return delays ? hom_curve(f1, f2, parse_pair(pair), *delays) : hom_curve(f1, f2, parse_pair(pair));
      },
      py::arg("f1"), py::arg("f2"), py::arg("pair") = "signal", py::arg("delays_ps") = py::none());

  m.def(
      "optimize_purity",
      [](const CrystalDatabase& db, const std::string& crystal, const std::string& type, double l0,
         std::pair<double, double> length_mm, std::pair<double, double> width_nm, std::size_t grid) {
        OptimizeOptions o;
        o.grid = grid;
        const OptimizationResult r = optimize_purity(db, crystal, pm(type), l0, {length_mm.first, length_mm.second},
                                                     {width_nm.first, width_nm.second}, o);
        return py::make_tuple(r.best_length_mm, r.best_width_nm, r.best_purity);
      },
      py::arg("db"), py::arg("crystal"), py::arg("pm_type"), py::arg("lambda0_nm"), py::arg("length_mm"),
      py::arg("width_nm"), py::arg("grid") = 25);
}
