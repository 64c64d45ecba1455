#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "hlma/ellint.hpp"
#include "hlma/errors.hpp"
#include "hlma/filament.hpp"
#include "hlma/output.hpp"
#include "hlma/pullin.hpp"
#include "hlma/scenario.hpp"
#include "hlma/validate.hpp"

namespace py = pybind11;
using namespace hlma;

namespace {

Eigen::VectorXd coil_vector(const CoilSystem& c) {
  const auto v = c.currents();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

py::dict result_dict(const PullInResult& r) {
  py::dict d;
  d["model"] = std::string(to_string(r.model));
  d["lambda_p"] = r.lambda_p;
  d["beta_p"] = r.beta_p;
  d["sqrt_beta_p"] = r.sqrt_beta_p;
  d["U_p_V"] = r.voltage;
  d["q_p_m"] = r.displacement;
  d["eta0"] = r.eta0 ? py::cast(*r.eta0) : py::none();
  return d;
}

py::dict point_dict(const PullInPoint& p) {
  py::dict d;
  d["q_m"] = p.displacement;
  d["U_V"] = p.voltage;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hybrid levitation micro-actuator core";
  m.attr("__version__") = std::string(version());

  py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ModelValidityError>(m, "ModelValidityError", PyExc_ValueError);
  py::register_exception<SingularGeometryError>(m, "SingularGeometryError", PyExc_ArithmeticError);
  py::register_exception<NoPullInError>(m, "NoPullInError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const SingularSystemError& e) {
      PyErr_SetString(PyExc_ArithmeticError, e.what());
    }
  });

  m.def("complete_elliptic", [](double k) {
    const auto p = complete_elliptic(k);
    return py::make_tuple(p.K, p.E);
  }, py::arg("k"), "(K(k), E(k))");
  m.def("psi_kernel", &psi_kernel, py::arg("k"));
  m.def("phi_bracket", &phi_bracket, py::arg("k"));

  m.def("mutual_kz", [](double x1, double x2, double x3, double nu) { return mutual_kz({x1, x2, x3, nu}); },
        py::arg("x1"), py::arg("x2"), py::arg("x3"), py::arg("nu"));
  m.def("dmutual_kz_dx3",
        [](double x1, double x2, double x3, double nu) { return dmutual_kz_dx3({x1, x2, x3, nu}); },
        py::arg("x1"), py::arg("x2"), py::arg("x3"), py::arg("nu"));
  m.def("mutual_maxwell_coaxial", py::overload_cast<double, double, double>(&mutual_maxwell_coaxial),
        py::arg("r1"), py::arg("r2"), py::arg("s"));
  m.def("self_inductance_ring_normalized", &self_inductance_ring_normalized, py::arg("eps"));

  py::class_<ActuatorScenario>(m, "Scenario")
      .def_readwrite("name", &ActuatorScenario::name)
      .def_readwrite("disc_radius", &ActuatorScenario::disc_radius)
      .def_readwrite("mass", &ActuatorScenario::mass)
      .def_readwrite("grid_n", &ActuatorScenario::grid_n)
      .def_readwrite("electrode_area", &ActuatorScenario::electrode_area)
      .def_readwrite("spacing", &ActuatorScenario::spacing)
      .def_readwrite("levitation_height", &ActuatorScenario::levitation_height)
      .def_property_readonly("kappa", &ActuatorScenario::kappa)
      .def_property_readonly("xi", &ActuatorScenario::xi)
      .def_property_readonly("voltage_scale", &ActuatorScenario::voltage_scale)
      .def("to_json", [](const ActuatorScenario& s) { return scenario_json(s); })
      .def("hash", [](const ActuatorScenario& s) { return scenario_hash(s); })
      .def("mesh_centers", [](const ActuatorScenario& s) {
        const Mesh mesh = s.build_mesh();
        Eigen::MatrixXd c(static_cast<Eigen::Index>(mesh.size()), 2);
        for (std::size_t k = 0; k < mesh.size(); ++k) {
          const auto x = mesh.center(k);
          c(static_cast<Eigen::Index>(k), 0) = x[0];
          c(static_cast<Eigen::Index>(k), 1) = x[1];
        }
        return c;
      }, "Element centres (m), one row per element.")
      .def("eddy_currents", [](const ActuatorScenario& s) {
        const Mesh mesh = s.build_mesh();
        const CoilSystem coils = s.build_coils();
        return solve(assemble(mesh, coils, Pose::at_height(s.levitation_height)), coil_vector(coils)).real();
      }, "Element currents at the levitation height, relative to the first coil current.");

  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def("parse_scenario", [](const std::string& text) { return parse_scenario(text); }, py::arg("text"));
  m.def("preliminary_design", &preliminary_design, py::arg("disc_radius") = 1.55e-3, py::arg("grid_n") = 71);
  m.def("experiment_scenario", [](const std::string& name, int grid_n) {
    for (const auto& r : experiment_records()) {
      if (r.name == name) return experiment_scenario(r, grid_n);
    }
    throw InputError("unknown experiment '" + name + "'");
  }, py::arg("name"), py::arg("grid_n") = 71);
  m.def("experiment_records", [] {
    py::list out;
    for (const auto& r : experiment_records()) {
      py::dict d;
      d["name"] = r.name;
      d["diameter_m"] = r.diameter;
      d["mass_kg"] = r.mass;
      d["levitation_height_m"] = r.levitation_height;
      d["spacing_m"] = r.spacing;
      d["xi"] = r.xi;
      d["kappa"] = r.kappa;
      d["measured"] = point_dict(r.measured);
      d["analytical"] = point_dict(r.analytical);
      d["quasi_fem"] = point_dict(r.quasi_fem);
      out.append(d);
    }
    return out;
  });

  m.def("beta_simplified", &beta_simplified, py::arg("lam"), py::arg("xi"), py::arg("kappa"));
  m.def("beta_analytical", &beta_analytical, py::arg("lam"), py::arg("xi"), py::arg("kappa"));
  m.def("pullin", [](const std::string& model, const ActuatorScenario& s, int samples) {
    const PullInRun run = run_pullin(parse_pullin_model(model), s, samples);
    py::dict d = result_dict(run.result);
    std::vector<double> lam, beta;
    for (const auto& smp : run.curve.samples) {
      if (!smp.ok) continue;
      lam.push_back(smp.lambda);
      beta.push_back(smp.beta);
    }
    d["curve_lambda"] = lam;
    d["curve_beta"] = beta;
    return d;
  }, py::arg("model"), py::arg("scenario"), py::arg("samples") = 15,
     "Pull-in point and sampled equilibrium curve for one model.");
  m.def("validate", [](bool fast, int samples) {
    ValidationOptions o;
    o.fast = fast;
    o.samples = samples;
    const ValidationReport r = run_validation(o);
    py::dict d;
    d["passed"] = r.passed();
    d["text"] = r.text();
    d["csv"] = r.csv();
    return d;
  }, py::arg("fast") = true, py::arg("samples") = 15);
}
