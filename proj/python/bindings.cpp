#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <vector>

#include "eitnoise/cli.hpp"
#include "eitnoise/config.hpp"
#include "eitnoise/entanglement_cv.hpp"
#include "eitnoise/error.hpp"
#include "eitnoise/lambda_system.hpp"
#include "eitnoise/linear_response.hpp"
#include "eitnoise/noise_spectra.hpp"
#include "eitnoise/oracle_integrator.hpp"

namespace py = pybind11;
using namespace eit;

namespace {

using Grid = std::vector<double>;

CovarianceMatrix as_cm(const Eigen::Matrix4d& v) {
  CovarianceMatrix cm;
  cm.entries = v;
  return cm;
}

Quadrature parse_quadrature(const std::string& q) {
  if (q == "amplitude") return {Quadrature::Kind::Amplitude, 0.0};
  if (q == "phase") return {Quadrature::Kind::Phase, 0.0};
  throw Error(ErrorKind::InvalidParams, "quadrature must be 'amplitude' or 'phase'");
}

template <class T, class F>
py::object map_grid(const py::array_t<double, py::array::forcecast>& w, F f) {
  if (w.ndim() == 0) return py::cast(f(*w.data()));
  py::array_t<T> out(w.request().shape);
  const auto n = static_cast<std::size_t>(w.size());
  const double* in = w.data();
  T* dst = out.mutable_data();
  for (std::size_t i = 0; i < n; ++i) dst[i] = f(in[i]);
  return std::move(out);
}

}  // namespace

PYBIND11_MODULE(eitnoise, m) {
  m.doc() = "Lambda-system EIT propagation, quantum noise and CV entanglement";

  static py::exception<Error> error(m, "EitError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = error;
      PyObject* inst = PyObject_CallFunction(exc.ptr(), "s", e.what());
      PyObject_SetAttrString(inst, "kind", py::str(to_string(e.kind())).ptr());
      PyErr_SetObject(exc.ptr(), inst);
      Py_DECREF(inst);
    }
  });

  py::enum_<NoiseModel>(m, "NoiseModel")
      .value("OffDiagonal", NoiseModel::OffDiagonal)
      .value("PopulationExchange", NoiseModel::PopulationExchange);
  py::enum_<DelayCompensation>(m, "DelayCompensation")
      .value("None_", DelayCompensation::None)
      .value("GroupDelay", DelayCompensation::GroupDelay)
      .value("Exact", DelayCompensation::Exact);
  py::enum_<Arm>(m, "Arm").value("A", Arm::A).value("B", Arm::B);

  py::class_<AtomicParams>(m, "AtomicParams")
      .def(py::init<>())
      .def_readwrite("g", &AtomicParams::g)
      .def_readwrite("N", &AtomicParams::N)
      .def_readwrite("omega_c", &AtomicParams::omega_c)
      .def_readwrite("gamma_b", &AtomicParams::gamma_b)
      .def_readwrite("gamma_c", &AtomicParams::gamma_c)
      .def_readwrite("gamma_ba", &AtomicParams::gamma_ba)
      .def_readwrite("gamma_ac", &AtomicParams::gamma_ac)
      .def_readwrite("gamma_bc_prime", &AtomicParams::gamma_bc_prime)
      .def_readwrite("gamma_bc_popexch", &AtomicParams::gamma_bc_popexch)
      .def_readwrite("gamma_total", &AtomicParams::gamma_total)
      .def_readwrite("length", &AtomicParams::length)
      .def_readwrite("c_light", &AtomicParams::c_light)
      .def("validate", [](const AtomicParams& p) { validate(p); })
      .def("with_default_rates", [](const AtomicParams& p) { return with_default_rates(p); })
      .def(py::self == py::self)
      .def("__repr__", [](const AtomicParams& p) {
        std::ostringstream s;
        s << "AtomicParams(g=" << p.g << ", N=" << p.N << ", omega_c=" << p.omega_c
          << ", gamma_ba=" << p.gamma_ba << ", gamma_bc_prime=" << p.gamma_bc_prime
          << ", length=" << p.length << ")";
        return s.str();
      });

  m.def("preset", [](const std::string& name) { return preset(name).params; },
        py::arg("name"), "Atomic parameters of a shipped preset.");
  m.def("preset_names", &preset_names);

  py::class_<BlochState>(m, "BlochState")
      .def(py::init<>())
      .def_readwrite("sigma_bb", &BlochState::sigma_bb)
      .def_readwrite("sigma_cc", &BlochState::sigma_cc)
      .def_readwrite("sigma_ba", &BlochState::sigma_ba)
      .def_readwrite("sigma_bc", &BlochState::sigma_bc)
      .def_readwrite("sigma_ac", &BlochState::sigma_ac)
      .def_property_readonly("sigma_aa", &BlochState::sigma_aa)
      .def_static("dark", &BlochState::dark)
      .def_static("excited", &BlochState::excited);

  m.def("steady_state", [](const AtomicParams& p, cplx e) { return steady_state(p, e); },
        py::arg("params"), py::arg("probe"));
  m.def("population_exchange_steady_bb", &population_exchange_steady_bb,
        py::arg("params"), py::arg("probe"));
  m.def(
      "weak_probe_consistency",
      [](const AtomicParams& p, cplx e, NoiseModel model) {
        const auto r = weak_probe_consistency(p, e, model);
        py::dict d;
        d["epsilon"] = r.epsilon;
        d["population_deficit"] = r.population_deficit;
        d["verdict"] = to_string(r.verdict);
        return d;
      },
      py::arg("params"), py::arg("probe"), py::arg("model"));

  m.def(
      "propagation_exponent",
      [](const AtomicParams& p, py::array_t<double, py::array::forcecast> w) {
        return map_grid<cplx>(w, [&](double x) { return propagation_exponent(p, x); });
      },
      py::arg("params"), py::arg("omega"));
  m.def(
      "power_transmission",
      [](const AtomicParams& p, py::array_t<double, py::array::forcecast> w, double length) {
        return map_grid<double>(w, [&](double x) { return power_transmission(p, x, length); });
      },
      py::arg("params"), py::arg("omega"), py::arg("length"));
  m.def("group_delay", &group_delay, py::arg("params"));
  m.def("transparency_width", &transparency_width, py::arg("params"), py::arg("length"));

  m.def("linear_grid", &linear_grid, py::arg("lo"), py::arg("hi"), py::arg("points"));
  m.def(
      "output_spectrum",
      [](NoiseModel model, const Grid& omega, const Grid& s_in, const AtomicParams& p,
         double length, const std::string& quadrature) {
        SpectrumSeries in;
        in.omega_grid = omega;
        in.values = s_in;
        in.quadrature = parse_quadrature(quadrature);
        return output_spectrum(model, in, p, length).values;
      },
      py::arg("model"), py::arg("omega"), py::arg("s_in"), py::arg("params"),
      py::arg("length"), py::arg("quadrature") = "amplitude");
  m.def(
      "commutation_check",
      [](NoiseModel model, const AtomicParams& p, double length, const Grid& omega) {
        const auto r = commutation_check(model, p, length, omega);
        return py::make_tuple(r.max_violation, r.passes);
      },
      py::arg("model"), py::arg("params"), py::arg("length"), py::arg("omega"));
  m.def(
      "squeezing_delay_report",
      [](double r, const AtomicParams& p, double length, const Grid& omega) {
        const auto rep = squeezing_delay_report(r, p, length, omega);
        py::dict d;
        d["s_in_squeezed"] = rep.s_in_squeezed.values;
        d["s_out_squeezed"] = rep.s_out_squeezed.values;
        d["s_in_antisqueezed"] = rep.s_in_antisqueezed.values;
        d["s_out_antisqueezed"] = rep.s_out_antisqueezed.values;
        d["delay_s"] = rep.delay_s;
        d["preservation_ratio"] = rep.preservation_ratio;
        return d;
      },
      py::arg("r"), py::arg("params"), py::arg("length"), py::arg("omega"));

  m.def("epr_pair", [](double r) { return epr_pair_from_squeezers(r).entries; }, py::arg("r"));
  m.def("symplectic_eigenvalues", &symplectic_eigenvalues, py::arg("v"));
  m.def("is_bona_fide", &is_bona_fide, py::arg("v"), py::arg("tol") = 1e-10);
  m.def("duan_criterion", [](const Eigen::Matrix4d& v) { return duan_criterion(as_cm(v)); },
        py::arg("v"));
  m.def("reid_epr_criterion",
        [](const Eigen::Matrix4d& v) { return reid_epr_criterion(as_cm(v)); }, py::arg("v"));
  m.def(
      "apply_lossy_channel",
      [](const Eigen::Matrix4d& v, Arm arm, double t, double phi) {
        return apply_lossy_channel(as_cm(v), arm, t, phi).entries;
      },
      py::arg("v"), py::arg("arm"), py::arg("transmission"), py::arg("phase"));
  m.def(
      "entanglement_delay_report",
      [](double r, const AtomicParams& p, double length, const Grid& omega,
         DelayCompensation comp) {
        EntanglementOptions opts;
        opts.compensation = comp;
        const auto rep = entanglement_delay_report(r, p, length, omega, opts);
        py::dict d;
        d["duan"] = rep.duan;
        d["reid"] = rep.reid;
        d["delay_s"] = rep.delay_s;
        d["entangled_bandwidth"] = rep.entangled_bandwidth;
        return d;
      },
      py::arg("r"), py::arg("params"), py::arg("length"), py::arg("omega"),
      py::arg("compensation") = DelayCompensation::GroupDelay);

  m.def(
      "integrate",
      [](const AtomicParams& p, cplx e, const BlochState& initial, double t_final,
         double tol) {
        const auto traj = integrate(p, e, initial, t_final, tol);
        return py::make_tuple(traj.times, traj.states);
      },
      py::arg("params"), py::arg("probe"), py::arg("initial"), py::arg("t_final"),
      py::arg("tol") = 1e-8);
  m.def(
      "step_response_susceptibility",
      [](const AtomicParams& p, double e0, double w) {
        return step_response_susceptibility(p, e0, w);
      },
      py::arg("params"), py::arg("probe_amplitude"), py::arg("omega"));
  m.def("exponent_from_response", &exponent_from_response, py::arg("params"),
        py::arg("response"));

  m.def(
      "run_cli",
      [](const std::string& subcommand, std::optional<std::string> preset_name,
         std::optional<std::string> config, std::optional<std::string> model) {
        cli::Options opts;
        opts.subcommand = subcommand;
        opts.preset = std::move(preset_name);
        opts.config_path = std::move(config);
        opts.model = std::move(model);
        std::ostringstream out, err;
        const int code = cli::execute(opts, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("subcommand"), py::arg("preset") = py::none(), py::arg("config") = py::none(),
      py::arg("model") = py::none(),
      "Runs a CLI subcommand in-process; returns (exit_code, stdout, stderr).");
}
