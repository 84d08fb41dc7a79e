// Python bindings for the core library.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "h2body/error.hpp"
#include "h2body/sim.hpp"
#include "h2body/stability.hpp"

namespace py = pybind11;
using namespace h2body;

namespace {

py::dict coalgebra_dict(const CoalgebraElement& mu) {
  py::dict d;
  d["e"] = mu.e;
  d["h"] = mu.h;
  d["p"] = mu.p;
  return d;
}

py::dict trajectory_dict(const TrajectoryRecord& rec) {
  std::vector<double> t, energy, dist;
  std::vector<State> states;
  for (const Sample& s : rec.samples) {
    t.push_back(s.t);
    states.push_back(s.z.to_array());
    energy.push_back(s.energy);
    dist.push_back(s.distance);
  }
  py::dict d;
  d["t"] = t;
  d["states"] = states;
  d["energy"] = energy;
  d["distance"] = dist;
  d["status"] = to_string(rec.status);
  d["t_final"] = rec.t_final;
  d["message"] = rec.message;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two point masses on the hyperbolic plane";

  static py::exception<Error> error(m, "Error", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<Point>(m, "Point")
      .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
      .def_property_readonly("x", &Point::x)
      .def_property_readonly("y", &Point::y)
      .def("__repr__", [](const Point& p) { return "Point(" + std::to_string(p.x()) + ", " + std::to_string(p.y()) + ")"; });

  m.def("hyperbolic_distance", &hyperbolic_distance, py::arg("a"), py::arg("b"));

  py::class_<Params>(m, "Params")
      .def(py::init<double, double, double>(), py::arg("m1"), py::arg("m2"), py::arg("k"))
      .def_property_readonly("m1", &Params::m1)
      .def_property_readonly("m2", &Params::m2)
      .def_property_readonly("k", &Params::k);

  py::enum_<Family>(m, "Family").value("Elliptic", Family::Elliptic).value("Hyperbolic", Family::Hyperbolic);
  py::enum_<Verdict>(m, "Verdict")
      .value("Stable", Verdict::Stable)
      .value("Unstable", Verdict::Unstable)
      .value("Degenerate", Verdict::Degenerate);

  py::class_<RelativeEquilibrium>(m, "RelativeEquilibrium")
      .def_readonly("family", &RelativeEquilibrium::family)
      .def_readonly("omega", &RelativeEquilibrium::omega)
      .def_readonly("d1", &RelativeEquilibrium::d1)
      .def_readonly("d2", &RelativeEquilibrium::d2)
      .def_readonly("theta1", &RelativeEquilibrium::theta1)
      .def_readonly("theta2", &RelativeEquilibrium::theta2)
      .def_property_readonly("distance", &RelativeEquilibrium::distance)
      .def_property_readonly("period", &RelativeEquilibrium::period)
      .def_property_readonly("xi", [](const RelativeEquilibrium& re) { return std::array<double, 3>{re.xi.E, re.xi.H, re.xi.P}; })
      .def("initial_state", [](const RelativeEquilibrium& re) { return re.initial_state().to_array(); })
      .def("state_at", [](const RelativeEquilibrium& re, double t) { return analytic_trajectory(re, t).to_array(); },
           py::arg("t"))
      .def("momentum", [](const RelativeEquilibrium& re) { return coalgebra_dict(momentum_map(re.initial_state())); });

  m.def("build_relative_equilibrium",
        py::overload_cast<Family, double, const Params&, int>(&build_relative_equilibrium), py::arg("family"),
        py::arg("d1"), py::arg("params"), py::arg("sign") = 1);
  m.def("partner_distance", &partner_distance, py::arg("d1"), py::arg("params"));

  m.def("hamiltonian", [](const State& s, const Params& prm) { return hamiltonian(PhaseState::from_array(s), prm); },
        py::arg("state"), py::arg("params"));
  m.def("momentum_map", [](const State& s) { return coalgebra_dict(momentum_map(PhaseState::from_array(s))); },
        py::arg("state"));

  m.def("v_of_u", &v_of_u, py::arg("u"), py::arg("c"));
  m.def("stability_factor", &stability_factor, py::arg("u"), py::arg("v"));
  m.def("threshold_polynomial", &threshold_polynomial, py::arg("x"), py::arg("c"));
  m.def("threshold", [](double c) {
    const MassRatioCurve r = threshold(c);
    return py::make_tuple(r.u0, r.d1_threshold);
  }, py::arg("c"), "Returns (u0, d1_threshold).");
  m.def("threshold_curve", [](double c_min, double c_max, int n) {
    std::vector<std::array<double, 3>> rows;
    for (const MassRatioCurve& r : threshold_curve(c_min, c_max, n)) rows.push_back({r.c, r.u0, r.d1_threshold});
    return rows;
  }, py::arg("c_min"), py::arg("c_max"), py::arg("n_points"));
  m.def("intrinsic_stability_limit", &intrinsic_stability_limit, py::arg("d1"));
  m.def("intrinsic_stability_bound", &intrinsic_stability_bound, py::arg("d1"), py::arg("c"));
  m.def("momentum_norm", &momentum_norm, py::arg("u"), py::arg("c"), py::arg("k") = 1.0, py::arg("m2") = 1.0);

  m.def("classify_stability", [](const RelativeEquilibrium& re) {
    const StabilityReport r = classify_stability(re);
    py::dict d;
    d["verdict"] = r.verdict;
    d["internal_value"] = r.internal_value;
    d["ar"] = std::array<std::array<double, 2>, 2>{{{r.ar(0, 0), r.ar(0, 1)}, {r.ar(1, 0), r.ar(1, 1)}}};
    d["ar_definite"] = r.ar_definite;
    d["signature"] = r.signature;
    return d;
  }, py::arg("re"));

  m.def("integrate", [](const State& z0, const Params& prm, double t_end, double sample_dt, double rel_tol,
                        double abs_tol) {
    IntegratorConfig cfg;
    cfg.t_end = t_end;
    cfg.sample_dt = sample_dt;
    cfg.rel_tol = rel_tol;
    cfg.abs_tol = abs_tol;
    TrajectoryRecord rec;
    {
      py::gil_scoped_release release;
      rec = integrate(PhaseState::from_array(z0), prm, cfg);
    }
    return trajectory_dict(rec);
  }, py::arg("state"), py::arg("params"), py::arg("t_end"), py::arg("sample_dt") = 0.0, py::arg("rel_tol") = 1e-10,
        py::arg("abs_tol") = 1e-12);

  m.def("perturb_and_measure", [](const RelativeEquilibrium& re, double scale, int n_trials, double horizon,
                                  std::uint64_t seed, int threads) {
    PerturbationExperiment e{re};
    e.perturbation_scale = scale;
    e.n_trials = n_trials;
    e.horizon = horizon;
    e.seed = seed;
    e.threads = threads;
    PerturbationReport rep;
    {
      py::gil_scoped_release release;
      rep = perturb_and_measure(e);
    }
    std::vector<double> dev;
    std::vector<bool> escaped;
    for (const TrialResult& t : rep.trials) {
      dev.push_back(t.max_distance_deviation);
      escaped.push_back(t.escaped);
    }
    py::dict d;
    d["n_bounded"] = rep.n_bounded;
    d["n_escaped"] = rep.n_escaped;
    d["n_failed"] = rep.n_failed;
    d["max_deviation"] = rep.max_deviation;
    d["deviations"] = dev;
    d["escaped"] = escaped;
    return d;
  }, py::arg("re"), py::arg("scale") = 1e-4, py::arg("n_trials") = 50, py::arg("horizon") = 1.0,
        py::arg("seed") = 0, py::arg("threads") = 0);
}
