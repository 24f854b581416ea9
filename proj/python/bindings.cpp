#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "knotflow/cli_io.hpp"
#include "knotflow/complexity.hpp"
#include "knotflow/constrained_flow.hpp"
#include "knotflow/energetics.hpp"
#include "knotflow/errors.hpp"
#include "knotflow/initial_conditions.hpp"
#include "knotflow/kernels.hpp"
#include "knotflow/parallel.hpp"

namespace py = pybind11;
using namespace knotflow;

namespace {

// Python sees fields as (n, 3) arrays, one row per grid point.
using Rows = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

Rows to_rows(const Samples& s) { return s.transpose(); }

TangentField to_field(const Rows& rows) { return TangentField(Samples(rows.transpose())); }

py::dict energy_dict(const EnergyBreakdown& e) {
  py::dict d;
  d["e_bend"] = e.e_bend;
  d["e_interaction"] = e.e_interaction;
  d["e_total"] = e.e_total;
  d["flow_energy"] = flow_energy(e);
  return d;
}

py::dict simulate(const Rows& tau0, const std::string& kernel, double t_final, const std::vector<double>& snapshot_times,
                  double dt_init, double dt_min, double dt_max, bool projection) {
  StepControls controls;
  controls.dt_init = dt_init;
  controls.dt_min = dt_min;
  controls.dt_max = dt_max;
  controls.projection_enabled = projection;
  const Trajectory traj = [&] {
    py::gil_scoped_release release;
    return run(to_field(tau0), parse_kernel(kernel), controls, t_final, snapshot_times);
  }();

  py::list snapshots;
  for (const Snapshot& s : traj.snapshots) snapshots.append(py::make_tuple(s.t, to_rows(s.tau.values())));

  std::vector<double> t, dt, e_bend, e_interaction, e_total, speed, mean, dist;
  for (const EnergyLogRow& row : traj.energy_log) {
    t.push_back(row.t);
    dt.push_back(row.dt);
    e_bend.push_back(row.e_bend);
    e_interaction.push_back(row.e_interaction);
    e_total.push_back(row.e_total);
    speed.push_back(row.speed_error);
    mean.push_back(row.mean_error);
    dist.push_back(row.distortion);
  }
  py::dict log;
  log["t"] = t;
  log["dt"] = dt;
  log["E_bend"] = e_bend;
  log["E_interaction"] = e_interaction;
  log["E_total"] = e_total;
  log["speed_err"] = speed;
  log["mean_err"] = mean;
  log["distortion"] = dist;

  py::dict out;
  out["snapshots"] = snapshots;
  out["energy_log"] = log;
  out["final"] = to_rows(traj.final_state.tau_curr.values());
  out["t"] = traj.final_state.t;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of knotflow";

  static py::exception<Error> knotflow_error(m, "KnotflowError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      // args = (message, kind name); the Python package exposes the second as .kind
      PyErr_SetObject(knotflow_error.ptr(), py::make_tuple(std::string(e.what()), std::string(e.name())).ptr());
    }
  });

  m.def("generate", [](const std::string& spec, int n, std::uint64_t seed) {
    return to_rows(generate(parse_generator(spec), n, seed).values());
  }, py::arg("spec"), py::arg("n") = 256, py::arg("seed") = 0);

  m.def("project", [](const Rows& velocity) { return to_rows(constant_speed_project(Samples(velocity.transpose())).values()); },
        py::arg("velocity"));

  m.def("curve_points", [](const Rows& tau) { return to_rows(reconstruct_curve(to_field(tau)).points()); }, py::arg("tau"));

  m.def("constraint_errors", [](const Rows& tau) {
    const TangentField field(Samples(tau.transpose()));
    return py::make_tuple(field.speed_error(), field.mean_error());
  }, py::arg("tau"));

  m.def("energies", [](const Rows& tau, const std::string& kernel) {
    return energy_dict(total_energy(to_field(tau), parse_kernel(kernel)));
  }, py::arg("tau"), py::arg("kernel") = "distortion:q=1");

  m.def("distortion", [](const Rows& tau) { return distortion(reconstruct_curve(to_field(tau))); }, py::arg("tau"));

  m.def("average_crossing_number", [](const Rows& tau) { return average_crossing_number(reconstruct_curve(to_field(tau))); },
        py::arg("tau"));

  m.def("crossing_integral", [](const Rows& tau, double p) { return crossing_integral(reconstruct_curve(to_field(tau)), p); },
        py::arg("tau"), py::arg("p"));

  m.def("equilibrium_residual", [](const Rows& tau, const std::string& kernel) {
    const TangentField field = to_field(tau);
    return to_rows(equilibrium_residual(field, FlowModel(parse_kernel(kernel), field.size())));
  }, py::arg("tau"), py::arg("kernel") = "distortion:q=1");

  m.def("simulate", &simulate, py::arg("tau0"), py::arg("kernel") = "distortion:q=1", py::arg("t_final") = 1.0,
        py::arg("snapshot_times") = std::vector<double>{}, py::arg("dt_init") = StepControls{}.dt_init,
        py::arg("dt_min") = StepControls{}.dt_min, py::arg("dt_max") = StepControls{}.dt_max, py::arg("projection") = true);

  m.def("spectrum_json", [](const std::string& kernel, int k_max) {
    SpectrumConfig config;
    config.kernel = kernel;
    config.k_max = k_max;
    py::gil_scoped_release release;
    return cmd_spectrum(config);
  }, py::arg("kernel") = "distortion:q=1", py::arg("k_max") = 64);

  m.def("kernel_name", [](const std::string& spec) { return parse_kernel(spec).name(); }, py::arg("spec"));

  m.def("set_threads", &set_thread_count, py::arg("count"));
}
