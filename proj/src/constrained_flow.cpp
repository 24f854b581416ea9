#include "knotflow/constrained_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "knotflow/errors.hpp"
#include "knotflow/parallel.hpp"

namespace knotflow {
namespace {

constexpr double kPi = std::numbers::pi;

// Bending energy without the unit-speed precondition; runs with the
// projection disabled drift off the constraint by design.
double bending_sum(const TangentField& tau) {
  const int n = tau.size();
  double sum = 0.0;
  for (int k = 1; k <= n / 2; ++k) {
    sum += mode_multiplicity(k, n) * static_cast<double>(k) * k * tau.coeffs().col(k).squaredNorm();
  }
  return sum;
}

double chord_guard(const CurveEmbedding& next, const CurveEmbedding& prev) {
  const int n = next.size();
  const Samples diff = next.points() - prev.points();
  const auto theta = geodesic_table(n);
  std::vector<double> row_max(n, 0.0);
  parallel_for(n, [&](int j) {
    double best = 0.0;
    for (int l = j + 1; l < n; ++l) best = std::max(best, (diff.col(j) - diff.col(l)).norm() / theta[l - j]);
    row_max[j] = best;
  });
  return *std::max_element(row_max.begin(), row_max.end());
}

}  // namespace

Eigen::Matrix3d gram_matrix(const TangentField& tau) {
  const int n = tau.size();
  Eigen::Matrix3d outer = Eigen::Matrix3d::Zero();
  for (int j = 0; j < n; ++j) {
    const Eigen::Vector3d t = tau.values().col(j);
    outer += t * t.transpose() / t.squaredNorm();
  }
  const Eigen::Matrix3d gram = Eigen::Matrix3d::Identity() - outer / n;
  const double smallest = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(gram, Eigen::EigenvaluesOnly).eigenvalues()(0);
  if (smallest < 1e-10) {
    throw Error(ErrorKind::SingularGram, "tangent field spans less than a plane (eigenvalue " + std::to_string(smallest) + ")");
  }
  return gram;
}

Multipliers multipliers(const TangentField& tau, const Samples& force_primitive) {
  const int n = tau.size();
  const Samples& t = tau.values();
  const Samples tx = tau.derivative();
  const Eigen::Matrix3d gram = gram_matrix(tau);

  Eigen::Vector3d source = Eigen::Vector3d::Zero();
  for (int j = 0; j < n; ++j) {
    const double weight = (force_primitive.col(j).dot(t.col(j)) - tx.col(j).squaredNorm()) / t.col(j).squaredNorm();
    source += weight * t.col(j);
  }
  source /= n;

  Multipliers out;
  out.lambda = gram.ldlt().solve(source);
  out.mu.resize(n);
  for (int j = 0; j < n; ++j) {
    out.mu(j) = (tx.col(j).squaredNorm() - (force_primitive.col(j) + out.lambda).dot(t.col(j))) / t.col(j).squaredNorm();
  }
  return out;
}

FlowModel::FlowModel(Kernel kernel, int n) : kernel_(std::move(kernel)), n_(n) {
  if (!kernel_.is_none() && !kernel_.flow_admissible()) {
    throw Error(ErrorKind::InadmissibleKernel, "kernel " + kernel_.name() + " does not define a gradient flow");
  }
  if (needs_multiplier(kernel_)) multiplier_ = build_multiplier(kernel_.p(), n_);
}

Force FlowModel::force(const CurveEmbedding& curve) const { return assemble_force(curve, kernel_, multiplier()); }

Samples rhs(const TangentField& tau, const FlowModel& model) {
  const Samples F = model.force(reconstruct_curve(tau)).F;
  const Multipliers m = multipliers(tau, F);
  Samples G = F;
  G.colwise() += m.lambda;
  for (int j = 0; j < tau.size(); ++j) G.col(j) += m.mu(j) * tau.values().col(j);
  return G;
}

Samples equilibrium_residual(const TangentField& tau, const FlowModel& model) {
  return tau.second_derivative() + rhs(tau, model);
}

FlowDiagnostics diagnose(const TangentField& tau, const Kernel& kernel) {
  FlowDiagnostics d;
  const CurveEmbedding curve = reconstruct_curve(tau);
  d.energy.e_bend = bending_sum(tau);
  d.energy.e_interaction = interaction_energy(curve, kernel);
  d.energy.e_total = d.energy.e_bend + d.energy.e_interaction;
  d.flow_energy = flow_energy(d.energy);
  d.speed_error = tau.speed_error();
  d.mean_error = tau.mean_error();
  d.distortion = distortion(curve);
  return d;
}

FlowState initial_state(const TangentField& tau0, const FlowModel& model, const StepControls& controls) {
  if (tau0.size() != model.size()) throw Error(ErrorKind::ParameterOutOfRange, "initial field does not match the model grid");
  TangentField tau = tau0;
  if (controls.projection_enabled && !tau.satisfies_constraints(1e-12)) {
    tau = constant_speed_project(tau);
  } else if (!tau.satisfies_constraints(kTolConstraint)) {
    throw Error(ErrorKind::ConstraintViolated, "initial tangent field violates the constraints");
  }
  Samples G = rhs(tau, model);
  FlowState state{tau, tau, G, G, controls.dt_init, 0.0, 0.0, 0, diagnose(tau, model.kernel())};
  return state;
}

TangentField step(const FlowState& state, const FlowModel& model, double dt, bool project) {
  const int n = model.size();
  const double ratio = state.dt_prev > 0.0 ? dt / (2.0 * state.dt_prev) : 0.0;
  const Samples explicit_part =
      0.5 * state.tau_curr.second_derivative() + state.rhs_curr + ratio * (state.rhs_curr - state.rhs_prev);
  Coeffs c = forward_transform(Samples(state.tau_curr.values() + dt * explicit_part));
  for (int k = 0; k <= n / 2; ++k) c.col(k) /= 1.0 + 0.5 * dt * k * k;
  TangentField next = TangentField::from_coeffs(std::move(c), n);
  if (project) return constant_speed_project(next);
  return next;
}

double energy_roundoff(double energy) noexcept {
  return 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(energy));
}

StepVerdict adapt_and_accept(const FlowState& state, const TangentField& candidate, double dt,
                             const FlowModel& model, const StepControls& controls) {
  StepVerdict verdict;
  try {
    verdict.diagnostics = diagnose(candidate, model.kernel());
  } catch (const Error& e) {
    verdict.reason = std::string(e.name());
    return verdict;
  }

  const int n = model.size();
  const double h = 2.0 * kPi / n;
  const double increment_sq = h * (candidate.values() - state.tau_curr.values()).colwise().squaredNorm().sum();
  const double old_energy = state.diagnostics.flow_energy;
  const double allowed = old_energy - controls.energy_slack * increment_sq / (2.0 * dt) + energy_roundoff(old_energy);
  if (!(verdict.diagnostics.flow_energy <= allowed)) {
    verdict.reason = "energy";
    return verdict;
  }

  const double guard = chord_guard(reconstruct_curve(candidate), reconstruct_curve(state.tau_curr));
  if (!(guard <= 0.5 / state.diagnostics.distortion)) {
    verdict.reason = "chord-guard";
    return verdict;
  }
  verdict.accepted = true;
  return verdict;
}

FlowState advance(const FlowState& state, const FlowModel& model, const StepControls& controls, double dt_cap) {
  const bool capped = state.dt_curr > dt_cap;
  double dt = std::min(state.dt_curr, dt_cap);
  for (int halvings = 0; halvings <= controls.max_halvings; ++halvings) {
    if (dt < controls.dt_min) break;
    std::optional<TangentField> candidate;
    std::optional<Samples> next_rhs;
    StepVerdict verdict;
    try {
      candidate = step(state, model, dt, controls.projection_enabled);
      verdict = adapt_and_accept(state, *candidate, dt, model, controls);
      if (verdict.accepted) next_rhs = rhs(*candidate, model);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularGram && e.kind() != ErrorKind::NoConvergence &&
          e.kind() != ErrorKind::ZeroVelocity && e.kind() != ErrorKind::MeanNotZero &&
          e.kind() != ErrorKind::DegenerateChord) {
        throw;
      }
      verdict.accepted = false;
    }
    if (verdict.accepted) {
      double next_dt = std::min(controls.growth * dt, controls.dt_max);
      if (capped && halvings == 0) next_dt = std::max(next_dt, std::min(state.dt_curr, controls.dt_max));
      return FlowState{*candidate, state.tau_curr, *next_rhs, state.rhs_curr, next_dt, dt,
                       state.t + dt, state.step_index + 1, verdict.diagnostics};
    }
    dt *= 0.5;
  }
  throw Error(ErrorKind::StepUnderflow, "step size fell below the minimum at t = " + std::to_string(state.t));
}

EnergyLogRow log_row(const FlowState& state, double dt) {
  const auto& d = state.diagnostics;
  return EnergyLogRow{state.t, dt, kPi * d.energy.e_bend, d.energy.e_interaction, d.flow_energy,
                      d.speed_error, d.mean_error, d.distortion};
}

Trajectory run(const TangentField& tau0, const Kernel& kernel, const StepControls& controls, double t_final,
               const std::vector<double>& snapshot_times) {
  if (!(t_final >= 0.0)) throw Error(ErrorKind::ParameterOutOfRange, "final time must be non-negative");
  const FlowModel model(kernel, tau0.size());
  FlowState state = initial_state(tau0, model, controls);

  std::vector<double> stops(snapshot_times.begin(), snapshot_times.end());
  std::sort(stops.begin(), stops.end());
  std::vector<Snapshot> snapshots;
  std::vector<EnergyLogRow> log{log_row(state, 0.0)};

  std::size_t next_snapshot = 0;
  auto take_due_snapshots = [&]() {
    while (next_snapshot < stops.size() && stops[next_snapshot] <= state.t) {
      snapshots.push_back({state.t, state.tau_curr});
      ++next_snapshot;
    }
  };
  take_due_snapshots();

  while (state.t < t_final) {
    double stop = t_final;
    if (next_snapshot < stops.size()) stop = std::min(stop, stops[next_snapshot]);
    state = advance(state, model, controls, stop - state.t);
    if (std::abs(state.t - stop) <= 1e-12 * std::max(1.0, std::abs(stop))) state.t = stop;
    log.push_back(log_row(state, state.dt_prev));
    take_due_snapshots();
  }
  return Trajectory{std::move(snapshots), std::move(log), std::move(state)};
}

}  // namespace knotflow
