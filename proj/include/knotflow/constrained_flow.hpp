#pragma once

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "knotflow/energetics.hpp"
#include "knotflow/kernels.hpp"
#include "knotflow/nonlocal_force.hpp"
#include "knotflow/torus_geometry.hpp"

namespace knotflow {

// Id - mean(tau tau^T / |tau|^2). Throws SingularGram when its smallest
// eigenvalue drops below 1e-10.
Eigen::Matrix3d gram_matrix(const TangentField& tau);

struct Multipliers {
  Eigen::Vector3d lambda = Eigen::Vector3d::Zero();  // keeps the mean at zero
  Eigen::VectorXd mu;                                 // keeps |tau| = 1
};

// `force_primitive` is the mean-zero primitive F of the force.
Multipliers multipliers(const TangentField& tau, const Samples& force_primitive);

// Kernel, grid size and cached multiplier shared by every step of a run.
class FlowModel {
 public:
  FlowModel(Kernel kernel, int n);

  const Kernel& kernel() const noexcept { return kernel_; }
  int size() const noexcept { return n_; }
  const FractionalMultiplier* multiplier() const noexcept { return multiplier_ ? &*multiplier_ : nullptr; }

  Force force(const CurveEmbedding& curve) const;

 private:
  Kernel kernel_;
  int n_;
  std::optional<FractionalMultiplier> multiplier_;
};

// G = F + lambda + mu tau, so that tau_t = tau_xx + G.
Samples rhs(const TangentField& tau, const FlowModel& model);
// tau_xx + G; zero at equilibria.
Samples equilibrium_residual(const TangentField& tau, const FlowModel& model);

struct StepControls {
  double dt_init = 1e-4;
  double dt_min = 1e-12;
  double dt_max = 1e-2;
  double growth = 1.2;
  int max_halvings = 40;
  double energy_slack = 0.999;
  bool projection_enabled = true;
};

struct FlowDiagnostics {
  EnergyBreakdown energy;
  double flow_energy = 0.0;  // pi * e_bend + e_interaction
  double speed_error = 0.0;
  double mean_error = 0.0;
  double distortion = 0.0;
};

struct FlowState {
  TangentField tau_curr;
  TangentField tau_prev;
  Samples rhs_curr;
  Samples rhs_prev;
  double dt_curr = 0.0;  // step size to attempt next
  double dt_prev = 0.0;  // size of the last accepted step; 0 before the first
  double t = 0.0;
  long step_index = 0;
  FlowDiagnostics diagnostics;
};

FlowDiagnostics diagnose(const TangentField& tau, const Kernel& kernel);

FlowState initial_state(const TangentField& tau0, const FlowModel& model, const StepControls& controls);

// One semi-implicit step of size dt (no acceptance logic), followed by the
// constant-speed projection when enabled.
TangentField step(const FlowState& state, const FlowModel& model, double dt, bool project);

struct StepVerdict {
  bool accepted = false;
  std::string reason;  // empty when accepted
  FlowDiagnostics diagnostics;
};

// Energy-descent test plus the chord guard
// sup |(new - old)(x) - (new - old)(y)| / d(x, y) <= 1 / (2 * distortion(old)).
StepVerdict adapt_and_accept(const FlowState& state, const TangentField& candidate, double dt,
                             const FlowModel& model, const StepControls& controls);

// Advances by one accepted step, halving dt on rejection. `dt_cap` bounds the
// attempted step (used to land on output times). Throws StepUnderflow.
FlowState advance(const FlowState& state, const FlowModel& model, const StepControls& controls,
                  double dt_cap = std::numeric_limits<double>::infinity());

struct EnergyLogRow {
  double t = 0.0;
  double dt = 0.0;
  double e_bend = 0.0;         // (1/2) int |tau_x|^2 dx
  double e_interaction = 0.0;
  double e_total = 0.0;
  double speed_error = 0.0;
  double mean_error = 0.0;
  double distortion = 0.0;
};

EnergyLogRow log_row(const FlowState& state, double dt);

struct Snapshot {
  double t = 0.0;
  TangentField tau;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  std::vector<EnergyLogRow> energy_log;
  FlowState final_state;
};

// Integrates to t_final; snapshots are taken at the given times (each is hit
// exactly by shortening the step that would cross it).
Trajectory run(const TangentField& tau0, const Kernel& kernel, const StepControls& controls, double t_final,
               const std::vector<double>& snapshot_times = {});

// Tolerance on energy increase attributable to round-off.
double energy_roundoff(double energy) noexcept;

}  // namespace knotflow
