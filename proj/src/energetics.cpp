#include "knotflow/energetics.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "knotflow/errors.hpp"
#include "knotflow/parallel.hpp"

namespace knotflow {

double bending_energy(const TangentField& tau) {
  if (tau.speed_error() > kTolConstraint) {
    throw Error(ErrorKind::ConstraintViolated,
                "tangent field is not unit speed (error " + std::to_string(tau.speed_error()) + ")");
  }
  const int n = tau.size();
  double sum = 0.0;
  for (int k = 1; k <= n / 2; ++k) {
    sum += mode_multiplicity(k, n) * static_cast<double>(k) * k * tau.coeffs().col(k).squaredNorm();
  }
  return sum;
}

double interaction_energy(const CurveEmbedding& curve, const Kernel& kernel) {
  if (kernel.is_none()) return 0.0;
  const int n = curve.size();
  const double h = 2.0 * std::numbers::pi / n;
  const auto theta = geodesic_table(n);
  const double floor = chord_floor(n);
  const Samples& pts = curve.points();
  const double p = kernel.p();

  std::vector<double> row_sum(n, 0.0);
  std::vector<char> degenerate(n, 0);
  parallel_for(n, [&](int j) {
    double sum = 0.0;
    for (int l = j + 1; l < n; ++l) {
      const double chord_sq = (pts.col(j) - pts.col(l)).squaredNorm();
      if (chord_sq < floor * floor) {
        degenerate[j] = 1;
        return;
      }
      const double v = theta[l - j] * theta[l - j];
      sum += kernel.h_at_log(std::log(v / chord_sq)) * std::pow(v, -p);
    }
    const double speed_sq = curve.velocity().col(j).squaredNorm();
    const Eigen::Vector3d vel = curve.velocity().col(j);
    const double curvature_sq =
        vel.cross(Eigen::Vector3d(curve.acceleration().col(j))).squaredNorm() / (speed_sq * speed_sq * speed_sq);
    row_sum[j] = 2.0 * sum + kernel.diagonal_limit(speed_sq, curvature_sq);
  });
  for (int j = 0; j < n; ++j) {
    if (degenerate[j]) throw Error(ErrorKind::DegenerateChord, "two distinct nodes of the curve coincide");
  }
  double total = 0.0;
  for (double s : row_sum) total += s;
  return 0.25 * h * h * total;
}

EnergyBreakdown total_energy(const TangentField& tau, const Kernel& kernel) {
  EnergyBreakdown out;
  out.e_bend = bending_energy(tau);
  out.e_interaction = kernel.is_none() ? 0.0 : interaction_energy(reconstruct_curve(tau), kernel);
  out.e_total = out.e_bend + out.e_interaction;
  return out;
}

double flow_energy(const EnergyBreakdown& energy) noexcept {
  return std::numbers::pi * energy.e_bend + energy.e_interaction;
}

}  // namespace knotflow
