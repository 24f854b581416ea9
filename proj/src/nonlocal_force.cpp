#include "knotflow/nonlocal_force.hpp"

#include <cmath>
#include <numbers>

#include "knotflow/errors.hpp"
#include "knotflow/parallel.hpp"
#include "knotflow/quadrature.hpp"

namespace knotflow {
namespace {

constexpr double kPi = std::numbers::pi;

// int_0^a (1 - cos kz) z^{-2-2p} dz for k*a <= 1, from the cosine series.
double near_origin_piece(double p, double k, double a) {
  double total = 0.0;
  double factor = 1.0;  // k^{2m} / (2m)!
  for (int m = 1; m < 30; ++m) {
    factor *= k * k / ((2.0 * m - 1.0) * (2.0 * m));
    const double exponent = 2.0 * m - 1.0 - 2.0 * p;
    const double contribution = factor * std::pow(a, exponent) / exponent;
    total += (m % 2 == 1) ? contribution : -contribution;
    if (std::abs(contribution) < 1e-18 * std::abs(total)) break;
  }
  return total;
}

}  // namespace

double multiplier_value(double p, int k) {
  if (k == 0) return 0.0;
  const double kk = std::abs(k);
  const double a = std::min(kPi, 1.0 / kk);
  double value = near_origin_piece(p, kk, a);
  if (a < kPi) {
    auto integrand = [&](double z) {
      const double s = std::sin(0.5 * kk * z);
      return 2.0 * s * s * std::pow(z, -2.0 - 2.0 * p);
    };
    value += integrate_oscillatory(integrand, a, kPi, 2.0 * kPi / kk, 1e-14);
  }
  return 2.0 * value;
}

FractionalMultiplier build_multiplier(double p, int n) {
  if (!(p >= 0.0 && p < 0.5)) {
    throw Error(ErrorKind::InadmissibleExponent, "fractional order needs 0 <= p < 1/2, got " + std::to_string(p));
  }
  if (!is_power_of_two(n)) throw Error(ErrorKind::ParameterOutOfRange, "grid size must be a power of two");
  FractionalMultiplier out{p, n, std::vector<double>(n / 2 + 1)};
  parallel_for(n / 2 + 1, [&](int k) { out.lambda[k] = multiplier_value(p, k); });
  return out;
}

Samples singular_part(const CurveEmbedding& curve, const FractionalMultiplier& multiplier) {
  const int n = curve.size();
  if (multiplier.n != n) throw Error(ErrorKind::ParameterOutOfRange, "multiplier was built for another grid size");
  Coeffs c = curve.coeffs();
  for (int k = 0; k <= n / 2; ++k) c.col(k) *= multiplier.lambda[k];
  return inverse_transform(c, n);
}

Samples regular_force(const CurveEmbedding& curve, const Kernel& kernel) {
  const int n = curve.size();
  Samples out = Samples::Zero(3, n);
  if (kernel.is_none()) return out;

  const double h = 2.0 * kPi / n;
  const auto theta = geodesic_table(n);
  const double floor_sq = chord_floor(n) * chord_floor(n);
  const double p = kernel.p();
  std::vector<double> weight(n, 0.0);
  for (int d = 1; d < n; ++d) weight[d] = h * std::pow(theta[d], -2.0 * (p + 1.0));
  const Samples& pts = curve.points();

  std::vector<char> degenerate(n, 0);
  parallel_for(n, [&](int j) {
    Eigen::Vector3d acc = Eigen::Vector3d::Zero();
    for (int l = 0; l < n; ++l) {
      if (l == j) continue;
      const Eigen::Vector3d chord = pts.col(j) - pts.col(l);
      const double chord_sq = chord.squaredNorm();
      if (chord_sq < floor_sq) {
        degenerate[j] = 1;
        return;
      }
      const int d = std::abs(j - l);
      const double v = theta[d] * theta[d];
      acc += kernel.g_excess_at_log(std::log(v / chord_sq)) * weight[d] * chord;
    }
    out.col(j) = acc;
  });
  for (int j = 0; j < n; ++j) {
    if (degenerate[j]) throw Error(ErrorKind::DegenerateChord, "two distinct nodes of the curve coincide");
  }
  return out;
}

bool needs_multiplier(const Kernel& kernel) { return !kernel.is_none() && kernel.g(1.0) != 0.0; }

Force assemble_force(const CurveEmbedding& curve, const Kernel& kernel, const FractionalMultiplier* multiplier) {
  const int n = curve.size();
  Force out{Samples::Zero(3, n), Samples::Zero(3, n)};
  if (kernel.is_none()) return out;

  out.f = regular_force(curve, kernel);
  if (needs_multiplier(kernel)) {
    if (kernel.degeneracy().kind != Degeneracy::Kind::Zero || !(kernel.p() < 0.5)) {
      throw Error(ErrorKind::InadmissibleKernel, "kernel " + kernel.name() + " has no well-defined force");
    }
    if (multiplier == nullptr || multiplier->n != n || multiplier->p != kernel.p()) {
      throw Error(ErrorKind::ParameterOutOfRange, "force needs a multiplier matching the kernel and grid");
    }
    out.f += kernel.g(1.0) * singular_part(curve, *multiplier);
  }
  out.F = inverse_transform(antiderivative(forward_transform(out.f), n), n);
  return out;
}

}  // namespace knotflow
