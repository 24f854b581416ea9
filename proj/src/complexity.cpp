#include "knotflow/complexity.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "knotflow/errors.hpp"
#include "knotflow/parallel.hpp"
#include "knotflow/quadrature.hpp"

namespace knotflow {
namespace {

constexpr double kPi = std::numbers::pi;

// int_0^inf f(u) du for integrands decaying like u^{-s}, s > 1: oscillatory
// quadrature up to a multiple of 2*pi, then the tail of the non-oscillatory
// envelope c * u^{-s} in closed form.
double half_line_integral(const ScalarFunction& f, double envelope_coeff, double decay) {
  const double cutoff = 2.0 * kPi * 400.0;
  const double body = integrate_oscillatory(f, 0.0, cutoff, 2.0 * kPi, 1e-14);
  const double tail = envelope_coeff * std::pow(cutoff, 1.0 - decay) / (decay - 1.0);
  return body + tail;
}

}  // namespace

double crossing_integral(const CurveEmbedding& curve, double p) {
  if (!(p >= 0.0 && p < 1.0)) throw Error(ErrorKind::InadmissibleExponent, "crossing weight exponent must lie in [0, 1)");
  const int n = curve.size();
  const double h = 2.0 * kPi / n;
  const auto theta = geodesic_table(n);
  const double floor = chord_floor(n);
  const Samples& pts = curve.points();
  const Samples& vel = curve.velocity();
  std::vector<double> weight(n, 0.0);
  for (int d = 1; d < n; ++d) weight[d] = std::pow(2.0 * kPi / theta[d], p);

  std::vector<double> row_sum(n, 0.0);
  std::vector<char> degenerate(n, 0);
  parallel_for(n, [&](int j) {
    double sum = 0.0;
    const Eigen::Vector3d tj = vel.col(j);
    for (int l = j + 1; l < n; ++l) {
      const Eigen::Vector3d chord = pts.col(l) - pts.col(j);
      const double len = chord.norm();
      if (len < floor) {
        degenerate[j] = 1;
        return;
      }
      const double triple = tj.dot(Eigen::Vector3d(vel.col(l)).cross(chord));
      sum += weight[l - j] * std::abs(triple) / (len * len * len);
    }
    row_sum[j] = sum;
  });
  for (int j = 0; j < n; ++j) {
    if (degenerate[j]) throw Error(ErrorKind::DegenerateChord, "two distinct nodes of the curve coincide");
  }
  double total = 0.0;
  for (double s : row_sum) total += s;
  return 2.0 * h * h * total;
}

double average_crossing_number(const CurveEmbedding& curve) { return crossing_integral(curve, 0.0) / (4.0 * kPi); }

double total_q_curvature(const TangentField& tau, double q) {
  if (!(q >= 1.0)) throw Error(ErrorKind::ParameterOutOfRange, "curvature exponent must be at least 1");
  const Eigen::VectorXd kappa = tau.derivative().colwise().norm().transpose();
  return std::pow(kappa.array().pow(q).mean(), 1.0 / q);
}

double weighted_bound_constant(double p) {
  if (!(p >= 0.0 && p < 1.0)) throw Error(ErrorKind::ParameterOutOfRange, "weight exponent must lie in [0, 1)");
  auto first = [p](double u) {
    const double s = std::sin(0.5 * u);
    return 2.0 * s * s * std::pow(u, -2.0 - p);
  };
  auto second = [p](double u) {
    const double s = std::sin(0.5 * u);
    const double one_minus_cos = 2.0 * s * s;
    // sin u - u without cancellation for small u.
    double sin_minus_u = 0.0;
    if (u < 0.1) {
      const double u2 = u * u;
      sin_minus_u = -u * u2 / 6.0 * (1.0 - u2 / 20.0 * (1.0 - u2 / 42.0 * (1.0 - u2 / 72.0)));
    } else {
      sin_minus_u = std::sin(u) - u;
    }
    return (one_minus_cos * one_minus_cos + sin_minus_u * sin_minus_u) * std::pow(u, -4.0 - p);
  };
  // Envelopes at infinity: 1 / u^{2+p} and u^2 / u^{4+p}.
  const double a = half_line_integral(first, 1.0, 2.0 + p);
  const double b = half_line_integral(second, 1.0, 2.0 + p);
  return 2.0 * std::sqrt(2.0) * std::pow(2.0 * kPi, p + 1.0) * std::sqrt(a) * std::sqrt(b);
}

CrossingReport acn_bound_check(const CurveEmbedding& curve) {
  CrossingReport r;
  r.p = 0.0;
  r.value = crossing_integral(curve, 0.0);
  r.acn = r.value / (4.0 * kPi);
  const double scale = 2.0 * kPi / curve.length();
  const double seminorm = sobolev_seminorm(curve, 1.5);
  const double delta = distortion(curve);
  r.bound_rhs = kPi / std::sqrt(3.0) * scale * scale * seminorm * seminorm * delta * delta * delta;
  r.satisfied = r.acn <= r.bound_rhs + 1e-8;
  return r;
}

CrossingReport weighted_bound_check(const CurveEmbedding& curve, double p) {
  CrossingReport r;
  r.p = p;
  r.value = crossing_integral(curve, p);
  if (p == 0.0) r.acn = r.value / (4.0 * kPi);
  const double scale = 2.0 * kPi / curve.length();
  const double seminorm = sobolev_seminorm(curve, 0.5 * (3.0 + p));
  const double delta = distortion(curve);
  r.bound_rhs = weighted_bound_constant(p) * scale * scale * seminorm * seminorm * delta * delta * delta;
  r.satisfied = r.value <= r.bound_rhs + 1e-8;
  return r;
}

}  // namespace knotflow
