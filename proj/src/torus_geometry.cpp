#include "knotflow/torus_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "knotflow/errors.hpp"
#include "knotflow/parallel.hpp"

namespace knotflow {
namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Arc length s(x) = integral of the speed from -pi, evaluated with its
// derivative from the Fourier data of the speed.
class ArcLength {
 public:
  ArcLength(const Eigen::VectorXd& speed, int n) : n_(n) {
    speed_hat_ = forward_transform(speed);
    primitive_hat_ = antiderivative(speed_hat_, n);
    mean_speed_ = speed_hat_(0).real();
    offset_ = value_and_rate(-kPi).first;
  }

  double total() const { return kTwoPi * mean_speed_; }

  // Returns (s(x), s'(x)); the Nyquist mode is excluded from both so the pair
  // is exactly consistent.
  std::pair<double, double> value_and_rate(double x) const {
    const cd step = std::polar(1.0, x);
    cd phase = step;
    double value = mean_speed_ * (x + kPi);
    double rate = mean_speed_;
    for (int k = 1; k < n_ / 2; ++k) {
      value += 2.0 * (primitive_hat_(k) * phase).real();
      rate += 2.0 * (speed_hat_(k) * phase).real();
      phase *= step;
    }
    return {value - offset_, rate};
  }

 private:
  int n_;
  Eigen::VectorXcd speed_hat_;
  Eigen::VectorXcd primitive_hat_;
  double mean_speed_ = 0.0;
  double offset_ = 0.0;
};

double solve_arclength(const ArcLength& arc, double target, double lo, double hi) {
  const double scale = arc.total();
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 100; ++iter) {
    const auto [value, rate] = arc.value_and_rate(x);
    const double residual = value - target;
    if (std::abs(residual) <= 1e-15 * scale) return x;
    if (residual > 0) hi = x; else lo = x;
    double next = (rate > 0.0) ? x - residual / rate : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-16 * kTwoPi) return next;
    x = next;
  }
  return x;
}

void normalise_columns(Samples& values) {
  for (Eigen::Index j = 0; j < values.cols(); ++j) values.col(j).normalize();
}

}  // namespace

double chord_floor(int n) noexcept { return 1e-9 * kTwoPi / n; }

double geodesic_distance(double z) noexcept {
  const double r = std::fmod(std::abs(z), kTwoPi);
  return std::min(r, kTwoPi - r);
}

std::vector<double> geodesic_table(int n) {
  std::vector<double> table(n);
  for (int d = 0; d < n; ++d) table[d] = kTwoPi * std::min(d, n - d) / n;
  return table;
}

TangentField::TangentField(Samples values) : values_(std::move(values)) {
  coeffs_ = forward_transform(values_);
}

TangentField::TangentField(Samples values, Coeffs coeffs) : values_(std::move(values)), coeffs_(std::move(coeffs)) {}

TangentField TangentField::from_coeffs(Coeffs coeffs, int n) {
  Samples values = inverse_transform(coeffs, n);
  return TangentField(std::move(values), std::move(coeffs));
}

Samples TangentField::derivative() const { return inverse_transform(differentiate(coeffs_, size()), size()); }

Samples TangentField::second_derivative() const {
  return inverse_transform(knotflow::second_derivative(coeffs_, size()), size());
}

double TangentField::mean_error() const { return coeffs_.col(0).norm(); }

double TangentField::speed_error() const {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < values_.cols(); ++j) worst = std::max(worst, std::abs(values_.col(j).norm() - 1.0));
  return worst;
}

bool TangentField::satisfies_constraints(double tol) const { return mean_error() <= tol && speed_error() <= tol; }

CurveEmbedding::CurveEmbedding(Coeffs coeffs, int n) : coeffs_(std::move(coeffs)) {
  coeffs_.col(0).setZero();
  points_ = inverse_transform(coeffs_, n);
  velocity_ = inverse_transform(differentiate(coeffs_, n), n);
  acceleration_ = inverse_transform(knotflow::second_derivative(coeffs_, n), n);
  speed_ = velocity_.colwise().norm().mean();
}

double CurveEmbedding::length() const noexcept { return kTwoPi * speed_; }

CurveEmbedding reconstruct_curve(const TangentField& tau) {
  if (tau.mean_error() > kTolConstraint) {
    throw Error(ErrorKind::MeanNotZero, "tangent field has mean of size " + std::to_string(tau.mean_error()));
  }
  return CurveEmbedding(antiderivative(tau.coeffs(), tau.size()), tau.size());
}

double distortion(const CurveEmbedding& curve) {
  const int n = curve.size();
  if (n < 8) throw Error(ErrorKind::ParameterOutOfRange, "distortion needs at least 8 nodes");
  const auto theta = geodesic_table(n);
  const double floor = chord_floor(n);
  const double speed = curve.speed();
  const Samples& pts = curve.points();

  std::vector<double> row_max(n, 0.0);
  std::vector<char> degenerate(n, 0);
  parallel_for(n, [&](int j) {
    double best = 0.0;
    for (int l = j + 1; l < n; ++l) {
      const double chord = (pts.col(j) - pts.col(l)).norm();
      if (chord < floor) {
        degenerate[j] = 1;
        return;
      }
      best = std::max(best, theta[l - j] * speed / chord);
    }
    row_max[j] = best;
  });
  for (int j = 0; j < n; ++j) {
    if (degenerate[j]) {
      throw Error(ErrorKind::DegenerateChord, "two distinct nodes of the curve coincide");
    }
  }
  return *std::max_element(row_max.begin(), row_max.end());
}

double sobolev_seminorm(const Coeffs& coeffs, int n, double s) {
  double sum = 0.0;
  for (int k = 1; k <= n / 2; ++k) {
    sum += mode_multiplicity(k, n) * std::pow(static_cast<double>(k), 2.0 * s) * coeffs.col(k).squaredNorm();
  }
  return std::sqrt(sum);
}

double sobolev_seminorm(const CurveEmbedding& curve, double s) {
  return sobolev_seminorm(curve.coeffs(), curve.size(), s);
}

TangentField constant_speed_project(const TangentField& tau, const ProjectionOptions& options) {
  return constant_speed_project(tau.values(), options);
}

TangentField constant_speed_project(const Samples& velocity, const ProjectionOptions& options) {
  const int m = static_cast<int>(velocity.cols());
  if (!is_power_of_two(m) || m < 4) {
    throw Error(ErrorKind::ParameterOutOfRange, "projection needs a power-of-two sample count");
  }
  const int n = options.n_out > 0 ? options.n_out : m;

  // Closing the curve first keeps the primitive periodic.
  Coeffs vel_hat = forward_transform(velocity);
  vel_hat.col(0).setZero();
  const Samples closed = inverse_transform(vel_hat, m);

  Eigen::VectorXd speed = closed.colwise().norm().transpose();
  if (speed.minCoeff() < chord_floor(m)) throw Error(ErrorKind::ZeroVelocity, "curve has a stationary point");

  const ArcLength arc(speed, m);
  const double total = arc.total();

  // Bracket each target arc length between consecutive nodes of the cumulative table.
  std::vector<double> nodes(m + 1);
  std::vector<double> cumulative(m + 1);
  for (int j = 0; j < m; ++j) {
    nodes[j] = grid_point(m, j);
    cumulative[j] = arc.value_and_rate(nodes[j]).first;
  }
  nodes[m] = kPi;
  cumulative[m] = total;

  std::vector<double> params(n);
  parallel_for(n, [&](int i) {
    const double target = total * i / n;
    if (i == 0) {
      params[i] = -kPi;
      return;
    }
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    const auto hi_idx = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - cumulative.begin(), 1, m));
    params[i] = solve_arclength(arc, target, nodes[hi_idx - 1], nodes[hi_idx]);
  });

  Samples values(3, n);
  parallel_for(n, [&](int i) { values.col(i) = evaluate(vel_hat, m, params[i]); });
  for (int i = 0; i < n; ++i) {
    if (values.col(i).norm() < chord_floor(m)) throw Error(ErrorKind::ZeroVelocity, "curve has a stationary point");
  }

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    normalise_columns(values);
    const Eigen::Vector3d mean = values.rowwise().mean();
    values.colwise() -= mean;
    double speed_err = 0.0;
    for (int j = 0; j < n; ++j) speed_err = std::max(speed_err, std::abs(values.col(j).norm() - 1.0));
    if (speed_err <= options.tol) {
      TangentField out(std::move(values));
      if (out.mean_error() <= options.tol) return out;
      values = out.values();
    }
  }
  throw Error(ErrorKind::NoConvergence, "constant-speed projection did not converge");
}

TangentField project_curve_points(const Samples& points, const ProjectionOptions& options) {
  const int m = static_cast<int>(points.cols());
  if (!is_power_of_two(m) || m < 4) {
    throw Error(ErrorKind::ParameterOutOfRange, "projection needs a power-of-two sample count");
  }
  const Samples velocity = inverse_transform(differentiate(forward_transform(points), m), m);
  return constant_speed_project(velocity, options);
}

}  // namespace knotflow
