#include "support.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

namespace knotflow::testing {

constexpr double kPi = std::numbers::pi;

Samples sample(const CurveFunction& f, int n) {
  Samples out(3, n);
  for (int j = 0; j < n; ++j) out.col(j) = f(-kPi + 2.0 * kPi * j / n);
  return out;
}

Eigen::VectorXcd naive_dft(const Eigen::VectorXd& values) {
  const int n = static_cast<int>(values.size());
  Eigen::VectorXcd c(n / 2 + 1);
  for (int k = 0; k <= n / 2; ++k) {
    std::complex<double> s = 0.0;
    for (int j = 0; j < n; ++j) s += values(j) * std::polar(1.0, -k * (-kPi + 2.0 * kPi * j / n));
    c(k) = s / static_cast<double>(n);
  }
  return c;
}

Eigen::Vector3d wavy(double x) {
  return {std::cos(x) + 0.3 * std::cos(2 * x), std::sin(x) - 0.2 * std::sin(2 * x), 0.4 * std::sin(3 * x)};
}
Eigen::Vector3d wavy_velocity(double x) {
  return {-std::sin(x) - 0.6 * std::sin(2 * x), std::cos(x) - 0.4 * std::cos(2 * x), 1.2 * std::cos(3 * x)};
}

Eigen::Vector3d trefoil(double x) {
  return {std::sin(x) + 2 * std::sin(2 * x), std::cos(x) - 2 * std::cos(2 * x), -std::sin(3 * x)};
}
Eigen::Vector3d trefoil_velocity(double x) {
  return {std::cos(x) + 4 * std::cos(2 * x), -std::sin(x) + 4 * std::sin(2 * x), -3 * std::cos(3 * x)};
}

Eigen::Vector3d RandomCurve::operator()(double x) const {
  Eigen::Vector3d g(std::cos(x), std::sin(x), 0.0);
  for (int i = 0; i < static_cast<int>(a.size()); ++i) {
    const int k = i + 2;
    g += amplitude / (k * k) * (std::cos(k * x) * a[i] + std::sin(k * x) * b[i]);
  }
  return g;
}

Eigen::Vector3d RandomCurve::velocity(double x) const {
  Eigen::Vector3d v(-std::sin(x), std::cos(x), 0.0);
  for (int i = 0; i < static_cast<int>(a.size()); ++i) {
    const int k = i + 2;
    v += amplitude / k * (-std::sin(k * x) * a[i] + std::cos(k * x) * b[i]);
  }
  return v;
}

RandomCurve random_curve(std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RandomCurve c;
  c.amplitude = amplitude;
  for (int k = 2; k <= 4; ++k) {
    c.a.emplace_back(u(rng), u(rng), u(rng));
    c.b.emplace_back(u(rng), u(rng), u(rng));
  }
  return c;
}

TangentField unit_speed_field(const CurveFunction& curve, int n) {
  ProjectionOptions options;
  options.n_out = n;
  return project_curve_points(sample(curve, 4 * n), options);
}

Eigen::Vector3d pv_laplacian(const CurveFunction& curve, double x) {
  Eigen::Vector3d out;
  const Eigen::Vector3d gx = curve(x);
  for (int c = 0; c < 3; ++c) {
    auto integrand = [&](double z) { return (2.0 * gx(c) - curve(x + z)(c) - curve(x - z)(c)) / (z * z); };
    out(c) = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, kPi, 10, 1e-12);
  }
  return out;
}

double crossing_oracle(const CurveFunction& curve, const CurveFunction& velocity, int m) {
  const double h = 2.0 * kPi / m;
  std::vector<Eigen::Vector3d> g(m), v(m);
  for (int i = 0; i < m; ++i) {
    const double x = -kPi + (i + 0.5) * h;
    g[i] = curve(x);
    v[i] = velocity(x);
  }
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      const Eigen::Vector3d d = g[j] - g[i];
      total += std::abs(v[i].cross(v[j]).dot(d)) / std::pow(d.norm(), 3);
    }
  }
  return total * h * h;
}

double sine_integral(double x) {
  long double term = x;
  long double sum = 0.0L;
  for (int i = 0; i < 200; ++i) {
    sum += term / (2 * i + 1);
    term *= -static_cast<long double>(x) * x / ((2.0L * i + 2) * (2.0L * i + 3));
  }
  return static_cast<double>(sum);
}

double decay_rate(const std::vector<double>& t, const std::vector<double>& a) {
  const double m = static_cast<double>(t.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double y = std::log(std::abs(a[i]));
    st += t[i];
    sy += y;
    stt += t[i] * t[i];
    sty += t[i] * y;
  }
  return -(m * sty - st * sy) / (m * stt - st * st);
}

double l2_norm(const Samples& v) {
  return std::sqrt(2.0 * kPi / static_cast<double>(v.cols()) * v.colwise().squaredNorm().sum());
}

}  // namespace knotflow::testing
