#pragma once

// Test-side oracles. Everything here is computed from analytic formulas or
// brute-force sums, independently of the library's spectral machinery.

#include <cstdint>
#include <functional>
#include <vector>

#include "knotflow/torus_geometry.hpp"

namespace knotflow::testing {

using CurveFunction = std::function<Eigen::Vector3d(double)>;

Samples sample(const CurveFunction& f, int n);

// c_k = (1/n) sum_j v_j exp(-i k x_j) by direct summation.
Eigen::VectorXcd naive_dft(const Eigen::VectorXd& values);

// Smooth nonplanar trigonometric curve and its derivatives.
Eigen::Vector3d wavy(double x);
Eigen::Vector3d wavy_velocity(double x);

Eigen::Vector3d trefoil(double x);
Eigen::Vector3d trefoil_velocity(double x);

// Unit circle plus a random trigonometric perturbation in modes 2..4 of size
// `amplitude`; nonplanar and embedded for amplitude <= 0.2.
struct RandomCurve {
  std::vector<Eigen::Vector3d> a, b;  // cos / sin coefficients of modes 2..4
  double amplitude = 0.0;
  Eigen::Vector3d operator()(double x) const;
  Eigen::Vector3d velocity(double x) const;
};
RandomCurve random_curve(std::uint64_t seed, double amplitude = 0.2);

// Unit-speed, length-2pi tangent field of an analytic curve.
TangentField unit_speed_field(const CurveFunction& curve, int n);

// p.v. int_{-pi}^{pi} (g(x) - g(x + z)) / z^2 dz by adaptive quadrature of the
// symmetrised integrand.
Eigen::Vector3d pv_laplacian(const CurveFunction& curve, double x);

// Double integral of |det(g'(x), g'(y), g(y) - g(x))| / |g(y) - g(x)|^3 by the
// midpoint rule on an m x m grid, from analytic curve and velocity.
double crossing_oracle(const CurveFunction& curve, const CurveFunction& velocity, int m);

// Sine integral by its power series (accurate for |x| <= 20).
double sine_integral(double x);

// Least-squares slope of log(a) against t, negated.
double decay_rate(const std::vector<double>& t, const std::vector<double>& a);

// sqrt((2pi/n) sum_j |v_j|^2)
double l2_norm(const Samples& v);

}  // namespace knotflow::testing
