#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "knotflow/errors.hpp"
#include "knotflow/initial_conditions.hpp"
#include "knotflow/torus_geometry.hpp"
#include "support.hpp"

using namespace knotflow;
namespace kt = knotflow::testing;
using std::numbers::pi;

TEST_SUITE("torus_geometry") {

TEST_CASE("transforms agree with a direct DFT") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  for (int n : {8, 16, 64}) {
    Eigen::VectorXd v(n);
    for (int j = 0; j < n; ++j) v(j) = gauss(rng);
    const Eigen::VectorXcd fast = forward_transform(v);
    const Eigen::VectorXcd slow = kt::naive_dft(v);
    CHECK((fast - slow).norm() < 1e-13);
  }
}

TEST_CASE("round trip through coefficients") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  for (int n = 16; n <= 1024; n *= 2) {
    Samples v(3, n);
    for (int j = 0; j < n; ++j) v.col(j) << gauss(rng), gauss(rng), gauss(rng);
    CHECK((inverse_transform(forward_transform(v), n) - v).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("cosine coefficients follow the grid convention") {
  const int n = 32;
  Eigen::VectorXd v(n);
  for (int j = 0; j < n; ++j) v(j) = std::cos(3 * grid_point(n, j));
  const Eigen::VectorXcd c = forward_transform(v);
  CHECK(std::abs(c(3) - 0.5) < 1e-14);
  CHECK(mode_multiplicity(0, n) == 1.0);
  CHECK(mode_multiplicity(3, n) == 2.0);
  CHECK(mode_multiplicity(n / 2, n) == 1.0);
}

TEST_CASE("geodesic distance") {
  CHECK(geodesic_distance(pi / 2) == doctest::Approx(pi / 2));
  CHECK(geodesic_distance(3 * pi / 2) == doctest::Approx(pi / 2));
  CHECK(geodesic_distance(0.0) == 0.0);
  CHECK(geodesic_distance(-2 * pi) == doctest::Approx(0.0).epsilon(1e-15));
  for (double z : {0.1, 1.3, 2.9, 4.0, 6.1}) {
    CHECK(geodesic_distance(z) == geodesic_distance(-z));
    CHECK(geodesic_distance(z) == doctest::Approx(geodesic_distance(z + 2 * pi)).epsilon(1e-15));
  }
}

TEST_CASE("tangent field invariants") {
  const int n = 128;
  const TangentField circle = gen_circle(n);
  CHECK(circle.mean_error() < 1e-15);
  CHECK(circle.speed_error() < 1e-15);
  CHECK(circle.satisfies_constraints());

  Samples off = circle.values();
  off.row(0).array() += 0.1;
  CHECK_FALSE(TangentField(off).satisfies_constraints());
  CHECK_THROWS_AS(TangentField(Samples(3, 12)), Error);
}

TEST_CASE("reconstruction of the unit circle") {
  const int n = 64;
  const CurveEmbedding curve = reconstruct_curve(gen_circle(n));
  for (int j = 0; j < n; ++j) {
    const double x = grid_point(n, j);
    CHECK((curve.points().col(j) - Eigen::Vector3d(std::cos(x), std::sin(x), 0.0)).norm() < 1e-13);
  }
  CHECK(curve.length() == doctest::Approx(2 * pi).epsilon(1e-14));
}

TEST_CASE("reconstruction then differentiation recovers the field") {
  const TangentField tau = kt::unit_speed_field(kt::random_curve(3), 256);
  const CurveEmbedding curve = reconstruct_curve(tau);
  CHECK((curve.velocity() - tau.values()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("reconstruction requires mean zero") {
  Samples v = gen_circle(32).values();
  v.row(2).array() += 1e-3;
  CHECK_THROWS_WITH_AS(reconstruct_curve(TangentField(v)), doctest::Contains("mean"), Error);
  try {
    reconstruct_curve(TangentField(v));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MeanNotZero);
  }
}

TEST_CASE("distortion") {
  CHECK(distortion(reconstruct_curve(gen_circle(256))) == doctest::Approx(pi / 2).epsilon(1e-6));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    CHECK(distortion(reconstruct_curve(kt::unit_speed_field(kt::random_curve(seed), 128))) >= pi / 2 - 1e-6);
  }
  try {
    distortion(reconstruct_curve(gen_double_covered(64)));
    FAIL("double cover has coincident nodes");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateChord);
  }
}

TEST_CASE("distortion is invariant under rotation and scaling") {
  const int n = 128;
  const kt::RandomCurve base = kt::random_curve(42);
  const Samples pts = kt::sample(base, n);
  const CurveEmbedding curve(forward_transform(pts), n);
  const double reference = distortion(curve);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 4; ++trial) {
    const Eigen::Matrix3d r =
        Eigen::AngleAxisd(pi * u(rng), Eigen::Vector3d(u(rng), u(rng), u(rng)).normalized()).toRotationMatrix();
    const double scale = 2.0 + u(rng);
    const CurveEmbedding moved(forward_transform(Samples(scale * r * pts)), n);
    CHECK(distortion(moved) == doctest::Approx(reference).epsilon(1e-10));
  }
}

TEST_CASE("Sobolev seminorms of the circle") {
  const CurveEmbedding curve = reconstruct_curve(gen_circle(64));
  CHECK(sobolev_seminorm(curve, 1.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sobolev_seminorm(curve, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sobolev_seminorm(Coeffs::Zero(3, 33), 64, 1.5) == 0.0);
}

TEST_CASE("projection fixes the unit circle") {
  const TangentField circle = gen_circle(256);
  const TangentField projected = constant_speed_project(circle);
  CHECK((projected.values() - circle.values()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("projection of a circle traversed at variable speed") {
  const int n = 512;
  // g(x) = (cos phi, sin phi, 0) with phi = x - 0.3 cos x, so |g'| = 1 + 0.3 sin x.
  Samples velocity(3, n);
  for (int j = 0; j < n; ++j) {
    const double x = grid_point(n, j);
    const double phi = x - 0.3 * std::cos(x);
    velocity.col(j) = (1.0 + 0.3 * std::sin(x)) * Eigen::Vector3d(-std::sin(phi), std::cos(phi), 0.0);
  }
  const TangentField tau = constant_speed_project(velocity);
  CHECK(tau.mean_error() <= 1e-12);
  CHECK(tau.speed_error() <= 1e-12);
  // The arclength parametrisation is the unit circle up to a phase shift.
  const double phase = std::atan2(-tau.values()(0, 0), tau.values()(1, 0)) - grid_point(n, 0);
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    const double s = grid_point(n, j) + phase;
    worst = std::max(worst, (tau.values().col(j) - Eigen::Vector3d(-std::sin(s), std::cos(s), 0.0)).norm());
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("projection output satisfies the constraints") {
  for (std::uint64_t seed = 10; seed < 14; ++seed) {
    const TangentField tau = kt::unit_speed_field(kt::random_curve(seed), 128);
    CHECK(tau.mean_error() <= 1e-12);
    CHECK(tau.speed_error() <= 1e-12);
    CHECK(reconstruct_curve(tau).length() == doctest::Approx(2 * pi).epsilon(1e-12));
  }
}

TEST_CASE("projection rejects a vanishing velocity") {
  try {
    constant_speed_project(Samples(Samples::Zero(3, 32)));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroVelocity);
  }
}

}
