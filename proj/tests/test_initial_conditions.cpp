#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "knotflow/cli_io.hpp"
#include "knotflow/energetics.hpp"
#include "knotflow/errors.hpp"
#include "knotflow/initial_conditions.hpp"
#include "support.hpp"

using namespace knotflow;
using std::numbers::pi;

namespace {

struct PlanarCrossing {
  double height_gap;  // |z_a - z_b| at the crossing
};

// All transverse self-intersections of the xy-projection of a closed polygon.
std::vector<PlanarCrossing> planar_crossings(const Samples& pts) {
  const int n = static_cast<int>(pts.cols());
  std::vector<PlanarCrossing> out;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 2; b < n; ++b) {
      if (a == 0 && b == n - 1) continue;
      const Eigen::Vector2d p = pts.col(a).head<2>(), r = pts.col((a + 1) % n).head<2>() - p;
      const Eigen::Vector2d q = pts.col(b).head<2>(), s = pts.col((b + 1) % n).head<2>() - q;
      const double denom = r.x() * s.y() - r.y() * s.x();
      if (std::abs(denom) < 1e-15) continue;
      const Eigen::Vector2d d = q - p;
      const double t = (d.x() * s.y() - d.y() * s.x()) / denom;
      const double u = (d.x() * r.y() - d.y() * r.x()) / denom;
      if (t < 0 || t >= 1 || u < 0 || u >= 1) continue;
      const double za = (1 - t) * pts(2, a) + t * pts(2, (a + 1) % n);
      const double zb = (1 - u) * pts(2, b) + u * pts(2, (b + 1) % n);
      out.push_back({std::abs(za - zb)});
    }
  }
  return out;
}

void check_invariants(const TangentField& tau) {
  CHECK(tau.mean_error() <= 1e-12);
  CHECK(tau.speed_error() <= 1e-12);
}

ErrorKind kind_of(const auto& call) {
  try {
    call();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::IoError;
}

}  // namespace

TEST_SUITE("initial_conditions") {

TEST_CASE("circle") {
  const TangentField tau = gen_circle(64);
  check_invariants(tau);
  const CurveEmbedding c = reconstruct_curve(tau);
  for (int j = 0; j < 64; ++j) {
    const double x = grid_point(64, j);
    CHECK((c.points().col(j) - Eigen::Vector3d(std::cos(x), std::sin(x), 0)).norm() < 1e-13);
  }
  CHECK(bending_energy(tau) == doctest::Approx(1.0));
  CHECK(distortion(c) == doctest::Approx(pi / 2).epsilon(1e-6));
}

TEST_CASE("double-covered circle") {
  const TangentField tau = gen_double_covered(64);
  check_invariants(tau);
  const Samples tx = tau.derivative();
  CHECK((tx.colwise().norm().array() - 2.0).abs().maxCoeff() < 1e-12);
  CHECK(bending_energy(tau) == doctest::Approx(4.0));
}

TEST_CASE("perturbed double cover") {
  CHECK((gen_dc_perturbation(64, 0.0, 0.0).values() - gen_double_covered(64).values()).norm() == 0.0);
  CHECK(kind_of([] { gen_dc_perturbation(64, 0.3, 0.1); }) == ErrorKind::ParameterOutOfRange);

  // Both perturbation directions are orthogonal to the tangent, so the
  // projection only acts at second order.
  auto defect = [](double e) {
    const int n = 256;
    const TangentField tau = gen_dc_perturbation(n, e, 2 * e);
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
      const double x = grid_point(n, j);
      const Eigen::Vector3d t(-std::sin(2 * x), std::cos(2 * x), 0), nrm(-std::cos(2 * x), -std::sin(2 * x), 0);
      const Eigen::Vector3d raw = t - e * std::sin(x) * nrm + 2 * e * std::cos(5 * x) * Eigen::Vector3d::UnitZ();
      worst = std::max(worst, (tau.values().col(j) - raw).norm());
    }
    return worst;
  };
  CHECK(defect(0.02) / defect(0.01) == doctest::Approx(4.0).epsilon(0.1));

  const TangentField tau = gen_dc_perturbation(512, 0.075, 0.15);
  check_invariants(tau);
  const auto crossings = planar_crossings(reconstruct_curve(tau).points());
  REQUIRE(crossings.size() == 1);
  CHECK(crossings[0].height_gap > 1e-3);
}

TEST_CASE("trefoil near the double cover") {
  const int n = 256;
  // The raw field tau_c + eps psi has mean zero before projection.
  const double eps = 0.1;
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (int j = 0; j < n; ++j) {
    const double x = grid_point(n, j);
    const Eigen::Vector3d t(-std::sin(2 * x), std::cos(2 * x), 0), nrm(-std::cos(2 * x), -std::sin(2 * x), 0);
    mean += t + eps * (std::cos(3 * x) * t + 1.5 * std::sin(3 * x) * nrm - 3 * std::cos(3 * x) * Eigen::Vector3d::UnitZ());
  }
  CHECK(mean.norm() / n < 1e-14);

  check_invariants(gen_trefoil_torus(n, eps));
  CHECK(kind_of([] { gen_trefoil_torus(64, 0.3); }) == ErrorKind::ParameterOutOfRange);
  CHECK(kind_of([] { gen_trefoil_torus(64, 0.0); }) == ErrorKind::ParameterOutOfRange);

  // The raw field has |tau|^2 = 1 + 2 eps cos 3x + O(eps^2), so projection
  // moves it by O(eps).
  auto defect = [&](double e) {
    const TangentField tau = gen_trefoil_torus(n, e);
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
      const double x = grid_point(n, j);
      const Eigen::Vector3d t(-std::sin(2 * x), std::cos(2 * x), 0), nrm(-std::cos(2 * x), -std::sin(2 * x), 0);
      const Eigen::Vector3d raw =
          t + e * (std::cos(3 * x) * t + 1.5 * std::sin(3 * x) * nrm - 3 * std::cos(3 * x) * Eigen::Vector3d::UnitZ());
      worst = std::max(worst, (tau.values().col(j) - raw).norm());
    }
    return worst;
  };
  CHECK(defect(0.02) / defect(0.01) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("supercoil") {
  const TangentField flat = gen_supercoil(128, {0.0, 8.0, 0.0, 32.0});
  CHECK((flat.values() - gen_circle(128).values()).cwiseAbs().maxCoeff() < 1e-10);

  const TangentField coil = gen_supercoil(512);
  check_invariants(coil);
  const CurveEmbedding c = reconstruct_curve(coil);
  CHECK(std::isfinite(distortion(c)));
  CHECK(planar_crossings(c.points()).size() % 2 == 0);
  CHECK(kind_of([] { gen_supercoil(256, {1.0, 8.0, 0.0, 32.0}); }) == ErrorKind::SelfIntersection);
}

TEST_CASE("perturbed circle is reproducible") {
  const TangentField a = gen_perturbed_circle(64, 1e-3, 17);
  const TangentField b = gen_perturbed_circle(64, 1e-3, 17);
  check_invariants(a);
  CHECK((a.values().array() == b.values().array()).all());
  CHECK((a.values() - gen_perturbed_circle(64, 1e-3, 18).values()).norm() > 0.0);
}

TEST_CASE("curve files") {
  const auto dir = std::filesystem::temp_directory_path() / "knotflow_ic_test";
  std::filesystem::create_directories(dir);
  const TangentField trefoil = gen_trefoil_torus(128, 0.1);
  write_curve_file(dir / "t.curve", trefoil.values());
  const TangentField loaded = load_curve_file(dir / "t.curve");
  CHECK((loaded.values() - trefoil.values()).cwiseAbs().maxCoeff() < 1e-10);

  write_curve_file(dir / "c.curve", gen_circle(64).values());
  CHECK((generate(parse_generator("file:" + (dir / "c.curve").string()), 64).values() - gen_circle(64).values())
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  {
    std::ofstream bad(dir / "bad.curve");
    bad << "# not a curve\n";
  }
  CHECK(kind_of([&] { load_curve_file(dir / "bad.curve"); }) == ErrorKind::ParseError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("generator specs") {
  for (const char* spec : {"circle", "dc", "dc-pert:e1=0.075,e2=0.15", "trefoil:eps=0.1", "supercoil", "circle-pert:eps=0.01"}) {
    CAPTURE(spec);
    check_invariants(generate(parse_generator(spec), 256, 4));
  }
  const GeneratorSpec s = parse_generator("supercoil:a1=0.2,f1=4,a2=0.03,f2=16");
  CHECK(s.params.at("f2") == 16.0);
  for (const char* bad : {"helix", "trefoil:eps", "trefoil:size=0.1", "dc-pert:e1=x,e2=0", "file:"}) {
    CAPTURE(bad);
    CHECK(kind_of([&] { parse_generator(bad); }) == ErrorKind::ParseError);
  }
  CHECK(kind_of([] { generate(parse_generator("trefoil"), 64); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { generate(parse_generator("circle"), 100); }) == ErrorKind::ParameterOutOfRange);
}

}
