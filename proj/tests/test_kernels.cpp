#include <doctest.h>

#include <cmath>
#include <vector>

#include "knotflow/errors.hpp"
#include "knotflow/kernels.hpp"

using namespace knotflow;

namespace {

std::vector<Kernel> families() {
  return {Kernel::distortion(1), Kernel::distortion(6), Kernel::mobius(), Kernel::ohara(1.0, 1),
          Kernel::ohara(0.2, 5), Kernel::ohara(0.5, 2), Kernel::ohara(1.0, 2)};
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("distortion family") {
  const Kernel k1 = Kernel::distortion(1);
  CHECK(k1.K(1.0, 2.0) == 2.0);
  CHECK(k1.g(1.0) == -1.0);
  CHECK(k1.p() == 0.0);
  CHECK(k1.degeneracy().kind == Degeneracy::Kind::Zero);
  CHECK(k1.flow_admissible());
  CHECK(Kernel::distortion(6).h(2.0) == doctest::Approx(64.0));
  CHECK_THROWS_AS(Kernel::distortion(0), Error);
}

TEST_CASE("Mobius kernel") {
  const Kernel m = Kernel::mobius();
  CHECK(m.K(1.0, 1.0) == 0.0);
  CHECK(m.K(0.5, 1.0) == doctest::Approx(1.0));
  CHECK(m.p() == 1.0);
  for (double a : {1.0, 1.5, 3.0, 40.0}) {
    CHECK(m.h(a) == doctest::Approx(a - 1.0));
    CHECK(m.g(a) == doctest::Approx(-a * a));
  }
  // g(1) != 0 with p = 1: the splitting of the force is not available.
  CHECK_FALSE(m.flow_admissible());
}

TEST_CASE("O'Hara family") {
  const Kernel o = Kernel::ohara(0.2, 5);
  CHECK(o.p() == doctest::Approx(1.0));
  CHECK(std::abs(o.g(1.0)) <= 1e-12);
  CHECK(o.degeneracy().kind == Degeneracy::Kind::Order);
  CHECK(o.degeneracy().order == 3);
  CHECK(o.flow_admissible());

  const Kernel o11 = Kernel::ohara(1.0, 1);
  const Kernel m = Kernel::mobius();
  CHECK(o11.K(1.0, 2.0) == doctest::Approx(m.K(1.0, 2.0)));
  CHECK(o11.K_u(1.0, 2.0) == doctest::Approx(m.K_u(1.0, 2.0)));

  try {
    Kernel::ohara(0.2, 4);
    FAIL("jq < 1 must be rejected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InadmissibleParameters);
  }
}

TEST_CASE("degenerate kernels have vanishing derivatives of g at 1") {
  const Kernel o = Kernel::ohara(0.2, 5);
  // Root of order 4: g(1 + s) ~ c s^4.
  for (double s : {1e-2, 5e-3}) {
    const double ratio = o.g(1.0 + s) / o.g(1.0 + 0.5 * s);
    CHECK(std::log2(ratio) == doctest::Approx(4.0).epsilon(0.02));
  }
  CHECK(std::abs(o.g_prime(1.0)) <= 1e-12);
}

TEST_CASE("homogeneity and consistency of g with K_u") {
  for (const Kernel& k : families()) {
    CAPTURE(k.name());
    for (double a : {1.0, 1.1, 2.0, 7.5, 100.0}) {
      for (double v : {0.1, 1.0, 10.0}) {
        const double u = v / a;
        const double scale = std::pow(v, -k.p());
        CHECK(k.K(u, v) == doctest::Approx(k.h(a) * scale).epsilon(1e-10).scale(1e-300));
        CHECK(k.K_u(u, v) == doctest::Approx(k.g(a) * scale / v).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("finite differences of K in u match g") {
  for (const Kernel& k : families()) {
    CAPTURE(k.name());
    for (double a : {1.3, 2.0, 5.0}) {
      for (double v : {0.1, 1.0, 10.0}) {
        const double u = v / a;
        const double du = 1e-5 * u;
        const double fd = (k.K(u + du, v) - k.K(u - du, v)) / (2 * du);
        CHECK(fd == doctest::Approx(k.g(a) * std::pow(v, -k.p() - 1)).epsilon(1e-6));
        const double fd2 = (k.K_u(u + du, v) - k.K_u(u - du, v)) / (2 * du);
        CHECK(u * fd2 == doctest::Approx(k.uK_uu(u, v)).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("repulsive kernels are non-increasing and convex in the chord") {
  // Sampled on chords not longer than the arc, where every built-in kernel is
  // decreasing and convex.
  for (const Kernel& k : families()) {
    CAPTURE(k.name());
    for (double z : {0.3, 1.0, 2.5}) {
      const double v = z * z;
      for (int i = 1; i < 40; ++i) {
        const double u = v * i / 40.0;
        const double du = 1e-3 * v;
        const double left = k.K(u - du, v), mid = k.K(u, v), right = k.K(u + du, v);
        CHECK(right <= mid * (1 + 1e-12) + 1e-300);
        CHECK(left + right - 2 * mid >= -1e-9 * std::abs(mid));
      }
    }
  }
}

TEST_CASE("parsing kernel specs") {
  CHECK(parse_kernel("none").is_none());
  CHECK(parse_kernel("distortion:q=3").q() == 3);
  CHECK(parse_kernel("mobius").family() == KernelFamily::Mobius);
  const Kernel o = parse_kernel("ohara:j=1/5,q=5");
  CHECK(o.j() == doctest::Approx(0.2));
  CHECK(o.q() == 5);
  for (const char* bad : {"", "distortion", "distortion:q=x", "ohara:j=1", "spline", "mobius:q=2"}) {
    CAPTURE(bad);
    try {
      parse_kernel(bad);
      FAIL("expected ParseError");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ParseError);
    }
  }
}

TEST_CASE("diagonal limits") {
  CHECK(Kernel::distortion(2).diagonal_limit(1.0, 4.0) == 1.0);
  CHECK(Kernel::mobius().diagonal_limit(1.0, 1.0) == doctest::Approx(1.0 / 12.0));
  CHECK(Kernel::ohara(1.0, 2).diagonal_limit(1.0, 1.0) == doctest::Approx(1.0 / 144.0));
  CHECK(Kernel::none().diagonal_limit(1.0, 1.0) == 0.0);
}

}
