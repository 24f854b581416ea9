#include "knotflow/initial_conditions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <vector>

#include "knotflow/cli_io.hpp"
#include "knotflow/errors.hpp"

namespace knotflow {
namespace {

Samples double_cover_tangent(int n) {
  Samples t(3, n);
  for (int j = 0; j < n; ++j) {
    const double x = grid_point(n, j);
    t.col(j) << -std::sin(2 * x), std::cos(2 * x), 0.0;
  }
  return t;
}

// Unit normal tau'/2 of the double-covered circle; the binormal is e_z.
Eigen::Vector3d double_cover_normal(double x) { return {-std::cos(2 * x), -std::sin(2 * x), 0.0}; }

TangentField project_embedded(const Samples& velocity) {
  TangentField tau = constant_speed_project(velocity);
  try {
    distortion(reconstruct_curve(tau));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DegenerateChord) {
      throw Error(ErrorKind::SelfIntersection, "generated curve is not embedded");
    }
    throw;
  }
  return tau;
}

double param(const GeneratorSpec& spec, std::string_view key, double fallback) {
  const auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}

double require_param(const GeneratorSpec& spec, std::string_view key) {
  const auto it = spec.params.find(key);
  if (it == spec.params.end()) {
    throw Error(ErrorKind::ParseError, "generator '" + spec.name + "' needs parameter " + std::string(key));
  }
  return it->second;
}

}  // namespace

TangentField gen_circle(int n) {
  Samples t(3, n);
  for (int j = 0; j < n; ++j) {
    const double x = grid_point(n, j);
    t.col(j) << -std::sin(x), std::cos(x), 0.0;
  }
  return TangentField(std::move(t));
}

TangentField gen_double_covered(int n) { return TangentField(double_cover_tangent(n)); }

TangentField gen_dc_perturbation(int n, double e1, double e2) {
  if (std::abs(e1) > 0.25) throw Error(ErrorKind::ParameterOutOfRange, "normal amplitude must satisfy |e1| <= 1/4");
  if (e1 == 0.0 && e2 == 0.0) return gen_double_covered(n);
  Samples t = double_cover_tangent(n);
  for (int j = 0; j < n; ++j) {
    const double x = grid_point(n, j);
    t.col(j) += -e1 * std::sin(x) * double_cover_normal(x);
    t(2, j) += e2 * std::cos(5 * x);
  }
  return project_embedded(t);
}

TangentField gen_trefoil_torus(int n, double eps) {
  if (!(eps > 0.0 && eps <= 0.2)) throw Error(ErrorKind::ParameterOutOfRange, "trefoil needs 0 < eps <= 0.2");
  Samples t = double_cover_tangent(n);
  for (int j = 0; j < n; ++j) {
    const double x = grid_point(n, j);
    const Eigen::Vector3d tangent = t.col(j);
    const Eigen::Vector3d bump = std::cos(3 * x) * tangent + 1.5 * std::sin(3 * x) * double_cover_normal(x) -
                                 3.0 * std::cos(3 * x) * Eigen::Vector3d::UnitZ();
    t.col(j) += eps * bump;
  }
  return project_embedded(t);
}

TangentField gen_supercoil(int n, const SupercoilParams& params) {
  Samples points(3, n);
  for (int j = 0; j < n; ++j) {
    const double s = grid_point(n, j);
    const Eigen::Vector3d base(std::cos(s), std::sin(s), 0.0);
    const Eigen::Vector3d tangent(-std::sin(s), std::cos(s), 0.0);
    const Eigen::Vector3d normal = -base;
    const Eigen::Vector3d binormal = Eigen::Vector3d::UnitZ();

    const double c1 = std::cos(params.freq1 * s);
    const double s1 = std::sin(params.freq1 * s);
    const Eigen::Vector3d radial = c1 * normal + s1 * binormal;
    const Eigen::Vector3d coil = base + params.amp1 * radial;
    const Eigen::Vector3d coil_velocity =
        (1.0 - params.amp1 * c1) * tangent + params.amp1 * params.freq1 * (-s1 * normal + c1 * binormal);

    // Frame around the first coil built from its tangent and the radial direction.
    const Eigen::Vector3d t1 = coil_velocity.normalized();
    const Eigen::Vector3d u = (radial - radial.dot(t1) * t1).normalized();
    const Eigen::Vector3d w = t1.cross(u);
    points.col(j) = coil + params.amp2 * (std::cos(params.freq2 * s) * u + std::sin(params.freq2 * s) * w);
  }
  const Samples velocity = inverse_transform(differentiate(forward_transform(points), n), n);
  return project_embedded(velocity);
}

TangentField gen_perturbed_circle(int n, double eps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  Samples t = gen_circle(n).values();
  for (int k = 2; k <= 5; ++k) {
    Eigen::Vector3d a, b;
    for (int c = 0; c < 3; ++c) {
      a(c) = coeff(rng);
      b(c) = coeff(rng);
    }
    const double scale = eps / (k * k);
    for (int j = 0; j < n; ++j) {
      const double x = grid_point(n, j);
      t.col(j) += scale * (std::cos(k * x) * a + std::sin(k * x) * b);
    }
  }
  return constant_speed_project(t);
}

GeneratorSpec parse_generator(std::string_view text) {
  GeneratorSpec spec;
  const auto colon = text.find(':');
  spec.name = std::string(text.substr(0, colon));
  if (spec.name == "file") {
    if (colon == std::string_view::npos || colon + 1 == text.size()) {
      throw Error(ErrorKind::ParseError, "file generator needs a path");
    }
    spec.path = std::string(text.substr(colon + 1));
    return spec;
  }
  std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) throw Error(ErrorKind::ParseError, "bad parameter '" + std::string(item) + "'");
    const std::string_view value = item.substr(eq + 1);
    double v = 0.0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size() || value.empty()) {
      throw Error(ErrorKind::ParseError, "bad number in '" + std::string(item) + "'");
    }
    spec.params[std::string(item.substr(0, eq))] = v;
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }

  static const std::map<std::string, std::vector<std::string>, std::less<>> allowed{
      {"circle", {}},
      {"dc", {}},
      {"dc-pert", {"e1", "e2"}},
      {"trefoil", {"eps"}},
      {"supercoil", {"a1", "f1", "a2", "f2"}},
      {"circle-pert", {"eps"}},
  };
  const auto it = allowed.find(spec.name);
  if (it == allowed.end()) throw Error(ErrorKind::ParseError, "unknown generator '" + spec.name + "'");
  for (const auto& [key, value] : spec.params) {
    if (std::find(it->second.begin(), it->second.end(), key) == it->second.end()) {
      throw Error(ErrorKind::ParseError, "generator '" + spec.name + "' does not take parameter " + key);
    }
  }
  return spec;
}

TangentField generate(const GeneratorSpec& spec, int n, std::uint64_t seed) {
  if (spec.name == "file") return load_curve_file(spec.path, n);
  if (!is_power_of_two(n) || n < 8) throw Error(ErrorKind::ParameterOutOfRange, "n must be a power of two >= 8");
  if (spec.name == "circle") return gen_circle(n);
  if (spec.name == "dc") return gen_double_covered(n);
  if (spec.name == "dc-pert") return gen_dc_perturbation(n, require_param(spec, "e1"), require_param(spec, "e2"));
  if (spec.name == "trefoil") return gen_trefoil_torus(n, require_param(spec, "eps"));
  if (spec.name == "supercoil") {
    const SupercoilParams defaults;
    return gen_supercoil(n, {param(spec, "a1", defaults.amp1), param(spec, "f1", defaults.freq1),
                             param(spec, "a2", defaults.amp2), param(spec, "f2", defaults.freq2)});
  }
  if (spec.name == "circle-pert") return gen_perturbed_circle(n, require_param(spec, "eps"), seed);
  throw Error(ErrorKind::ParseError, "unknown generator '" + spec.name + "'");
}

}  // namespace knotflow
