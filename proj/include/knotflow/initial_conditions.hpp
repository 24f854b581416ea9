#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "knotflow/torus_geometry.hpp"

namespace knotflow {

TangentField gen_circle(int n);
TangentField gen_double_covered(int n);

// Double-covered circle with a normal bump -e1 sin(x) and binormal
// perturbation e2 cos(5x); a single transverse crossing for e1, e2 != 0.
TangentField gen_dc_perturbation(int n, double e1, double e2);

// Trefoil on a thin torus around the double-covered circle, 0 < eps <= 0.2.
TangentField gen_trefoil_torus(int n, double eps);

struct SupercoilParams {
  double amp1 = 0.3;
  double freq1 = 8.0;
  double amp2 = 0.05;
  double freq2 = 32.0;
};

// A circle wound into a coil, which is itself wound into a finer coil.
TangentField gen_supercoil(int n, const SupercoilParams& params = {});

// Unit circle plus eps times a random smooth mean-zero field in modes 2..5.
TangentField gen_perturbed_circle(int n, double eps, std::uint64_t seed);

// Parses "circle", "dc", "dc-pert:e1=..,e2=..", "trefoil:eps=..",
// "supercoil:a1=..,f1=..,a2=..,f2=..", "circle-pert:eps=.." and "file:<path>".
struct GeneratorSpec {
  std::string name;
  std::map<std::string, double, std::less<>> params;
  std::string path;
};

GeneratorSpec parse_generator(std::string_view spec);
TangentField generate(const GeneratorSpec& spec, int n, std::uint64_t seed = 0);

}  // namespace knotflow
