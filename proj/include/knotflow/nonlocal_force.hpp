#pragma once

#include <vector>

#include "knotflow/kernels.hpp"
#include "knotflow/torus_geometry.hpp"

namespace knotflow {

// Symbol of the operator L_p[g](x) = p.v. int (g(x) - g(y)) / d(x, y)^{2(1+p)} dy,
// lambda_k = 2 int_0^pi (1 - cos kz) z^{-2(1+p)} dz for k = 0..n/2.
struct FractionalMultiplier {
  double p = 0.0;
  int n = 0;
  std::vector<double> lambda;
};

// Throws InadmissibleExponent unless 0 <= p < 1/2.
FractionalMultiplier build_multiplier(double p, int n);
double multiplier_value(double p, int k);

Samples singular_part(const CurveEmbedding& curve, const FractionalMultiplier& multiplier);

// int (g(a) - g(1)) (g(x) - g(y)) / d^{2(p+1)} dy with a = d^2/|g(x) - g(y)|^2;
// for kernels with g(1) = 0 this is the whole force.
Samples regular_force(const CurveEmbedding& curve, const Kernel& kernel);

struct Force {
  Samples f;  // first variation of E_K with respect to the curve
  Samples F;  // its mean-zero primitive
};

// `multiplier` is required when g(1) != 0 and must match the kernel's p and
// the grid size.
Force assemble_force(const CurveEmbedding& curve, const Kernel& kernel, const FractionalMultiplier* multiplier);

// Whether assemble_force needs a multiplier for this kernel.
bool needs_multiplier(const Kernel& kernel);

}  // namespace knotflow
