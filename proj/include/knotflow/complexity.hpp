#pragma once

#include "knotflow/torus_geometry.hpp"

namespace knotflow {

// c_p = double integral of (2*pi/d(x, y))^p |det(g'(x), g'(y), g(y) - g(x))| / |g(y) - g(x)|^3.
double crossing_integral(const CurveEmbedding& curve, double p);

// Average crossing number c_0 / (4 pi), i.e. the mean number of crossings
// over all projection directions.
double average_crossing_number(const CurveEmbedding& curve);

// (mean of kappa^q)^{1/q}; kappa = |tau_x|.
double total_q_curvature(const TangentField& tau, double q);

// Constant C_p of the weighted crossing bound c_p <= C_p (2pi/L)^2 |g|^2_{H^{(3+p)/2}} distortion^3,
// valid for 0 <= p < 1. C_0 = 4 pi^2 / sqrt(3).
double weighted_bound_constant(double p);

struct CrossingReport {
  double p = 0.0;
  double value = 0.0;      // c_p
  double acn = 0.0;        // c_0 / (4 pi); only filled for p = 0
  double bound_rhs = 0.0;  // right-hand side matching `value` (or `acn` for p = 0)
  bool satisfied = false;
};

// acn <= (pi / sqrt 3) (2pi/L)^2 |g|^2_{H^{3/2}} distortion^3.
CrossingReport acn_bound_check(const CurveEmbedding& curve);
CrossingReport weighted_bound_check(const CurveEmbedding& curve, double p);

}  // namespace knotflow
