#pragma once

#include "knotflow/kernels.hpp"
#include "knotflow/torus_geometry.hpp"

namespace knotflow {

struct EnergyBreakdown {
  double e_bend = 0.0;         // sum_k k^2 |tau_k|^2
  double e_interaction = 0.0;  // (1/4) double integral of K over the torus
  double e_total = 0.0;        // e_bend + e_interaction
};

// Throws ConstraintViolated unless |tau| = 1 to kTolConstraint.
double bending_energy(const TangentField& tau);

// Trapezoid rule on the n x n node grid; the diagonal cell uses the analytic
// limit of the kernel along the diagonal.
double interaction_energy(const CurveEmbedding& curve, const Kernel& kernel);

EnergyBreakdown total_energy(const TangentField& tau, const Kernel& kernel);

// The functional decreased by the flow: (1/2) int |tau_x|^2 dx + E_K, i.e.
// pi * e_bend + e_interaction.
double flow_energy(const EnergyBreakdown& energy) noexcept;

}  // namespace knotflow
