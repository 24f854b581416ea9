#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

#include "knotflow/kernels.hpp"
#include "knotflow/spectral.hpp"

namespace knotflow {

// Kernels whose circle moments are needed for the linearisation.
enum class MomentKernel { Ku = 0, UKuu = 1, KuPlusUKuu = 2 };

// How to treat moment integrands that blow up at z = 0.
enum class MomentPolicy { Strict, FinitePart };

// Integrals over the circle of M(2(1 - cos z), z^2) against the weights
//   lambda:    (1 - cos kz)
//   lambda_pm: (1 + cos z)(1 - cos kz)
//   lambda_mp: (1 - cos z)(1 + cos kz)
//   lambda_mm: (1 - cos z)(1 - cos kz)
//   sigma:     sin z sin kz
// stored for k = 0..k_max + 1.
struct MomentTable {
  std::vector<double> lambda, lambda_pm, lambda_mp, lambda_mm, sigma;
};

struct KernelMoments {
  int k_max = 0;
  bool finite_part = false;  // true if any integral was taken in the Hadamard sense
  std::array<MomentTable, 3> tables;

  // All weights are even in k except sigma, which is odd.
  double lambda(MomentKernel m, int k) const;
  double lambda_pm(MomentKernel m, int k) const;
  double lambda_mp(MomentKernel m, int k) const;
  double lambda_mm(MomentKernel m, int k) const;
  double sigma(MomentKernel m, int k) const;
};

// Strict mode throws NonRemovableSingularity for integrands that are not
// bounded at z = 0; FinitePart subtracts the c/z^2 term and adds its
// Hadamard finite part -2c/pi.
KernelMoments kernel_moments(const Kernel& kernel, int k_max, MomentPolicy policy = MomentPolicy::Strict);

// Single moment by direct quadrature, for any integer k.
enum class MomentWeight { Lambda, LambdaPM, LambdaMP, LambdaMM, Sigma };
double kernel_moment(const Kernel& kernel, MomentKernel m, MomentWeight w, int k,
                     MomentPolicy policy = MomentPolicy::Strict, bool* used_finite_part = nullptr);

using ModeMatrix = Eigen::Matrix3cd;

// Coefficient maps in the (normal, tangent, binormal) basis of perturbations
// of the unit circle, p_k -> A p_k.
ModeMatrix primitive_matrix(int k);
ModeMatrix derivative_matrix(int k);
ModeMatrix second_derivative_matrix(int k);
ModeMatrix interaction_matrix(const KernelMoments& moments, int k);
ModeMatrix composed_interaction_matrix(const KernelMoments& moments, int k);
// Full linearisation of the flow at the unit circle.
ModeMatrix linearization_matrix(const KernelMoments& moments, int k);

struct ModeMatrices {
  int k_max = 0;
  std::vector<ModeMatrix> matrices;  // index k + k_max
  const ModeMatrix& at(int k) const { return matrices.at(static_cast<std::size_t>(k + k_max)); }
};

ModeMatrices circle_linearization(const KernelMoments& moments);
ModeMatrices circle_linearization(const Kernel& kernel, int k_max, MomentPolicy policy = MomentPolicy::Strict);

struct ModeSpectrum {
  int k = 0;
  std::vector<std::complex<double>> eigenvalues;
};

struct SpectrumReport {
  std::vector<ModeSpectrum> modes;
  int zero_count = 0;
  double spectral_gap = 0.0;  // smallest -Re over the non-zero eigenvalues
  bool others_stable = false; // every non-zero eigenvalue has negative real part
};

inline constexpr double kZeroEigenvalueTol = 1e-8;

// Eigenvalues restricted to mean-zero perturbations: k = 0 drops the binormal
// component and k = +-1 enforces equal normal and tangent coefficients.
SpectrumReport spectrum_report(const ModeMatrices& matrices);

// Builds the perturbation of the unit circle with coefficient vector p in mode k
// (real part of the complex field), sampled on n nodes.
Samples mode_field(int k, const Eigen::Vector3cd& p, int n);
// Recovers the mode-k coefficient vector of a real field; inverse of
// mode_field on the real part, returning the complex coefficient for +k.
Eigen::Vector3cd mode_coefficients(const Samples& field, int k);

// Linear decay rates of the double-covered circle under pure bending in mode k.
struct DoubleCoverRates {
  int k = 0;
  double normal_rate = 0.0;
  double tangent_rate = 0.0;
  double binormal_rate = 0.0;  // k^2 - 4; negative means growth
  double coupling = 0.0;       // size of the 4 d/dx coupling from tangent into normal
};
std::vector<DoubleCoverRates> dc_bending_rates(int k_max);

}  // namespace knotflow
