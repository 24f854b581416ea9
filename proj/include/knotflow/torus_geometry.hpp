#pragma once

#include <vector>

#include "knotflow/spectral.hpp"

namespace knotflow {

inline constexpr double kTolConstraint = 1e-8;

// Chords shorter than this are treated as coincident points.
double chord_floor(int n) noexcept;

// Distance on the unit-length-2*pi circle: min(|z mod 2pi|, 2pi - |z mod 2pi|).
double geodesic_distance(double z) noexcept;

// Geodesic distance between grid nodes j and l, indexed by |j - l|.
std::vector<double> geodesic_table(int n);

// A tangent field sampled on the grid, together with its Fourier coefficients.
class TangentField {
 public:
  explicit TangentField(Samples values);
  static TangentField from_coeffs(Coeffs coeffs, int n);

  int size() const noexcept { return static_cast<int>(values_.cols()); }
  const Samples& values() const noexcept { return values_; }
  const Coeffs& coeffs() const noexcept { return coeffs_; }

  Samples derivative() const;
  Samples second_derivative() const;

  double mean_error() const;
  double speed_error() const;
  bool satisfies_constraints(double tol = kTolConstraint) const;

 private:
  TangentField(Samples values, Coeffs coeffs);

  Samples values_;
  Coeffs coeffs_;
};

// The closed curve whose tangent is a given field, fixed to have zero mean.
class CurveEmbedding {
 public:
  CurveEmbedding(Coeffs coeffs, int n);

  int size() const noexcept { return static_cast<int>(points_.cols()); }
  const Samples& points() const noexcept { return points_; }
  const Coeffs& coeffs() const noexcept { return coeffs_; }
  const Samples& velocity() const noexcept { return velocity_; }
  const Samples& acceleration() const noexcept { return acceleration_; }
  double speed() const noexcept { return speed_; }
  double length() const noexcept;

 private:
  Coeffs coeffs_;
  Samples points_;
  Samples velocity_;
  Samples acceleration_;
  double speed_;
};

CurveEmbedding reconstruct_curve(const TangentField& tau);

// max over node pairs of (arc length)/(chord). Throws DegenerateChord when two
// distinct nodes coincide.
double distortion(const CurveEmbedding& curve);

// sqrt(sum_k |k|^{2s} |c_k|^2) with both signs of k counted.
double sobolev_seminorm(const Coeffs& coeffs, int n, double s);
double sobolev_seminorm(const CurveEmbedding& curve, double s);

struct ProjectionOptions {
  int n_out = 0;  // 0 keeps the input size
  double tol = 1e-12;
  int max_iterations = 200;
};

// Reparametrises by arc length, rescales to total length 2*pi and then
// alternates pointwise normalisation with removal of the mean until both
// constraints hold to `tol`.
TangentField constant_speed_project(const TangentField& tau, const ProjectionOptions& options = {});
// Same, starting from velocity samples that need not have unit length.
TangentField constant_speed_project(const Samples& velocity, const ProjectionOptions& options = {});
// Same, starting from points of a closed curve sampled at uniform parameter.
TangentField project_curve_points(const Samples& points, const ProjectionOptions& options = {});

}  // namespace knotflow
