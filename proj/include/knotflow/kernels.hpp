#pragma once

#include <string>
#include <string_view>

namespace knotflow {

enum class KernelFamily { None, Distortion, Mobius, OHara };

// How the force profile g(a) = -a^2 h'(a) behaves at a = 1. `Zero` kernels
// carry a fractional-Laplacian leading part (needs p < 1/2); `Order` kernels
// have g and its first m derivatives vanishing at 1.
struct Degeneracy {
  enum class Kind { Zero, Order, Unsupported };
  Kind kind = Kind::Unsupported;
  int order = -1;
};

// An interaction kernel K(u, v) evaluated at u = |chord|^2, v = (arc distance)^2
// and homogeneous in the sense K(v/a, v) = h(a) v^{-p}.
class Kernel {
 public:
  static Kernel none();
  static Kernel distortion(int q);
  static Kernel mobius();
  static Kernel ohara(double j, int q);

  KernelFamily family() const noexcept { return family_; }
  bool is_none() const noexcept { return family_ == KernelFamily::None; }
  double p() const noexcept { return p_; }
  double j() const noexcept { return j_; }
  int q() const noexcept { return q_; }
  const Degeneracy& degeneracy() const noexcept { return degeneracy_; }
  // The flow needs either a Zero kernel with p < 1/2 or an Order-m kernel
  // with m > 4p - 2.
  bool flow_admissible() const noexcept;
  std::string name() const;

  double h(double alpha) const;
  double h_prime(double alpha) const;
  double g(double alpha) const;
  double g_prime(double alpha) const;
  double g_double_prime(double alpha) const;

  // Forms taking t = log(alpha) so that quantities vanishing at alpha = 1 keep
  // full relative accuracy near the diagonal.
  double h_at_log(double t) const;
  double g_at_log(double t) const;
  double g_excess_at_log(double t) const;  // g(alpha) - g(1)
  double g_prime_at_log(double t) const;

  double K(double u, double v) const;
  double K_u(double u, double v) const;
  double uK_uu(double u, double v) const;

  // Limit of K(|g(x) - g(y)|^2, d(x, y)^2) as y -> x along a curve with the
  // given squared speed and squared curvature. Infinite when the energy density
  // is not integrable.
  double diagonal_limit(double speed_sq, double curvature_sq) const;

 private:
  Kernel(KernelFamily family, double j, int q);

  KernelFamily family_;
  double j_ = 0.0;
  int q_ = 0;
  double p_ = 0.0;
  Degeneracy degeneracy_;
};

// Parses "distortion:q=<int>", "mobius", "ohara:j=<rational>,q=<int>", "none".
Kernel parse_kernel(std::string_view spec);

}  // namespace knotflow
