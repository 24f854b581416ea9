#include "knotflow/equilibrium_spectrum.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "knotflow/errors.hpp"
#include "knotflow/parallel.hpp"
#include "knotflow/quadrature.hpp"

namespace knotflow {
namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr cd kI{0.0, 1.0};

// log(v/u) at u = 2(1 - cos z), v = z^2, i.e. -2 log(sin(y)/y) with y = z/2.
double log_alpha_on_circle(double z) {
  const double y = 0.5 * z;
  double sinc_minus_one = 0.0;
  if (y < 1e-2) {
    const double y2 = y * y;
    sinc_minus_one = -y2 / 6.0 * (1.0 - y2 / 20.0 * (1.0 - y2 / 42.0 * (1.0 - y2 / 72.0)));
  } else {
    sinc_minus_one = std::sin(y) / y - 1.0;
  }
  return -2.0 * std::log1p(sinc_minus_one);
}

double kernel_on_circle(const Kernel& kernel, MomentKernel m, double z) {
  const double t = log_alpha_on_circle(z);
  const double scale = std::pow(z * z, -(kernel.p() + 1.0));
  switch (m) {
    case MomentKernel::Ku: return kernel.g_at_log(t) * scale;
    case MomentKernel::UKuu: return -std::exp(t) * kernel.g_prime_at_log(t) * scale;
    case MomentKernel::KuPlusUKuu: return (kernel.g_at_log(t) - std::exp(t) * kernel.g_prime_at_log(t)) * scale;
  }
  return 0.0;
}

double weight_on_circle(MomentWeight w, int k, double z) {
  const double kz = k * z;
  const double s_half = std::sin(0.5 * z);
  const double c_half = std::cos(0.5 * z);
  const double sk_half = std::sin(0.5 * kz);
  const double ck_half = std::cos(0.5 * kz);
  switch (w) {
    case MomentWeight::Lambda: return 2.0 * sk_half * sk_half;
    case MomentWeight::LambdaPM: return 4.0 * c_half * c_half * sk_half * sk_half;
    case MomentWeight::LambdaMP: return 4.0 * s_half * s_half * ck_half * ck_half;
    case MomentWeight::LambdaMM: return 4.0 * s_half * s_half * sk_half * sk_half;
    case MomentWeight::Sigma: return std::sin(z) * std::sin(kz);
  }
  return 0.0;
}

// Value at z = 0 of the (bounded) integrand, from g(1), g'(1) and the z^2
// coefficient of the weight.
double integrand_limit(const Kernel& kernel, MomentKernel m, MomentWeight w, int k) {
  if (kernel.p() != 0.0) return 0.0;
  double w2 = 0.0;
  switch (w) {
    case MomentWeight::Lambda: w2 = 0.5 * k * k; break;
    case MomentWeight::LambdaPM: w2 = 1.0 * k * k; break;
    case MomentWeight::LambdaMP: w2 = 1.0; break;
    case MomentWeight::LambdaMM: w2 = 0.0; break;
    case MomentWeight::Sigma: w2 = k; break;
  }
  double m0 = 0.0;
  switch (m) {
    case MomentKernel::Ku: m0 = kernel.g(1.0); break;
    case MomentKernel::UKuu: m0 = -kernel.g_prime(1.0); break;
    case MomentKernel::KuPlusUKuu: m0 = kernel.g(1.0) - kernel.g_prime(1.0); break;
  }
  return m0 * w2;
}

}  // namespace

double kernel_moment(const Kernel& kernel, MomentKernel m, MomentWeight w, int k, MomentPolicy policy,
                     bool* used_finite_part) {
  if (used_finite_part) *used_finite_part = false;
  if (kernel.is_none()) return 0.0;
  auto integrand = [&](double z) {
    if (z == 0.0) return integrand_limit(kernel, m, w, k);
    return kernel_on_circle(kernel, m, z) * weight_on_circle(w, k, z);
  };

  // Detect blow-up at the origin from the growth between two small arguments.
  const double z1 = 1e-3;
  const double i1 = integrand(z1);
  const double i2 = integrand(0.1 * z1);
  const bool singular = std::abs(i2) > 1e-6 && std::abs(i2) > 10.0 * std::abs(i1);
  const int kk = std::max(1, std::abs(k));
  const double wavelength = 2.0 * kPi / kk;

  if (!singular) return 2.0 * integrate_oscillatory(integrand, 0.0, kPi, wavelength, 1e-13);

  if (policy == MomentPolicy::Strict) {
    throw Error(ErrorKind::NonRemovableSingularity,
                "moment integrand of kernel " + kernel.name() + " is unbounded at the diagonal");
  }
  if (used_finite_part) *used_finite_part = true;
  // z^2 I(z) = c + O(z^2): Richardson extrapolation of the leading coefficient.
  const double c = (4.0 * z1 * z1 * i1 - 4.0 * z1 * z1 * integrand(2.0 * z1)) / 3.0;
  auto regular = [&](double z) { return integrand(z) - c / (z * z); };
  const double near = z1 * regular(z1);
  const double far = integrate_oscillatory(regular, z1, kPi, wavelength, 1e-13);
  return 2.0 * (near + far) - 2.0 * c / kPi;
}

double KernelMoments::lambda(MomentKernel m, int k) const {
  return tables[static_cast<int>(m)].lambda.at(static_cast<std::size_t>(std::abs(k)));
}
double KernelMoments::lambda_pm(MomentKernel m, int k) const {
  return tables[static_cast<int>(m)].lambda_pm.at(static_cast<std::size_t>(std::abs(k)));
}
double KernelMoments::lambda_mp(MomentKernel m, int k) const {
  return tables[static_cast<int>(m)].lambda_mp.at(static_cast<std::size_t>(std::abs(k)));
}
double KernelMoments::lambda_mm(MomentKernel m, int k) const {
  return tables[static_cast<int>(m)].lambda_mm.at(static_cast<std::size_t>(std::abs(k)));
}
double KernelMoments::sigma(MomentKernel m, int k) const {
  const double s = tables[static_cast<int>(m)].sigma.at(static_cast<std::size_t>(std::abs(k)));
  return k < 0 ? -s : s;
}

KernelMoments kernel_moments(const Kernel& kernel, int k_max, MomentPolicy policy) {
  if (k_max < 1) throw Error(ErrorKind::ParameterOutOfRange, "k_max must be at least 1");
  KernelMoments out;
  out.k_max = k_max;
  const int count = k_max + 2;
  constexpr std::array<MomentWeight, 5> weights{MomentWeight::Lambda, MomentWeight::LambdaPM, MomentWeight::LambdaMP,
                                                 MomentWeight::LambdaMM, MomentWeight::Sigma};
  for (auto& table : out.tables) {
    for (auto* v : {&table.lambda, &table.lambda_pm, &table.lambda_mp, &table.lambda_mm, &table.sigma}) {
      v->assign(count, 0.0);
    }
  }
  const int jobs = 3 * 5 * count;
  std::vector<char> finite(jobs, 0);
  parallel_for(jobs, [&](int job) {
    const int k = job % count;
    const int wi = (job / count) % 5;
    const int mi = job / (5 * count);
    bool fp = false;
    const double value = kernel_moment(kernel, static_cast<MomentKernel>(mi), weights[wi], k, policy, &fp);
    finite[job] = fp ? 1 : 0;
    MomentTable& t = out.tables[mi];
    std::vector<double>* dest[] = {&t.lambda, &t.lambda_pm, &t.lambda_mp, &t.lambda_mm, &t.sigma};
    (*dest[wi])[k] = value;
  });
  for (char f : finite) out.finite_part = out.finite_part || f;
  return out;
}

ModeMatrix primitive_matrix(int k) {
  ModeMatrix a = ModeMatrix::Zero();
  if (k == 0) {
    a(0, 1) = -1.0;
    a(1, 0) = 1.0;
  } else if (std::abs(k) == 1) {
    a(0, 1) = 0.5;
    a(1, 0) = 0.5;
    a(2, 2) = 1.0;
    a /= cd(0.0, k);
  } else {
    const double k2 = static_cast<double>(k) * k;
    a << k2, -k2, 0, -1, k2, 0, 0, 0, k2 - 1;
    a /= cd(0.0, k) * (k2 - 1.0);
  }
  return a;
}

ModeMatrix derivative_matrix(int k) {
  ModeMatrix a = ModeMatrix::Zero();
  if (k == 0) {
    a(0, 1) = 1.0;
    a(1, 0) = -1.0;
    return a;
  }
  const cd ik(0.0, k);
  a << ik, ik, 0, kI / static_cast<double>(k), ik, 0, 0, 0, ik;
  return a;
}

ModeMatrix second_derivative_matrix(int k) {
  ModeMatrix a = ModeMatrix::Zero();
  if (k == 0) {
    a(0, 0) = -1.0;
    a(1, 1) = -1.0;
    return a;
  }
  const double k2 = static_cast<double>(k) * k;
  a << 1 + k2, 2 * k2, 0, 2, 1 + k2, 0, 0, 0, k2;
  return -a;
}

ModeMatrix interaction_matrix(const KernelMoments& mom, int k) {
  using M = MomentKernel;
  const double avg = 0.5 * (mom.lambda_pm(M::Ku, k) + mom.lambda_mp(M::Ku, k));
  ModeMatrix a = ModeMatrix::Zero();
  a(0, 0) = avg + mom.lambda_mp(M::UKuu, k);
  a(1, 1) = avg + mom.lambda_pm(M::UKuu, k);
  a(2, 2) = 0.5 * (mom.lambda_pm(M::Ku, k) + mom.lambda_mm(M::Ku, k));
  if (k != 0) {
    const double s = mom.sigma(M::KuPlusUKuu, k);
    a(0, 1) = k * s;
    a(1, 0) = s / k;
  }
  return a;
}

ModeMatrix composed_interaction_matrix(const KernelMoments& mom, int k) {
  const ModeMatrix psi = primitive_matrix(k);
  return psi * interaction_matrix(mom, k) * psi;
}

ModeMatrix linearization_matrix(const KernelMoments& mom, int k) {
  using M = MomentKernel;
  ModeMatrix a = ModeMatrix::Zero();
  if (k == 0) return a;
  if (std::abs(k) == 1) {
    a(0, 1) = -1.0;
    a(1, 1) = -1.0;
    return a;
  }
  const double kk = std::abs(k);
  const double k2 = kk * kk;
  const double denom = 2.0 * (k2 - 1.0) * (k2 - 1.0);
  const double lam1 = mom.lambda(M::Ku, 1);
  const double up = mom.lambda(M::KuPlusUKuu, static_cast<int>(kk) + 1);
  const double down = mom.lambda(M::KuPlusUKuu, static_cast<int>(kk) - 1);
  const double a_k = -((kk - 1) * (kk - 1) * up + (kk + 1) * (kk + 1) * down) / denom +
                     (mom.lambda(M::UKuu, k) - mom.lambda(M::UKuu, 1)) / (k2 - 1.0);
  const double b_k = -kk * ((kk - 1) * (kk - 1) * up - (kk + 1) * (kk + 1) * down) / denom;
  a(0, 0) = lam1 - k2 + a_k;
  a(0, 1) = -2.0 * k2 + b_k;
  a(1, 1) = -k2;
  a(2, 2) = (1.0 + lam1) - (k2 * k2 + mom.lambda(M::Ku, k)) / k2;
  return a;
}

ModeMatrices circle_linearization(const KernelMoments& moments) {
  ModeMatrices out;
  out.k_max = moments.k_max;
  out.matrices.reserve(2 * moments.k_max + 1);
  for (int k = -moments.k_max; k <= moments.k_max; ++k) out.matrices.push_back(linearization_matrix(moments, k));
  return out;
}

ModeMatrices circle_linearization(const Kernel& kernel, int k_max, MomentPolicy policy) {
  return circle_linearization(kernel_moments(kernel, k_max, policy));
}

SpectrumReport spectrum_report(const ModeMatrices& matrices) {
  SpectrumReport report;
  report.spectral_gap = std::numeric_limits<double>::infinity();
  report.others_stable = true;
  for (int k = -matrices.k_max; k <= matrices.k_max; ++k) {
    const ModeMatrix& a = matrices.at(k);
    Eigen::MatrixXcd restricted;
    if (k == 0) {
      restricted = a.topLeftCorner<2, 2>();
    } else if (std::abs(k) == 1) {
      Eigen::Matrix<cd, 3, 2> basis;
      basis << 1, 0, 1, 0, 0, 1;
      restricted = basis.completeOrthogonalDecomposition().pseudoInverse() * a * basis;
    } else {
      restricted = a;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(restricted, false);
    ModeSpectrum mode{k, {}};
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
      const cd ev = solver.eigenvalues()(i);
      mode.eigenvalues.push_back(ev);
      if (std::abs(ev) <= kZeroEigenvalueTol) {
        ++report.zero_count;
      } else {
        report.spectral_gap = std::min(report.spectral_gap, -ev.real());
        if (!(ev.real() < 0.0)) report.others_stable = false;
      }
    }
    report.modes.push_back(std::move(mode));
  }
  return report;
}

Samples mode_field(int k, const Eigen::Vector3cd& p, int n) {
  Samples out(3, n);
  for (int j = 0; j < n; ++j) {
    const double x = grid_point(n, j);
    const Eigen::Vector3d tangent(-std::sin(x), std::cos(x), 0.0);
    const Eigen::Vector3d normal(-std::cos(x), -std::sin(x), 0.0);
    const Eigen::Vector3d binormal(0.0, 0.0, 1.0);
    if (k == 0) {
      out.col(j) = p(0).real() * normal + p(1).real() * tangent + p(2).real() * binormal;
    } else {
      const cd phase = std::polar(1.0, k * x);
      const cd cn = p(0) * phase;
      const cd ct = cd(0.0, k) * p(1) * phase;
      const cd cb = p(2) * phase;
      out.col(j) = cn.real() * normal + ct.real() * tangent + cb.real() * binormal;
    }
  }
  return out;
}

Eigen::Vector3cd mode_coefficients(const Samples& field, int k) {
  const int n = static_cast<int>(field.cols());
  Eigen::Vector3cd c = Eigen::Vector3cd::Zero();
  for (int j = 0; j < n; ++j) {
    const double x = grid_point(n, j);
    const Eigen::Vector3d tangent(-std::sin(x), std::cos(x), 0.0);
    const Eigen::Vector3d normal(-std::cos(x), -std::sin(x), 0.0);
    const cd phase = std::polar(1.0, -k * x) / static_cast<double>(n);
    c(0) += field.col(j).dot(normal) * phase;
    c(1) += field.col(j).dot(tangent) * phase;
    c(2) += field(2, j) * phase;
  }
  if (k == 0) return c;
  c *= 2.0;
  c(1) /= cd(0.0, k);
  return c;
}

std::vector<DoubleCoverRates> dc_bending_rates(int k_max) {
  std::vector<DoubleCoverRates> out;
  for (int k = 0; k <= k_max; ++k) {
    const double k2 = static_cast<double>(k) * k;
    out.push_back({k, k2, k2, k2 - 4.0, 4.0 * k});
  }
  return out;
}

}  // namespace knotflow
