#include "knotflow/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "knotflow/errors.hpp"

namespace knotflow {
namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

struct FftwDeleter {
  void operator()(void* p) const noexcept { fftw_free(p); }
};
template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter>;

template <typename T>
FftwBuffer<T> allocate(std::size_t count) {
  return FftwBuffer<T>(static_cast<T*>(fftw_malloc(sizeof(T) * count)));
}

// One r2c/c2r plan pair per size. Planning is not thread-safe in FFTW, so the
// cache is guarded; execution uses the new-array interface on private buffers.
class PlanPair {
 public:
  explicit PlanPair(int n) : n_(n) {
    auto real = allocate<double>(n);
    auto spec = allocate<fftw_complex>(n / 2 + 1);
    forward_ = fftw_plan_dft_r2c_1d(n, real.get(), spec.get(), FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_1d(n, spec.get(), real.get(), FFTW_ESTIMATE);
  }
  PlanPair(const PlanPair&) = delete;
  PlanPair& operator=(const PlanPair&) = delete;
  ~PlanPair() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }

  void forward(double* in, fftw_complex* out) const { fftw_execute_dft_r2c(forward_, in, out); }
  void backward(fftw_complex* in, double* out) const { fftw_execute_dft_c2r(backward_, in, out); }
  int size() const { return n_; }

 private:
  int n_;
  fftw_plan forward_;
  fftw_plan backward_;
};

const PlanPair& plans_for(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<PlanPair>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<PlanPair>(n);
  return *slot;
}

void require_grid(int n) {
  if (n < 2 || !is_power_of_two(n)) {
    throw Error(ErrorKind::ParameterOutOfRange, "grid size must be a power of two, got " + std::to_string(n));
  }
}

double sign_of_mode(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

void forward_row(const PlanPair& plans, const double* values, cd* out) {
  const int n = plans.size();
  auto real = allocate<double>(n);
  auto spec = allocate<fftw_complex>(n / 2 + 1);
  std::copy(values, values + n, real.get());
  plans.forward(real.get(), spec.get());
  for (int k = 0; k <= n / 2; ++k) {
    out[k] = cd(spec[k][0], spec[k][1]) * (sign_of_mode(k) / n);
  }
}

void inverse_row(const PlanPair& plans, const cd* coeffs, double* out) {
  const int n = plans.size();
  auto real = allocate<double>(n);
  auto spec = allocate<fftw_complex>(n / 2 + 1);
  for (int k = 0; k <= n / 2; ++k) {
    const cd c = coeffs[k] * sign_of_mode(k);
    spec[k][0] = c.real();
    spec[k][1] = c.imag();
  }
  plans.backward(spec.get(), real.get());
  std::copy(real.get(), real.get() + n, out);
}

}  // namespace

bool is_power_of_two(int n) noexcept { return n > 0 && (n & (n - 1)) == 0; }

double grid_point(int n, int j) noexcept { return -kPi + 2.0 * kPi * j / n; }

std::vector<double> grid(int n) {
  std::vector<double> xs(n);
  for (int j = 0; j < n; ++j) xs[j] = grid_point(n, j);
  return xs;
}

Coeffs forward_transform(const Samples& values) {
  const int n = static_cast<int>(values.cols());
  require_grid(n);
  const auto& plans = plans_for(n);
  Coeffs out(3, n / 2 + 1);
  std::vector<double> row(n);
  std::vector<cd> spec(n / 2 + 1);
  for (int c = 0; c < 3; ++c) {
    for (int j = 0; j < n; ++j) row[j] = values(c, j);
    forward_row(plans, row.data(), spec.data());
    for (int k = 0; k <= n / 2; ++k) out(c, k) = spec[k];
  }
  return out;
}

Samples inverse_transform(const Coeffs& coeffs, int n) {
  require_grid(n);
  if (coeffs.cols() != n / 2 + 1) throw Error(ErrorKind::ParameterOutOfRange, "coefficient count does not match n");
  const auto& plans = plans_for(n);
  Samples out(3, n);
  std::vector<double> row(n);
  std::vector<cd> spec(n / 2 + 1);
  for (int c = 0; c < 3; ++c) {
    for (int k = 0; k <= n / 2; ++k) spec[k] = coeffs(c, k);
    inverse_row(plans, spec.data(), row.data());
    for (int j = 0; j < n; ++j) out(c, j) = row[j];
  }
  return out;
}

Eigen::VectorXcd forward_transform(const Eigen::VectorXd& values) {
  const int n = static_cast<int>(values.size());
  require_grid(n);
  Eigen::VectorXcd out(n / 2 + 1);
  forward_row(plans_for(n), values.data(), out.data());
  return out;
}

Eigen::VectorXd inverse_transform(const Eigen::VectorXcd& coeffs, int n) {
  require_grid(n);
  if (coeffs.size() != n / 2 + 1) throw Error(ErrorKind::ParameterOutOfRange, "coefficient count does not match n");
  Eigen::VectorXd out(n);
  inverse_row(plans_for(n), coeffs.data(), out.data());
  return out;
}

Coeffs differentiate(const Coeffs& coeffs, int n) {
  Coeffs out = coeffs;
  for (int k = 0; k < n / 2; ++k) out.col(k) *= cd(0.0, k);
  out.col(n / 2).setZero();
  return out;
}

Coeffs second_derivative(const Coeffs& coeffs, int n) {
  Coeffs out = coeffs;
  for (int k = 0; k <= n / 2; ++k) out.col(k) *= -static_cast<double>(k) * k;
  return out;
}

Coeffs antiderivative(const Coeffs& coeffs, int n) {
  Coeffs out = Coeffs::Zero(3, n / 2 + 1);
  for (int k = 1; k < n / 2; ++k) out.col(k) = coeffs.col(k) / cd(0.0, k);
  return out;
}

Eigen::VectorXcd antiderivative(const Eigen::VectorXcd& coeffs, int n) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n / 2 + 1);
  for (int k = 1; k < n / 2; ++k) out(k) = coeffs(k) / cd(0.0, k);
  return out;
}

double mode_multiplicity(int k, int n) noexcept { return (k == 0 || 2 * k == n) ? 1.0 : 2.0; }

Eigen::Vector3d evaluate(const Coeffs& coeffs, int n, double x) {
  const cd step = std::polar(1.0, x);
  cd phase = step;
  Eigen::Vector3d v = coeffs.col(0).real();
  for (int k = 1; k < n / 2; ++k) {
    for (int c = 0; c < 3; ++c) v(c) += 2.0 * (coeffs(c, k) * phase).real();
    phase *= step;
  }
  const double nyquist = std::cos(0.5 * n * x);
  for (int c = 0; c < 3; ++c) v(c) += coeffs(c, n / 2).real() * nyquist;
  return v;
}

Samples evaluate(const Coeffs& coeffs, int n, const std::vector<double>& xs) {
  Samples out(3, static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = evaluate(coeffs, n, xs[i]);
  return out;
}

double evaluate(const Eigen::VectorXcd& coeffs, int n, double x) {
  const cd step = std::polar(1.0, x);
  cd phase = step;
  double v = coeffs(0).real();
  for (int k = 1; k < n / 2; ++k) {
    v += 2.0 * (coeffs(k) * phase).real();
    phase *= step;
  }
  return v + coeffs(n / 2).real() * std::cos(0.5 * n * x);
}

}  // namespace knotflow
