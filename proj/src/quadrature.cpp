#include "knotflow/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>

namespace knotflow {

double integrate(const ScalarFunction& f, double a, double b, double abs_tol) {
  if (a == b) return 0.0;
  double error = 0.0;
  double l1 = 0.0;
  const double estimate =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &error, &l1);
  const double rel_tol = std::max(abs_tol / std::max(l1, 1e-300), 1e-12);
  if (error <= abs_tol) return estimate;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, rel_tol, &error);
}

double integrate_oscillatory(const ScalarFunction& f, double a, double b, double wavelength, double abs_tol) {
  if (a == b) return 0.0;
  const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / wavelength)));
  const double h = (b - a) / pieces;
  const double piece_tol = abs_tol / pieces;
  double total = 0.0;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + h * i;
    const double hi = (i + 1 == pieces) ? b : lo + h;
    total += integrate(f, lo, hi, piece_tol);
  }
  return total;
}

}  // namespace knotflow
