#pragma once

#include <functional>

namespace knotflow {

using ScalarFunction = std::function<double(double)>;

// Adaptive 31-point Gauss-Kronrod on [a, b].
double integrate(const ScalarFunction& f, double a, double b, double abs_tol = 1e-12);

// Splits [a, b] into pieces no longer than `wavelength` before integrating,
// so that oscillatory integrands are resolved piece by piece.
double integrate_oscillatory(const ScalarFunction& f, double a, double b, double wavelength,
                             double abs_tol = 1e-12);

}  // namespace knotflow
