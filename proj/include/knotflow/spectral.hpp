#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace knotflow {

// Point values on the uniform grid x_j = -pi + 2*pi*j/n, one column per node.
using Samples = Eigen::Matrix3Xd;
// Fourier coefficients for k = 0..n/2 of a real 3-vector field; negative
// modes are the complex conjugates.
using Coeffs = Eigen::Matrix<std::complex<double>, 3, Eigen::Dynamic>;

bool is_power_of_two(int n) noexcept;
double grid_point(int n, int j) noexcept;
std::vector<double> grid(int n);

// c_k = (1/n) sum_j v_j exp(-i k x_j), so that v(x) = sum_k c_k exp(i k x).
Coeffs forward_transform(const Samples& values);
Samples inverse_transform(const Coeffs& coeffs, int n);
Eigen::VectorXcd forward_transform(const Eigen::VectorXd& values);
Eigen::VectorXd inverse_transform(const Eigen::VectorXcd& coeffs, int n);

// The Nyquist mode is dropped by odd-order operations and kept by even ones.
Coeffs differentiate(const Coeffs& coeffs, int n);
Coeffs second_derivative(const Coeffs& coeffs, int n);
// Mean-zero primitive.
Coeffs antiderivative(const Coeffs& coeffs, int n);
Eigen::VectorXcd antiderivative(const Eigen::VectorXcd& coeffs, int n);

// Number of integer modes represented by the stored index k (1 for the mean
// and the Nyquist mode, 2 otherwise).
double mode_multiplicity(int k, int n) noexcept;

// Trigonometric interpolant evaluated off the grid.
Eigen::Vector3d evaluate(const Coeffs& coeffs, int n, double x);
Samples evaluate(const Coeffs& coeffs, int n, const std::vector<double>& xs);
double evaluate(const Eigen::VectorXcd& coeffs, int n, double x);

}  // namespace knotflow
