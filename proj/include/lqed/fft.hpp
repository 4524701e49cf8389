#pragma once

#include <Eigen/Dense>
#include <complex>

namespace lqed::fft {

// Unitary in-place transforms. forward maps position to momentum amplitudes,
//   C_k = M^{-1/2} sum_n e^{-i k.n} C_n,
// with k running over the FFT frequency grid 2*pi*j/N, and inverse undoes it.
// Grids are row-major N x N for the 2D overloads.

void forward_1d(Eigen::VectorXcd& data);
void inverse_1d(Eigen::VectorXcd& data);
void forward_2d(Eigen::VectorXcd& data, int n);
void inverse_2d(Eigen::VectorXcd& data, int n);

}  // namespace lqed::fft
