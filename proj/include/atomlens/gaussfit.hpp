#pragma once
#include <cstddef>
#include <vector>

// Levenberg-Marquardt fit of a zero-baseline Gaussian A exp(-(x-c)^2/2s^2)
// to a sampled profile. Used to turn focal-slice density rows into FWHM and
// peak numbers that are robust against single-pixel noise.
namespace atomlens {

struct GaussianFit {
  double amplitude = 0.0;
  double center = 0.0;
  double sigma = 0.0;
  double fwhm = 0.0;          // 2 sqrt(2 ln 2) sigma
  double residual_rms = 0.0;  // rms residual / fitted amplitude
  std::size_t iterations = 0;
  bool converged = false;
};

// Requires at least 8 samples above half of the profile maximum; throws
// std::invalid_argument otherwise (callers fall back to a crossing width).
// Iterates until every parameter moves by less than 1e-6 of its magnitude.
GaussianFit fit_gaussian(const std::vector<double>& x,
                         const std::vector<double>& y);

} // namespace atomlens
