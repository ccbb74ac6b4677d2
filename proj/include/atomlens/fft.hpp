#pragma once
#include <complex>
#include <cstddef>
#include "atomlens/grid.hpp"

// Spectral transforms over SimGrid-shaped arrays (FFTW backend, c2c,
// deterministic plan heuristics).
namespace atomlens {

// RAII pair of in-place c2c plans for one grid shape. Plans are created
// alignment-agnostic so execution is legal on any std::vector storage of
// the right size. `thorough` spends planning time timing candidate
// algorithms; worth it when thousands of executions will follow.
class SpectralTransform {
 public:
  explicit SpectralTransform(const SimGrid& grid, bool thorough = false);
  ~SpectralTransform();
  SpectralTransform(SpectralTransform&& o) noexcept;
  SpectralTransform& operator=(SpectralTransform&& o) noexcept;
  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;

  // In-place unnormalized DFT with e^{-ik.r} kernel.
  void forward_raw(std::complex<double>* data) const;
  // In-place unnormalized DFT with e^{+ik.r} kernel.
  void backward_raw(std::complex<double>* data) const;
  // backward_raw scaled by 1/size: the exact inverse of forward_raw.
  void inverse_scaled(std::complex<double>* data) const;

  std::size_t size() const { return size_; }

 private:
  void* fwd_ = nullptr;
  void* bwd_ = nullptr;
  std::size_t size_ = 0;
};

// Unitary-normalized transform between position and wavenumber space:
// amplitude is scaled by cell_volume/(2*pi)^(dims/2) of the input grid so
// atom_number is preserved (Parseval) and the result lives on
// grid.reciprocal().
ComplexField transform_forward(const ComplexField& f);
ComplexField transform_inverse(const ComplexField& f);

// Single-row 1D forward DFT (unnormalized, e^{-ikx} kernel, out-of-place),
// for spectral marginals of individual slices.
class RowFft {
 public:
  explicit RowFft(std::size_t nx);
  ~RowFft();
  RowFft(RowFft&& o) noexcept;
  RowFft& operator=(RowFft&& o) noexcept;
  RowFft(const RowFft&) = delete;
  RowFft& operator=(const RowFft&) = delete;

  void forward(const std::complex<double>* src, std::complex<double>* dst) const;
  std::size_t points() const { return nx_; }

 private:
  void* plan_ = nullptr;
  std::size_t nx_ = 0;
};

} // namespace atomlens
