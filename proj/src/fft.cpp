#include "atomlens/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace atomlens {

namespace {

// FFTW's planner mutates global state; serialize plan creation/destruction.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) {
  return reinterpret_cast<fftw_complex*>(p);
}

} // namespace

SpectralTransform::SpectralTransform(const SimGrid& grid, bool thorough)
    : size_(grid.size()) {
  grid.validate();
  std::vector<std::complex<double>> scratch(size_);
  fftw_complex* s = as_fftw(scratch.data());
  const unsigned flags =
      (thorough ? FFTW_MEASURE : FFTW_ESTIMATE) | FFTW_UNALIGNED;
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (grid.dims == 2) {
    const int nz = static_cast<int>(grid.n[1]), nx = static_cast<int>(grid.n[0]);
    fwd_ = fftw_plan_dft_2d(nz, nx, s, s, FFTW_FORWARD, flags);
    bwd_ = fftw_plan_dft_2d(nz, nx, s, s, FFTW_BACKWARD, flags);
  } else {
    const int nz = static_cast<int>(grid.n[2]), ny = static_cast<int>(grid.n[1]),
              nx = static_cast<int>(grid.n[0]);
    fwd_ = fftw_plan_dft_3d(nz, ny, nx, s, s, FFTW_FORWARD, flags);
    bwd_ = fftw_plan_dft_3d(nz, ny, nx, s, s, FFTW_BACKWARD, flags);
  }
  if (!fwd_ || !bwd_) throw std::runtime_error("fftw plan creation failed");
}

SpectralTransform::~SpectralTransform() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  if (bwd_) fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

SpectralTransform::SpectralTransform(SpectralTransform&& o) noexcept
    : fwd_(o.fwd_), bwd_(o.bwd_), size_(o.size_) {
  o.fwd_ = o.bwd_ = nullptr;
  o.size_ = 0;
}

SpectralTransform& SpectralTransform::operator=(SpectralTransform&& o) noexcept {
  if (this != &o) {
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
      if (bwd_) fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
    }
    fwd_ = o.fwd_;
    bwd_ = o.bwd_;
    size_ = o.size_;
    o.fwd_ = o.bwd_ = nullptr;
    o.size_ = 0;
  }
  return *this;
}

void SpectralTransform::forward_raw(std::complex<double>* data) const {
  fftw_execute_dft(static_cast<fftw_plan>(fwd_), as_fftw(data), as_fftw(data));
}

void SpectralTransform::backward_raw(std::complex<double>* data) const {
  fftw_execute_dft(static_cast<fftw_plan>(bwd_), as_fftw(data), as_fftw(data));
}

void SpectralTransform::inverse_scaled(std::complex<double>* data) const {
  backward_raw(data);
  const double inv = 1.0 / static_cast<double>(size_);
  for (std::size_t i = 0; i < size_; ++i) data[i] *= inv;
}

namespace {

ComplexField unitary_transform(const ComplexField& f, bool forward) {
  f.validate();
  ComplexField out = f;
  SpectralTransform plans(f.grid);
  if (forward)
    plans.forward_raw(out.amp.data());
  else
    plans.backward_raw(out.amp.data());
  const double scale =
      f.grid.cell_volume() / std::pow(2.0 * M_PI, 0.5 * f.grid.dims);
  for (auto& a : out.amp) a *= scale;
  out.grid = f.grid.reciprocal();
  return out;
}

} // namespace

ComplexField transform_forward(const ComplexField& f) {
  if (f.grid.space != Space::position)
    throw std::invalid_argument("transform_forward: field already spectral");
  return unitary_transform(f, true);
}

ComplexField transform_inverse(const ComplexField& f) {
  if (f.grid.space != Space::wavenumber)
    throw std::invalid_argument("transform_inverse: field not spectral");
  return unitary_transform(f, false);
}

RowFft::RowFft(std::size_t nx) : nx_(nx) {
  if (nx == 0) throw std::invalid_argument("RowFft: empty row");
  std::vector<std::complex<double>> in(nx), out(nx);
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_ = fftw_plan_dft_1d(static_cast<int>(nx), as_fftw(in.data()),
                           as_fftw(out.data()), FFTW_FORWARD,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan_) throw std::runtime_error("fftw 1d plan creation failed");
}

RowFft::~RowFft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plan_) fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

RowFft::RowFft(RowFft&& o) noexcept : plan_(o.plan_), nx_(o.nx_) {
  o.plan_ = nullptr;
  o.nx_ = 0;
}

RowFft& RowFft::operator=(RowFft&& o) noexcept {
  if (this != &o) {
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      if (plan_) fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    }
    plan_ = o.plan_;
    nx_ = o.nx_;
    o.plan_ = nullptr;
    o.nx_ = 0;
  }
  return *this;
}

void RowFft::forward(const std::complex<double>* src,
                     std::complex<double>* dst) const {
  fftw_execute_dft(static_cast<fftw_plan>(plan_),
                   as_fftw(const_cast<std::complex<double>*>(src)),
                   as_fftw(dst));
}

} // namespace atomlens
