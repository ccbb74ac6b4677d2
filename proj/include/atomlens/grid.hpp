#pragma once
#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

// Uniform Cartesian grids and complex field storage. Storage is row-major
// with axis 0 (x) fastest: 2D index = ix + nx*iz, 3D = ix + nx*(iy + ny*iz).
// Axis order is (x, z) in 2D and (x, y, z) in 3D.
namespace atomlens {

enum class Space { position, wavenumber };
enum class Axis { x, y, z };

struct SimGrid {
  int dims = 2;
  std::array<std::size_t, 3> n{1, 1, 1};   // points per axis, storage order
  std::array<double, 3> extent{0, 0, 0};   // axis length, m (or rad/m spans)
  std::array<double, 3> min{0, 0, 0};      // coordinate of index 0
  Space space = Space::position;

  void validate() const;

  // Storage index of a physical axis; throws for y in a 2D grid.
  int axis_index(Axis a) const {
    switch (a) {
      case Axis::x: return 0;
      case Axis::y:
        if (dims < 3) throw std::invalid_argument("no y axis on a 2D grid");
        return 1;
      case Axis::z: return dims == 3 ? 2 : 1;
    }
    return 0;
  }

  std::size_t size() const {
    std::size_t s = 1;
    for (int a = 0; a < dims; ++a) s *= n[a];
    return s;
  }
  double spacing(int ax) const { return extent[ax] / static_cast<double>(n[ax]); }
  double cell_volume() const {
    double v = 1;
    for (int a = 0; a < dims; ++a) v *= spacing(a);
    return v;
  }
  std::size_t index2(std::size_t ix, std::size_t iz) const {
    return ix + n[0] * iz;
  }
  std::size_t index3(std::size_t ix, std::size_t iy, std::size_t iz) const {
    return ix + n[0] * (iy + n[1] * iz);
  }

  // Angular wavenumber of FFT bin i on an axis of npts samples, spacing d:
  // 0, 1, ..., npts/2-1, -npts/2, ..., -1 times 2*pi/(npts*d).
  static double fft_wavenumber(std::size_t i, std::size_t npts, double d);

  // Coordinate of index i along storage axis ax: linear in position space,
  // FFT-ordered wavenumbers in spectral space.
  double coord(int ax, std::size_t i) const;

  // The spectral-space twin of a position-space grid (and back).
  SimGrid reciprocal() const;

  bool same_shape(const SimGrid& o) const {
    return dims == o.dims && n == o.n;
  }
};

struct ComplexField {
  SimGrid grid;
  std::vector<std::complex<double>> amp;

  void validate() const;
  static ComplexField zeros(const SimGrid& g) {
    ComplexField f;
    f.grid = g;
    f.amp.assign(g.size(), {0.0, 0.0});
    return f;
  }
};

// Riemann sum of |psi|^2 over cell volumes: the atom number.
double atom_number(const ComplexField& f);

// Rescale so atom_number(f) == atoms; throws on a zero field.
void normalize(ComplexField& f, double atoms);

// First and second central moments of |psi|^2 marginalized onto one axis.
struct AxisMoments {
  double center = 0;
  double rms = 0;
};
AxisMoments centroid_and_rms(const ComplexField& f, Axis axis);

// |psi|^2 marginal along an axis (integrated over the others; units depend
// on space/dims). Index order matches the grid's axis.
std::vector<double> density_marginal(const ComplexField& f, Axis axis);

} // namespace atomlens
