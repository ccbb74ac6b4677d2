#include "atomlens/grid.hpp"

#include <cmath>

namespace atomlens {

namespace {

bool power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

} // namespace

void SimGrid::validate() const {
  if (dims != 2 && dims != 3)
    throw std::invalid_argument("grid: dims must be 2 or 3");
  for (int a = 0; a < dims; ++a) {
    if (!power_of_two(n[a]))
      throw std::invalid_argument("grid: points per axis must be a power of two");
    if (!(extent[a] > 0) || !std::isfinite(extent[a]))
      throw std::invalid_argument("grid: extents must be positive and finite");
  }
}

double SimGrid::fft_wavenumber(std::size_t i, std::size_t npts, double d) {
  const auto half = npts / 2;
  const double cycles =
      (i < half) ? static_cast<double>(i)
                 : static_cast<double>(i) - static_cast<double>(npts);
  return 2.0 * M_PI * cycles / (static_cast<double>(npts) * d);
}

double SimGrid::coord(int ax, std::size_t i) const {
  if (space == Space::position) return min[ax] + static_cast<double>(i) * spacing(ax);
  // A reciprocal grid stores extent = 2*pi/dx, so spacing(ax) here is the
  // wavenumber bin width 2*pi/L and the original real-space spacing is
  // 2*pi/extent.
  return fft_wavenumber(i, n[ax], 2.0 * M_PI / extent[ax]);
}

SimGrid SimGrid::reciprocal() const {
  SimGrid r = *this;
  r.space = (space == Space::position) ? Space::wavenumber : Space::position;
  // min is carried through untouched: it always names the position-space
  // origin (spectral coordinates are FFT-ordered and ignore it, and spectral
  // phases are taken relative to that origin).
  for (int a = 0; a < dims; ++a) r.extent[a] = 2.0 * M_PI / spacing(a);
  return r;
}

void ComplexField::validate() const {
  grid.validate();
  if (amp.size() != grid.size())
    throw std::invalid_argument("field: amplitude size does not match grid");
}

double atom_number(const ComplexField& f) {
  double s = 0;
  for (const auto& a : f.amp) s += std::norm(a);
  return s * f.grid.cell_volume();
}

void normalize(ComplexField& f, double atoms) {
  const double now = atom_number(f);
  if (!(now > 0)) throw std::runtime_error("normalize: zero-norm field");
  const double scale = std::sqrt(atoms / now);
  for (auto& a : f.amp) a *= scale;
}

std::vector<double> density_marginal(const ComplexField& f, Axis axis) {
  const SimGrid& g = f.grid;
  const int ax = g.axis_index(axis);
  std::vector<double> out(g.n[ax], 0.0);

  // Accumulate |psi|^2 over the flattened array; the index along `ax` is
  // recovered from the flat index by stride arithmetic.
  std::size_t stride = 1;
  for (int a = 0; a < ax; ++a) stride *= g.n[a];
  const std::size_t nax = g.n[ax];
  const std::size_t total = g.size();
  for (std::size_t i = 0; i < total; ++i)
    out[(i / stride) % nax] += std::norm(f.amp[i]);

  // Integrate out the other axes.
  double weight = 1.0;
  for (int a = 0; a < g.dims; ++a)
    if (a != ax) weight *= g.spacing(a);
  for (auto& v : out) v *= weight;
  return out;
}

AxisMoments centroid_and_rms(const ComplexField& f, Axis axis) {
  const SimGrid& g = f.grid;
  const int ax = g.axis_index(axis);
  const std::vector<double> marg = density_marginal(f, axis);

  double w = 0, m1 = 0;
  for (std::size_t i = 0; i < marg.size(); ++i) {
    const double c = g.coord(ax, i);
    w += marg[i];
    m1 += marg[i] * c;
  }
  if (!(w > 0)) throw std::runtime_error("centroid_and_rms: zero-norm field");
  const double center = m1 / w;
  double m2 = 0;
  for (std::size_t i = 0; i < marg.size(); ++i) {
    const double d = g.coord(ax, i) - center;
    m2 += marg[i] * d * d;
  }
  return {center, std::sqrt(m2 / w)};
}

} // namespace atomlens
