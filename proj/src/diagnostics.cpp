#include "atomlens/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "atomlens/constants.hpp"
#include "atomlens/fft.hpp"

namespace atomlens {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct RowRange {
  std::size_t lo = 0; // first z index in the window
  std::size_t hi = 0; // one past the last
};

RowRange window_rows(const SimGrid& g, double z_lo, double z_hi) {
  const int zax = g.axis_index(Axis::z);
  const double dz = g.spacing(zax);
  const double minz = g.min[zax];
  const std::size_t nz = g.n[zax];
  if (z_hi < z_lo) std::swap(z_lo, z_hi);
  const double flo = std::ceil((z_lo - minz) / dz - 1e-9);
  const double fhi = std::floor((z_hi - minz) / dz + 1e-9);
  RowRange r;
  r.lo = static_cast<std::size_t>(std::max(flo, 0.0));
  r.hi = static_cast<std::size_t>(std::clamp(fhi + 1.0, 0.0,
                                             static_cast<double>(nz)));
  if (r.lo > r.hi) r.lo = r.hi;
  return r;
}

std::size_t nearest_row(const SimGrid& g, double z_plane) {
  const int zax = g.axis_index(Axis::z);
  const double f =
      std::round((z_plane - g.min[zax]) / g.spacing(zax));
  const double clamped =
      std::clamp(f, 0.0, static_cast<double>(g.n[zax] - 1));
  return static_cast<std::size_t>(clamped);
}

// Position- and momentum-side transverse moments of the rows in [lo, hi).
struct WindowMoments {
  double weight = 0.0; // sum of |psi|^2 over the window (no cell volume)
  double dx = kNaN;
  double dvx = kNaN;
};

WindowMoments transverse_moments(const ComplexField& f, const RowRange& rows,
                                 double mass) {
  const SimGrid& g = f.grid;
  const std::size_t nx = g.n[0];
  const std::size_t ny = g.dims == 3 ? g.n[1] : 1;

  std::vector<double> xmarg(nx, 0.0), kmarg(nx, 0.0);
  RowFft rfft(nx);
  std::vector<std::complex<double>> spectrum(nx);
  for (std::size_t iz = rows.lo; iz < rows.hi; ++iz) {
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const std::complex<double>* row = f.amp.data() + nx * (iy + ny * iz);
      rfft.forward(row, spectrum.data());
      for (std::size_t ix = 0; ix < nx; ++ix) {
        xmarg[ix] += std::norm(row[ix]);
        kmarg[ix] += std::norm(spectrum[ix]);
      }
    }
  }

  WindowMoments out;
  double w = 0.0;
  for (double v : xmarg) w += v;
  out.weight = w;
  if (!(w > 0)) return out;

  auto central_rms = [&](const std::vector<double>& marg, auto coord) {
    double sw = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < marg.size(); ++i) {
      sw += marg[i];
      m1 += marg[i] * coord(i);
    }
    const double c = m1 / sw;
    double m2 = 0.0;
    for (std::size_t i = 0; i < marg.size(); ++i) {
      const double d = coord(i) - c;
      m2 += marg[i] * d * d;
    }
    return std::sqrt(m2 / sw);
  };

  const double dx_cell = g.spacing(0);
  out.dx = central_rms(xmarg, [&](std::size_t i) { return g.coord(0, i); });
  out.dvx = (kHbar / mass) * central_rms(kmarg, [&](std::size_t i) {
              return SimGrid::fft_wavenumber(i, nx, dx_cell);
            });
  return out;
}

// Column density over x at row iz (3D: integrated over y).
std::vector<double> column_row(const ComplexField& f, std::size_t iz) {
  const SimGrid& g = f.grid;
  const std::size_t nx = g.n[0];
  const std::size_t ny = g.dims == 3 ? g.n[1] : 1;
  const double dy = g.dims == 3 ? g.spacing(1) : 1.0;
  std::vector<double> line(nx, 0.0);
  for (std::size_t iy = 0; iy < ny; ++iy) {
    const std::complex<double>* row = f.amp.data() + nx * (iy + ny * iz);
    for (std::size_t ix = 0; ix < nx; ++ix) line[ix] += std::norm(row[ix]) * dy;
  }
  return line;
}

} // namespace

BeamSlice slice_at(const ComplexField& f, double z_plane) {
  f.validate();
  if (f.grid.space != Space::position)
    throw std::invalid_argument("slice_at: field must be in position space");
  const std::size_t iz = nearest_row(f.grid, z_plane);
  BeamSlice s;
  const int zax = f.grid.axis_index(Axis::z);
  s.z = f.grid.coord(zax, iz);
  s.x.resize(f.grid.n[0]);
  for (std::size_t ix = 0; ix < s.x.size(); ++ix) s.x[ix] = f.grid.coord(0, ix);
  s.line_density = column_row(f, iz);
  return s;
}

double crossing_fwhm(const std::vector<double>& x,
                     const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) return kNaN;
  const auto imax =
      static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
  const double half = 0.5 * y[imax];
  if (!(half > 0)) return kNaN;

  double xl = kNaN, xr = kNaN;
  for (std::size_t i = 0; i <= imax; ++i) {
    if (y[i] >= half) {
      xl = (i == 0) ? x[0]
                    : x[i - 1] + (x[i] - x[i - 1]) * (half - y[i - 1]) /
                                     (y[i] - y[i - 1]);
      break;
    }
  }
  for (std::size_t i = y.size(); i-- > imax;) {
    if (y[i] >= half) {
      xr = (i + 1 == y.size())
               ? x.back()
               : x[i] + (x[i + 1] - x[i]) * (y[i] - half) / (y[i] - y[i + 1]);
      break;
    }
  }
  if (std::isnan(xl) || std::isnan(xr)) return kNaN;
  return xr - xl;
}

double beam_width(const ComplexField& f, double z_lo, double z_hi) {
  f.validate();
  return transverse_moments(f, window_rows(f.grid, z_lo, z_hi), 1.0).dx;
}

double beam_momentum_width(const ComplexField& f, double z_lo, double z_hi,
                           double mass) {
  f.validate();
  if (!(mass > 0)) throw std::invalid_argument("beam_momentum_width: mass");
  return transverse_moments(f, window_rows(f.grid, z_lo, z_hi), mass).dvx;
}

double quality_factor(double dx_m, double dvx_m_s, double mass) {
  return 2.0 * mass * dx_m * dvx_m_s / kHbar;
}

double peak_density(const ComplexField& f, double focal_z) {
  f.validate();
  const std::vector<double> line = column_row(f, nearest_row(f.grid, focal_z));
  const double peak = *std::max_element(line.begin(), line.end());
  return peak * 1e-12; // atoms/m^2 -> atoms/um^2
}

double beam_atoms(const ComplexField& f, double z_lo, double z_hi) {
  f.validate();
  const RowRange rows = window_rows(f.grid, z_lo, z_hi);
  const SimGrid& g = f.grid;
  const std::size_t nx = g.n[0];
  const std::size_t ny = g.dims == 3 ? g.n[1] : 1;
  double s = 0.0;
  for (std::size_t iz = rows.lo; iz < rows.hi; ++iz) {
    const std::complex<double>* plane = f.amp.data() + nx * ny * iz;
    for (std::size_t i = 0; i < nx * ny; ++i) s += std::norm(plane[i]);
  }
  return s * g.cell_volume();
}

BeamMoments beam_moments(const ComplexField& f, double mass) {
  f.validate();
  BeamMoments out;
  out.n_beam = atom_number(f);
  if (!(out.n_beam > 0)) {
    out.z_center = out.dx = out.dvx = out.m2 = kNaN;
    return out;
  }
  out.z_center = centroid_and_rms(f, Axis::z).center;
  const RowRange all{0, f.grid.n[f.grid.axis_index(Axis::z)]};
  const WindowMoments w = transverse_moments(f, all, mass);
  out.dx = w.dx;
  out.dvx = w.dvx;
  out.m2 = quality_factor(w.dx, w.dvx, mass);
  return out;
}

SliceMoments slice_moments(const ComplexField& f, double z_plane, double mass) {
  f.validate();
  const std::size_t iz = nearest_row(f.grid, z_plane);
  SliceMoments out;
  out.z = f.grid.coord(f.grid.axis_index(Axis::z), iz);
  const WindowMoments w = transverse_moments(f, {iz, iz + 1}, mass);
  const double dz = f.grid.spacing(f.grid.axis_index(Axis::z));
  out.atoms_per_m = w.weight * f.grid.cell_volume() / dz;
  out.dx = w.dx;
  out.dvx = w.dvx;
  out.m2 = quality_factor(w.dx, w.dvx, mass);
  return out;
}

DivergenceFit divergence_fit(
    const std::vector<std::array<double, 2>>& z_and_width, double z_lo,
    double z_hi) {
  double sw = 0, sz = 0, sy = 0, szz = 0, szy = 0;
  std::size_t npts = 0;
  for (const auto& p : z_and_width) {
    if (p[0] < z_lo || p[0] > z_hi || !std::isfinite(p[1])) continue;
    ++npts;
    sw += 1;
    sz += p[0];
    sy += p[1];
    szz += p[0] * p[0];
    szy += p[0] * p[1];
  }
  if (npts < 5)
    throw std::invalid_argument("divergence_fit: fewer than 5 samples in zone");
  const double det = sw * szz - sz * sz;
  if (!(std::abs(det) > 0))
    throw std::invalid_argument("divergence_fit: degenerate z samples");
  DivergenceFit out;
  out.slope = (sw * szy - sz * sy) / det;
  out.theta_rad = std::atan(std::abs(out.slope));
  out.points = npts;
  return out;
}

} // namespace atomlens
