#include "atomlens/potentials.hpp"

#include <cmath>
#include <stdexcept>

namespace atomlens {

namespace {

void require_position(const SimGrid& g, const char* what) {
  g.validate();
  if (g.space != Space::position)
    throw std::invalid_argument(std::string(what) +
                                ": grid must be in position space");
}

} // namespace

std::vector<double> sample_trap(const SimGrid& g, const TrapParams& t,
                                const SpeciesParams& sp, double center_z) {
  require_position(g, "sample_trap");
  std::vector<double> out(g.size());
  const std::size_t nx = g.n[0];
  const std::size_t ny = g.dims == 3 ? g.n[1] : 1;
  const std::size_t nz = g.n[g.dims - 1];
  for (std::size_t iz = 0; iz < nz; ++iz) {
    const double z = g.coord(g.dims - 1, iz) - center_z;
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const double y = g.dims == 3 ? g.coord(1, iy) : 0.0;
      double* row = out.data() + nx * (iy + ny * iz);
      for (std::size_t ix = 0; ix < nx; ++ix)
        row[ix] = trap_potential(g.coord(0, ix), y, z, t, sp.mass);
    }
  }
  return out;
}

std::vector<double> sample_focus(const SimGrid& g, const FocusConfig& fc,
                                 double i0, const SpeciesParams& sp) {
  require_position(g, "sample_focus");
  if (!(i0 >= 0) || !std::isfinite(i0))
    throw std::invalid_argument("sample_focus: peak intensity must be >= 0");
  std::vector<double> out(g.size());
  const std::size_t nx = g.n[0];
  const std::size_t ny = g.dims == 3 ? g.n[1] : 1;
  const std::size_t nz = g.n[g.dims - 1];
  const double kf = fc.wavenumber();
  for (std::size_t iz = 0; iz < nz; ++iz) {
    const double z = g.coord(g.dims - 1, iz);
    for (std::size_t iy = 0; iy < ny; ++iy) {
      double* row = out.data() + nx * (iy + ny * iz);
      for (std::size_t ix = 0; ix < nx; ++ix) {
        const double intensity = focus_intensity(g.coord(0, ix), z, i0,
                                                 kf, fc.sigma_z_m, fc.center_z_m);
        row[ix] = dipole_potential(intensity, fc.detuning_rad_s, sp);
      }
    }
  }
  return out;
}

std::vector<double> absorber_rates(const SimGrid& g, double rate,
                                   const std::array<double, 3>& fractions) {
  require_position(g, "absorber_rates");
  if (!(rate >= 0) || !std::isfinite(rate))
    throw std::invalid_argument("absorber_rates: rate must be >= 0");
  for (double f : fractions)
    if (f < 0 || f >= 0.5)
      throw std::invalid_argument("absorber_rates: fraction must be in [0, 0.5)");

  // Per-axis ramp value in [0, 1]: zero inside, sin^2 rise across the band.
  auto axis_ramp = [&](std::size_t ax, std::size_t i) {
    const double frac = fractions[ax];
    if (frac <= 0) return 0.0;
    const double band = frac * g.extent[ax];
    const double lo = g.min[ax];
    const double hi = g.min[ax] + g.extent[ax] - g.spacing(ax);
    const double c = lo + i * g.spacing(ax);
    double depth = 0.0;
    if (c < lo + band)
      depth = (lo + band - c) / band;
    else if (c > hi - band)
      depth = (c - (hi - band)) / band;
    if (depth <= 0) return 0.0;
    if (depth > 1) depth = 1;
    const double s = std::sin(0.5 * M_PI * depth);
    return s * s;
  };

  std::vector<double> out(g.size(), 0.0);
  const std::size_t nx = g.n[0];
  const std::size_t ny = g.dims == 3 ? g.n[1] : 1;
  const std::size_t nz = g.n[g.dims - 1];
  const std::size_t zax = g.dims == 3 ? 2 : 1;
  for (std::size_t iz = 0; iz < nz; ++iz) {
    const double rz = axis_ramp(zax, iz);
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const double ry = g.dims == 3 ? axis_ramp(1, iy) : 0.0;
      const double ryz = std::max(ry, rz);
      double* row = out.data() + nx * (iy + ny * iz);
      for (std::size_t ix = 0; ix < nx; ++ix) {
        const double r = std::max(axis_ramp(0, ix), ryz);
        if (r > 0) row[ix] = rate * r;
      }
    }
  }
  return out;
}

} // namespace atomlens
