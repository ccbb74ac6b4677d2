#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "atomlens/engine.hpp"

namespace atomlens {

namespace {

using cplx = std::complex<double>;

// 2D Thomas-Fermi chemical potential of the reduced (y-folded) cloud:
// N u2 = pi mu^2 / (m wx wz).
double thomas_fermi_mu_2d(const TrapParams& trap, const SpeciesParams& sp,
                          double u2) {
  return std::sqrt(trap.atom_number * u2 * sp.mass * trap.omega_x *
                   trap.omega_z / M_PI);
}

} // namespace

ComplexField trap_ground_state(const SimGrid& g, const TrapParams& trap,
                               const SpeciesParams& sp, double center_z,
                               double tolerance, GroundStateInfo* info,
                               std::size_t max_iterations, double dt_imag) {
  g.validate();
  trap.validate();
  sp.validate();
  if (g.space != Space::position)
    throw std::invalid_argument("ground state: grid must be in position space");
  if (!(tolerance > 0) || !(dt_imag > 0))
    throw std::invalid_argument("ground state: tolerance and dt_imag > 0");

  const double red_u =
      g.dims == 2 ? 1.0 / (std::sqrt(2.0 * M_PI) * ansatz_sigma_y(trap, sp))
                  : 1.0;
  const double u = interaction_u(trap.a_s_bec, sp.mass) * red_u;
  const std::vector<double> vt = sample_trap(g, trap, sp, center_z);

  ComplexField psi = ComplexField::zeros(g);
  if (trap.a_s_bec > 0) {
    const double mu = g.dims == 2 ? thomas_fermi_mu_2d(trap, sp, u)
                                  : thomas_fermi_mu(trap, sp);
    bool any = false;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double n = (mu - vt[i]) / u;
      if (n > 0) {
        psi.amp[i] = std::sqrt(n);
        any = true;
      }
    }
    if (!any)
      throw std::invalid_argument(
          "ground state: grid does not contain the trapped cloud");
  } else {
    // Ideal gas: the harmonic-oscillator ground state is exact.
    const std::size_t nx = g.n[0];
    const std::size_t ny = g.dims == 3 ? g.n[1] : 1;
    const std::size_t nz = g.n[g.dims - 1];
    const double cx = 0.5 * sp.mass * trap.omega_x / kHbar;
    const double cy = 0.5 * sp.mass * trap.omega_y / kHbar;
    const double cz = 0.5 * sp.mass * trap.omega_z / kHbar;
    for (std::size_t iz = 0; iz < nz; ++iz) {
      const double z = g.coord(g.dims - 1, iz) - center_z;
      for (std::size_t iy = 0; iy < ny; ++iy) {
        const double y = g.dims == 3 ? g.coord(1, iy) : 0.0;
        cplx* row = psi.amp.data() + nx * (iy + ny * iz);
        for (std::size_t ix = 0; ix < nx; ++ix) {
          const double x = g.coord(0, ix);
          row[ix] = std::exp(-cx * x * x - cy * y * y - cz * z * z);
        }
      }
    }
  }
  normalize(psi, trap.atom_number);

  // Per-axis kinetic decay tables for a half imaginary-time step.
  const double hdt = 0.5 * dt_imag;
  std::vector<std::vector<double>> ktab(g.dims);
  for (int ax = 0; ax < g.dims; ++ax) {
    ktab[ax].resize(g.n[ax]);
    for (std::size_t i = 0; i < g.n[ax]; ++i) {
      const double k = SimGrid::fft_wavenumber(i, g.n[ax], g.spacing(ax));
      ktab[ax][i] = std::exp(-(kHbar * k * k / (2.0 * sp.mass)) * hdt);
    }
  }

  SpectralTransform plans(g, g.size() >= (std::size_t{1} << 19));
  const std::size_t nx = g.n[0];
  const std::size_t ny = g.dims == 3 ? g.n[1] : 1;
  const std::size_t nz = g.n[g.dims - 1];
  std::vector<cplx> scratch(g.size());

  auto kinetic_half = [&]() {
    plans.forward_raw(psi.amp.data());
    for (std::size_t iz = 0; iz < nz; ++iz) {
      const double wz = ktab[g.dims - 1][iz];
      for (std::size_t iy = 0; iy < ny; ++iy) {
        const double wyz = (g.dims == 3 ? ktab[1][iy] : 1.0) * wz;
        cplx* row = psi.amp.data() + nx * (iy + ny * iz);
        for (std::size_t ix = 0; ix < nx; ++ix) row[ix] *= ktab[0][ix] * wyz;
      }
    }
    plans.inverse_scaled(psi.amp.data());
  };

  auto energy_now = [&]() {
    scratch = psi.amp;
    plans.forward_raw(scratch.data());
    const double wnorm =
        g.cell_volume() / static_cast<double>(g.size());
    double ekin = 0.0;
    for (std::size_t iz = 0; iz < nz; ++iz) {
      const double kz = SimGrid::fft_wavenumber(iz, nz, g.spacing(g.dims - 1));
      for (std::size_t iy = 0; iy < ny; ++iy) {
        const double ky =
            g.dims == 3 ? SimGrid::fft_wavenumber(iy, ny, g.spacing(1)) : 0.0;
        const cplx* row = scratch.data() + nx * (iy + ny * iz);
        for (std::size_t ix = 0; ix < nx; ++ix) {
          const double kx = SimGrid::fft_wavenumber(ix, nx, g.spacing(0));
          ekin += (kx * kx + ky * ky + kz * kz) * std::norm(row[ix]);
        }
      }
    }
    ekin *= kHbar * kHbar / (2.0 * sp.mass) * wnorm;
    double epot = 0.0, eint = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double n = std::norm(psi.amp[i]);
      epot += vt[i] * n;
      eint += 0.5 * u * n * n;
    }
    return ekin + (epot + eint) * g.cell_volume();
  };

  double mu = 0.0;
  double eprev = energy_now();
  std::size_t iter = 0;
  bool converged = false;
  for (; iter < max_iterations; ++iter) {
    kinetic_half();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double n = std::norm(psi.amp[i]);
      psi.amp[i] *= std::exp(-(vt[i] + u * n) * dt_imag / kHbar);
    }
    kinetic_half();
    const double nrm = atom_number(psi) / trap.atom_number;
    mu = -kHbar * std::log(nrm) / (2.0 * dt_imag);
    normalize(psi, trap.atom_number);
    const double e = energy_now();
    if (std::abs(e - eprev) < tolerance * std::abs(e)) {
      eprev = e;
      converged = true;
      ++iter;
      break;
    }
    eprev = e;
  }
  if (!converged)
    throw std::runtime_error(
        "ground state: imaginary time did not converge within max_iterations");
  if (info) {
    info->mu = mu;
    info->energy = eprev;
    info->iterations = iter;
  }
  return psi;
}

GroundStateInfo Engine::prepare_source(double tolerance) {
  GroundStateInfo info;
  sys_.psi0 = trap_ground_state(sys_.psi0.grid, sys_.trap, sys_.species,
                                sys_.trap_center_z, tolerance, &info);
  return info;
}

} // namespace atomlens
