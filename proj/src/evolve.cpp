#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "atomlens/engine.hpp"

namespace atomlens {

namespace {

using cplx = std::complex<double>;

// e^{-i a} with a fast series for the small angles that dominate the
// nonlinear phases (exact to double precision under the threshold).
inline cplx cis_neg(double a) {
  const double a2 = a * a;
  if (a2 < 2.5e-5) {
    const double c = 1.0 - 0.5 * a2 + a2 * a2 * (1.0 / 24.0);
    const double s = a * (1.0 - a2 * (1.0 / 6.0));
    return {c, -s};
  }
  return {std::cos(a), -std::sin(a)};
}

// e^{-r} for r >= 0, series below the same threshold.
inline double exp_neg(double r) {
  if (r < 5e-3)
    return 1.0 - r + 0.5 * r * r - r * r * r * (1.0 / 6.0);
  return std::exp(-r);
}

} // namespace

void StepperConfig::validate() const {
  if (!(dt > 0) || !std::isfinite(dt))
    throw std::invalid_argument("stepper: dt must be positive");
  if (steps_per_diagnostic == 0)
    throw std::invalid_argument("stepper: steps_per_diagnostic must be >= 1");
  if (ramp_time_s < 0 || pump_duration_s < 0)
    throw std::invalid_argument("stepper: ramp/pump durations must be >= 0");
  if (absorber_rate < 0)
    throw std::invalid_argument("stepper: absorber_rate must be >= 0");
  for (double f :
       {absorber_fraction_x, absorber_fraction_y, absorber_fraction_z})
    if (f < 0 || f >= 0.5)
      throw std::invalid_argument("stepper: absorber fractions in [0, 0.5)");
}

void TwoStateSystem::validate() const {
  psi0.validate();
  psin.validate();
  if (!psi0.grid.same_shape(psin.grid) ||
      psi0.grid.extent != psin.grid.extent || psi0.grid.min != psin.grid.min)
    throw std::invalid_argument("system: field grids differ");
  if (psi0.grid.space != Space::position)
    throw std::invalid_argument("system: fields must start in position space");
  species.validate();
  trap.validate();
  beam.validate();
  bragg.validate();
  loss.validate();
  stepper.validate();
  if (focus) focus->validate();
  if (!std::isfinite(trap_center_z))
    throw std::invalid_argument("system: trap_center_z must be finite");
}

double kinetic_z_phase(double kz, double t1, double t2, double kick_kz,
                       double v0, double g, double rot, double mass) {
  const double k1 = kz + kick_kz + (mass / kHbar) * (v0 - g * t1);
  const double k2 = kz + kick_kz + (mass / kHbar) * (v0 - g * t2);
  const double dt = t2 - t1;
  return (kHbar * dt / (6.0 * mass)) * (k1 * k1 + k1 * k2 + k2 * k2) - rot * dt;
}

Engine::Engine(TwoStateSystem sys)
    : sys_(std::move(sys)),
      plans_(sys_.psi0.grid, sys_.psi0.grid.size() >= (std::size_t{1} << 19)) {
  sys_.validate();
  const SimGrid& g = sys_.psi0.grid;
  const SpeciesParams& sp = sys_.species;
  const double dt = sys_.stepper.dt;

  // Kick and drive bookkeeping.
  const double q = bragg_wavenumber(sys_.bragg.lambda_m, sys_.bragg.alpha_rad);
  kick_kz_ = -sys_.bragg.order * q; // photon kick points down
  recoil_ = recoil_velocity(q, sys_.bragg.order, sp.mass);
  omega_res_ = resonance_frequency(q, sys_.bragg.order, sp.mass);
  rabi_ = resolve_rabi(sys_.bragg, sp, sys_.trap.omega_z);
  v0_ = sys_.stepper.frame_velocity_m_s.value_or(
      sys_.stepper.pump_duration_s > 0
          ? 0.5 * sp.g_accel * sys_.stepper.pump_duration_s
          : 0.0);

  // Interaction couplings, folded through the y ansatz in 2D (evaluated at
  // the ansatz peak so the plane behaves like the y = 0 slice).
  const double sy = g.dims == 2 ? ansatz_sigma_y(sys_.trap, sp) : 0.0;
  const double red_u = g.dims == 2 ? 1.0 / (std::sqrt(2.0 * M_PI) * sy) : 1.0;
  const double red_k = g.dims == 2 ? 1.0 / (2.0 * M_PI * sy * sy) : 1.0;
  u00_ = interaction_u(sys_.trap.a_s_bec, sp.mass) * red_u;
  unn_ = interaction_u(sys_.beam.a_s_laser, sp.mass) * red_u;
  u0n_ = u00_; // beam-source coupling keeps the source scattering length
  const double k_red = sys_.loss.K * red_k;
  loss_coeff_ = sys_.loss.convention == LossModel::Convention::standard_half_hbar
                    ? 0.5 * k_red
                    : k_red / kHbar;
  interactions_off_ =
      u00_ == 0.0 && unn_ == 0.0 && u0n_ == 0.0 && loss_coeff_ == 0.0;

  // Static local-phase tables.
  const std::vector<double> vt =
      sample_trap(g, sys_.trap, sp, sys_.trap_center_z);
  cis_trap_half_.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    cis_trap_half_[i] = cis_neg(vt[i] * (0.5 * dt / kHbar));

  cis_focus_half_.assign(g.size(), cplx{1.0, 0.0});
  if (sys_.focus) {
    i0_ = resolve_peak_intensity(*sys_.focus, recoil_, sys_.trap_center_z, sp);
    const std::vector<double> uf = sample_focus(g, *sys_.focus, i0_, sp);
    for (std::size_t i = 0; i < g.size(); ++i)
      cis_focus_half_[i] = cis_neg(uf[i] * (0.5 * dt / kHbar));
  }

  if (sys_.stepper.absorber_enabled && sys_.stepper.absorber_rate > 0) {
    const std::array<double, 3> fracs =
        g.dims == 2 ? std::array<double, 3>{sys_.stepper.absorber_fraction_x,
                                            sys_.stepper.absorber_fraction_z, 0}
                    : std::array<double, 3>{sys_.stepper.absorber_fraction_x,
                                            sys_.stepper.absorber_fraction_y,
                                            sys_.stepper.absorber_fraction_z};
    const std::vector<double> w =
        absorber_rates(g, sys_.stepper.absorber_rate, fracs);
    absorb_step_.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
      absorb_step_[i] = std::exp(-w[i] * dt);
  }

  // Per-axis kinetic half-step tables. The source tables come from the same
  // phase rule as the beam's with kick, boost, gravity and rotation zeroed,
  // so the two fields share one kinetic code path.
  const double hdt = 0.5 * dt;
  kx_half_.resize(g.n[0]);
  for (std::size_t i = 0; i < g.n[0]; ++i) {
    const double kx = SimGrid::fft_wavenumber(i, g.n[0], g.spacing(0));
    kx_half_[i] = cis_neg(kinetic_z_phase(kx, 0, hdt, 0, 0, 0, 0, sp.mass));
  }
  if (g.dims == 3) {
    ky_half_.resize(g.n[1]);
    for (std::size_t i = 0; i < g.n[1]; ++i) {
      const double ky = SimGrid::fft_wavenumber(i, g.n[1], g.spacing(1));
      ky_half_[i] = cis_neg(kinetic_z_phase(ky, 0, hdt, 0, 0, 0, 0, sp.mass));
    }
  }
  const int zax = g.dims - 1;
  kz0_half_.resize(g.n[zax]);
  for (std::size_t i = 0; i < g.n[zax]; ++i) {
    const double kz = SimGrid::fft_wavenumber(i, g.n[zax], g.spacing(zax));
    kz0_half_[i] = cis_neg(kinetic_z_phase(kz, 0, hdt, 0, 0, 0, 0, sp.mass));
  }
  kzn_scratch_.resize(g.n[zax]);
  drive_phase_.resize(g.n[zax]);
}

double Engine::pulse_envelope(double t) const {
  const double ramp = sys_.stepper.ramp_time_s;
  const double dur = sys_.stepper.pump_duration_s;
  if (t < 0) return 0.0;
  if (dur <= 0) return ramp > 0 ? std::min(1.0, t / ramp) : 1.0;
  if (t > dur) return 0.0;
  if (ramp <= 0) return 1.0;
  return std::clamp(std::min(t, dur - t) / ramp, 0.0, 1.0);
}

void Engine::kinetic_half(double t1, double t2) {
  const SimGrid& g = sys_.psi0.grid;
  const SpeciesParams& sp = sys_.species;
  const int zax = g.dims - 1;
  const std::size_t nx = g.n[0];
  const std::size_t ny = g.dims == 3 ? g.n[1] : 1;
  const std::size_t nz = g.n[zax];

  // Beam z phases for this exact interval (carrier falls during it).
  for (std::size_t i = 0; i < nz; ++i) {
    const double kz = SimGrid::fft_wavenumber(i, nz, g.spacing(zax));
    kzn_scratch_[i] = cis_neg(kinetic_z_phase(
        kz, t1, t2, kick_kz_, v0_, sp.g_accel, omega_res_, sp.mass));
  }

  cplx* p0 = sys_.psi0.amp.data();
  cplx* pn = sys_.psin.amp.data();
  plans_.forward_raw(p0);
  plans_.forward_raw(pn);
  for (std::size_t iz = 0; iz < nz; ++iz) {
    const cplx wz0 = kz0_half_[iz];
    const cplx wzn = kzn_scratch_[iz];
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const cplx wy = g.dims == 3 ? ky_half_[iy] : cplx{1.0, 0.0};
      const cplx f0 = wy * wz0;
      const cplx fn = wy * wzn;
      cplx* r0 = p0 + nx * (iy + ny * iz);
      cplx* rn = pn + nx * (iy + ny * iz);
      for (std::size_t ix = 0; ix < nx; ++ix) {
        const cplx wx = kx_half_[ix];
        r0[ix] *= wx * f0;
        rn[ix] *= wx * fn;
      }
    }
  }
  plans_.inverse_scaled(p0);
  plans_.inverse_scaled(pn);
}

void Engine::local_step(double t_mid) {
  const SimGrid& g = sys_.psi0.grid;
  const double dt = sys_.stepper.dt;
  const double hdt = 0.5 * dt;
  const double hdt_u = hdt / kHbar;
  const std::size_t total = g.size();
  cplx* p0 = sys_.psi0.amp.data();
  cplx* pn = sys_.psin.amp.data();

  double max_rate_dt = 0.0;
  auto half_pass = [&]() {
    if (interactions_off_) {
      for (std::size_t i = 0; i < total; ++i) {
        p0[i] *= cis_trap_half_[i];
        pn[i] *= cis_focus_half_[i];
      }
      return;
    }
    double amax = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
      const double n0 = std::norm(p0[i]);
      const double nb = std::norm(pn[i]);
      const double ang0 = hdt_u * (u00_ * n0 + u0n_ * nb);
      const double angn = hdt_u * (unn_ * nb + u0n_ * n0);
      const double r = loss_coeff_ * (n0 * n0 + nb * nb + 4.0 * n0 * nb) * hdt;
      amax = std::max({amax, std::abs(ang0), std::abs(angn), r});
      p0[i] *= cis_trap_half_[i] * cis_neg(ang0);
      pn[i] *= cis_focus_half_[i] * cis_neg(angn) * exp_neg(r);
    }
    max_rate_dt = std::max(max_rate_dt, 2.0 * amax);
  };

  half_pass();

  const double theta = rabi_ * pulse_envelope(t_mid) * dt;
  if (theta != 0.0) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const SpeciesParams& sp = sys_.species;
    const double b = v0_ - sp.g_accel * t_mid;
    const int zax = g.dims - 1;
    const std::size_t nx = g.n[0];
    const std::size_t ny = g.dims == 3 ? g.n[1] : 1;
    const std::size_t nz = g.n[zax];
    for (std::size_t iz = 0; iz < nz; ++iz) {
      const double zp = g.coord(zax, iz) - sys_.trap_center_z;
      drive_phase_[iz] = cis_neg((sp.mass / kHbar) * b * zp);
    }
    for (std::size_t iz = 0; iz < nz; ++iz) {
      const cplx mis{0.0, -s};
      const cplx pd = mis * drive_phase_[iz];        // -i s P
      const cplx pu = mis * std::conj(drive_phase_[iz]); // -i s P*
      for (std::size_t iy = 0; iy < ny; ++iy) {
        cplx* r0 = p0 + nx * (iy + ny * iz);
        cplx* rn = pn + nx * (iy + ny * iz);
        for (std::size_t ix = 0; ix < nx; ++ix) {
          const cplx a = r0[ix];
          const cplx bx = rn[ix];
          r0[ix] = c * a + pu * bx;
          rn[ix] = c * bx + pd * a;
        }
      }
    }
  }

  half_pass();

  if (max_rate_dt > 0.1)
    throw std::runtime_error(
        "stability guard: nonlinear phase per step exceeded 0.1 rad; "
        "reduce stepper.dt");
}

void Engine::boundary_and_pump() {
  cplx* p0 = sys_.psi0.amp.data();
  cplx* pn = sys_.psin.amp.data();
  const std::size_t total = sys_.psi0.grid.size();
  if (!absorb_step_.empty()) {
    for (std::size_t i = 0; i < total; ++i) {
      const double w = absorb_step_[i];
      if (w != 1.0) {
        p0[i] *= w;
        pn[i] *= w;
      }
    }
  }
  if (sys_.stepper.pump_renormalize)
    normalize(sys_.psi0, sys_.trap.atom_number);
}

void Engine::advance(std::size_t steps) {
  const double dt = sys_.stepper.dt;
  const double t0 = sys_.time;
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = t0 + static_cast<double>(s) * dt;
    kinetic_half(t, t + 0.5 * dt);
    local_step(t + 0.5 * dt);
    kinetic_half(t + 0.5 * dt, t + dt);
    boundary_and_pump();
  }
  sys_.time = t0 + static_cast<double>(steps) * dt;
  if (!std::isfinite(atom_number(sys_.psin)) ||
      !std::isfinite(atom_number(sys_.psi0)))
    throw std::runtime_error("evolution produced non-finite amplitudes");
}

} // namespace atomlens
