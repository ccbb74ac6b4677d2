// Acceptance gate for the atom-laser focusing simulator.
//
// Five numbered criteria, each reported as exactly one [PASS]/[FAIL] line
// (criterion 5 is a documented long-run regression and prints [INFO]; it is
// not gated). Every tolerance is pinned in this file. The process exit
// status is the number of failed gated criteria.
//
//   1  closed-form calibrations            (< 1 s)
//   2  classical ray calibration of xi     (< 10 s)
//   3  solver oracles                      (minutes)
//   4  desk-scale trend suite              (hours; full propagation runs)
//   5  full-resolution regression targets  (documented; run manually)
//
// Usage: acceptance [criterion numbers...]   (default: 1 2 3 4 5)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "atomlens/bragg.hpp"
#include "atomlens/classical.hpp"
#include "atomlens/config.hpp"
#include "atomlens/diagnostics.hpp"
#include "atomlens/engine.hpp"
#include "atomlens/grid.hpp"
#include "atomlens/potentials.hpp"
#include "atomlens/runner.hpp"

namespace {

using namespace atomlens;
using Clock = std::chrono::steady_clock;

double elapsed_s(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string str(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  return buf;
}

struct Criterion {
  std::string title;
  std::vector<std::string> notes;  // measured values, always shown
  std::vector<std::string> faults; // failed sub-checks
  bool ok = true;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      faults.push_back(what);
    }
  }
  void note(const std::string& what) { notes.push_back(what); }
};

bool within(double x, double ref, double rel) {
  return std::isfinite(x) && std::abs(x - ref) <= rel * std::abs(ref);
}

// ---------------------------------------------------------------- helpers

SimGrid grid_2d(std::size_t nx, std::size_t nz, double lx, double lz,
                double min_z) {
  SimGrid g;
  g.dims = 2;
  g.space = Space::position;
  g.n = {nx, nz, 1};
  g.extent = {lx, lz, 0};
  g.min = {-0.5 * lx, min_z, 0};
  g.validate();
  return g;
}

// Two-state system with every optional interaction switched off: no mean
// field, no loss, no absorber, no pump renormalization, zero frame boost.
TwoStateSystem quiet_system(const SimGrid& g) {
  TwoStateSystem s;
  s.psi0 = ComplexField::zeros(g);
  s.psin = ComplexField::zeros(g);
  s.trap.a_s_bec = 0.0;
  s.beam.a_s_laser = 0.0;
  s.loss.K = 0.0;
  s.stepper.pump_renormalize = false;
  s.stepper.absorber_enabled = false;
  s.stepper.frame_velocity_m_s = 0.0;
  return s;
}

void seed_gaussian(ComplexField& f, double atoms, double sx, double sz,
                   double x0, double z0) {
  const SimGrid& g = f.grid;
  const int xax = g.axis_index(Axis::x);
  const int zax = g.axis_index(Axis::z);
  for (std::size_t iz = 0; iz < g.n[zax]; ++iz) {
    const double z = g.coord(zax, iz);
    for (std::size_t ix = 0; ix < g.n[xax]; ++ix) {
      const double x = g.coord(xax, ix);
      const double a = std::exp(-(x - x0) * (x - x0) / (4.0 * sx * sx) -
                                (z - z0) * (z - z0) / (4.0 * sz * sz));
      f.amp[g.index2(ix, iz)] = a;
    }
  }
  normalize(f, atoms);
}

// ------------------------------------------------- criterion 1: closed form

Criterion criterion1() {
  Criterion c{"closed-form calibrations"};
  const SpeciesParams sp;
  const double omega_z = 2.0 * M_PI * 70.0;

  const double q = bragg_wavenumber(780.027e-9, M_PI);
  c.require(within(q, 1.611e7, 1e-3),
            str("wavenumber %.5e, want 1.611e7 within 0.1%%", q));

  const double vr = recoil_velocity(q, 1.0, sp.mass);
  c.require(vr >= 1.18e-2 && vr <= 1.21e-2,
            str("recoil speed %.5e outside [1.18, 1.21] cm/s", vr));

  const double vf = free_fall_speed(vr, 300e-6, sp.g_accel);
  c.require(within(vf, 7.76e-2, 5e-3),
            str("arrival speed %.5e, want 7.76e-2 within 0.5%%", vf));

  const double dz = delta_z_from_rabi(669.0, sp, omega_z);
  c.require(within(dz, 50e-9, 0.05),
            str("resonance width %.4e at 669 rad/s, want 50 nm within 5%%", dz));

  const double om = rabi_from_delta_z(40e-9, sp, omega_z);
  c.require(within(om, 524.0, 0.02),
            str("coupling %.4g rad/s at 40 nm, want 524 within 2%%", om));

  const FocusConfig fc; // detuning 2*pi*200 GHz, wavelength 312 um
  const double e1 = center_plane_energy(vr, 150e-6, fc.center_z_m, sp);
  const double p1 = optimal_power(5.37, e1, fc.detuning_rad_s, sp, fc.wavenumber());
  c.require(within(p1, 2.433e-3, 0.01),
            str("power (single kick) %.5e W, want 2.433 mW within 1%%", p1));

  const double e6 = center_plane_energy(6.0 * vr, 150e-6, fc.center_z_m, sp);
  const double p6 = optimal_power(5.37, e6, fc.detuning_rad_s, sp, fc.wavenumber());
  c.require(within(p6, 4.48e-3, 0.02),
            str("power (six-fold kick) %.5e W, want 4.48 mW within 2%%", p6));

  const double i25 = peak_intensity(p1, 25e-6);
  const double i50 = peak_intensity(p1, 50e-6);
  c.require(within(i25, 9.91e6, 0.01),
            str("peak intensity %.4e at 25 um, want 9.91e6 within 1%%", i25));
  c.require(within(i50, 2.47e6, 0.01),
            str("peak intensity %.4e at 50 um, want 2.47e6 within 1%%", i50));

  c.note(str("q=%.5e /m  v_recoil=%.5e m/s  v_arrival=%.5e m/s", q, vr, vf));
  c.note(str("width(669 rad/s)=%.3f nm  coupling(40 nm)=%.1f rad/s", dz * 1e9, om));
  c.note(str("P=%.4f mW (1x) / %.4f mW (6x)  I0=%.4g / %.4g W/m^2 (25/50 um)",
             p1 * 1e3, p6 * 1e3, i25, i50));
  return c;
}

// ------------------------------------------- criterion 2: ray calibration

Criterion criterion2() {
  Criterion c{"classical ray calibration"};
  const SpeciesParams sp;
  FocusConfig fc;
  fc.xi = 1.0; // geometry carrier; the search scans xi itself

  const double q = bragg_wavenumber(780.027e-9, M_PI);
  const BeamEntry entry{recoil_velocity(q, 1.0, sp.mass), 150e-6};

  const auto t0 = Clock::now();
  const FocusSearchResult r = calibrate_xi(-150e-6, fc, entry, sp);
  const double secs = elapsed_s(t0);

  c.require(within(r.xi, 5.37, 0.02),
            str("xi %.4f, want 5.37 within 2%%", r.xi));
  c.require(secs < 10.0, str("calibration took %.1f s, budget 10 s", secs));
  c.note(str("xi=%.4f  focal plane %.2f um from target  rms spot %.3f nm  "
             "%d bisections  %.2f s",
             r.xi, (r.focal_z + 150e-6) * 1e6, r.rms_spot * 1e9, r.iterations,
             secs));
  return c;
}

// ------------------------------------------------ criterion 3: solver oracles

void oracle_dispersion(Criterion& c) {
  const double s0 = 100e-9, dt = 1e-6;
  const std::size_t steps = 48;
  TwoStateSystem s = quiet_system(grid_2d(256, 256, 6e-6, 8e-6, -4e-6));
  s.species.g_accel = 0.0;
  s.stepper.dt = dt;
  const double m = s.species.mass;
  seed_gaussian(s.psin, 1e4, s0, s0, 0.0, 0.0);
  Engine eng(std::move(s));
  eng.advance(steps);

  const double t = dt * static_cast<double>(steps);
  const double spread = kHbar * t / (2.0 * m * s0 * s0);
  const double want = s0 * std::sqrt(1.0 + spread * spread);
  const double got_x = centroid_and_rms(eng.system().psin, Axis::x).rms;
  const double got_z = centroid_and_rms(eng.system().psin, Axis::z).rms;

  c.require(want > 2.0 * s0, "dispersion oracle never doubled the width");
  c.require(within(got_x, want, 5e-3),
            str("dispersion rms x %.4f nm, want %.4f within 0.5%%",
                got_x * 1e9, want * 1e9));
  c.require(within(got_z, want, 5e-3),
            str("dispersion rms z %.4f nm, want %.4f within 0.5%%",
                got_z * 1e9, want * 1e9));
  c.note(str("dispersion: rms %.3f/%.3f nm vs %.3f nm analytic (x/z, 48 us)",
             got_x * 1e9, got_z * 1e9, want * 1e9));
}

void oracle_kinematics(Criterion& c) {
  const double dt = 5e-5, z0 = 150e-6;
  const std::size_t steps = 140;
  TwoStateSystem s = quiet_system(grid_2d(64, 2048, 16e-6, 400e-6, -200e-6));
  s.stepper.dt = dt;
  const double g = s.species.g_accel;
  seed_gaussian(s.psin, 1e4, 1e-6, 5e-6, 0.0, z0);
  Engine eng(std::move(s));
  eng.advance(steps);

  const double t = dt * static_cast<double>(steps);
  const double want = z0 - eng.recoil_speed() * t - 0.5 * g * t * t;
  const double got = centroid_and_rms(eng.system().psin, Axis::z).center;
  const double fall = z0 - want;

  c.require(fall >= 300e-6, str("kinematics oracle fell only %.0f um", fall * 1e6));
  c.require(std::abs(got - want) <= 1e-3 * fall,
            str("kinematics centroid %.4f um, want %.4f within 0.1%% of the "
                "%.0f um fall",
                got * 1e6, want * 1e6, fall * 1e6));
  c.note(str("kinematics: centroid %.4f um vs %.4f um over a %.0f um fall",
             got * 1e6, want * 1e6, fall * 1e6));
}

void oracle_loss(Criterion& c) {
  const auto run = [](LossModel::Convention conv, double n0, double t_total,
                      double dt) {
    SimGrid g;
    g.dims = 3;
    g.space = Space::position;
    g.n = {8, 8, 8};
    g.extent = {1e-5, 1e-5, 1e-5};
    g.min = {-5e-6, -5e-6, -5e-6};
    g.validate();
    TwoStateSystem s;
    s.psi0 = ComplexField::zeros(g);
    s.psin = ComplexField::zeros(g);
    s.trap.a_s_bec = 0.0;
    s.beam.a_s_laser = 0.0;
    s.loss.K = 4e-41;
    s.loss.convention = conv;
    s.stepper.pump_renormalize = false;
    s.stepper.absorber_enabled = false;
    s.stepper.frame_velocity_m_s = 0.0;
    s.stepper.dt = dt;
    for (auto& a : s.psin.amp) a = std::sqrt(n0);
    const double volume = g.extent[0] * g.extent[1] * g.extent[2];
    Engine eng(std::move(s));
    eng.advance(static_cast<std::size_t>(std::llround(t_total / dt)));
    return atom_number(eng.system().psin) / volume;
  };
  const double K = 4e-41;

  { // amplitude-rate convention: dn/dt = -K n^3
    const double n0 = 1e21, t = 0.08;
    const double want = n0 / std::sqrt(1.0 + 2.0 * K * n0 * n0 * t);
    const double got = run(LossModel::Convention::standard_half_hbar, n0, t, 1e-4);
    c.require(want <= n0 / M_E, "density-cubed oracle (standard) under one e-fold");
    c.require(within(got, want, 5e-3),
              str("standard loss %.5e, want %.5e within 0.5%%", got, want));
    c.note(str("loss standard: n=%.4e vs %.4e (factor %.3f)", got, want,
               n0 / want));
  }
  { // literal-coefficient convention: dn/dt = -(2K/hbar) n^3
    const double n0 = 1e4, t = 0.0422;
    const double want = n0 / std::sqrt(1.0 + 4.0 * (K / kHbar) * n0 * n0 * t);
    const double got = run(LossModel::Convention::as_written, n0, t, 1e-4);
    c.require(want <= n0 / M_E, "density-cubed oracle (as-written) under one e-fold");
    c.require(within(got, want, 5e-3),
              str("as-written loss %.5e, want %.5e within 0.5%%", got, want));
    c.note(str("loss as-written: n=%.4e vs %.4e (factor %.3f)", got, want,
               n0 / want));
  }
}

void oracle_norm(Criterion& c) {
  TwoStateSystem s = quiet_system(grid_2d(128, 128, 16e-6, 16e-6, -8e-6));
  s.trap_center_z = 0.0;
  s.beam.a_s_laser = 100.0 * kBohrRadius;
  s.bragg.rabi_rad_s = 524.0;
  FocusConfig fc;
  fc.center_z_m = 0.0;
  fc.sigma_z_m = 10e-6;
  fc.power_w = 1e-4;
  fc.xi.reset();
  s.focus = fc;
  s.stepper.dt = 1e-6;
  seed_gaussian(s.psi0, 1e5, 1e-6, 1e-6, 0.0, 0.0);
  seed_gaussian(s.psin, 1e3, 0.8e-6, 0.8e-6, 0.5e-6, -2e-6);
  Engine eng(std::move(s));
  const double total0 =
      atom_number(eng.system().psi0) + atom_number(eng.system().psin);
  eng.advance(1000);
  const double total =
      atom_number(eng.system().psi0) + atom_number(eng.system().psin);
  const double drift = std::abs(total - total0) / total0;

  c.require(drift < 1e-8,
            str("norm drift %.2e over 1000 steps, budget 1e-8", drift));
  c.note(str("norm: relative drift %.2e over 1000 coupled steps", drift));
}

void oracle_dt_halving(Criterion& c) {
  const auto focus_run = [](double dt, std::size_t batches,
                            std::size_t per_batch) {
    TwoStateSystem s = quiet_system(grid_2d(128, 512, 8e-6, 120e-6, -90e-6));
    s.trap_center_z = 20e-6;
    FocusConfig fc;
    fc.center_z_m = -40e-6;
    fc.sigma_z_m = 10e-6;
    fc.xi = 5.37;
    s.focus = fc;
    s.stepper.dt = dt;
    seed_gaussian(s.psin, 1e4, 0.8e-6, 2e-6, 0.0, 20e-6);
    Engine eng(std::move(s));
    double best = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t b = 0; b < batches; ++b) {
      eng.advance(per_batch);
      const BeamSlice sl = slice_at(eng.system().psin, -40e-6);
      const double w = crossing_fwhm(sl.x, sl.line_density);
      if (std::isfinite(w) && (std::isnan(best) || w < best)) best = w;
    }
    return best;
  };
  const double coarse = focus_run(2e-6, 64, 25);
  const double fine = focus_run(1e-6, 64, 50);

  c.require(std::isfinite(coarse) && std::isfinite(fine),
            "dt-halving oracle produced no focal width");
  c.require(std::abs(coarse - fine) <= 0.01 * fine,
            str("dt halving moved the focal width %.3f%% (%.3f vs %.3f nm), "
                "budget 1%%",
                100.0 * std::abs(coarse - fine) / fine, coarse * 1e9,
                fine * 1e9));
  c.note(str("dt halving: fwhm %.3f nm -> %.3f nm (%.3f%% shift)",
             coarse * 1e9, fine * 1e9,
             100.0 * std::abs(coarse - fine) / fine));
}

Criterion criterion3() {
  Criterion c{"solver oracles"};
  oracle_dispersion(c);
  oracle_kinematics(c);
  oracle_loss(c);
  oracle_norm(c);
  oracle_dt_halving(c);
  return c;
}

// --------------------------------------------- criterion 4: trend suite

struct TrendOutcome {
  double fwhm = std::numeric_limits<double>::quiet_NaN();
  double peak = std::numeric_limits<double>::quiet_NaN();
  double n_beam = std::numeric_limits<double>::quiet_NaN();
  double m2_min = std::numeric_limits<double>::quiet_NaN();
  double slice_m2 = std::numeric_limits<double>::quiet_NaN();
  double wall_s = 0.0;
  bool threw = false;
  std::string error;
};

RunConfig trend_base(const std::string& id) {
  RunConfig c;
  c.trap.atom_number = 1e5;
  c.trap.a_s_bec = 100.0 * kBohrRadius;
  c.trap_center_z = 150e-6;
  // 80 nm slab outcouples ~6k atoms: enough beam density for the mean field
  // to move the focal width by percents, while the -300 a0 member stays below
  // the transverse self-focusing instability (its soliton width must not
  // shrink far under the ~9 um column width).
  c.bragg.delta_z_m = 80e-9;
  c.grid.nx = 1024;
  c.grid.nz = 2048;
  c.grid.extent_x_m = 24e-6; // the 1e5-atom source is ~18.5 um across
  c.grid.extent_z_m = 500e-6;
  c.grid.min_z_m = -290e-6;
  c.stepper.dt = 2e-6;
  c.stepper.steps_per_diagnostic = 50;
  c.stepper.pump_duration_s = 1.5e-3;
  c.stepper.ramp_time_s = 0.2e-3;
  c.stepper.absorber_fraction_x = 0.05;
  c.stepper.absorber_fraction_y = 0.0;
  c.stepper.absorber_fraction_z = 0.08;
  c.run.max_time_s = 20e-3;
  c.run.run_id = id;
  FocusConfig fc;
  fc.center_z_m = -150e-6;
  fc.xi = 5.37;
  c.focus = fc;
  return c;
}

// Smallest beam-quality factor over the profile rows that carry at least 1%
// of the peak line density (tail rows have too few atoms for clean moments).
double profile_m2_min(const RunResult& r) {
  double lmax = 0.0;
  for (const auto& sm : r.profile) lmax = std::max(lmax, sm.atoms_per_m);
  double m2 = std::numeric_limits<double>::quiet_NaN();
  for (const auto& sm : r.profile) {
    if (sm.atoms_per_m < 0.01 * lmax) continue;
    if (std::isnan(m2) || sm.m2 < m2) m2 = sm.m2;
  }
  return m2;
}

TrendOutcome run_trend(const RunConfig& cfg, const std::string& out_dir) {
  TrendOutcome out;
  RunOptions io;
  io.out_dir = out_dir;
  io.quiet = true;
  const auto t0 = Clock::now();
  try {
    const RunResult r = run_scenario(cfg, io);
    out.fwhm = r.focal.fwhm_m;
    out.peak = r.focal.peak_density_um2;
    out.n_beam = cfg.focus ? r.focal.n_beam : r.n_beam_final;
    out.m2_min = profile_m2_min(r);
    if (!r.slices.empty()) out.slice_m2 = r.slices.front().m2;
  } catch (const std::exception& e) {
    out.threw = true;
    out.error = e.what();
  }
  out.wall_s = elapsed_s(t0);
  return out;
}

Criterion criterion4() {
  Criterion c{"desk-scale trend suite"};
  const std::string out_dir = "acceptance_out";
  std::filesystem::create_directories(out_dir);

  std::vector<std::pair<std::string, RunConfig>> runs;
  const auto add = [&](const std::string& id, const RunConfig& cfg) {
    runs.emplace_back(id, cfg);
  };

  // Lens-width family at sigma_z = 100 um, laser scattering length swept
  // from repulsive to strongly attractive.
  const std::vector<double> family_a0 = {100, 0, -100, -200, -300};
  for (double a : family_a0) {
    RunConfig cfg = trend_base(str("lens100_a%+04.0f", a));
    cfg.focus->sigma_z_m = 100e-6;
    cfg.beam.a_s_laser = a * kBohrRadius;
    add(cfg.run.run_id, cfg);
  }
  // Narrower lenses at fixed repulsive scattering length.
  for (double sig : {25.0, 50.0}) {
    RunConfig cfg = trend_base(str("lens%03.0f_a+100", sig));
    cfg.focus->sigma_z_m = sig * 1e-6;
    cfg.beam.a_s_laser = 100.0 * kBohrRadius;
    add(cfg.run.run_id, cfg);
  }
  // Source scattering length sweep (wider box: the 200 a0 cloud is larger).
  for (double b : {50.0, 100.0, 200.0}) {
    RunConfig cfg = trend_base(str("src_b%03.0f", b));
    cfg.focus->sigma_z_m = 50e-6;
    cfg.beam.a_s_laser = 100.0 * kBohrRadius;
    cfg.trap.a_s_bec = b * kBohrRadius;
    cfg.grid.extent_x_m = 28e-6;
    add(cfg.run.run_id, cfg);
  }
  // Momentum-kick pairs: quarter kick vs six-fold kick at two laser
  // scattering lengths; the lens power follows the kick through xi.
  for (double ord : {0.25, 6.0}) {
    for (double a : {100.0, -300.0}) {
      RunConfig cfg = trend_base(
          str("kick_o%s_a%+04.0f", ord == 0.25 ? "025" : "600", a));
      cfg.focus->sigma_z_m = 50e-6;
      cfg.beam.a_s_laser = a * kBohrRadius;
      cfg.bragg.order = ord;
      add(cfg.run.run_id, cfg);
    }
  }
  // Free propagation (no lens): beam quality at z = -140 um.
  for (double a : {100.0, 0.0, -100.0}) {
    RunConfig cfg = trend_base(str("free_a%+04.0f", a));
    cfg.focus.reset();
    cfg.beam.a_s_laser = a * kBohrRadius;
    // Denser beam separates the quality factors; safe here because this
    // family's strongest attraction is only -100 a0.
    cfg.bragg.delta_z_m = 200e-9;
    cfg.grid.nx = 512;
    cfg.grid.extent_x_m = 24e-6;
    cfg.run.stop_z_m = -175e-6;
    cfg.run.slice_z_m = {-140e-6};
    add(cfg.run.run_id, cfg);
  }

  std::map<std::string, TrendOutcome> res;
  std::ofstream table(out_dir + "/trend_summary.csv", std::ios::binary);
  table << "id,fwhm_nm,peak_per_um2,n_beam,m2_min,slice_m2,wall_s\r\n";
  for (const auto& [id, cfg] : runs) {
    const TrendOutcome o = run_trend(cfg, out_dir);
    res[id] = o;
    if (o.threw) {
      c.require(false, str("run %s threw: %s", id.c_str(), o.error.c_str()));
      c.note(str("%-16s FAILED after %.0f s: %s", id.c_str(), o.wall_s,
                 o.error.c_str()));
    } else {
      c.note(str("%-16s fwhm=%8.2f nm  peak=%9.3f /um^2  N=%8.1f  "
                 "m2min=%.3f  slice_m2=%s  [%.0f s]",
                 id.c_str(), o.fwhm * 1e9, o.peak, o.n_beam, o.m2_min,
                 std::isnan(o.slice_m2) ? "-" : str("%.3f", o.slice_m2).c_str(),
                 o.wall_s));
    }
    table << id << ',' << o.fwhm * 1e9 << ',' << o.peak << ',' << o.n_beam
          << ',' << o.m2_min << ',' << o.slice_m2 << ',' << o.wall_s << "\r\n";
    table.flush();
  }

  const auto fwhm = [&](const std::string& id) { return res[id].fwhm; };
  const auto peak = [&](const std::string& id) { return res[id].peak; };

  // Monotonicity across the laser scattering-length family at sigma 100 um.
  const std::vector<std::string> fam = {"lens100_a+100", "lens100_a+000",
                                        "lens100_a-100", "lens100_a-200",
                                        "lens100_a-300"};
  for (std::size_t i = 0; i + 1 < fam.size(); ++i) {
    c.require(fwhm(fam[i + 1]) < fwhm(fam[i]),
              str("fwhm not strictly decreasing: %s %.2f nm -> %s %.2f nm",
                  fam[i].c_str(), fwhm(fam[i]) * 1e9, fam[i + 1].c_str(),
                  fwhm(fam[i + 1]) * 1e9));
    c.require(peak(fam[i + 1]) > peak(fam[i]),
              str("peak not strictly increasing: %s %.2f -> %s %.2f /um^2",
                  fam[i].c_str(), peak(fam[i]), fam[i + 1].c_str(),
                  peak(fam[i + 1])));
  }

  // Narrower lens focuses tighter at fixed scattering length.
  c.require(fwhm("lens025_a+100") < fwhm("lens050_a+100") &&
                fwhm("lens050_a+100") < fwhm("lens100_a+100"),
            str("lens-width ordering violated: %.2f (25) / %.2f (50) / %.2f "
                "(100) nm",
                fwhm("lens025_a+100") * 1e9, fwhm("lens050_a+100") * 1e9,
                fwhm("lens100_a+100") * 1e9));

  // Source scattering length barely moves the focus.
  {
    const double w1 = fwhm("src_b050"), w2 = fwhm("src_b100"), w3 = fwhm("src_b200");
    const double lo = std::min({w1, w2, w3}), hi = std::max({w1, w2, w3});
    const double mean = (w1 + w2 + w3) / 3.0;
    c.require(std::isfinite(mean) && (hi - lo) / mean < 0.10,
              str("source-scattering spread %.1f%% exceeds 10%% "
                  "(%.2f/%.2f/%.2f nm)",
                  100.0 * (hi - lo) / mean, w1 * 1e9, w2 * 1e9, w3 * 1e9));
  }

  // A hard kick saturates the interaction effect on the focal width.
  {
    const double slow = std::abs(fwhm("kick_o025_a+100") - fwhm("kick_o025_a-300"));
    const double fast = std::abs(fwhm("kick_o600_a+100") - fwhm("kick_o600_a-300"));
    c.require(std::isfinite(slow) && std::isfinite(fast) && fast < slow,
              str("kick saturation violated: spread %.2f nm (6x kick) vs "
                  "%.2f nm (quarter kick)",
                  fast * 1e9, slow * 1e9));
  }

  // Beam quality is bounded below by the uncertainty limit everywhere.
  for (const auto& [id, o] : res) {
    if (o.threw) continue;
    c.require(!(o.m2_min < 0.99),
              str("%s: profile quality factor %.4f below 0.99", id.c_str(),
                  o.m2_min));
  }

  // Free propagation: repulsive interactions degrade the beam, attractive
  // ones clean it up.
  {
    const double mp = res["free_a+100"].slice_m2;
    const double m0 = res["free_a+000"].slice_m2;
    const double mm = res["free_a-100"].slice_m2;
    c.require(std::isfinite(mp) && std::isfinite(m0) && std::isfinite(mm) &&
                  mp > m0 && m0 > mm,
              str("free-propagation quality ordering violated: %.3f (+100) / "
                  "%.3f (0) / %.3f (-100)",
                  mp, m0, mm));
    c.require(!(mm < 0.99),
              str("free-propagation quality %.4f below 0.99", mm));
  }

  return c;
}

// --------------------------------- criterion 5: full-resolution regression

Criterion criterion5() {
  Criterion c{"full-resolution regression (documented, not gated)"};
  c.note("targets: attractive-lens fwhm 8.04 nm +-25%, repulsive 13.2 nm "
         "+-25%, attractive/repulsive width ratio 0.61 +-15%, peak-density "
         "ratio 605.1/296.3 +-20%");
  c.note("run manually: atomlens run --config configs/fullres_attractive.json "
         "and configs/fullres_repulsive.json (hours at full resolution)");
  return c;
}

} // namespace

int main(int argc, char** argv) {
  std::set<int> pick;
  for (int i = 1; i < argc; ++i) pick.insert(std::atoi(argv[i]));
  if (pick.empty()) pick = {1, 2, 3, 4, 5};

  int failures = 0;
  int gated = 0;
  for (int idx : pick) {
    const auto t0 = Clock::now();
    Criterion c;
    bool is_gated = true;
    switch (idx) {
      case 1: c = criterion1(); break;
      case 2: c = criterion2(); break;
      case 3: c = criterion3(); break;
      case 4: c = criterion4(); break;
      case 5: c = criterion5(); is_gated = false; break;
      default:
        std::printf("[FAIL] criterion %d: unknown criterion\n", idx);
        ++failures;
        continue;
    }
    const double secs = elapsed_s(t0);
    if (is_gated) {
      ++gated;
      std::printf("[%s] criterion %d: %s (%.1f s)\n", c.ok ? "PASS" : "FAIL",
                  idx, c.title.c_str(), secs);
      if (!c.ok) ++failures;
    } else {
      std::printf("[INFO] criterion %d: %s\n", idx, c.title.c_str());
    }
    for (const auto& n : c.notes) std::printf("       . %s\n", n.c_str());
    for (const auto& f : c.faults) std::printf("       ! %s\n", f.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %d of %d gated criteria passed\n", gated - failures,
              gated);
  return failures;
}
