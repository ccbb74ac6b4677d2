#include "atomlens/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <stdexcept>

#include "atomlens/gaussfit.hpp"
#include "atomlens/report.hpp"
#include "atomlens/snapshot.hpp"

namespace atomlens {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string gs_cache_path(const std::string& out_dir, const RunConfig& cfg,
                          const SimGrid& g) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%d|%zu|%zu|%zu|%.17g|%.17g|%.17g|%.17g|%.17g|%.17g|%.17g|%.17g|"
                "%.17g|%.17g|%.17g|%.17g",
                g.dims, g.n[0], g.n[1], g.n[2], g.extent[0], g.extent[1],
                g.extent[2], g.min[0], g.min[1], g.min[2], cfg.trap.omega_x,
                cfg.trap.omega_y, cfg.trap.omega_z, cfg.trap.atom_number,
                cfg.trap.a_s_bec, cfg.trap_center_z);
  char name[64];
  std::snprintf(name, sizeof(name), "gs_%016zx.alfs",
                std::hash<std::string>{}(std::string(buf)));
  return (std::filesystem::path(out_dir) / name).string();
}

// Leading (lowest-z) position where the line density reaches the threshold
// fraction of its maximum; NaN for an empty field.
double leading_edge(const ComplexField& f, double fraction) {
  const std::vector<double> line = density_marginal(f, Axis::z);
  const double peak = *std::max_element(line.begin(), line.end());
  if (!(peak > 0)) return kNaN;
  const int zax = f.grid.axis_index(Axis::z);
  for (std::size_t i = 0; i < line.size(); ++i)
    if (line[i] >= fraction * peak) return f.grid.coord(zax, i);
  return kNaN;
}

// Gaussian fit of the focal slice restricted to a window around the peak;
// falls back to the crossing width (residual NaN) when the fit cannot run.
void fit_focal(const BeamSlice& s, FocalSummary& out) {
  const auto imax = static_cast<std::size_t>(
      std::max_element(s.line_density.begin(), s.line_density.end()) -
      s.line_density.begin());
  const double cross = crossing_fwhm(s.x, s.line_density);
  const double dx = s.x.size() > 1 ? s.x[1] - s.x[0] : 0.0;
  out.fwhm_m = cross;
  out.fit_residual = kNaN;
  if (!(dx > 0) || std::isnan(cross)) return;

  const std::size_t half = static_cast<std::size_t>(
      std::ceil(std::max(4.0 * cross, 10.0 * dx) / dx));
  const std::size_t lo = imax > half ? imax - half : 0;
  const std::size_t hi = std::min(imax + half + 1, s.x.size());
  const std::vector<double> wx(s.x.begin() + lo, s.x.begin() + hi);
  const std::vector<double> wy(s.line_density.begin() + lo,
                               s.line_density.begin() + hi);
  try {
    const GaussianFit fit = fit_gaussian(wx, wy);
    out.fwhm_m = fit.fwhm;
    out.fit_residual = fit.residual_rms;
  } catch (const std::invalid_argument&) {
    // keep the crossing width
  }
}

} // namespace

double pulsed_end_time(const RunConfig& cfg, double stop_z) {
  const double tp = cfg.stepper.pump_duration_s;
  const double g = cfg.species.g_accel;
  const double q = bragg_wavenumber(cfg.bragg.lambda_m, cfg.bragg.alpha_rad);
  const double vi = recoil_velocity(q, cfg.bragg.order, cfg.species.mass);
  const double h = cfg.trap_center_z - stop_z;
  if (!(h > 0))
    throw std::invalid_argument("stop plane must lie below the source");
  double fall;
  if (g > 0)
    fall = (std::sqrt(vi * vi + 2.0 * g * h) - vi) / g;
  else if (vi > 0)
    fall = h / vi;
  else
    throw std::invalid_argument("no gravity and no kick: beam never arrives");
  return 0.5 * tp + fall;
}

RunResult run_scenario(const RunConfig& cfg, const RunOptions& io) {
  cfg.validate();
  const SimGrid grid = cfg.grid.build();
  std::filesystem::create_directories(io.out_dir);

  TwoStateSystem sys;
  sys.psi0 = ComplexField::zeros(grid);
  sys.psin = ComplexField::zeros(grid);
  sys.species = cfg.species;
  sys.trap = cfg.trap;
  sys.trap_center_z = cfg.trap_center_z;
  sys.beam = cfg.beam;
  sys.bragg = cfg.bragg;
  sys.focus = cfg.focus;
  sys.loss = cfg.loss;
  sys.stepper = cfg.stepper;

  RunResult res;
  const std::string& id = cfg.run.run_id;
  auto note = [&](const std::string& line) {
    if (!io.quiet) std::fprintf(stderr, "[%s] %s\n", id.c_str(), line.c_str());
  };

  Engine eng(std::move(sys));

  if (!io.resume_from.empty()) {
    SnapshotData snap = load_snapshot(io.resume_from);
    if (!snap.psi0.grid.same_shape(grid) ||
        snap.psi0.grid.extent != grid.extent)
      throw std::invalid_argument("resume: snapshot shape differs from config");
    eng.system().psi0.amp = std::move(snap.psi0.amp);
    eng.system().psin.amp = std::move(snap.psin.amp);
    eng.system().time = snap.time;
    char b[96];
    std::snprintf(b, sizeof(b), "resumed at t=%.3f ms", snap.time * 1e3);
    note(b);
  } else {
    const std::string cache = gs_cache_path(io.out_dir, cfg, grid);
    bool loaded = false;
    if (io.reuse_ground_state && std::filesystem::exists(cache)) {
      SnapshotData snap = load_snapshot(cache);
      if (snap.psi0.grid.same_shape(grid) &&
          snap.psi0.grid.extent == grid.extent &&
          std::abs(atom_number(snap.psi0) - cfg.trap.atom_number) <
              1e-6 * cfg.trap.atom_number) {
        eng.system().psi0.amp = std::move(snap.psi0.amp);
        res.source.mu = kNaN;
        res.source.energy = kNaN;
        loaded = true;
        note("source loaded from " + cache);
      }
    }
    if (!loaded) {
      res.source = eng.prepare_source();
      char b[128];
      std::snprintf(b, sizeof(b),
                    "source relaxed: mu=%.4e J, %zu iterations",
                    res.source.mu, res.source.iterations);
      note(b);
      if (io.reuse_ground_state) {
        const std::string tmp = cache + ".tmp";
        save_snapshot(tmp, eng.system().psi0,
                      ComplexField::zeros(grid), 0.0);
        std::filesystem::rename(tmp, cache);
      }
    }
  }

  // Stop plane and planned end time.
  const double lz = grid.extent[grid.dims - 1];
  const double default_stop =
      cfg.focus ? cfg.focus->center_z_m - cfg.focus->sigma_z_m
                : grid.min[grid.dims - 1] +
                      cfg.stepper.absorber_fraction_z * lz + 0.1 * lz;
  const double stop_z = cfg.run.stop_z_m.value_or(default_stop);
  double t_end = cfg.run.max_time_s;
  if (cfg.stepper.pump_duration_s > 0)
    t_end = std::min(t_end, pulsed_end_time(cfg, stop_z));

  const double dt = cfg.stepper.dt;
  const double t0 = eng.system().time;
  const auto steps_total = static_cast<std::size_t>(
      std::llround(std::ceil((t_end - t0) / dt - 1e-9)));
  const std::size_t stride = cfg.stepper.steps_per_diagnostic;

  const auto out_path = [&](const std::string& suffix) {
    return (std::filesystem::path(io.out_dir) / (id + suffix)).string();
  };
  CsvWriter series(out_path("_series.csv"),
                   {"t_s", "z_center_m", "dx_m", "dvx_m_s", "m2", "n_beam"});
  res.series_csv = series.path();

  const double mass = cfg.species.mass;
  const double focal_z = cfg.focus ? cfg.focus->center_z_m : 0.0;
  BeamSlice best_slice;
  double best_peak = 0.0;
  double best_n = kNaN;
  FocalSummary focal;

  std::size_t done = 0, diag = 0;
  bool front_stop = false;
  while (done < steps_total && !front_stop) {
    const std::size_t n = std::min(stride, steps_total - done);
    eng.advance(n);
    done += n;
    ++diag;
    const double t = eng.system().time;

    const BeamMoments bm = beam_moments(eng.system().psin, mass);
    series.row({t, bm.z_center, bm.dx, bm.dvx, bm.m2, bm.n_beam});

    if (cfg.focus && bm.n_beam > 0) {
      BeamSlice sl = slice_at(eng.system().psin, focal_z);
      const double pk =
          *std::max_element(sl.line_density.begin(), sl.line_density.end());
      if (pk > best_peak) {
        best_peak = pk;
        best_slice = std::move(sl);
        best_n = bm.n_beam;
        focal.time_s = t;
      }
    }

    if (cfg.stepper.pump_duration_s <= 0) {
      const double front =
          leading_edge(eng.system().psin, cfg.run.front_fraction);
      if (!std::isnan(front) && front <= stop_z) front_stop = true;
    }

    if (io.snapshot_every > 0 && done % io.snapshot_every == 0)
      save_snapshot(out_path("_step" + std::to_string(done) + ".alfs"),
                    eng.system().psi0, eng.system().psin, t);

    if (diag % 10 == 0) {
      char b[160];
      std::snprintf(b, sizeof(b),
                    "t=%6.3f ms  N_beam=%9.1f  z_center=%8.2f um  peak=%.3e",
                    t * 1e3, bm.n_beam, bm.z_center * 1e6, best_peak);
      note(b);
    }
  }

  res.final_time_s = eng.system().time;
  res.n_beam_final = atom_number(eng.system().psin);

  // Focused-beam summary from the best slice seen.
  if (cfg.focus && best_peak > 0) {
    focal.peak_density_um2 = best_peak * 1e-12;
    focal.n_beam = best_n;
    fit_focal(best_slice, focal);
  } else {
    focal.time_s = focal.fwhm_m = focal.peak_density_um2 = focal.n_beam =
        focal.fit_residual = kNaN;
  }
  res.focal = focal;
  CsvWriter summary(
      out_path("_summary.csv"),
      {"fwhm_m", "peak_density_per_um2", "n_beam", "fit_residual"});
  summary.row({focal.fwhm_m, focal.peak_density_um2, focal.n_beam,
               focal.fit_residual});
  res.summary_csv = summary.path();

  // Final-time profile along z (rows holding a meaningful share of the beam).
  CsvWriter profile(out_path("_profile.csv"),
                    {"z_m", "dx_m", "dvx_m_s", "m2", "atoms_per_m"});
  res.profile_csv = profile.path();
  if (res.n_beam_final > 0) {
    const std::vector<double> line =
        density_marginal(eng.system().psin, Axis::z);
    const double lmax = *std::max_element(line.begin(), line.end());
    const int zax = grid.axis_index(Axis::z);
    for (std::size_t iz = 0; iz < line.size(); ++iz) {
      if (line[iz] < 1e-4 * lmax) continue;
      const double z = grid.coord(zax, iz);
      const SliceMoments sm = slice_moments(eng.system().psin, z, mass);
      profile.row({sm.z, sm.dx, sm.dvx, sm.m2, sm.atoms_per_m});
      res.profile.push_back(sm);
    }
  }

  for (double z : cfg.run.slice_z_m)
    res.slices.push_back(slice_moments(eng.system().psin, z, mass));

  if (io.final_snapshot)
    save_snapshot(out_path("_final.alfs"), eng.system().psi0,
                  eng.system().psin, eng.system().time);

  char b[200];
  std::snprintf(b, sizeof(b),
                "done t=%.3f ms  N_beam=%.1f  fwhm=%.3g nm  peak=%.4g /um^2",
                res.final_time_s * 1e3, res.n_beam_final,
                res.focal.fwhm_m * 1e9, res.focal.peak_density_um2);
  note(b);
  return res;
}

} // namespace atomlens
