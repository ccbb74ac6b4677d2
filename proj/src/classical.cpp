#include "atomlens/classical.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace atomlens {

ForceFn dipole_force(double i0, const FocusConfig& fc, const SpeciesParams& sp) {
  const double g2 = sp.gamma * sp.gamma;
  const double beta = g2 / (g2 + 4.0 * fc.detuning_rad_s * fc.detuning_rad_s);
  const double pref = 0.5 * kHbar * fc.detuning_rad_s * beta /
                      sp.saturation_intensity;
  const double kf = fc.wavenumber();
  const double sig2 = fc.sigma_z_m * fc.sigma_z_m;
  const double zc = fc.center_z_m;
  return [=](double x, double z) -> std::array<double, 2> {
    const double dz = z - zc;
    const double env = std::exp(-2.0 * dz * dz / sig2);
    const double intensity = i0 * env * (kf * x) * (kf * x);
    const double denom = 1.0 + beta * intensity / sp.saturation_intensity;
    // dU/dI = pref / denom; chain rule through I(x, z)
    const double fx = -(pref / denom) * i0 * env * kf * kf * 2.0 * x;
    const double fz = -(pref / denom) * intensity * (-4.0 * dz / sig2);
    return {fx, fz};
  };
}

namespace {

void check_finite(const std::array<double, 2>& f, double x, double z) {
  if (!std::isfinite(f[0]) || !std::isfinite(f[1])) {
    std::ostringstream os;
    os << "non-finite force at x=" << x << " z=" << z;
    throw std::runtime_error(os.str());
  }
}

} // namespace

Trajectory integrate_trajectory(const TrajectoryPoint& start,
                                const ForceFn& force, double mass, double g,
                                double dt, double t_end,
                                std::size_t sample_stride) {
  if (dt <= 0 || t_end <= start.t)
    throw std::invalid_argument("integrate_trajectory: need dt > 0, t_end > t0");
  if (sample_stride == 0) sample_stride = 1;

  Trajectory traj;
  TrajectoryPoint p = start;
  traj.points.push_back(p);

  auto f = force(p.x, p.z);
  check_finite(f, p.x, p.z);
  double ax = f[0] / mass;
  double az = f[1] / mass - g;

  const auto steps = static_cast<std::size_t>(
      std::ceil((t_end - start.t) / dt - 1e-9));
  traj.points.reserve(steps / sample_stride + 2);
  for (std::size_t i = 0; i < steps; ++i) {
    p.x += p.vx * dt + 0.5 * ax * dt * dt;
    p.z += p.vz * dt + 0.5 * az * dt * dt;
    f = force(p.x, p.z);
    check_finite(f, p.x, p.z);
    const double ax2 = f[0] / mass;
    const double az2 = f[1] / mass - g;
    p.vx += 0.5 * (ax + ax2) * dt;
    p.vz += 0.5 * (az + az2) * dt;
    ax = ax2;
    az = az2;
    p.t = start.t + static_cast<double>(i + 1) * dt;
    if ((i + 1) % sample_stride == 0 || i + 1 == steps) traj.points.push_back(p);
  }
  return traj;
}

namespace {

struct FanAtTarget {
  std::vector<double> x_at_target; // one per ray
  double focal_z = 0;              // zero-crossing of the widest ray
  bool crossed = false;
};

// March the whole fan through the lens region and record each ray's
// transverse position on the target plane plus where the fan collapses.
FanAtTarget shoot_fan(double xi, double target_z, const FocusConfig& fc,
                      const BeamEntry& entry, const SpeciesParams& sp,
                      const FanConfig& fan) {
  const double g = sp.g_accel;
  const double e0 = center_plane_energy(entry.v_source, entry.source_z,
                                        fc.center_z_m, sp);
  const double i0 =
      peak_intensity(optimal_power(xi, e0, fc.detuning_rad_s, sp,
                                   fc.wavenumber()),
                     fc.sigma_z_m);
  const ForceFn force = dipole_force(i0, fc, sp);
  const double v_design = std::sqrt(2.0 * e0 / sp.mass);

  const double z_entry = fc.center_z_m + 3.0 * fc.sigma_z_m;
  const double z_exit = fc.center_z_m - 3.0 * fc.sigma_z_m;
  const bool ballistic = fan.transit == TransitModel::ballistic;
  const double vz_entry =
      ballistic ? -free_fall_speed(entry.v_source, entry.source_z - z_entry, g)
                : -v_design;

  FanAtTarget out;
  out.x_at_target.resize(fan.rays);
  const double dt = fan.dt;
  for (int r = 0; r < fan.rays; ++r) {
    const double off = (fan.rays == 1)
                           ? fan.half_width_m
                           : -fan.half_width_m +
                                 2.0 * fan.half_width_m * r / (fan.rays - 1);
    double x = off, z = z_entry, vx = 0.0, vz = vz_entry;
    auto f = force(x, z);
    double ax = f[0] / sp.mass;
    double az = ballistic ? f[1] / sp.mass - g : 0.0;
    double x_prev = x, z_prev = z;
    bool hit_target = false;
    const bool track = (r == fan.rays - 1); // widest positive offset
    while (z > z_exit || !hit_target) {
      x_prev = x;
      z_prev = z;
      x += vx * dt + 0.5 * ax * dt * dt;
      z += ballistic ? vz * dt + 0.5 * az * dt * dt : vz * dt;
      f = force(x, z);
      check_finite(f, x, z);
      const double ax2 = f[0] / sp.mass;
      vx += 0.5 * (ax + ax2) * dt;
      ax = ax2;
      if (ballistic) {
        const double az2 = f[1] / sp.mass - g;
        vz += 0.5 * (az + az2) * dt;
        az = az2;
      }
      if (!hit_target && z <= target_z) {
        const double w = (target_z - z_prev) / (z - z_prev);
        out.x_at_target[r] = x_prev + w * (x - x_prev);
        hit_target = true;
      }
      if (track && !out.crossed && x_prev > 0 && x <= 0) {
        const double w = x_prev / (x_prev - x);
        out.focal_z = z_prev + w * (z - z_prev);
        out.crossed = true;
      }
      if (z < target_z - 20.0 * fc.sigma_z_m) break; // ray escaped
    }
  }
  return out;
}

double rms(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s / static_cast<double>(v.size()));
}

} // namespace

FocusSearchResult calibrate_xi(double target_z, const FocusConfig& geometry,
                               const BeamEntry& entry, const SpeciesParams& sp,
                               const FanConfig& fan) {
  if (std::abs(target_z - geometry.center_z_m) > 3.0 * geometry.sigma_z_m)
    throw std::invalid_argument("calibrate_xi: target outside lens support");

  // Focal depth rises monotonically with xi, so bisect on which side of the
  // target the fan collapses; the rms spread at the target is minimal (zero
  // up to integration error) when the collapse lands on it.
  double lo = 0.05, hi = 20.0;
  int iters = 0;
  auto below = [&](double xi) {
    const FanAtTarget shot = shoot_fan(xi, target_z, geometry, entry, sp, fan);
    return !shot.crossed || shot.focal_z < target_z;
  };
  if (!below(lo))
    throw std::runtime_error("calibrate_xi: bracket floor already overfocuses");
  if (below(hi))
    throw std::runtime_error("calibrate_xi: no focus within xi <= 20");
  for (; iters < 40; ++iters) {
    const double mid = 0.5 * (lo + hi);
    (below(mid) ? lo : hi) = mid;
    if (hi - lo < 1e-6) break;
  }
  const double xi = 0.5 * (lo + hi);

  const FanAtTarget shot = shoot_fan(xi, target_z, geometry, entry, sp, fan);
  return {xi, shot.focal_z, rms(shot.x_at_target), iters};
}

} // namespace atomlens
