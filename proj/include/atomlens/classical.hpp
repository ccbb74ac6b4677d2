#pragma once
#include <array>
#include <cstddef>
#include <functional>
#include <vector>
#include "atomlens/potentials.hpp"

// Classical point-particle trajectories through the focusing potential and
// the search for the power factor xi that focuses a ray fan on a target plane.
namespace atomlens {

struct TrajectoryPoint {
  double t = 0, x = 0, z = 0, vx = 0, vz = 0;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  const TrajectoryPoint& back() const { return points.back(); }
};

// Planar force field returning (Fx, Fz) in newtons at (x, z).
using ForceFn = std::function<std::array<double, 2>(double, double)>;

// Analytic gradient force of the saturating dipole potential with peak
// intensity i0 and the geometry in fc.
ForceFn dipole_force(double i0, const FocusConfig& fc, const SpeciesParams& sp);

// Velocity-Verlet integration of m r'' = F(x,z) - m g z_hat from `start`
// until t_end; keeps every sample_stride-th point (plus the final one).
Trajectory integrate_trajectory(const TrajectoryPoint& start,
                                const ForceFn& force, double mass, double g,
                                double dt, double t_end,
                                std::size_t sample_stride = 1);

// How the longitudinal coordinate advances while a ray crosses the lens:
// design_speed holds vz at the design speed of the target plane (the speed
// the power rule is built around), ballistic integrates the full equation
// of motion including gravity and the longitudinal dipole force.
enum class TransitModel { design_speed, ballistic };

struct FanConfig {
  int rays = 21;
  double half_width_m = 1e-6; // transverse offsets span [-w, +w], vx = 0
  TransitModel transit = TransitModel::design_speed;
  double dt = 5e-8;
};

struct FocusSearchResult {
  double xi = 0;
  double focal_z = 0;  // where the fan collapses (rms minimum)
  double rms_spot = 0; // rms transverse spread at target_z
  int iterations = 0;
};

// Entry state of the beam above the lens: kicked to speed v_source
// (downward) at height source_z, falling freely until the lens region.
struct BeamEntry {
  double v_source = 0;
  double source_z = 0;
};

// Bisects xi in (0, 20] so that a fan of rays entering at
// center_z + 3 sigma_z with zero transverse velocity collapses on target_z.
FocusSearchResult calibrate_xi(double target_z, const FocusConfig& geometry,
                               const BeamEntry& entry, const SpeciesParams& sp,
                               const FanConfig& fan = {});

} // namespace atomlens
