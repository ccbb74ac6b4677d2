#pragma once
#include <array>
#include <optional>
#include <vector>
#include "atomlens/constants.hpp"
#include "atomlens/grid.hpp"

// Optical focusing potential (intensity-shaped dipole potential) and the
// optimal-power rule that places the focal plane at the potential center.
namespace atomlens {

struct FocusConfig {
  double detuning_rad_s = 2.0 * M_PI * 200e9; // Delta, angular
  double lambda_m = 312e-6;                   // potential wavelength
  double sigma_z_m = 25e-6;                   // Gaussian radius along z
  double center_z_m = -150e-6;                // potential center / target focal plane
  std::optional<double> power_w;              // explicit beam power, or
  std::optional<double> xi;                   // dimensionless power factor

  void validate() const {
    if (detuning_rad_s <= 0 || lambda_m <= 0 || sigma_z_m <= 0)
      throw std::invalid_argument("focus: detuning, wavelength, sigma must be > 0");
    if (power_w.has_value() == xi.has_value())
      throw std::invalid_argument("focus: exactly one of power_w / xi must be set");
  }
  double wavenumber() const { return 2.0 * M_PI / lambda_m; }
};

// Free-fall speed after dropping a height h starting at v_i (downward positive).
inline double free_fall_speed(double v_i, double h, double g) {
  return std::sqrt(v_i * v_i + 2.0 * g * h);
}

// Harmonic-times-Gaussian intensity profile:
//   I(x,z) = I0 * exp(-2 (z-zc)^2 / sigma_z^2) * (k_f x)^2
inline double focus_intensity(double x, double z, double i0, double k_f,
                              double sigma_z, double center_z) {
  const double dz = z - center_z;
  const double env = std::exp(-2.0 * dz * dz / (sigma_z * sigma_z));
  return i0 * env * (k_f * x) * (k_f * x);
}

// Saturating dipole potential of the D2 line:
//   U = (hbar Delta / 2) ln(1 + (gamma^2/(gamma^2+4 Delta^2)) I/I_s)
inline double dipole_potential(double intensity, double detuning,
                               const SpeciesParams& sp) {
  const double g2 = sp.gamma * sp.gamma;
  const double frac = g2 / (g2 + 4.0 * detuning * detuning);
  return 0.5 * kHbar * detuning *
         std::log1p(frac * intensity / sp.saturation_intensity);
}

// Power that focuses a beam of center-plane kinetic energy E0 = m v_f^2 / 2
// at the potential center:
//   P = xi (pi/4) (E0 / hbar Delta) ((gamma^2 + 4 Delta^2)/gamma^2) (I_s / k_f^2)
inline double optimal_power(double xi, double e0, double detuning,
                            const SpeciesParams& sp, double k_f) {
  const double g2 = sp.gamma * sp.gamma;
  return xi * (M_PI / 4.0) * (e0 / (kHbar * detuning)) *
         ((g2 + 4.0 * detuning * detuning) / g2) *
         (sp.saturation_intensity / (k_f * k_f));
}

// Peak Gaussian intensity for a given beam power: I0 = 8 P / (pi sigma_z^2).
inline double peak_intensity(double power_w, double sigma_z) {
  return 8.0 * power_w / (M_PI * sigma_z * sigma_z);
}

// Longitudinal kinetic energy at the potential center for a beam kicked to
// v_i at source height z1 and falling to the center plane.
inline double center_plane_energy(double v_i, double z1, double center_z,
                                  const SpeciesParams& sp) {
  const double vf = free_fall_speed(v_i, z1 - center_z, sp.g_accel);
  return 0.5 * sp.mass * vf * vf;
}

// Resolve the potential's peak intensity from either explicit power or xi.
inline double resolve_peak_intensity(const FocusConfig& fc, double v_i,
                                     double z1, const SpeciesParams& sp) {
  double p = fc.power_w ? *fc.power_w
                        : optimal_power(*fc.xi,
                                        center_plane_energy(v_i, z1,
                                                            fc.center_z_m, sp),
                                        fc.detuning_rad_s, sp, fc.wavenumber());
  return peak_intensity(p, fc.sigma_z_m);
}

// Harmonic trap energy at displacement (x, y, z) from the trap center.
inline double trap_potential(double x, double y, double z, const TrapParams& t,
                             double mass) {
  return 0.5 * mass *
         (t.omega_x * t.omega_x * x * x + t.omega_y * t.omega_y * y * y +
          t.omega_z * t.omega_z * z * z);
}

// Trap potential sampled over a position-space grid (J per point); the trap
// sits at x = y = 0, z = center_z.
std::vector<double> sample_trap(const SimGrid& g, const TrapParams& t,
                                const SpeciesParams& sp, double center_z);

// Focusing dipole potential sampled over a position-space grid (J per point)
// for a resolved peak intensity i0.
std::vector<double> sample_focus(const SimGrid& g, const FocusConfig& fc,
                                 double i0, const SpeciesParams& sp);

// Absorbing-boundary amplitude decay rates (1/s): zero in the interior,
// rising as sin^2 over the outer `fraction` of each axis to `rate` at the
// walls. fractions are per storage axis (x, y, z); the rate at a point is
// the max over axes. Pass fraction 0 to leave an axis open.
std::vector<double> absorber_rates(const SimGrid& g, double rate,
                                   const std::array<double, 3>& fractions);

} // namespace atomlens
