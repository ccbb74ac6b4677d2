#pragma once
#include <cmath>
#include <stdexcept>

// Physical constants and experiment parameters. Everything is SI.
namespace atomlens {

inline constexpr double kHbar = 1.054571817e-34; // J s
inline constexpr double kBohrRadius = 5.29e-11;  // m

// Atomic species on the D2 line plus environment constants.
struct SpeciesParams {
  double mass = 1.40999e-25;              // kg (85Rb)
  double gamma = 38e6;                    // s^-1, natural linewidth (angular)
  double saturation_intensity = 16.7;     // W/m^2
  double d2_wavelength = 780.027e-9;      // m
  double three_body_K = 4e-41;            // m^6/s
  double g_accel = 9.8;                   // m/s^2

  void validate() const {
    if (mass <= 0 || gamma <= 0 || saturation_intensity <= 0 ||
        d2_wavelength <= 0 || three_body_K < 0 || g_accel < 0)
      throw std::invalid_argument("species parameters must be positive");
  }
};

// Harmonic trap holding the source condensate.
struct TrapParams {
  double omega_x = 2.0 * M_PI * 70.0; // rad/s
  double omega_y = 2.0 * M_PI * 10.0; // rad/s
  double omega_z = 2.0 * M_PI * 70.0; // rad/s
  double atom_number = 1e5;
  double a_s_bec = 100.0 * kBohrRadius; // m

  void validate() const {
    if (omega_x <= 0 || omega_y <= 0 || omega_z <= 0)
      throw std::invalid_argument("trap frequencies must be positive");
    if (atom_number < 1.0)
      throw std::invalid_argument("atom_number must be >= 1");
    if (a_s_bec < 0.0)
      throw std::invalid_argument("a_s_bec must be >= 0");
  }
};

// Interactions inside the outcoupled beam.
struct BeamParams {
  double a_s_laser = 0.0; // m, may be negative (attractive)

  void validate() const {
    if (std::abs(a_s_laser) > 500.0 * kBohrRadius)
      throw std::invalid_argument("|a_s_laser| > 500 a0 rejected as unphysical");
  }
};

// Mean-field coupling u = 4 pi hbar^2 a_s / m.
inline double interaction_u(double a_s, double mass) {
  return 4.0 * M_PI * kHbar * kHbar * a_s / mass;
}

// Thomas-Fermi chemical potential of a 3D harmonically trapped condensate.
inline double thomas_fermi_mu(const TrapParams& trap, const SpeciesParams& sp) {
  const double wbar = std::cbrt(trap.omega_x * trap.omega_y * trap.omega_z);
  const double abar = std::sqrt(kHbar / (sp.mass * wbar));
  return 0.5 * kHbar * wbar *
         std::pow(15.0 * trap.atom_number * trap.a_s_bec / abar, 0.4);
}

// Width of the Gaussian ansatz that eliminates y in 2D runs: variance-matched
// to the Thomas-Fermi y-marginal (R_y/sqrt(7)), floored by the harmonic
// oscillator ground-state width for weak interactions.
inline double ansatz_sigma_y(const TrapParams& trap, const SpeciesParams& sp) {
  const double ho = std::sqrt(kHbar / (2.0 * sp.mass * trap.omega_y));
  if (trap.a_s_bec <= 0.0) return ho;
  const double mu = thomas_fermi_mu(trap, sp);
  const double ry = std::sqrt(2.0 * mu / (sp.mass * trap.omega_y * trap.omega_y));
  return std::max(ho, ry / std::sqrt(7.0));
}

} // namespace atomlens
