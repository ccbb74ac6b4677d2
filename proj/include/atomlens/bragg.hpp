#pragma once
#include "atomlens/constants.hpp"

// Two-photon Bragg outcoupling: kick kinematics and the mapping between the
// coupling strength and the thickness of the gravitationally selected
// resonance layer inside the trapped cloud.
namespace atomlens {

struct BraggConfig {
  double lambda_m = 780.027e-9; // outcoupling laser wavelength
  double alpha_rad = M_PI;      // angle between the two beams
  double order = 1.0;           // photon order n; kick momentum is n*hbar*q
  double rabi_rad_s = 0.0;      // coupling strength, or
  double delta_z_m = 0.0;       // resonance layer thickness

  void validate() const;
  bool coupling_enabled() const { return rabi_rad_s > 0 || delta_z_m > 0; }
};

// |q| = 2 k sin(alpha/2): wavenumber transferred by one two-photon pair.
double bragg_wavenumber(double lambda_m, double alpha_rad);

// Speed after an order-n kick: v = n hbar q / m.
double recoil_velocity(double q, double order, double mass);

// Frequency difference of the laser pair that is resonant at order n:
// omega_res = n hbar q^2 / 2m, so n*hbar*omega_res equals the recoil
// kinetic energy (n hbar q)^2 / 2m.
double resonance_frequency(double q, double order, double mass);

// Thickness of the resonant layer for a given coupling strength, set by the
// gravitational potential gradient across the trapped cloud:
//   delta_z = -2g/w_z^2 + 2 sqrt(g^2/w_z^4 + hbar*Omega/(m w_z^2))
double delta_z_from_rabi(double rabi_rad_s, const SpeciesParams& sp,
                         double omega_z);

// Closed-form inverse of delta_z_from_rabi.
double rabi_from_delta_z(double delta_z_m, const SpeciesParams& sp,
                         double omega_z);

// Coupling strength from the config, deriving it from delta_z when needed;
// zero when the coupling is disabled.
double resolve_rabi(const BraggConfig& cfg, const SpeciesParams& sp,
                    double omega_z);

} // namespace atomlens
