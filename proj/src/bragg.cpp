#include "atomlens/bragg.hpp"

#include <cmath>
#include <stdexcept>

namespace atomlens {

void BraggConfig::validate() const {
  if (!(lambda_m > 0) || !std::isfinite(lambda_m))
    throw std::invalid_argument("bragg: lambda must be positive");
  if (!(alpha_rad > 0) || alpha_rad > M_PI + 1e-12)
    throw std::invalid_argument("bragg: alpha must lie in (0, pi]");
  if (!(order > 0) || !std::isfinite(order))
    throw std::invalid_argument("bragg: order must be positive");
  if (rabi_rad_s < 0 || delta_z_m < 0)
    throw std::invalid_argument("bragg: rabi and delta_z must be >= 0");
  if (rabi_rad_s > 0 && delta_z_m > 0)
    throw std::invalid_argument(
        "bragg: specify at most one of rabi and delta_z");
}

double bragg_wavenumber(double lambda_m, double alpha_rad) {
  return 2.0 * (2.0 * M_PI / lambda_m) * std::sin(0.5 * alpha_rad);
}

double recoil_velocity(double q, double order, double mass) {
  return order * kHbar * q / mass;
}

double resonance_frequency(double q, double order, double mass) {
  return order * kHbar * q * q / (2.0 * mass);
}

double delta_z_from_rabi(double rabi_rad_s, const SpeciesParams& sp,
                         double omega_z) {
  const double a = sp.g_accel / (omega_z * omega_z);
  return -2.0 * a +
         2.0 * std::sqrt(a * a + kHbar * rabi_rad_s / (sp.mass * omega_z * omega_z));
}

double rabi_from_delta_z(double delta_z_m, const SpeciesParams& sp,
                         double omega_z) {
  const double a = sp.g_accel / (omega_z * omega_z);
  const double half = 0.5 * delta_z_m + a;
  return sp.mass * omega_z * omega_z * (half * half - a * a) / kHbar;
}

double resolve_rabi(const BraggConfig& cfg, const SpeciesParams& sp,
                    double omega_z) {
  cfg.validate();
  if (cfg.rabi_rad_s > 0) return cfg.rabi_rad_s;
  if (cfg.delta_z_m > 0) return rabi_from_delta_z(cfg.delta_z_m, sp, omega_z);
  return 0.0;
}

} // namespace atomlens
