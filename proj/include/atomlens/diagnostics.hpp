#pragma once
#include <array>
#include <cstddef>
#include <vector>

#include "atomlens/grid.hpp"

// Beam observables: slice profiles, windowed position/momentum widths,
// quality factor, focal-plane numbers, divergence fits. All of these reduce
// the y axis away first (3D fields are y-integrated; 2D fields already
// carry an implicit y ansatz), so densities here are column densities.
namespace atomlens {

// Transverse density profile at one z plane.
struct BeamSlice {
  double z = 0.0;                    // plane actually sampled, m
  std::vector<double> x;             // sample positions, m
  std::vector<double> line_density;  // column density atoms/m^2 over x
};

// Profile at the grid plane nearest z_plane.
BeamSlice slice_at(const ComplexField& f, double z_plane);

// Width between the outermost half-maximum crossings of a sampled profile
// (linear interpolation between samples); NaN when there is no positive peak.
double crossing_fwhm(const std::vector<double>& x, const std::vector<double>& y);

// rms width along x of |psi|^2 restricted to z in [z_lo, z_hi].
double beam_width(const ComplexField& f, double z_lo, double z_hi);

// Momentum-side width of the same window: (hbar/m) * central rms of k_x
// over the spectral x-marginal, atoms weighted, in m/s.
double beam_momentum_width(const ComplexField& f, double z_lo, double z_hi,
                           double mass);

// Beam quality factor M^2 = 2 m dx dvx / hbar (1 for a pure Gaussian).
double quality_factor(double dx_m, double dvx_m_s, double mass);

// Maximum column density at the plane nearest focal_z, in atoms/um^2.
double peak_density(const ComplexField& f, double focal_z);

// Atom number restricted to z in [z_lo, z_hi].
double beam_atoms(const ComplexField& f, double z_lo, double z_hi);

// Whole-field scalars for the propagation time series.
struct BeamMoments {
  double n_beam = 0.0;
  double z_center = 0.0;
  double dx = 0.0;   // rms width, m
  double dvx = 0.0;  // rms transverse velocity spread, m/s
  double m2 = 0.0;
};
BeamMoments beam_moments(const ComplexField& f, double mass);

// Transverse moments of a single z plane.
struct SliceMoments {
  double z = 0.0;
  double atoms_per_m = 0.0; // line density integrated over x
  double dx = 0.0;
  double dvx = 0.0;
  double m2 = 0.0;
};
SliceMoments slice_moments(const ComplexField& f, double z_plane, double mass);

// Least-squares slope of rms width versus height over a z zone; theta is
// atan(|slope|). Throws unless the zone holds at least 5 samples.
struct DivergenceFit {
  double theta_rad = 0.0;
  double slope = 0.0;
  std::size_t points = 0;
};
DivergenceFit divergence_fit(
    const std::vector<std::array<double, 2>>& z_and_width, double z_lo,
    double z_hi);

} // namespace atomlens
