#pragma once
#include <cstddef>
#include <optional>
#include <vector>

#include "atomlens/bragg.hpp"
#include "atomlens/constants.hpp"
#include "atomlens/fft.hpp"
#include "atomlens/grid.hpp"
#include "atomlens/potentials.hpp"

// Coupled two-state mean-field engine: a trapped source condensate psi0 and
// an outcoupled beam envelope psi_n, advanced by Strang-split spectral steps.
//
// The beam is stored as a slowly varying envelope: the order-n photon kick
// and a falling-frame boost v0 - g t are carried analytically in the kinetic
// phase (exact for linear-in-time carrier wavenumbers), so gravity never
// tilts the envelope spectrum and the drive stays resonant at the source
// without resolving the carrier on the grid. psi0 is held in the lab frame;
// the frame mismatch appears as a z-dependent phase on the coupling term.
namespace atomlens {

// Three-body recombination acting on the beam density:
//   rate density bracket D = n0^2 + nb^2 + 4 n0 nb.
// standard_half_hbar treats K as a density-loss rate coefficient (amplitude
// rate K D / 2); as_written divides the term by hbar instead, reading the
// equation's -i K D psi_n literally.
struct LossModel {
  enum class Convention { standard_half_hbar, as_written };
  double K = 4e-41; // m^6/s
  Convention convention = Convention::standard_half_hbar;

  void validate() const {
    if (K < 0) throw std::invalid_argument("loss: K must be >= 0");
  }
};

struct StepperConfig {
  double dt = 2e-6;                      // s
  std::size_t steps_per_diagnostic = 50; // cadence hint for callers
  bool pump_renormalize = true;          // hold the source at N0 each step
  double ramp_time_s = 0.2e-3;           // coupling on/off ramp
  double pump_duration_s = 0.0;          // 0: coupling stays on
  std::optional<double> frame_velocity_m_s; // beam-frame boost v0; default
                                            // g*pump_duration/2 (0 for CW)
  bool absorber_enabled = true;
  double absorber_rate = 1.2e5;     // amplitude decay at the walls, 1/s
  double absorber_fraction_x = 0.08;
  double absorber_fraction_y = 0.08;
  double absorber_fraction_z = 0.08;

  void validate() const;
};

struct TwoStateSystem {
  ComplexField psi0;
  ComplexField psin;
  double time = 0.0;

  SpeciesParams species;
  TrapParams trap;
  double trap_center_z = 150e-6; // source height z1
  BeamParams beam;
  BraggConfig bragg;
  std::optional<FocusConfig> focus;
  LossModel loss;
  StepperConfig stepper;

  void validate() const;
};

struct GroundStateInfo {
  double mu = 0.0;     // chemical potential, J
  double energy = 0.0; // total energy functional, J
  std::size_t iterations = 0;
};

// Imaginary-time relaxation of the trapped cloud on grid g, starting from a
// Thomas-Fermi profile (harmonic-oscillator Gaussian when a_s_bec == 0) and
// renormalizing each step. Converged when the relative energy change per
// step drops below tolerance.
ComplexField trap_ground_state(const SimGrid& g, const TrapParams& trap,
                               const SpeciesParams& sp, double center_z,
                               double tolerance = 1e-10,
                               GroundStateInfo* info = nullptr,
                               std::size_t max_iterations = 50000,
                               double dt_imag = 1e-5);

// Exact z-axis kinetic phase accumulated over [t1, t2] by a plane-wave mode
// kz whose carrier is shifted by kick_kz and boosted by v0 - g t, minus a
// uniform rotation rot (rad/s):
//   k(t) = kz + kick_kz + (m/hbar)(v0 - g t)
//   phase = (hbar (t2-t1) / 6 m) (k1^2 + k1 k2 + k2^2) - rot (t2 - t1)
// The form is division-free so g = 0 is regular; with kick = v0 = g = rot = 0
// it reduces bit-exactly to the plain dispersion phase.
double kinetic_z_phase(double kz, double t1, double t2, double kick_kz,
                       double v0, double g, double rot, double mass);

class Engine {
 public:
  explicit Engine(TwoStateSystem sys);

  // Relax psi0 to the trap ground state (beam untouched, time unchanged).
  GroundStateInfo prepare_source(double tolerance = 1e-10);

  // Advance both fields by n full steps of stepper.dt.
  void advance(std::size_t steps);

  const TwoStateSystem& system() const { return sys_; }
  TwoStateSystem& system() { return sys_; } // fields may be seeded by callers

  // Coupling-strength envelope (0..1) at time t: linear ramps at both ends
  // of a finite pump pulse, or a single turn-on ramp when the pulse is
  // continuous.
  double pulse_envelope(double t) const;

  double rabi() const { return rabi_; }                   // resolved Omega
  double frame_velocity() const { return v0_; }           // resolved boost
  double recoil_speed() const { return recoil_; }         // n hbar q / m
  double focus_peak_intensity() const { return i0_; }     // 0 without lens
  double u_bec() const { return u00_; }       // reduced couplings (2D runs
  double u_laser() const { return unn_; }     // fold the y ansatz in)
  double u_cross() const { return u0n_; }
  double loss_rate_coeff() const { return loss_coeff_; }

 private:
  void kinetic_half(double t1, double t2);
  void local_step(double t_mid);
  void boundary_and_pump();

  TwoStateSystem sys_;
  SpectralTransform plans_;

  double rabi_ = 0.0;
  double omega_res_ = 0.0; // drive rotation folded into the beam kinetic
  double kick_kz_ = 0.0;   // n * q_z, signed (kick points down)
  double v0_ = 0.0;
  double recoil_ = 0.0;
  double i0_ = 0.0;
  double u00_ = 0.0, unn_ = 0.0, u0n_ = 0.0;
  double loss_coeff_ = 0.0; // amplitude rate = loss_coeff * D
  bool interactions_off_ = true;

  // Static per-step tables.
  std::vector<std::complex<double>> cis_trap_half_;  // e^{-i V_T dt/2 / hbar}
  std::vector<std::complex<double>> cis_focus_half_; // e^{-i U_f dt/2 / hbar}
  std::vector<double> absorb_step_;                  // e^{-W dt}
  std::vector<std::complex<double>> kx_half_, ky_half_, kz0_half_;
  std::vector<std::complex<double>> kzn_scratch_; // beam z phases, per call
  std::vector<std::complex<double>> drive_phase_; // per-row coupling phase
};

} // namespace atomlens
