#pragma once
#include <array>
#include <string>
#include <vector>

#include "atomlens/config.hpp"
#include "atomlens/diagnostics.hpp"

// One full scenario: source preparation, pumped outcoupling, fall through
// the (optional) focusing potential, per-step diagnostics, focal summary.
namespace atomlens {

struct RunOptions {
  std::string out_dir = ".";
  std::size_t snapshot_every = 0; // steps between snapshots; 0 disables
  bool final_snapshot = false;
  bool quiet = false;
  bool reuse_ground_state = true; // cache the relaxed source in out_dir
  std::string resume_from;        // snapshot path; empty starts fresh
};

// Best focused slice seen during the run (tracked every diagnostic stride).
struct FocalSummary {
  double time_s = 0.0;
  double fwhm_m = 0.0;
  double peak_density_um2 = 0.0;
  double n_beam = 0.0;
  double fit_residual = 0.0; // NaN when the Gaussian fit fell back to crossings
};

struct RunResult {
  FocalSummary focal;                 // meaningful when the lens is present
  std::vector<SliceMoments> slices;   // at run.slice_z_m, final time
  std::vector<SliceMoments> profile;  // final-time per-z moments (populated rows)
  double final_time_s = 0.0;
  double n_beam_final = 0.0;
  GroundStateInfo source;
  std::string series_csv;  // propagation time series
  std::string summary_csv; // single focused-beam row
  std::string profile_csv; // final-time per-slice profile
};

RunResult run_scenario(const RunConfig& cfg, const RunOptions& io);

// Planned end time for a pulsed run: half the pump window plus the fall
// time of the mid-pulse slice from the source down to stop_z.
double pulsed_end_time(const RunConfig& cfg, double stop_z);

} // namespace atomlens
