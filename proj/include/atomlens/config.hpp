#pragma once
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "atomlens/engine.hpp"

// JSON run configuration. Keys carry unit suffixes (_m, _s, _rad_s, ...);
// scattering lengths also accept an _a0 (Bohr radius) spelling. Unknown keys
// are rejected so typos fail loudly. A "sweep" object maps dotted key paths
// to value lists and expands to the cartesian product of runs.
namespace atomlens {

struct GridConfig {
  int dims = 2;
  std::size_t nx = 1024, ny = 1, nz = 2048;
  double extent_x_m = 12e-6, extent_y_m = 0.0, extent_z_m = 500e-6;
  std::optional<double> min_x_m, min_y_m; // default: centered on zero
  double min_z_m = -290e-6;

  SimGrid build() const;
};

struct RunControl {
  double max_time_s = 20e-3;
  std::optional<double> stop_z_m;  // default: focus center minus one waist
  std::vector<double> slice_z_m;   // extra slice reports at the final time
  double front_fraction = 1e-3;    // leading-edge density threshold
  std::string run_id = "run";
};

struct RunConfig {
  SpeciesParams species;
  TrapParams trap;
  double trap_center_z = 150e-6;
  BeamParams beam;
  BraggConfig bragg;
  std::optional<FocusConfig> focus;
  LossModel loss;
  StepperConfig stepper;
  GridConfig grid;
  RunControl run;

  void validate() const;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config_file(const std::string& path);

// All runs described by the file: the base config with each sweep
// combination applied, paired with an id derived from the swept values
// (just {run_id} when there is no sweep).
std::vector<std::pair<std::string, RunConfig>> expand_config_file(
    const std::string& path);

} // namespace atomlens
