#pragma once
#include <string>

#include "atomlens/grid.hpp"

// Binary state snapshots: both fields plus enough geometry to resume.
//
// Layout (little-endian, no padding):
//   magic "ALFS", u16 version (=1), u8 dims,
//   u32 point count per axis (storage order: x, [y,] z),
//   f64 extent per axis (same order),
//   f64 simulation time,
//   psi0 then psi_n, each as interleaved re/im f64, x fastest.
//
// Axis origins are not stored; the loader leaves grid.min at zero and the
// caller restores it from its run configuration.
namespace atomlens {

struct SnapshotData {
  ComplexField psi0;
  ComplexField psin;
  double time = 0.0;
};

void save_snapshot(const std::string& path, const ComplexField& psi0,
                   const ComplexField& psin, double time);

SnapshotData load_snapshot(const std::string& path);

} // namespace atomlens
