#include "atomlens/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "snapshot i/o assumes a little-endian host");

namespace atomlens {

namespace {

constexpr char kMagic[4] = {'A', 'L', 'F', 'S'};
constexpr std::uint16_t kVersion = 1;

void write_bytes(std::ofstream& out, const void* p, std::size_t n) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  if (!out) throw std::runtime_error("snapshot: write failed");
}

void read_bytes(std::ifstream& in, void* p, std::size_t n) {
  in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (in.gcount() != static_cast<std::streamsize>(n))
    throw std::runtime_error("snapshot: truncated file");
}

} // namespace

void save_snapshot(const std::string& path, const ComplexField& psi0,
                   const ComplexField& psin, double time) {
  psi0.validate();
  psin.validate();
  if (!psi0.grid.same_shape(psin.grid))
    throw std::invalid_argument("snapshot: field shapes differ");
  if (psi0.grid.space != Space::position)
    throw std::invalid_argument("snapshot: fields must be in position space");

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("snapshot: cannot open " + path);

  const SimGrid& g = psi0.grid;
  const std::uint8_t dims = static_cast<std::uint8_t>(g.dims);
  write_bytes(out, kMagic, 4);
  write_bytes(out, &kVersion, 2);
  write_bytes(out, &dims, 1);
  for (int ax = 0; ax < g.dims; ++ax) {
    const std::uint32_t npts = static_cast<std::uint32_t>(g.n[ax]);
    write_bytes(out, &npts, 4);
  }
  for (int ax = 0; ax < g.dims; ++ax) write_bytes(out, &g.extent[ax], 8);
  write_bytes(out, &time, 8);
  write_bytes(out, psi0.amp.data(), psi0.amp.size() * sizeof(psi0.amp[0]));
  write_bytes(out, psin.amp.data(), psin.amp.size() * sizeof(psin.amp[0]));
  out.close();
  if (!out) throw std::runtime_error("snapshot: close failed for " + path);
}

SnapshotData load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("snapshot: cannot open " + path);

  char magic[4];
  read_bytes(in, magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("snapshot: bad magic in " + path);
  std::uint16_t version = 0;
  read_bytes(in, &version, 2);
  if (version != kVersion)
    throw std::runtime_error("snapshot: unsupported version in " + path);
  std::uint8_t dims = 0;
  read_bytes(in, &dims, 1);
  if (dims != 2 && dims != 3)
    throw std::runtime_error("snapshot: dims must be 2 or 3");

  SimGrid g;
  g.dims = dims;
  for (int ax = 0; ax < g.dims; ++ax) {
    std::uint32_t npts = 0;
    read_bytes(in, &npts, 4);
    g.n[ax] = npts;
  }
  for (int ax = 0; ax < g.dims; ++ax) read_bytes(in, &g.extent[ax], 8);
  g.validate();

  SnapshotData snap{ComplexField::zeros(g), ComplexField::zeros(g), 0.0};
  read_bytes(in, &snap.time, 8);
  read_bytes(in, snap.psi0.amp.data(),
             snap.psi0.amp.size() * sizeof(snap.psi0.amp[0]));
  read_bytes(in, snap.psin.amp.data(),
             snap.psin.amp.size() * sizeof(snap.psin.amp[0]));
  char extra = 0;
  if (in.read(&extra, 1); in.gcount() != 0)
    throw std::runtime_error("snapshot: trailing bytes in " + path);
  return snap;
}

} // namespace atomlens
