#include "vil/snapshot_io.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace vil {

namespace {

constexpr char kMagic[4] = {'V', 'I', 'L', '1'};

template <typename T>
void put(std::ofstream& os, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw std::runtime_error("snapshot: truncated file");
  return v;
}

void write_header(std::ofstream& os, std::uint32_t n, double L, double t, std::uint8_t kind) {
  os.write(kMagic, 4);
  put(os, n);
  put(os, L);
  put(os, t);
  put(os, kind);
}

void write_block(std::ofstream& os, const std::vector<double>& v) {
  os.write(reinterpret_cast<const char*>(v.data()),
           static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::ifstream open_checked(const std::filesystem::path& path, SnapshotHeader& hdr) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("snapshot: cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("snapshot: bad magic in " + path.string());
  hdr.n = get<std::uint32_t>(is);
  hdr.L = get<double>(is);
  hdr.t = get<double>(is);
  hdr.kind = get<std::uint8_t>(is);
  return is;
}

void read_block(std::ifstream& is, std::vector<double>& v) {
  is.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (!is) throw std::runtime_error("snapshot: truncated data block");
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const ScalarField& f, double t) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("snapshot: cannot write " + path.string());
  write_header(os, f.n(), f.grid().L, t, 0);
  write_block(os, f.values());
}

void write_snapshot(const std::filesystem::path& path, const VectorField& u, double t) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("snapshot: cannot write " + path.string());
  write_header(os, u.u1.n(), u.grid().L, t, 1);
  write_block(os, u.u1.values());
  write_block(os, u.u2.values());
}

SnapshotHeader read_snapshot_header(const std::filesystem::path& path) {
  SnapshotHeader hdr;
  open_checked(path, hdr);
  return hdr;
}

ScalarField read_scalar_snapshot(const std::filesystem::path& path, double* t_out) {
  SnapshotHeader hdr;
  auto is = open_checked(path, hdr);
  if (hdr.kind != 0) throw std::runtime_error("snapshot: expected scalar kind in " + path.string());
  ScalarField f(GridSpec(hdr.L, hdr.n));
  read_block(is, f.values());
  f.refresh_mean_zero_flag();
  if (t_out) *t_out = hdr.t;
  return f;
}

VectorField read_vector_snapshot(const std::filesystem::path& path, double* t_out) {
  SnapshotHeader hdr;
  auto is = open_checked(path, hdr);
  if (hdr.kind != 1) throw std::runtime_error("snapshot: expected vector kind in " + path.string());
  VectorField u(GridSpec(hdr.L, hdr.n));
  read_block(is, u.u1.values());
  read_block(is, u.u2.values());
  u.u1.refresh_mean_zero_flag();
  u.u2.refresh_mean_zero_flag();
  if (t_out) *t_out = hdr.t;
  return u;
}

}  // namespace vil
