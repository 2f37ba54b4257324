#pragma once

#include <filesystem>

#include "vil/field.hpp"

namespace vil {

/// Bit-exact field snapshot format:
///   magic "VIL1" (4 ASCII bytes), then little-endian u32 n, f64 L, f64 t,
///   u8 kind (0 = scalar, 1 = vector), then n*n f64 values row-major
///   (two blocks for a vector field). No padding.
void write_snapshot(const std::filesystem::path& path, const ScalarField& f, double t);
void write_snapshot(const std::filesystem::path& path, const VectorField& u, double t);

struct SnapshotHeader {
  std::uint32_t n = 0;
  double L = 0.0;
  double t = 0.0;
  std::uint8_t kind = 0;
};

SnapshotHeader read_snapshot_header(const std::filesystem::path& path);
ScalarField read_scalar_snapshot(const std::filesystem::path& path, double* t_out = nullptr);
VectorField read_vector_snapshot(const std::filesystem::path& path, double* t_out = nullptr);

}  // namespace vil
