#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "vil/geometry.hpp"

namespace vil {

/// Periodic square box [-L/2, L/2)^2 sampled at n x n cell centers,
/// x_i = -L/2 + (i + 1/2) h with h = L/n.
struct GridSpec {
  double L = 8.0;
  std::uint32_t n = 1024;

  GridSpec() = default;
  GridSpec(double side_length, std::uint32_t points_per_side) : L(side_length), n(points_per_side) {
    validate();
  }

  void validate() const {
    if (L <= 0.0) throw std::invalid_argument("GridSpec: side length must be positive");
    if (n < 16 || (n & (n - 1)) != 0)
      throw std::invalid_argument("GridSpec: points_per_side must be a power of two >= 16, got " +
                                  std::to_string(n));
  }

  double h() const { return L / static_cast<double>(n); }
  double coord(std::uint32_t i) const { return -0.5 * L + (static_cast<double>(i) + 0.5) * h(); }
  Vec2 point(std::uint32_t i, std::uint32_t j) const { return {coord(i), coord(j)}; }

  /// Index of the mirrored node under x -> -x (cell centers map onto cell centers).
  std::uint32_t mirror(std::uint32_t i) const { return n - 1 - i; }

  /// Fold a coordinate into [-L/2, L/2).
  double fold(double x) const {
    double y = std::remainder(x, L);
    if (y >= 0.5 * L) y -= L;
    if (y < -0.5 * L) y += L;
    return y;
  }
  Vec2 fold(Vec2 p) const { return {fold(p.x), fold(p.y)}; }

  bool operator==(const GridSpec& o) const { return L == o.L && n == o.n; }
  bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

}  // namespace vil
