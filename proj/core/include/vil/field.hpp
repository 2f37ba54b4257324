#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "vil/grid.hpp"

namespace vil {

/// Scalar samples on a GridSpec, row-major: values[i * n + j] is the sample at
/// (x1, x2) = (grid.coord(i), grid.coord(j)).
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const GridSpec& grid, double fill = 0.0)
      : grid_(grid), values_(static_cast<std::size_t>(grid.n) * grid.n, fill) {
    grid_.validate();
  }

  static ScalarField from_function(const GridSpec& grid, const std::function<double(Vec2)>& f) {
    ScalarField out(grid);
    const std::uint32_t n = grid.n;
    for (std::uint32_t i = 0; i < n; ++i) {
      const double x = grid.coord(i);
      for (std::uint32_t j = 0; j < n; ++j) out.values_[std::size_t(i) * n + j] = f({x, grid.coord(j)});
    }
    out.refresh_mean_zero_flag();
    return out;
  }

  const GridSpec& grid() const { return grid_; }
  std::uint32_t n() const { return grid_.n; }
  std::size_t size() const { return values_.size(); }

  double& at(std::uint32_t i, std::uint32_t j) { return values_[std::size_t(i) * grid_.n + j]; }
  double at(std::uint32_t i, std::uint32_t j) const { return values_[std::size_t(i) * grid_.n + j]; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  bool is_mean_zero() const { return mean_zero_; }
  void set_mean_zero(bool v) { mean_zero_ = v; }

  double grid_mean() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s / static_cast<double>(values_.size());
  }
  double grid_max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }
  bool all_finite() const {
    for (double v : values_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  /// |grid average| <= 1e-12 * max|values| (or both zero).
  void refresh_mean_zero_flag() {
    const double m = grid_max_abs();
    mean_zero_ = (m == 0.0) || (std::abs(grid_mean()) <= 1e-12 * m);
  }

  void require_mean_zero(const char* op) const {
    if (!mean_zero_)
      throw std::invalid_argument(std::string(op) +
                                  ": zero-mode undefined for non-mean-zero input field");
  }

  void require_same_grid(const ScalarField& other, const char* op) const {
    if (grid_ != other.grid_) throw std::invalid_argument(std::string(op) + ": grid mismatch");
  }

 private:
  GridSpec grid_;
  std::vector<double> values_;
  bool mean_zero_ = true;
};

struct VectorField {
  ScalarField u1;
  ScalarField u2;

  VectorField() = default;
  explicit VectorField(const GridSpec& grid) : u1(grid), u2(grid) {}

  const GridSpec& grid() const { return u1.grid(); }

  double grid_max_magnitude() const {
    const auto& a = u1.values();
    const auto& b = u2.values();
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, a[k] * a[k] + b[k] * b[k]);
    return std::sqrt(m);
  }
};

}  // namespace vil
