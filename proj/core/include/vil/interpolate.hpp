#pragma once

#include "vil/field.hpp"
#include "vil/spectral.hpp"

namespace vil {

/// Fast sampling path: 4-point tensor cubic Lagrange interpolation (order 4) on a
/// Fourier-oversampled refinement of the grid. Diagnostics that need node-exact
/// values use spectral::ExactSampler instead.
class FieldInterpolator {
 public:
  FieldInterpolator() = default;
  FieldInterpolator(const ScalarField& f, std::uint32_t oversample);
  FieldInterpolator(const Spectrum& s, std::uint32_t oversample);

  double operator()(Vec2 p) const;

  double box_length() const { return L_; }

 private:
  double L_ = 0.0;
  double h_ = 0.0;  // fine spacing
  std::uint32_t fn_ = 0;
  std::vector<double> fine_;
};

}  // namespace vil
