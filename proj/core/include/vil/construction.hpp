#pragma once

#include <cmath>
#include <optional>

#include "vil/grid.hpp"

namespace vil {

/// The scalar parameter record of the multi-scale construction. lambda = 3 n_pert and
/// k = lambda^2 are derived, never stored independently.
struct ConstructionParams {
  double M = 3.0;
  int N = 3;
  int N0 = 1;
  double p = 2.5;
  int n_pert = 4;
  std::optional<Vec2> x_star;  // selected from a flow run unless overridden
  std::optional<double> delta;
  double T_horizon = std::pow(3.0, -3);

  double lambda() const { return 3.0 * n_pert; }
  double carrier_k() const { return lambda() * lambda(); }
  double smallest_scale() const { return std::pow(2.0, -(N0 + N + 2)); }
  double default_horizon() const { return std::min(1.0, std::pow(M, -3.0)); }

  void validate() const;

  /// Strict resolvability gate for evolution paths: smallest bump radius >= 2h.
  bool omega0_resolved(const GridSpec& g) const { return smallest_scale() >= 2.0 * g.h(); }
  /// Support-ball resolvability for the perturbation: 2/lambda >= 2h.
  bool beta_support_resolved(const GridSpec& g) const { return 2.0 / lambda() >= 2.0 * g.h(); }

  static ConstructionParams preset() { return {}; }
};

}  // namespace vil
