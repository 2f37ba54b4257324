#pragma once

#include <vector>

#include "vil/bump.hpp"
#include "vil/construction.hpp"
#include "vil/field.hpp"

namespace vil {

enum class ResolvePolicy {
  strict,  // smallest bump radius >= 2h, else rejected (evolution paths)
  relaxed  // pointwise analytic sampling allowed below the frontier (norm sweeps)
};

/// Four signed copies of phi centered at (+-1, +-1): odd in x1 and in x2.
struct Quadrupole {
  BumpProfile phi{BumpProfile::Kind::mollifier};

  double operator()(Vec2 x) const;
  Vec2 grad(Vec2 x) const;
  ScalarField to_field(const GridSpec& g) const;
};

/// The multi-scale odd-odd family: amp * sum over scales N0..N0+N of
/// 2^{(-1+2/p)k} quadrupole(2^k x), with amp = M^-2 N^{-1/p}.
struct MultiScaleVorticity {
  double M = 3.0;
  int N = 3;
  int N0 = 1;
  double p = 2.5;
  Quadrupole phi0{};

  double amplitude() const;
  double operator()(Vec2 x) const;
  Vec2 grad(Vec2 x) const;
  /// True iff x lies in the union of the per-scale support balls.
  bool in_support(Vec2 x) const;
  double support_radius() const;

  ScalarField to_field(const GridSpec& g, ResolvePolicy policy = ResolvePolicy::strict) const;
  /// Closed-form derivative samples (the oracle route for the W^{1,p} checks).
  VectorField gradient_field(const GridSpec& g) const;
};

MultiScaleVorticity omega0(const ConstructionParams& params);

/// A single dyadic scale 2^{(-1+2/p)k} quadrupole(2^k x) (used by the scaling-law tests).
struct ScaleBump {
  int k = 1;
  double p = 2.5;
  Quadrupole phi0{};
  double operator()(Vec2 x) const;
  ScalarField to_field(const GridSpec& g) const;
};

/// High-frequency perturbation: (lambda^{-1+2/p}/sqrt(k)) * sum_eps eps1 eps2 *
/// rho(lambda (x - x*_eps)) sin(k x1). Even in x1 and odd in x2 for the radial rho.
struct CarrierPerturbation {
  double p = 2.5;
  int n = 4;
  Vec2 x_star{0.5, 0.5};
  BumpProfile rho{BumpProfile::Kind::plateau};

  double lambda() const { return 3.0 * n; }
  double carrier_k() const { return lambda() * lambda(); }
  double amplitude() const;  // lambda^{-1+2/p} / sqrt(k)

  double operator()(Vec2 x) const;
  Vec2 grad(Vec2 x) const;
  bool in_support(Vec2 x) const;

  /// Throws if the four support balls overlap (x* too close to an axis) or leave
  /// the box margin, or if 2/lambda < 2h.
  ScalarField to_field(const GridSpec& g) const;
  VectorField gradient_field(const GridSpec& g) const;
  void validate_geometry(const GridSpec& g) const;
};

CarrierPerturbation beta(const ConstructionParams& params);

/// Pointwise sum omega0 + beta_n on a shared grid.
ScalarField omega0n(const ScalarField& w0, const ScalarField& beta_n);

}  // namespace vil
