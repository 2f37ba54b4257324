#pragma once

#include <functional>
#include <list>
#include <memory>

#include "vil/interpolate.hpp"
#include "vil/solver.hpp"

namespace vil {

/// A time-dependent velocity field the particle integrator can sample. prepare(t)
/// is called once per RK stage time (single-threaded); the point queries that follow
/// are read-only and may run concurrently.
class VelocitySource {
 public:
  virtual ~VelocitySource() = default;
  virtual void prepare(double t) = 0;
  virtual Vec2 velocity(double t, Vec2 p) const = 0;
  /// Full velocity gradient [[d1u1, d2u1], [d1u2, d2u2]]. Traceless by construction
  /// for divergence-free sources (both diagonal entries from one sample).
  virtual Mat2 velocity_grad(double t, Vec2 p) const = 0;
};

/// Closed-form field (test oracles: zero, frozen shear, cellular steady state, ...).
class AnalyticVelocity final : public VelocitySource {
 public:
  using VelFn = std::function<Vec2(double, Vec2)>;
  using GradFn = std::function<Mat2(double, Vec2)>;

  AnalyticVelocity(VelFn v, GradFn g) : v_(std::move(v)), g_(std::move(g)) {}

  void prepare(double) override {}
  Vec2 velocity(double t, Vec2 p) const override { return v_(t, p); }
  Mat2 velocity_grad(double t, Vec2 p) const override { return g_(t, p); }

  static AnalyticVelocity zero();
  /// u = (amp sin x2, 0).
  static AnalyticVelocity shear(double amp = 1.0);
  /// Steady cellular flow of the vorticity sin x1 sin x2 on the 2pi box.
  static AnalyticVelocity taylor_green();

 private:
  VelFn v_;
  GradFn g_;
};

/// base + eps * perturbation.
class SuperposedVelocity final : public VelocitySource {
 public:
  SuperposedVelocity(VelocitySource& base, VelocitySource& pert, double eps)
      : base_(base), pert_(pert), eps_(eps) {}
  void prepare(double t) override {
    base_.prepare(t);
    pert_.prepare(t);
  }
  Vec2 velocity(double t, Vec2 p) const override {
    return base_.velocity(t, p) + eps_ * pert_.velocity(t, p);
  }
  Mat2 velocity_grad(double t, Vec2 p) const override {
    return base_.velocity_grad(t, p) + eps_ * pert_.velocity_grad(t, p);
  }

 private:
  VelocitySource& base_;
  VelocitySource& pert_;
  double eps_;
};

/// Velocity recovered from a vorticity trajectory. Between snapshots the spectrum is
/// cubic-Hermite interpolated in time (slopes from the advection right-hand side);
/// space sampling runs through oversampled cubic interpolants of u and of the R_ij
/// fields (fast path), or through exact trigonometric sampling (reference path).
class TrajectoryVelocity final : public VelocitySource {
 public:
  TrajectoryVelocity(const Trajectory& traj, std::uint32_t oversample = 2, bool exact = false);

  void prepare(double t) override;
  Vec2 velocity(double t, Vec2 p) const override;
  Mat2 velocity_grad(double t, Vec2 p) const override;

  /// Off-diagonal strain matrix P = G - diag(-Lambda, Lambda) at a point.
  Mat2 p_matrix(double t, Vec2 p) const;
  double lambda(double t, Vec2 p) const;  // R12 omega at the point

 private:
  struct Bundle;
  const Bundle& bundle_for(double t) const;
  std::shared_ptr<Bundle> build_bundle(double t) const;
  Spectrum blend_spectrum(double t) const;

  const Trajectory& traj_;
  std::uint32_t oversample_;
  bool exact_;
  mutable std::vector<std::optional<Spectrum>> slopes_;  // cached rhs per snapshot
  mutable std::list<std::shared_ptr<Bundle>> cache_;     // tiny LRU keyed by t
};

}  // namespace vil
