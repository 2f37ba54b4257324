#include "vil/velocity.hpp"

#include <cmath>
#include <stdexcept>

namespace vil {

AnalyticVelocity AnalyticVelocity::zero() {
  return AnalyticVelocity([](double, Vec2) { return Vec2{0.0, 0.0}; },
                          [](double, Vec2) { return Mat2{}; });
}

AnalyticVelocity AnalyticVelocity::shear(double amp) {
  return AnalyticVelocity(
      [amp](double, Vec2 p) { return Vec2{amp * std::sin(p.y), 0.0}; },
      [amp](double, Vec2 p) {
        return Mat2{0.0, amp * std::cos(p.y), 0.0, 0.0};
      });
}

AnalyticVelocity AnalyticVelocity::taylor_green() {
  return AnalyticVelocity(
      [](double, Vec2 p) {
        return Vec2{0.5 * std::sin(p.x) * std::cos(p.y), -0.5 * std::cos(p.x) * std::sin(p.y)};
      },
      [](double, Vec2 p) {
        const double cc = 0.5 * std::cos(p.x) * std::cos(p.y);
        const double ss = 0.5 * std::sin(p.x) * std::sin(p.y);
        return Mat2{cc, -ss, ss, -cc};
      });
}

struct TrajectoryVelocity::Bundle {
  double t = 0.0;
  GridSpec grid;
  FieldInterpolator u1, u2, r11, r12, r22;
  std::unique_ptr<spectral::ExactSampler> eu1, eu2, er11, er12, er22;
};

TrajectoryVelocity::TrajectoryVelocity(const Trajectory& traj, std::uint32_t oversample,
                                       bool exact)
    : traj_(traj), oversample_(oversample), exact_(exact), slopes_(traj.snaps.size()) {
  if (traj.snaps.empty()) throw std::invalid_argument("TrajectoryVelocity: empty trajectory");
}

Spectrum TrajectoryVelocity::blend_spectrum(double t) const {
  const auto& snaps = traj_.snaps;
  const double eps = 1e-12 * std::max(1.0, std::abs(traj_.t_end()));
  if (t < snaps.front().t - eps || t > snaps.back().t + eps)
    throw std::out_of_range("TrajectoryVelocity: time " + std::to_string(t) +
                            " outside trajectory [" + std::to_string(snaps.front().t) + ", " +
                            std::to_string(snaps.back().t) + "]");
  // Bracket and exact-hit handling.
  std::size_t j = 0;
  while (j + 1 < snaps.size() && snaps[j + 1].t <= t + eps) ++j;
  if (std::abs(snaps[j].t - t) <= eps || j + 1 == snaps.size()) return snaps[j].omega_hat;

  auto slope = [&](std::size_t idx) -> const Spectrum& {
    if (!slopes_[idx]) slopes_[idx] = vorticity_rhs(snaps[idx].omega_hat, traj_.cfg);
    return *slopes_[idx];
  };

  const double t0 = snaps[j].t, t1 = snaps[j + 1].t;
  const double dt = t1 - t0;
  const double s = (t - t0) / dt;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;

  Spectrum out(traj_.grid);
  const auto& w0 = snaps[j].omega_hat.coef;
  const auto& w1 = snaps[j + 1].omega_hat.coef;
  const auto& d0 = slope(j).coef;
  const auto& d1 = slope(j + 1).coef;
  for (std::size_t q = 0; q < out.coef.size(); ++q)
    out.coef[q] = h00 * w0[q] + h01 * w1[q] + dt * (h10 * d0[q] + h11 * d1[q]);
  return out;
}

std::shared_ptr<TrajectoryVelocity::Bundle> TrajectoryVelocity::build_bundle(double t) const {
  auto b = std::make_shared<Bundle>();
  b->t = t;
  b->grid = traj_.grid;
  const Spectrum w = blend_spectrum(t);
  const Spectrum psi = spectral::poisson_multiplier(w);
  Spectrum u1 = spectral::derivative(psi, 2);
  for (auto& c : u1.coef) c = -c;
  const Spectrum u2 = spectral::derivative(psi, 1);
  const Spectrum r11 = spectral::riesz_multiplier(w, 1, 1);
  const Spectrum r12 = spectral::riesz_multiplier(w, 1, 2);
  const Spectrum r22 = spectral::riesz_multiplier(w, 2, 2);
  if (exact_) {
    b->eu1 = std::make_unique<spectral::ExactSampler>(u1);
    b->eu2 = std::make_unique<spectral::ExactSampler>(u2);
    b->er11 = std::make_unique<spectral::ExactSampler>(r11);
    b->er12 = std::make_unique<spectral::ExactSampler>(r12);
    b->er22 = std::make_unique<spectral::ExactSampler>(r22);
  } else {
    b->u1 = FieldInterpolator(u1, oversample_);
    b->u2 = FieldInterpolator(u2, oversample_);
    b->r11 = FieldInterpolator(r11, oversample_);
    b->r12 = FieldInterpolator(r12, oversample_);
    b->r22 = FieldInterpolator(r22, oversample_);
  }
  return b;
}

const TrajectoryVelocity::Bundle& TrajectoryVelocity::bundle_for(double t) const {
  for (auto it = cache_.begin(); it != cache_.end(); ++it) {
    if ((*it)->t == t) {
      if (it != cache_.begin()) cache_.splice(cache_.begin(), cache_, it);
      return *cache_.front();
    }
  }
  throw std::logic_error("TrajectoryVelocity: prepare(t) was not called for this stage time");
}

void TrajectoryVelocity::prepare(double t) {
  for (auto it = cache_.begin(); it != cache_.end(); ++it) {
    if ((*it)->t == t) {
      if (it != cache_.begin()) cache_.splice(cache_.begin(), cache_, it);
      return;
    }
  }
  cache_.push_front(build_bundle(t));
  if (cache_.size() > 2) cache_.pop_back();
}

Vec2 TrajectoryVelocity::velocity(double t, Vec2 p) const {
  const Bundle& b = bundle_for(t);
  const Vec2 q = b.grid.fold(p);
  if (exact_) return {(*b.eu1)(q), (*b.eu2)(q)};
  return {b.u1(q), b.u2(q)};
}

Mat2 TrajectoryVelocity::velocity_grad(double t, Vec2 p) const {
  const Bundle& b = bundle_for(t);
  const Vec2 q = b.grid.fold(p);
  double l, a11, a22;
  if (exact_) {
    l = (*b.er12)(q);
    a11 = (*b.er11)(q);
    a22 = (*b.er22)(q);
  } else {
    l = b.r12(q);
    a11 = b.r11(q);
    a22 = b.r22(q);
  }
  // [[-Lambda, -R22], [R11, Lambda]]; trace is exactly zero.
  return {-l, -a22, a11, l};
}

Mat2 TrajectoryVelocity::p_matrix(double t, Vec2 p) const {
  const Bundle& b = bundle_for(t);
  const Vec2 q = b.grid.fold(p);
  const double a11 = exact_ ? (*b.er11)(q) : b.r11(q);
  const double a22 = exact_ ? (*b.er22)(q) : b.r22(q);
  return {0.0, -a22, a11, 0.0};
}

double TrajectoryVelocity::lambda(double t, Vec2 p) const {
  const Bundle& b = bundle_for(t);
  const Vec2 q = b.grid.fold(p);
  return exact_ ? (*b.er12)(q) : b.r12(q);
}

}  // namespace vil
