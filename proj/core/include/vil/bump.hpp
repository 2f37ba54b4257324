#pragma once

#include <cmath>

#include "vil/geometry.hpp"

namespace vil {

/// Smooth radial bump profiles used by the initial-data constructions. Closed-form
/// gradients are exposed so norm checks can run on analytic derivatives.
struct BumpProfile {
  enum class Kind {
    mollifier,  // exp(1 - 1/(1-|x|^2)) on |x|<1, 0 outside; value 1 at the origin
    plateau     // 1 on B(0,1), exp(1 - 1/(1-(|x|-1)^2)) on 1<|x|<2, 0 outside
  };

  Kind kind = Kind::mollifier;

  double support_radius() const { return kind == Kind::mollifier ? 1.0 : 2.0; }

  double operator()(Vec2 x) const {
    const double r2 = x.x * x.x + x.y * x.y;
    if (kind == Kind::mollifier) {
      if (r2 >= 1.0 - 1e-14) return 0.0;
      return std::exp(1.0 - 1.0 / (1.0 - r2));
    }
    if (r2 <= 1.0) return 1.0;
    const double r = std::sqrt(r2);
    const double s = r - 1.0;
    if (s >= 1.0 - 1e-14) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
  }

  Vec2 grad(Vec2 x) const {
    const double r2 = x.x * x.x + x.y * x.y;
    if (kind == Kind::mollifier) {
      if (r2 >= 1.0 - 1e-14) return {0.0, 0.0};
      const double q = 1.0 - r2;
      const double v = std::exp(1.0 - 1.0 / q);
      const double factor = -2.0 * v / (q * q);
      return {factor * x.x, factor * x.y};
    }
    if (r2 <= 1.0) return {0.0, 0.0};
    const double r = std::sqrt(r2);
    const double s = r - 1.0;
    if (s >= 1.0 - 1e-14) return {0.0, 0.0};
    const double q = 1.0 - s * s;
    const double v = std::exp(1.0 - 1.0 / q);
    const double dr = -2.0 * s * v / (q * q);
    return {dr * x.x / r, dr * x.y / r};
  }
};

}  // namespace vil
