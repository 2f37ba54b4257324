#include "vil/quadrature.hpp"

#include <cmath>

namespace vil {

namespace {
constexpr double kNodes[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                              0.8611363115940526};
constexpr double kWeights[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                0.3478548451374538};

double refine(const std::function<double(Vec2)>& f, Vec2 lo, Vec2 hi, double coarse,
              double abs_tol, int depth) {
  const Vec2 mid{0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)};
  const Vec2 corners_lo[4] = {lo, {mid.x, lo.y}, {lo.x, mid.y}, mid};
  const Vec2 corners_hi[4] = {mid, {hi.x, mid.y}, {mid.x, hi.y}, hi};
  double child[4];
  double fine = 0.0;
  for (int c = 0; c < 4; ++c) {
    child[c] = gauss_legendre_2d(f, corners_lo[c], corners_hi[c]);
    fine += child[c];
  }
  if (std::abs(fine - coarse) <= abs_tol || depth <= 0) return fine;
  double total = 0.0;
  for (int c = 0; c < 4; ++c)
    total += refine(f, corners_lo[c], corners_hi[c], child[c], 0.25 * abs_tol, depth - 1);
  return total;
}
}  // namespace

double gauss_legendre_2d(const std::function<double(Vec2)>& f, Vec2 lo, Vec2 hi) {
  const double cx = 0.5 * (lo.x + hi.x), rx = 0.5 * (hi.x - lo.x);
  const double cy = 0.5 * (lo.y + hi.y), ry = 0.5 * (hi.y - lo.y);
  double s = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      s += kWeights[a] * kWeights[b] * f({cx + rx * kNodes[a], cy + ry * kNodes[b]});
  return s * rx * ry;
}

double adaptive_quad(const std::function<double(Vec2)>& f, Vec2 lo, Vec2 hi, double abs_tol,
                     int max_depth) {
  const double coarse = gauss_legendre_2d(f, lo, hi);
  return refine(f, lo, hi, coarse, abs_tol, max_depth);
}

double adaptive_quad_rel(const std::function<double(Vec2)>& f, Vec2 lo, Vec2 hi, double rel_tol,
                         int max_depth) {
  const double pilot = adaptive_quad(f, lo, hi, 1e-6, 6);
  const double scale = std::max(std::abs(pilot), 1e-12);
  return adaptive_quad(f, lo, hi, rel_tol * scale, max_depth);
}

}  // namespace vil
