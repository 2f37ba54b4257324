#include "vil/interpolate.hpp"

#include <cmath>

namespace vil {

FieldInterpolator::FieldInterpolator(const ScalarField& f, std::uint32_t oversample)
    : FieldInterpolator(spectral::forward(f), oversample) {}

FieldInterpolator::FieldInterpolator(const Spectrum& s, std::uint32_t oversample)
    : L_(s.grid.L),
      h_(s.grid.L / (static_cast<double>(s.grid.n) * oversample)),
      fn_(s.grid.n * oversample),
      fine_(spectral::inverse_oversampled(s, oversample)) {}

namespace {
inline void cubic_weights(double s, double w[4]) {
  // Lagrange basis on nodes {-1, 0, 1, 2}; reproduces cubics, O(h^4).
  const double sm1 = s - 1.0, sm2 = s - 2.0, sp1 = s + 1.0;
  w[0] = -s * sm1 * sm2 / 6.0;
  w[1] = sp1 * sm1 * sm2 / 2.0;
  w[2] = -sp1 * s * sm2 / 2.0;
  w[3] = sp1 * s * sm1 / 6.0;
}
}  // namespace

double FieldInterpolator::operator()(Vec2 p) const {
  const double inv_h = 1.0 / h_;
  double tx = (p.x + 0.5 * L_) * inv_h - 0.5;
  double ty = (p.y + 0.5 * L_) * inv_h - 0.5;
  double ix = std::floor(tx);
  double iy = std::floor(ty);
  const double sx = tx - ix;
  const double sy = ty - iy;

  double wx[4], wy[4];
  cubic_weights(sx, wx);
  cubic_weights(sy, wy);

  const std::int64_t n = fn_;
  std::int64_t bi = static_cast<std::int64_t>(ix);
  std::int64_t bj = static_cast<std::int64_t>(iy);
  std::uint32_t ii[4], jj[4];
  for (int q = 0; q < 4; ++q) {
    std::int64_t a = (bi - 1 + q) % n;
    if (a < 0) a += n;
    std::int64_t b = (bj - 1 + q) % n;
    if (b < 0) b += n;
    ii[q] = static_cast<std::uint32_t>(a);
    jj[q] = static_cast<std::uint32_t>(b);
  }

  double acc = 0.0;
  for (int qi = 0; qi < 4; ++qi) {
    const double* row = fine_.data() + std::size_t(ii[qi]) * fn_;
    double r = 0.0;
    for (int qj = 0; qj < 4; ++qj) r += wy[qj] * row[jj[qj]];
    acc += wx[qi] * r;
  }
  return acc;
}

}  // namespace vil
