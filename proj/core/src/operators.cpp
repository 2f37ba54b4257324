#include "vil/operators.hpp"

namespace vil {

ScalarField poisson_inverse(const ScalarField& w) {
  w.require_mean_zero("poisson_inverse");
  auto psi = spectral::inverse(spectral::poisson_multiplier(spectral::forward(w)));
  psi.set_mean_zero(true);
  return psi;
}

VectorField biot_savart(const ScalarField& w) {
  w.require_mean_zero("biot_savart");
  const Spectrum psi = spectral::poisson_multiplier(spectral::forward(w));
  VectorField u(w.grid());
  Spectrum d2 = spectral::derivative(psi, 2);
  for (auto& c : d2.coef) c = -c;
  u.u1 = spectral::inverse(d2);
  u.u2 = spectral::inverse(spectral::derivative(psi, 1));
  u.u1.set_mean_zero(true);
  u.u2.set_mean_zero(true);
  return u;
}

ScalarField riesz(const ScalarField& w, int i, int j) {
  w.require_mean_zero("riesz");
  auto out = spectral::inverse(spectral::riesz_multiplier(spectral::forward(w), i, j));
  out.set_mean_zero(true);
  return out;
}

VectorField gradient(const ScalarField& f) {
  const Spectrum s = spectral::forward(f);
  VectorField g(f.grid());
  g.u1 = spectral::inverse(spectral::derivative(s, 1));
  g.u2 = spectral::inverse(spectral::derivative(s, 2));
  return g;
}

ScalarField divergence(const VectorField& u) {
  Spectrum d1 = spectral::derivative(spectral::forward(u.u1), 1);
  const Spectrum d2 = spectral::derivative(spectral::forward(u.u2), 2);
  for (std::size_t k = 0; k < d1.coef.size(); ++k) d1.coef[k] += d2.coef[k];
  return spectral::inverse(d1);
}

ScalarField rot(const VectorField& u) {
  Spectrum d2 = spectral::derivative(spectral::forward(u.u1), 2);
  const Spectrum d1 = spectral::derivative(spectral::forward(u.u2), 1);
  for (std::size_t k = 0; k < d2.coef.size(); ++k) d2.coef[k] = d1.coef[k] - d2.coef[k];
  return spectral::inverse(d2);
}

std::vector<double> sample(const ScalarField& f, std::span<const Vec2> points) {
  return spectral::ExactSampler(f)(points);
}

ParityDefect parity_defect(const ScalarField& f) {
  const std::uint32_t n = f.n();
  ParityDefect d;
  double fmax = 0.0;
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t mi = f.grid().mirror(i);
    for (std::uint32_t j = 0; j < n; ++j) {
      const std::uint32_t mj = f.grid().mirror(j);
      const double v = f.at(i, j);
      const double r1 = f.at(mi, j);
      const double r2 = f.at(i, mj);
      fmax = std::max(fmax, std::abs(v));
      d.odd1 = std::max(d.odd1, std::abs(v + r1));
      d.odd2 = std::max(d.odd2, std::abs(v + r2));
      d.even1 = std::max(d.even1, std::abs(v - r1));
      d.even2 = std::max(d.even2, std::abs(v - r2));
    }
  }
  if (fmax > 0.0) {
    d.odd1 /= fmax;
    d.odd2 /= fmax;
    d.even1 /= fmax;
    d.even2 /= fmax;
  }
  return d;
}

}  // namespace vil
