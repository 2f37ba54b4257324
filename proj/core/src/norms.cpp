#include "vil/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "vil/operators.hpp"
#include "vil/spectral.hpp"

namespace vil {

namespace {
void check_p(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("lp_norm: exponent p must satisfy p > 1");
}
}  // namespace

double lp_norm(const ScalarField& f, double p) {
  check_p(p);
  double s = 0.0;
  for (double v : f.values()) s += std::pow(std::abs(v), p);
  const double h = f.grid().h();
  return std::pow(h * h * s, 1.0 / p);
}

double sup_norm(const ScalarField& f, std::uint32_t oversample) {
  const auto fine = spectral::inverse_oversampled(spectral::forward(f), oversample);
  double m = 0.0;
  for (double v : fine) m = std::max(m, std::abs(v));
  return m;
}

double sup_norm(const VectorField& u, std::uint32_t oversample) {
  const auto f1 = spectral::inverse_oversampled(spectral::forward(u.u1), oversample);
  const auto f2 = spectral::inverse_oversampled(spectral::forward(u.u2), oversample);
  double m = 0.0;
  for (std::size_t k = 0; k < f1.size(); ++k) m = std::max(m, f1[k] * f1[k] + f2[k] * f2[k]);
  return std::sqrt(m);
}

double grad_lp_norm(const VectorField& grad, double p) {
  check_p(p);
  const auto& gx = grad.u1.values();
  const auto& gy = grad.u2.values();
  double s = 0.0;
  for (std::size_t k = 0; k < gx.size(); ++k)
    s += std::pow(gx[k] * gx[k] + gy[k] * gy[k], 0.5 * p);
  const double h = grad.grid().h();
  return std::pow(h * h * s, 1.0 / p);
}

double grad_lp_norm(const ScalarField& f, double p) { return grad_lp_norm(gradient(f), p); }

double sobolev_norm(const ScalarField& f, double p) {
  return lp_norm(f, p) + grad_lp_norm(f, p);
}

double sobolev_norm(const ScalarField& f, const VectorField& grad, double p) {
  return lp_norm(f, p) + grad_lp_norm(grad, p);
}

double energy(const VectorField& u) {
  const auto& a = u.u1.values();
  const auto& b = u.u2.values();
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * a[k] + b[k] * b[k];
  const double h = u.grid().h();
  return h * h * s;
}

}  // namespace vil
