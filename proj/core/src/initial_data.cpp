#include "vil/initial_data.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace vil {

double Quadrupole::operator()(Vec2 x) const {
  double s = 0.0;
  for (int e1 = -1; e1 <= 1; e1 += 2)
    for (int e2 = -1; e2 <= 1; e2 += 2) s += e1 * e2 * phi({x.x - e1, x.y - e2});
  return s;
}

Vec2 Quadrupole::grad(Vec2 x) const {
  Vec2 g{0.0, 0.0};
  for (int e1 = -1; e1 <= 1; e1 += 2)
    for (int e2 = -1; e2 <= 1; e2 += 2) {
      const Vec2 gb = phi.grad({x.x - e1, x.y - e2});
      g += static_cast<double>(e1 * e2) * gb;
    }
  return g;
}

ScalarField Quadrupole::to_field(const GridSpec& g) const {
  return ScalarField::from_function(g, [this](Vec2 x) { return (*this)(x); });
}

double MultiScaleVorticity::amplitude() const {
  return std::pow(M, -2.0) * std::pow(static_cast<double>(N), -1.0 / p);
}

double MultiScaleVorticity::operator()(Vec2 x) const {
  double s = 0.0;
  for (int k = N0; k <= N0 + N; ++k) {
    const double scale = std::pow(2.0, static_cast<double>(k));
    s += std::pow(2.0, (-1.0 + 2.0 / p) * k) * phi0({scale * x.x, scale * x.y});
  }
  return amplitude() * s;
}

Vec2 MultiScaleVorticity::grad(Vec2 x) const {
  Vec2 g{0.0, 0.0};
  for (int k = N0; k <= N0 + N; ++k) {
    const double scale = std::pow(2.0, static_cast<double>(k));
    const Vec2 gb = phi0.grad({scale * x.x, scale * x.y});
    g += (std::pow(2.0, (-1.0 + 2.0 / p) * k) * scale) * gb;
  }
  return amplitude() * g;
}

bool MultiScaleVorticity::in_support(Vec2 x) const {
  for (int k = N0; k <= N0 + N; ++k) {
    const double c = std::pow(2.0, -static_cast<double>(k));
    const double r = 0.25 * c;
    for (int e1 = -1; e1 <= 1; e1 += 2)
      for (int e2 = -1; e2 <= 1; e2 += 2) {
        const double dx = x.x - e1 * c;
        const double dy = x.y - e2 * c;
        if (dx * dx + dy * dy < r * r) return true;
      }
  }
  return false;
}

double MultiScaleVorticity::support_radius() const {
  const double c = std::pow(2.0, -static_cast<double>(N0));
  return c * std::sqrt(2.0) + 0.25 * c;
}

namespace {

// Accumulate a compactly supported term over its own index window only; every term
// vanishes outside B(center, radius), so the union of windows is exact.
template <typename Fn>
void accumulate_window(ScalarField& f, Vec2 center, double radius, Fn&& term) {
  const GridSpec& g = f.grid();
  const double h = g.h();
  const auto lo_index = [&](double c) {
    return static_cast<std::int64_t>(std::ceil((c - radius + 0.5 * g.L) / h - 0.5 - 1e-12));
  };
  const auto hi_index = [&](double c) {
    return static_cast<std::int64_t>(std::floor((c + radius + 0.5 * g.L) / h - 0.5 + 1e-12));
  };
  const std::int64_t i0 = std::max<std::int64_t>(0, lo_index(center.x));
  const std::int64_t i1 = std::min<std::int64_t>(g.n - 1, hi_index(center.x));
  const std::int64_t j0 = std::max<std::int64_t>(0, lo_index(center.y));
  const std::int64_t j1 = std::min<std::int64_t>(g.n - 1, hi_index(center.y));
  for (std::int64_t i = i0; i <= i1; ++i) {
    const double x = g.coord(static_cast<std::uint32_t>(i));
    for (std::int64_t j = j0; j <= j1; ++j)
      f.at(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)) +=
          term(Vec2{x, g.coord(static_cast<std::uint32_t>(j))});
  }
}

}  // namespace

ScalarField MultiScaleVorticity::to_field(const GridSpec& g, ResolvePolicy policy) const {
  const double smallest = std::pow(2.0, -(N0 + N + 2));
  if (policy == ResolvePolicy::strict && smallest < 2.0 * g.h())
    throw std::invalid_argument(
        "omega0: unresolvable smallest scale 2^-(N0+N+2) = " + std::to_string(smallest) +
        " < 2h = " + std::to_string(2.0 * g.h()));
  if (support_radius() > 0.25 * g.L)
    throw std::invalid_argument("omega0: support exceeds the L/4 box margin");
  ScalarField f(g);
  const double amp = amplitude();
  for (int k = N0; k <= N0 + N; ++k) {
    const double scale = std::pow(2.0, static_cast<double>(k));
    const double coef = amp * std::pow(2.0, (-1.0 + 2.0 / p) * k);
    const double c = 1.0 / scale;
    for (int e1 = -1; e1 <= 1; e1 += 2)
      for (int e2 = -1; e2 <= 1; e2 += 2)
        accumulate_window(f, {e1 * c, e2 * c}, 0.25 * c, [&](Vec2 x) {
          return coef * e1 * e2 * phi0.phi({scale * x.x - e1, scale * x.y - e2});
        });
  }
  f.set_mean_zero(true);  // odd-odd by construction
  return f;
}

VectorField MultiScaleVorticity::gradient_field(const GridSpec& g) const {
  VectorField out(g);
  const double amp = amplitude();
  for (int k = N0; k <= N0 + N; ++k) {
    const double scale = std::pow(2.0, static_cast<double>(k));
    const double coef = amp * std::pow(2.0, (-1.0 + 2.0 / p) * k) * scale;
    const double c = 1.0 / scale;
    for (int e1 = -1; e1 <= 1; e1 += 2)
      for (int e2 = -1; e2 <= 1; e2 += 2) {
        accumulate_window(out.u1, {e1 * c, e2 * c}, 0.25 * c, [&](Vec2 x) {
          return coef * e1 * e2 * phi0.phi.grad({scale * x.x - e1, scale * x.y - e2}).x;
        });
        accumulate_window(out.u2, {e1 * c, e2 * c}, 0.25 * c, [&](Vec2 x) {
          return coef * e1 * e2 * phi0.phi.grad({scale * x.x - e1, scale * x.y - e2}).y;
        });
      }
  }
  return out;
}

MultiScaleVorticity omega0(const ConstructionParams& params) {
  params.validate();
  return MultiScaleVorticity{params.M, params.N, params.N0, params.p, {}};
}

double ScaleBump::operator()(Vec2 x) const {
  const double scale = std::pow(2.0, static_cast<double>(k));
  return std::pow(2.0, (-1.0 + 2.0 / p) * k) * phi0({scale * x.x, scale * x.y});
}

ScalarField ScaleBump::to_field(const GridSpec& g) const {
  return ScalarField::from_function(g, [this](Vec2 x) { return (*this)(x); });
}

double CarrierPerturbation::amplitude() const {
  return std::pow(lambda(), -1.0 + 2.0 / p) / std::sqrt(carrier_k());
}

double CarrierPerturbation::operator()(Vec2 x) const {
  const double lam = lambda();
  const double sk = std::sin(carrier_k() * x.x);
  double s = 0.0;
  for (int e1 = -1; e1 <= 1; e1 += 2)
    for (int e2 = -1; e2 <= 1; e2 += 2)
      s += e1 * e2 * rho({lam * (x.x - e1 * x_star.x), lam * (x.y - e2 * x_star.y)});
  return amplitude() * s * sk;
}

Vec2 CarrierPerturbation::grad(Vec2 x) const {
  const double lam = lambda();
  const double kc = carrier_k();
  const double sk = std::sin(kc * x.x);
  const double ck = std::cos(kc * x.x);
  double sum_rho = 0.0;
  Vec2 sum_grad{0.0, 0.0};
  for (int e1 = -1; e1 <= 1; e1 += 2)
    for (int e2 = -1; e2 <= 1; e2 += 2) {
      const Vec2 arg{lam * (x.x - e1 * x_star.x), lam * (x.y - e2 * x_star.y)};
      sum_rho += e1 * e2 * rho(arg);
      sum_grad += static_cast<double>(e1 * e2) * rho.grad(arg);
    }
  const double a = amplitude();
  return {a * (lam * sum_grad.x * sk + sum_rho * kc * ck), a * lam * sum_grad.y * sk};
}

bool CarrierPerturbation::in_support(Vec2 x) const {
  const double r = 2.0 / lambda();
  for (int e1 = -1; e1 <= 1; e1 += 2)
    for (int e2 = -1; e2 <= 1; e2 += 2) {
      const double dx = x.x - e1 * x_star.x;
      const double dy = x.y - e2 * x_star.y;
      if (dx * dx + dy * dy < r * r) return true;
    }
  return false;
}

void CarrierPerturbation::validate_geometry(const GridSpec& g) const {
  const double r = 2.0 / lambda();
  const double cmin = std::min(std::abs(x_star.x), std::abs(x_star.y));
  if (cmin < r)
    throw std::invalid_argument(
        "beta: support balls overlap, x* is within 2/lambda = " + std::to_string(r) +
        " of a coordinate axis");
  const double cmax = std::max(std::abs(x_star.x), std::abs(x_star.y));
  if (cmax + r > 0.25 * g.L)
    throw std::invalid_argument("beta: support balls leave the L/4 box margin");
  if (r < 2.0 * g.h())
    throw std::invalid_argument("beta: unresolvable support, 2/lambda = " + std::to_string(r) +
                                " < 2h = " + std::to_string(2.0 * g.h()));
}

ScalarField CarrierPerturbation::to_field(const GridSpec& g) const {
  validate_geometry(g);
  ScalarField f(g);
  const double lam = lambda();
  const double kc = carrier_k();
  const double a = amplitude();
  const double r = 2.0 / lam;
  for (int e1 = -1; e1 <= 1; e1 += 2)
    for (int e2 = -1; e2 <= 1; e2 += 2) {
      const Vec2 c{e1 * x_star.x, e2 * x_star.y};
      accumulate_window(f, c, r, [&](Vec2 x) {
        return a * e1 * e2 * rho({lam * (x.x - c.x), lam * (x.y - c.y)}) * std::sin(kc * x.x);
      });
    }
  f.set_mean_zero(true);  // odd in x2
  return f;
}

VectorField CarrierPerturbation::gradient_field(const GridSpec& g) const {
  validate_geometry(g);
  VectorField out(g);
  const double lam = lambda();
  const double kc = carrier_k();
  const double a = amplitude();
  const double r = 2.0 / lam;
  for (int e1 = -1; e1 <= 1; e1 += 2)
    for (int e2 = -1; e2 <= 1; e2 += 2) {
      const Vec2 c{e1 * x_star.x, e2 * x_star.y};
      accumulate_window(out.u1, c, r, [&](Vec2 x) {
        const Vec2 arg{lam * (x.x - c.x), lam * (x.y - c.y)};
        return a * e1 * e2 *
               (lam * rho.grad(arg).x * std::sin(kc * x.x) + rho(arg) * kc * std::cos(kc * x.x));
      });
      accumulate_window(out.u2, c, r, [&](Vec2 x) {
        const Vec2 arg{lam * (x.x - c.x), lam * (x.y - c.y)};
        return a * e1 * e2 * lam * rho.grad(arg).y * std::sin(kc * x.x);
      });
    }
  return out;
}

CarrierPerturbation beta(const ConstructionParams& params) {
  params.validate();
  if (!params.x_star)
    throw std::invalid_argument("beta: x* is unset (run the selection policy or override it)");
  return CarrierPerturbation{params.p, params.n_pert, *params.x_star,
                             BumpProfile{BumpProfile::Kind::plateau}};
}

ScalarField omega0n(const ScalarField& w0, const ScalarField& beta_n) {
  w0.require_same_grid(beta_n, "omega0n");
  ScalarField out(w0.grid());
  auto& v = out.values();
  const auto& a = w0.values();
  const auto& b = beta_n.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
  out.set_mean_zero(w0.is_mean_zero() && beta_n.is_mean_zero());
  return out;
}

}  // namespace vil
