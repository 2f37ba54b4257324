#pragma once

#include "vil/field.hpp"
#include "vil/spectral.hpp"

namespace vil {

/// psi with Laplacian(psi) = w, zero mode set to zero. Rejects non-mean-zero input.
ScalarField poisson_inverse(const ScalarField& w);

/// u = perp-gradient of the stream function: u = (-d2, d1) applied to inv-Laplacian(w).
VectorField biot_savart(const ScalarField& w);

/// Double Riesz transform R_ij w = d_i d_j inv-Laplacian(w).
ScalarField riesz(const ScalarField& w, int i, int j);

/// Spectral partial derivatives (d1 f, d2 f).
VectorField gradient(const ScalarField& f);

/// Spectral divergence d1 u1 + d2 u2.
ScalarField divergence(const VectorField& u);

/// Scalar curl -d2 u1 + d1 u2.
ScalarField rot(const VectorField& u);

/// Reference off-grid sampling (exact trigonometric interpolant).
std::vector<double> sample(const ScalarField& f, std::span<const Vec2> points);

struct ParityDefect {
  double odd1 = 0.0;   // sup |f(x1,x2) + f(-x1,x2)| / sup|f|
  double odd2 = 0.0;   // sup |f(x1,x2) + f(x1,-x2)| / sup|f|
  double even1 = 0.0;  // sup |f(x1,x2) - f(-x1,x2)| / sup|f|
  double even2 = 0.0;  // sup |f(x1,x2) - f(x1,-x2)| / sup|f|
};

/// Grid-node parity defects, each normalized by the grid max (zeros for a zero field).
ParityDefect parity_defect(const ScalarField& f);

}  // namespace vil
