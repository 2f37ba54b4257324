#pragma once

#include "vil/field.hpp"

namespace vil {

/// (h^2 sum |f|^p)^(1/p). Requires p > 1.
double lp_norm(const ScalarField& f, double p);

/// Max of |f| over a Fourier-oversampled refinement of the grid (default 4x).
double sup_norm(const ScalarField& f, std::uint32_t oversample = 4);

/// Max of |u| (Euclidean) over the oversampled refinement.
double sup_norm(const VectorField& u, std::uint32_t oversample = 4);

/// (h^2 sum |grad f|^p)^(1/p) with the spectral gradient.
double grad_lp_norm(const ScalarField& f, double p);

/// Same, with caller-provided gradient samples (e.g. closed-form derivatives).
double grad_lp_norm(const VectorField& grad, double p);

/// W^{1,p} norm: lp_norm(f,p) + grad_lp_norm(f,p) (spectral gradient).
double sobolev_norm(const ScalarField& f, double p);

/// W^{1,p} norm with caller-provided gradient samples.
double sobolev_norm(const ScalarField& f, const VectorField& grad, double p);

/// Kinetic energy h^2 sum (u1^2 + u2^2).
double energy(const VectorField& u);

}  // namespace vil
