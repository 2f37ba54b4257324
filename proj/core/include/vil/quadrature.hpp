#pragma once

#include <functional>

#include "vil/geometry.hpp"

namespace vil {

/// Tensor 4-point Gauss-Legendre rule on the rectangle [lo, hi].
double gauss_legendre_2d(const std::function<double(Vec2)>& f, Vec2 lo, Vec2 hi);

/// Dyadic adaptive refinement driven by the coarse/fine estimate gap on each cell.
/// Independent of the spectral path; used as the real-space oracle.
double adaptive_quad(const std::function<double(Vec2)>& f, Vec2 lo, Vec2 hi, double abs_tol,
                     int max_depth = 20);

/// Convenience wrapper: pilot evaluation fixes the absolute tolerance rel_tol * |pilot|.
double adaptive_quad_rel(const std::function<double(Vec2)>& f, Vec2 lo, Vec2 hi, double rel_tol,
                         int max_depth = 20);

}  // namespace vil
