#pragma once

#include <complex>
#include <span>
#include <vector>

#include "vil/field.hpp"

namespace vil {

/// Unnormalized half-complex DFT of an n x n real field.
/// Rows m1 in [0, n) carry the signed wavenumber index s(m1) = m1 (m1 <= n/2)
/// or m1 - n; columns m2 in [0, n/2]. coef[m1 * (n/2 + 1) + m2].
struct Spectrum {
  GridSpec grid;
  std::vector<std::complex<double>> coef;

  Spectrum() = default;
  explicit Spectrum(const GridSpec& g)
      : grid(g), coef(static_cast<std::size_t>(g.n) * (g.n / 2 + 1)) {}

  std::uint32_t n() const { return grid.n; }
  std::uint32_t cols() const { return grid.n / 2 + 1; }
  std::complex<double>& at(std::uint32_t m1, std::uint32_t m2) {
    return coef[std::size_t(m1) * cols() + m2];
  }
  const std::complex<double>& at(std::uint32_t m1, std::uint32_t m2) const {
    return coef[std::size_t(m1) * cols() + m2];
  }

  /// Signed mode index along axis 1 for row m1.
  int signed_index(std::uint32_t m1) const {
    return m1 <= grid.n / 2 ? static_cast<int>(m1) : static_cast<int>(m1) - static_cast<int>(grid.n);
  }
  double k1(std::uint32_t m1) const { return 2.0 * M_PI * signed_index(m1) / grid.L; }
  double k2(std::uint32_t m2) const { return 2.0 * M_PI * static_cast<double>(m2) / grid.L; }
};

namespace spectral {

Spectrum forward(const ScalarField& f);
ScalarField inverse(const Spectrum& s);

/// Values of the band-limited interpolant on the factor-times-refined cell-centered
/// grid ((factor*n)^2 values, row-major). The Nyquist shell of the coarse spectrum is
/// dropped: exact for band-limited data (all dealiased solver output qualifies).
std::vector<double> inverse_oversampled(const Spectrum& s, std::uint32_t factor);

/// In-place 2/3-rule truncation: zeroes modes with |s1| > n/3 or m2 > n/3.
void dealias_two_thirds(Spectrum& s);

/// Zero the m1 = n/2 row and m2 = n/2 column (needed before odd-derivative multipliers).
void zero_nyquist(Spectrum& s);

Spectrum poisson_multiplier(const Spectrum& s);            // -1/|k|^2, zero mode -> 0
Spectrum derivative(const Spectrum& s, int axis);          // i k_axis, Nyquist zeroed
Spectrum riesz_multiplier(const Spectrum& s, int i, int j);// k_i k_j / |k|^2, zero mode -> 0

/// Exact trigonometric-interpolant evaluation at arbitrary points (reference
/// sampling path; node-exact, spectral order). O(n^2) per point.
class ExactSampler {
 public:
  explicit ExactSampler(const ScalarField& f);
  explicit ExactSampler(Spectrum s);
  double operator()(Vec2 p) const;
  std::vector<double> operator()(std::span<const Vec2> pts) const;

 private:
  Spectrum spec_;
};

}  // namespace spectral
}  // namespace vil
