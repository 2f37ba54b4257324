#include "vil/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace vil::spectral {

namespace {

// FFTW's planner is not thread-safe; plans are cached per size and executed
// through the new-array interface, which is safe on distinct buffers.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan r2c(std::uint32_t n) {
    std::lock_guard lock(mu_);
    auto it = r2c_.find(n);
    if (it != r2c_.end()) return it->second;
    std::vector<double> in(std::size_t(n) * n);
    std::vector<std::complex<double>> out(std::size_t(n) * (n / 2 + 1));
    fftw_plan p = fftw_plan_dft_r2c_2d(static_cast<int>(n), static_cast<int>(n), in.data(),
                                       reinterpret_cast<fftw_complex*>(out.data()),
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw std::runtime_error("fftw r2c plan creation failed");
    r2c_.emplace(n, p);
    return p;
  }

  fftw_plan c2r(std::uint32_t n) {
    std::lock_guard lock(mu_);
    auto it = c2r_.find(n);
    if (it != c2r_.end()) return it->second;
    std::vector<std::complex<double>> in(std::size_t(n) * (n / 2 + 1));
    std::vector<double> out(std::size_t(n) * n);
    fftw_plan p = fftw_plan_dft_c2r_2d(static_cast<int>(n), static_cast<int>(n),
                                       reinterpret_cast<fftw_complex*>(in.data()), out.data(),
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw std::runtime_error("fftw c2r plan creation failed");
    c2r_.emplace(n, p);
    return p;
  }

 private:
  std::mutex mu_;
  std::map<std::uint32_t, fftw_plan> r2c_;
  std::map<std::uint32_t, fftw_plan> c2r_;
};

std::vector<double> run_c2r(const Spectrum& s) {
  const std::uint32_t n = s.n();
  std::vector<std::complex<double>> scratch(s.coef);  // c2r destroys its input
  std::vector<double> out(std::size_t(n) * n);
  fftw_execute_dft_c2r(PlanCache::instance().c2r(n),
                       reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
  return out;
}

}  // namespace

Spectrum forward(const ScalarField& f) {
  const std::uint32_t n = f.n();
  Spectrum out(f.grid());
  std::vector<double> in(f.values());
  fftw_execute_dft_r2c(PlanCache::instance().r2c(n), in.data(),
                       reinterpret_cast<fftw_complex*>(out.coef.data()));
  return out;
}

ScalarField inverse(const Spectrum& s) {
  const std::uint32_t n = s.n();
  std::vector<double> raw = run_c2r(s);
  ScalarField out(s.grid);
  const double scale = 1.0 / (static_cast<double>(n) * n);
  auto& v = out.values();
  for (std::size_t k = 0; k < raw.size(); ++k) v[k] = raw[k] * scale;
  out.refresh_mean_zero_flag();
  return out;
}

std::vector<double> inverse_oversampled(const Spectrum& s, std::uint32_t factor) {
  if (factor == 0) throw std::invalid_argument("oversample factor must be >= 1");
  const std::uint32_t n = s.n();
  if (factor == 1) {
    std::vector<double> raw = run_c2r(s);
    const double scale = 1.0 / (static_cast<double>(n) * n);
    for (double& v : raw) v *= scale;
    return raw;
  }
  const std::uint32_t fn = n * factor;
  const std::uint32_t fcols = fn / 2 + 1;
  std::vector<std::complex<double>> fine(std::size_t(fn) * fcols, {0.0, 0.0});

  // Coarse samples sit at -L/2 + (i+1/2)h, fine ones at -L/2 + (i'+1/2)h/f;
  // the half-cell offsets differ, so embedding needs a phase twist e^{ik delta}.
  const double delta = 0.5 * (s.grid.L / fn - s.grid.L / n);
  const std::uint32_t half = n / 2;
  for (std::uint32_t m1 = 0; m1 < n; ++m1) {
    if (m1 == half) continue;  // drop the Nyquist shell
    const std::uint32_t r = m1 < half ? m1 : fn - (n - m1);
    const double k1 = s.k1(m1);
    for (std::uint32_t m2 = 0; m2 < half; ++m2) {
      const double k2 = s.k2(m2);
      const double ph = (k1 + k2) * delta;
      fine[std::size_t(r) * fcols + m2] =
          s.at(m1, m2) * std::complex<double>(std::cos(ph), std::sin(ph));
    }
  }

  std::vector<double> out(std::size_t(fn) * fn);
  fftw_execute_dft_c2r(PlanCache::instance().c2r(fn),
                       reinterpret_cast<fftw_complex*>(fine.data()), out.data());
  const double scale = 1.0 / (static_cast<double>(n) * n);
  for (double& v : out) v *= scale;
  return out;
}

void dealias_two_thirds(Spectrum& s) {
  const std::uint32_t n = s.n();
  const int cut = static_cast<int>(n) / 3;
  for (std::uint32_t m1 = 0; m1 < n; ++m1) {
    const bool kill_row = std::abs(s.signed_index(m1)) > cut;
    for (std::uint32_t m2 = 0; m2 <= n / 2; ++m2)
      if (kill_row || static_cast<int>(m2) > cut) s.at(m1, m2) = 0.0;
  }
}

void zero_nyquist(Spectrum& s) {
  const std::uint32_t n = s.n();
  for (std::uint32_t m2 = 0; m2 <= n / 2; ++m2) s.at(n / 2, m2) = 0.0;
  for (std::uint32_t m1 = 0; m1 < n; ++m1) s.at(m1, n / 2) = 0.0;
}

Spectrum poisson_multiplier(const Spectrum& s) {
  Spectrum out(s.grid);
  const std::uint32_t n = s.n();
  for (std::uint32_t m1 = 0; m1 < n; ++m1) {
    const double k1 = s.k1(m1);
    for (std::uint32_t m2 = 0; m2 <= n / 2; ++m2) {
      const double k2 = s.k2(m2);
      const double k_sq = k1 * k1 + k2 * k2;
      out.at(m1, m2) = k_sq == 0.0 ? 0.0 : s.at(m1, m2) * (-1.0 / k_sq);
    }
  }
  return out;
}

Spectrum derivative(const Spectrum& s, int axis) {
  if (axis != 1 && axis != 2) throw std::invalid_argument("derivative: axis must be 1 or 2");
  Spectrum out(s.grid);
  const std::uint32_t n = s.n();
  for (std::uint32_t m1 = 0; m1 < n; ++m1) {
    const double k1 = s.k1(m1);
    for (std::uint32_t m2 = 0; m2 <= n / 2; ++m2) {
      const double k = axis == 1 ? k1 : s.k2(m2);
      out.at(m1, m2) = s.at(m1, m2) * std::complex<double>(0.0, k);
    }
  }
  zero_nyquist(out);
  return out;
}

Spectrum riesz_multiplier(const Spectrum& s, int i, int j) {
  if ((i != 1 && i != 2) || (j != 1 && j != 2))
    throw std::invalid_argument("riesz: axes must be 1 or 2");
  Spectrum out(s.grid);
  const std::uint32_t n = s.n();
  for (std::uint32_t m1 = 0; m1 < n; ++m1) {
    const double k1 = s.k1(m1);
    for (std::uint32_t m2 = 0; m2 <= n / 2; ++m2) {
      const double k2 = s.k2(m2);
      const double k_sq = k1 * k1 + k2 * k2;
      if (k_sq == 0.0) {
        out.at(m1, m2) = 0.0;
        continue;
      }
      const double ki = i == 1 ? k1 : k2;
      const double kj = j == 1 ? k1 : k2;
      out.at(m1, m2) = s.at(m1, m2) * (ki * kj / k_sq);
    }
  }
  return out;
}

ExactSampler::ExactSampler(const ScalarField& f) : spec_(forward(f)) {}
ExactSampler::ExactSampler(Spectrum s) : spec_(std::move(s)) {}

double ExactSampler::operator()(Vec2 p) const {
  const std::uint32_t n = spec_.n();
  const std::uint32_t cols = spec_.cols();
  const double x0 = spec_.grid.coord(0);
  const double xi = p.x - x0;
  const double et = p.y - x0;
  const double base = 2.0 * M_PI / spec_.grid.L;

  // Row phases e^{i k1 xi} for all signed indices, built by recurrence.
  std::vector<std::complex<double>> e1(n);
  const std::complex<double> w1(std::cos(base * xi), std::sin(base * xi));
  std::complex<double> acc(1.0, 0.0);
  for (std::uint32_t m = 0; m <= n / 2; ++m) {
    e1[m] = acc;
    if (m >= 1 && m < n / 2) e1[n - m] = std::conj(acc);
    acc *= w1;
  }

  const std::complex<double> w2(std::cos(base * et), std::sin(base * et));
  std::complex<double> e2(1.0, 0.0);
  double total = 0.0;
  for (std::uint32_t m2 = 0; m2 < cols; ++m2) {
    std::complex<double> inner(0.0, 0.0);
    const std::complex<double>* row = spec_.coef.data() + m2;
    for (std::uint32_t m1 = 0; m1 < n; ++m1) inner += row[std::size_t(m1) * cols] * e1[m1];
    const double weight = (m2 == 0 || m2 == n / 2) ? 1.0 : 2.0;
    total += weight * (inner * e2).real();
    e2 *= w2;
  }
  return total / (static_cast<double>(n) * n);
}

std::vector<double> ExactSampler::operator()(std::span<const Vec2> pts) const {
  std::vector<double> out(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) out[k] = (*this)(pts[k]);
  return out;
}

}  // namespace vil::spectral
