#include "vil/solver.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "vil/norms.hpp"
#include "vil/operators.hpp"

namespace vil {

namespace {

struct StageFields {
  std::vector<double> u1, u2;
};

// Velocity grids from a vorticity spectrum (unnormalized in, normalized out).
StageFields velocity_grids(const Spectrum& w_hat) {
  const Spectrum psi = spectral::poisson_multiplier(w_hat);
  Spectrum d2 = spectral::derivative(psi, 2);
  for (auto& c : d2.coef) c = -c;
  StageFields out;
  out.u1 = spectral::inverse_oversampled(d2, 1);
  out.u2 = spectral::inverse_oversampled(spectral::derivative(psi, 1), 1);
  return out;
}

Spectrum advection_rhs(const Spectrum& w_hat, const StageFields& vel, const SolverConfig& cfg) {
  const GridSpec& g = w_hat.grid;
  const auto wx = spectral::inverse_oversampled(spectral::derivative(w_hat, 1), 1);
  const auto wy = spectral::inverse_oversampled(spectral::derivative(w_hat, 2), 1);
  ScalarField nl(g);
  auto& v = nl.values();
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = -(vel.u1[k] * wx[k] + vel.u2[k] * wy[k]);
  Spectrum rhs = spectral::forward(nl);
  if (cfg.dealias) spectral::dealias_two_thirds(rhs);
  rhs.at(0, 0) = 0.0;
  if (cfg.hyper_nu > 0.0) {
    const std::uint32_t n = rhs.n();
    for (std::uint32_t m1 = 0; m1 < n; ++m1) {
      const double k1 = rhs.k1(m1);
      for (std::uint32_t m2 = 0; m2 <= n / 2; ++m2) {
        const double k2 = rhs.k2(m2);
        rhs.at(m1, m2) -= cfg.hyper_nu * std::pow(k1 * k1 + k2 * k2, cfg.hyper_order) *
                          w_hat.at(m1, m2);
      }
    }
  }
  return rhs;
}

struct State {
  Spectrum w;
  std::vector<Spectrum> aux;  // a1, a2 when tracking the inverse map

  State axpy(double c, const State& k) const {
    State out = *this;
    for (std::size_t q = 0; q < out.w.coef.size(); ++q) out.w.coef[q] += c * k.w.coef[q];
    for (std::size_t a = 0; a < aux.size(); ++a)
      for (std::size_t q = 0; q < aux[a].coef.size(); ++q)
        out.aux[a].coef[q] += c * k.aux[a].coef[q];
    return out;
  }
};

State full_rhs(const State& s, const SolverConfig& cfg) {
  const StageFields vel = velocity_grids(s.w);
  State out;
  out.w = advection_rhs(s.w, vel, cfg);
  out.aux.reserve(s.aux.size());
  for (std::size_t a = 0; a < s.aux.size(); ++a) {
    // d a_i/dt = -u_i - u . grad(a_i): the back-map alpha = x + a is advected.
    const auto ax = spectral::inverse_oversampled(spectral::derivative(s.aux[a], 1), 1);
    const auto ay = spectral::inverse_oversampled(spectral::derivative(s.aux[a], 2), 1);
    const std::vector<double>& ui = a == 0 ? vel.u1 : vel.u2;
    ScalarField r(s.w.grid);
    auto& v = r.values();
    for (std::size_t k = 0; k < v.size(); ++k)
      v[k] = -ui[k] - (vel.u1[k] * ax[k] + vel.u2[k] * ay[k]);
    Spectrum rs = spectral::forward(r);
    if (cfg.dealias) spectral::dealias_two_thirds(rs);
    rs.at(0, 0) = 0.0;
    out.aux.push_back(std::move(rs));
  }
  return out;
}

State rk4_step(const State& s, double dt, const SolverConfig& cfg) {
  const State k1 = full_rhs(s, cfg);
  const State k2 = full_rhs(s.axpy(0.5 * dt, k1), cfg);
  const State k3 = full_rhs(s.axpy(0.5 * dt, k2), cfg);
  const State k4 = full_rhs(s.axpy(dt, k3), cfg);
  State out = s;
  const double c = dt / 6.0;
  auto blend = [c](Spectrum& dst, const Spectrum& a, const Spectrum& b, const Spectrum& cc,
                   const Spectrum& d) {
    for (std::size_t q = 0; q < dst.coef.size(); ++q)
      dst.coef[q] += c * (a.coef[q] + 2.0 * b.coef[q] + 2.0 * cc.coef[q] + d.coef[q]);
  };
  blend(out.w, k1.w, k2.w, k3.w, k4.w);
  for (std::size_t a = 0; a < out.aux.size(); ++a)
    blend(out.aux[a], k1.aux[a], k2.aux[a], k3.aux[a], k4.aux[a]);
  return out;
}

bool spectrum_finite(const Spectrum& s) {
  for (const auto& c : s.coef)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

}  // namespace

void SolverConfig::validate() const {
  if (dt < 0.0) throw std::invalid_argument("solver.dt: must be nonnegative (0 = CFL default)");
  if (!(cfl > 0.0)) throw std::invalid_argument("solver.cfl: must be positive");
  if (hyper_nu < 0.0) throw std::invalid_argument("solver.hyper_nu: must be nonnegative");
  if (hyper_order < 1) throw std::invalid_argument("solver.hyper_order: must be >= 1");
  if (snapshot_every == 0) throw std::invalid_argument("solver.snapshot_every: must be >= 1");
}

ScalarField Trajectory::omega(std::size_t idx) const {
  auto f = spectral::inverse(snaps.at(idx).omega_hat);
  f.set_mean_zero(true);
  return f;
}

VectorField Trajectory::inverse_map_displacement(std::size_t idx) const {
  const Snapshot& s = snaps.at(idx);
  if (!s.a1_hat || !s.a2_hat)
    throw std::runtime_error("trajectory: inverse map was not tracked on this run");
  VectorField a(grid);
  a.u1 = spectral::inverse(*s.a1_hat);
  a.u2 = spectral::inverse(*s.a2_hat);
  return a;
}

Spectrum vorticity_rhs(const Spectrum& w_hat, const SolverConfig& cfg) {
  return advection_rhs(w_hat, velocity_grids(w_hat), cfg);
}

double admissible_dt(const ScalarField& w, double cfl) {
  w.require_mean_zero("admissible_dt");
  const VectorField u = biot_savart(w);
  return cfl * w.grid().h() / std::max(1.0, u.grid_max_magnitude());
}

ScalarField step(const ScalarField& w, const SolverConfig& cfg) {
  cfg.validate();
  w.require_mean_zero("step");
  const double dt_max = admissible_dt(w, cfg.cfl);
  const double dt = cfg.dt == 0.0 ? dt_max : cfg.dt;
  if (dt > dt_max * (1.0 + 1e-12))
    throw std::invalid_argument("step: CFL violation, dt = " + std::to_string(dt) +
                                " exceeds admissible dt = " + std::to_string(dt_max));
  State s{spectral::forward(w), {}};
  if (cfg.dealias) spectral::dealias_two_thirds(s.w);
  s.w.at(0, 0) = 0.0;
  State out = rk4_step(s, dt, cfg);
  auto f = spectral::inverse(out.w);
  f.set_mean_zero(true);
  return f;
}

Trajectory evolve(const ScalarField& w0, double T, const SolverConfig& cfg) {
  cfg.validate();
  w0.require_mean_zero("evolve");
  if (T < 0.0) throw std::invalid_argument("evolve: negative horizon");

  Trajectory traj;
  traj.grid = w0.grid();
  traj.cfg = cfg;

  State s{spectral::forward(w0), {}};
  if (cfg.dealias) spectral::dealias_two_thirds(s.w);
  s.w.at(0, 0) = 0.0;
  if (cfg.track_inverse_map) {
    s.aux.emplace_back(Spectrum(w0.grid()));  // a1 = 0
    s.aux.emplace_back(Spectrum(w0.grid()));  // a2 = 0
  }

  auto push = [&](double t, const State& st) {
    Snapshot snap;
    snap.t = t;
    snap.omega_hat = st.w;
    if (cfg.track_inverse_map) {
      snap.a1_hat = st.aux[0];
      snap.a2_hat = st.aux[1];
    }
    traj.snaps.push_back(std::move(snap));
  };

  push(0.0, s);
  if (T == 0.0) return traj;

  const double dt_max = admissible_dt(w0, cfg.cfl);
  double dt = cfg.dt == 0.0 ? dt_max : cfg.dt;
  if (dt > dt_max * (1.0 + 1e-12))
    throw std::invalid_argument("evolve: CFL violation, dt = " + std::to_string(dt) +
                                " exceeds admissible dt = " + std::to_string(dt_max));
  const std::uint64_t steps = static_cast<std::uint64_t>(std::ceil(T / dt - 1e-12));
  dt = T / static_cast<double>(steps);

  for (std::uint64_t j = 1; j <= steps; ++j) {
    State next = rk4_step(s, dt, cfg);
    if (!spectrum_finite(next.w)) {
      traj.aborted = true;
      break;
    }
    s = std::move(next);
    const double t = dt * static_cast<double>(j);
    if (j % cfg.snapshot_every == 0 || j == steps) push(t, s);
  }
  return traj;
}

std::vector<SeriesPoint> conservation_series(const Trajectory& traj,
                                             const std::vector<double>& p_list) {
  std::vector<SeriesPoint> out;
  const double frame = 0.45 * traj.grid.L;
  for (std::size_t idx = 0; idx < traj.snaps.size(); ++idx) {
    const double t = traj.snaps[idx].t;
    const ScalarField w = traj.omega(idx);
    out.push_back({t, "sup_omega", sup_norm(w)});
    for (double p : p_list)
      out.push_back({t, "lp_omega_p" + format_double(p), lp_norm(w, p)});
    out.push_back({t, "energy", energy(biot_savart(w))});
    const ParityDefect pd = parity_defect(w);
    out.push_back({t, "parity_odd1", pd.odd1});
    out.push_back({t, "parity_odd2", pd.odd2});
    double frame_max = 0.0;
    const std::uint32_t n = w.n();
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < n; ++j)
        if (w.grid().point(i, j).norm_inf() >= frame)
          frame_max = std::max(frame_max, std::abs(w.at(i, j)));
    out.push_back({t, "boundary_frame_sup", frame_max});
  }
  return out;
}

void write_series_csv(const std::filesystem::path& path, const std::vector<SeriesPoint>& series) {
  std::ofstream os(path, std::ios::trunc);
  os << "t,name,value\n";
  for (const auto& s : series)
    os << format_double(s.t) << ',' << s.name << ',' << format_double(s.value) << '\n';
}

DiagnosticsReport conservation_report(const Trajectory& traj, const std::vector<double>& p_list) {
  const auto series = conservation_series(traj, p_list);
  DiagnosticsReport rep;
  // Relative drift of each conserved series plus the terminal value of the monitors.
  std::map<std::string, std::pair<double, double>> range;  // name -> (min, max)
  for (const auto& s : series) {
    auto it = range.find(s.name);
    if (it == range.end())
      range.emplace(s.name, std::make_pair(s.value, s.value));
    else {
      it->second.first = std::min(it->second.first, s.value);
      it->second.second = std::max(it->second.second, s.value);
    }
  }
  for (const auto& [name, mm] : range) {
    const bool conserved = name == "sup_omega" || name.rfind("lp_omega", 0) == 0 ||
                           name == "energy";
    if (conserved) {
      const double scale = std::max(std::abs(mm.second), 1e-300);
      rep.add("conservation-drift", "series=" + name, (mm.second - mm.first) / scale,
              0.0, Verdict::monitored);
    } else {
      rep.add("conservation-max", "series=" + name, mm.second, 0.0, Verdict::monitored);
    }
  }
  rep.sort();
  return rep;
}

}  // namespace vil
