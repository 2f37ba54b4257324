#pragma once

#include <optional>
#include <vector>

#include "vil/field.hpp"
#include "vil/report.hpp"
#include "vil/spectral.hpp"

namespace vil {

struct SolverConfig {
  double dt = 0.0;   // 0: derive from the CFL rule cfl * h / max(1, sup|u(0)|)
  double cfl = 0.5;  // sup|u(0)| is the grid max (cheap bound); see docs
  bool dealias = true;
  double hyper_nu = 0.0;  // exploratory only; every lemma-verification path asserts 0
  int hyper_order = 4;
  std::uint32_t snapshot_every = 1;
  bool track_inverse_map = false;  // co-evolve the back-map displacement a(t,x) = eta^{-1} - x

  void validate() const;
};

struct Snapshot {
  double t = 0.0;
  Spectrum omega_hat;
  std::optional<Spectrum> a1_hat;  // back-map displacement components, if tracked
  std::optional<Spectrum> a2_hat;
};

/// Snapshots at strictly increasing times plus the terminal state (always included).
class Trajectory {
 public:
  GridSpec grid;
  SolverConfig cfg;
  std::vector<Snapshot> snaps;
  bool aborted = false;  // NaN/overflow stop; last good snapshot retained

  double t_begin() const { return snaps.front().t; }
  double t_end() const { return snaps.back().t; }
  const Snapshot& terminal() const { return snaps.back(); }

  ScalarField omega(std::size_t idx) const;
  /// Back-map alpha(t,x) = x + a(t,x) displacement fields at snapshot idx.
  VectorField inverse_map_displacement(std::size_t idx) const;
};

/// Spectral right-hand side -u . grad(omega), dealiased per cfg (used by the
/// time-interpolation of trajectories as well as by the stepper).
Spectrum vorticity_rhs(const Spectrum& w_hat, const SolverConfig& cfg);

/// The admissible time step cfl * h / max(1, sup|u(0)|) for this state.
double admissible_dt(const ScalarField& w, double cfl);

/// One RK4 step. Rejects dt above the admissible step, naming the admissible value.
ScalarField step(const ScalarField& w, const SolverConfig& cfg);

Trajectory evolve(const ScalarField& w0, double T, const SolverConfig& cfg);

struct SeriesPoint {
  double t = 0.0;
  std::string name;
  double value = 0.0;
};

/// Time series of sup|omega|, Lp norms, kinetic energy, parity defects and
/// boundary-frame contamination (outer 10% frame: |x|_inf >= 0.45 L).
std::vector<SeriesPoint> conservation_series(const Trajectory& traj,
                                             const std::vector<double>& p_list = {2.0, 2.5, 3.0});

void write_series_csv(const std::filesystem::path& path, const std::vector<SeriesPoint>& series);

/// Drift summary rows over the series (relative drifts of the conserved quantities).
DiagnosticsReport conservation_report(const Trajectory& traj,
                                      const std::vector<double>& p_list = {2.0, 2.5, 3.0});

}  // namespace vil
