#pragma once

#include <functional>
#include <map>

#include "vil/config.hpp"
#include "vil/flow.hpp"
#include "vil/initial_data.hpp"
#include "vil/report.hpp"

namespace vil {

/// The sector S = { x : x1/2 <= x2 <= 2 x1, x1 >= 0, x2 >= 0 }.
struct SectorSpec {
  static bool inside_strict(Vec2 x) {
    return x.x > 0.0 && x.y > 0.0 && 0.5 * x.x < x.y && x.y < 2.0 * x.x;
  }
  /// Time span on which the eta1/eta2 sector bounds are derived: min(T, M^-3 / (2 sqrt 5)).
  static double ratio_cutoff(double T, double M) {
    return std::min(T, std::pow(M, -3.0) / (2.0 * std::sqrt(5.0)));
  }
};

struct QuadratureNodes {
  std::vector<Vec2> pts;
  std::vector<double> w;
};

/// Tensor nodes over every first-quadrant support bump of the family (weights h^2).
QuadratureNodes quadrant_support_nodes(const MultiScaleVorticity& w0, std::uint32_t per_axis);
/// Same nodes filtered to the strict interior of S (the whole Q1 bumps of this
/// construction lie inside S, so the sets agree up to zero-weight edge nodes).
QuadratureNodes sector_support_nodes(const MultiScaleVorticity& w0, std::uint32_t per_axis);

/// Forward-Jacobian entries read off the tracked back-map: at the Eulerian node z,
/// e22 = d2 eta2 and e21 = d1 eta2 evaluated at the label alpha(z); alpha_disp = a(z).
struct PullbackJacobian {
  ScalarField e22;
  ScalarField e21;
  VectorField alpha_disp;
};
PullbackJacobian pullback_jacobian(const Trajectory& traj, std::size_t snap_idx);

struct XStarSelection {
  Vec2 x_star;
  double delta = 0.0;
  double jac_value = 0.0;  // |d2 eta2| at the selected seed
};
/// argmax of |d2 eta2| over a seed group, restricted to candidates with both
/// |coordinates| >= coord_floor, reflected into the first quadrant; delta is the
/// largest seed distance within which the entry stays above 90% of the max.
XStarSelection select_x_star(const FlowEnsemble& ens, const std::string& group,
                             double coord_floor);

// ---- named checks -------------------------------------------------------------

/// Uniformity of (||w0||_p + ||grad w0||_p) M^2 across an (M, N, p) sweep.
DiagnosticsReport check_lemma_initial_norms(std::span<const double> M_list,
                                            std::span<const int> N_list,
                                            std::span<const double> p_list, const GridSpec& grid);

/// Sup bounds of the double Riesz transforms along a run against
/// (5/4 + T C_T)^{(p-2)/p} C_T M^-2, plus the support-radius growth monitor and the
/// R11 + R22 = id cross-check. C_T is the running max of ||D eta|| supplied by the driver.
DiagnosticsReport check_riesz_bound(const Trajectory& traj, double C_T, double M, double p);

/// Decay slopes of ||d_j invLap beta_n||_inf and ||R_ij beta_n||_inf vs n
/// (expected -2 + 2/p), and uniformity of ||beta_n||_W1p / ||rho||_W1p.
DiagnosticsReport check_beta_bounds(std::span<const int> n_list, double p, Vec2 x_star,
                                    const GridSpec& grid);

/// The sqrt of int int cos^2(lambda x + lambda^2 c) over [-pi/6, pi/6]^2 against its
/// lower bound pi/(3 sqrt 2) for random admissible (lambda = 3m, c) pairs.
DiagnosticsReport check_carrier_constant(std::uint32_t pairs, std::uint64_t seed = 20240815);

/// Full/quadrant/sector values of the stagnation-point integral at t = 0 on a wide
/// box (default L = 16, n = 2048) with the adaptive-quadrature oracle cross-check.
DiagnosticsReport check_lambda_chain_t0(const ConstructionParams& params, double box_L = 16.0,
                                        std::uint32_t box_n = 2048);

/// Ordering full >= quadrant >= sector of the integral at the ensemble's current time.
/// The full value comes from R12 omega at the origin; the quadrant/sector values from
/// the stored node groups, whose weights must carry the factor omega0(x) (the
/// flow-structure driver folds it in when the groups are built).
DiagnosticsReport lambda_lower_bound(const Trajectory& traj, const FlowEnsemble& ens,
                                     std::size_t snap_idx);

/// Min/max of eta1/eta2 over sector seeds against M^-2 and M^2 (monitored).
DiagnosticsReport sector_ratio_monitor(const FlowEnsemble& ens, double M, double T);

/// Linearity of the flow response to a frozen divergence-free perturbation of the
/// steady cellular field (slope of sup-difference vs amplitude).
DiagnosticsReport check_comparison_linearity(std::span<const double> eps_list);

/// Growth statistic max ||D eta|| at t = M^-3 across an N sweep; monotone-trend verdict.
DiagnosticsReport gradient_growth_experiment(double M, std::span<const int> N_list, double p,
                                             const GridSpec& grid, const FlowOptions& flow,
                                             int threads = 1);

/// Time series of ||omega(t)||_W1p; K reported as the max (monitored).
DiagnosticsReport kato_ponce_monitor(const Trajectory& traj, double p);

/// The norm-inflation experiment: base run, x* policy, perturbed runs over n_list,
/// data-uniformity and inflation-ratio verdicts, the two product estimates, the
/// exact triangle split of the witness, and the theta_n comparison proxy.
DiagnosticsReport norm_inflation_experiment(const ExperimentConfig& cfg);

/// The preset flow-structure bundle: volume/axis/stagnation/sign invariants, the
/// exponential-diagonal reconstruction, ray reconstruction, the Jacobian
/// finite-difference cross-check, pullback conservation, the |int Lambda| monitor,
/// sector ratios and the Riesz sup bound along the run.
DiagnosticsReport flow_structure_check(const ExperimentConfig& cfg);

/// Spectral identity bundle on random mean-zero fields (R11 + R22 = id,
/// rot o biot_savart = id, div o biot_savart = 0).
DiagnosticsReport check_spectral_identities(std::uint32_t fields, std::uint32_t n,
                                            std::uint64_t seed = 7041776);

/// Steady-state bundle: cellular and shear equilibria under the full stepper.
DiagnosticsReport check_steady_states(std::uint32_t n, std::uint32_t steps, double dt);

/// Registry of the named standard checks the verify subcommand exposes.
using CheckFn = std::function<DiagnosticsReport(const ExperimentConfig&)>;
const std::map<std::string, CheckFn>& check_registry();

/// Deterministic band-limited random mean-zero field (test/check synthesizer).
ScalarField random_mean_zero_field(const GridSpec& grid, std::uint64_t seed,
                                   std::uint32_t max_mode = 0);

}  // namespace vil
