#include <cmath>
#include <stdexcept>

#include "vil/diagnostics.hpp"
#include "vil/norms.hpp"
#include "vil/operators.hpp"

namespace vil {

namespace {

std::string fmt(double v) { return format_double(v); }

Verdict pass(bool ok) { return ok ? Verdict::holds : Verdict::violated; }

void require_inviscid(const SolverConfig& cfg, const char* who) {
  if (cfg.hyper_nu != 0.0)
    throw std::invalid_argument(std::string(who) +
                                ": lemma-verification runs require hyper_nu = 0");
}

bool beta_usable(const CarrierPerturbation& b, const GridSpec& g, bool dealias) {
  try {
    b.validate_geometry(g);
  } catch (const std::invalid_argument&) {
    return false;
  }
  const double cutoff = (dealias ? 2.0 / 3.0 : 1.0) * M_PI / g.h();
  return b.carrier_k() + 4.0 * b.lambda() <= cutoff;
}

// Velocity and velocity-gradient grids of a snapshot; entry-wise max differences
// feed the theta_n comparison proxy.
struct FieldSet {
  std::vector<double> u1, u2, r11, r12, r22;
};

FieldSet field_set(const Spectrum& w) {
  const Spectrum psi = spectral::poisson_multiplier(w);
  Spectrum mu1 = spectral::derivative(psi, 2);
  for (auto& c : mu1.coef) c = -c;
  FieldSet out;
  out.u1 = spectral::inverse_oversampled(mu1, 1);
  out.u2 = spectral::inverse_oversampled(spectral::derivative(psi, 1), 1);
  out.r11 = spectral::inverse_oversampled(spectral::riesz_multiplier(w, 1, 1), 1);
  out.r12 = spectral::inverse_oversampled(spectral::riesz_multiplier(w, 1, 2), 1);
  out.r22 = spectral::inverse_oversampled(spectral::riesz_multiplier(w, 2, 2), 1);
  return out;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

DiagnosticsReport norm_inflation_experiment(const ExperimentConfig& cfg) {
  DiagnosticsReport rep;
  const ConstructionParams& P = cfg.construction;
  P.validate();
  require_inviscid(cfg.solver, "norm_inflation_experiment");
  const double p = P.p;
  const double t0 = P.T_horizon;

  MultiScaleVorticity w0{P.M, P.N, P.N0, P.p, {}};
  const ScalarField f0 = w0.to_field(cfg.grid, ResolvePolicy::strict);

  SolverConfig base_cfg = cfg.solver;
  base_cfg.track_inverse_map = true;
  if (base_cfg.dt == 0.0) base_cfg.dt = 0.9 * admissible_dt(f0, cfg.solver.cfl);
  const Trajectory base = evolve(f0, t0, base_cfg);
  if (base.aborted) {
    rep.add("norm-inflation", "summary=base_run_aborted", 1.0, 0.0, Verdict::violated);
    return rep;
  }
  const std::size_t last = base.snaps.size() - 1;

  // x* policy: argmax of |d2 eta2| over the seed grid of a prior flow run unless
  // overridden, with the coordinate floor keeping the support balls disjoint.
  TrajectoryVelocity vel(base, cfg.flow.oversample);
  FlowEnsemble ens(0.45 * cfg.grid.L);
  ens.add_grid(cfg.flow.seed_grid, cfg.flow.seed_radius);
  const double snap_dt = base.snaps.size() > 1 ? base.snaps[1].t - base.snaps[0].t : t0;
  ens.advance(vel, t0, snap_dt, cfg.threads);

  XStarSelection sel;
  if (P.x_star) {
    sel.x_star = *P.x_star;
    sel.delta = P.delta.value_or(0.1);
    sel.jac_value = 0.0;
  } else {
    sel = select_x_star(ens, "grid", cfg.flow.xstar_floor);
  }
  rep.add("norm-inflation", "summary=xstar1", sel.x_star.x, 0.0, Verdict::monitored);
  rep.add("norm-inflation", "summary=xstar2", sel.x_star.y, 0.0, Verdict::monitored);
  rep.add("norm-inflation", "summary=delta", sel.delta, 0.0, Verdict::monitored);
  rep.add("norm-inflation", "summary=jac_at_xstar", sel.jac_value, P.M, Verdict::monitored);

  const PullbackJacobian pj = pullback_jacobian(base, last);

  const double base_w1p_data = sobolev_norm(f0, w0.gradient_field(cfg.grid), p);
  const double base_w1p_t0 = sobolev_norm(base.omega(last), p);
  rep.add("norm-inflation", "summary=base_w1p_data", base_w1p_data, 0.0, Verdict::monitored);
  rep.add("norm-inflation", "summary=base_w1p_t0", base_w1p_t0, 0.0, Verdict::monitored);

  std::vector<int> ns = cfg.sweep_n_pert;
  if (ns.empty()) ns = {1, 2, 3, 4, 5, 6, 7, 8};

  std::vector<double> used_n, data_norms, product1_series;
  double largest_ratio = 0.0;
  int largest_n = 0;
  double triangle_worst = 0.0;
  double twopath_worst = 0.0;
  CarrierPerturbation largest_beta{p, 1, sel.x_star, BumpProfile{BumpProfile::Kind::plateau}};

  const FieldSet base_terminal = field_set(base.snaps[last].omega_hat);

  for (int n : ns) {
    CarrierPerturbation b{p, n, sel.x_star, BumpProfile{BumpProfile::Kind::plateau}};
    if (!beta_usable(b, cfg.grid, cfg.solver.dealias)) {
      rep.add("norm-inflation", "n=" + fmt(n) + ";skipped=unresolvable", 0.0, 0.0,
              Verdict::monitored);
      continue;
    }
    const ScalarField bf = b.to_field(cfg.grid);
    const ScalarField f0n = omega0n(f0, bf);

    VectorField grad_data = w0.gradient_field(cfg.grid);
    {
      const VectorField gb = b.gradient_field(cfg.grid);
      for (std::size_t q = 0; q < grad_data.u1.size(); ++q) {
        grad_data.u1.values()[q] += gb.u1.values()[q];
        grad_data.u2.values()[q] += gb.u2.values()[q];
      }
    }
    const double w1p_data = sobolev_norm(f0n, grad_data, p);
    rep.add("norm-inflation", "n=" + fmt(n) + ";series=data_w1p", w1p_data, 0.0,
            Verdict::monitored);

    SolverConfig pcfg = cfg.solver;
    pcfg.track_inverse_map = false;
    pcfg.dt = base_cfg.dt;
    const Trajectory tn = evolve(f0n, t0, pcfg);
    if (tn.aborted) {
      rep.add("norm-inflation", "n=" + fmt(n) + ";summary=run_aborted", 1.0, 0.0,
              Verdict::violated);
      continue;
    }
    const double w1p_t0 = sobolev_norm(tn.omega(tn.snaps.size() - 1), p);
    const double ratio = w1p_t0 / base_w1p_t0;
    rep.add("norm-inflation", "n=" + fmt(n) + ";series=w1p_t0", w1p_t0, 0.0, Verdict::monitored);
    rep.add("norm-inflation", "n=" + fmt(n) + ";series=inflation_ratio", ratio, 1.5,
            Verdict::monitored);

    // Witness ||d beta_n (perp-grad eta2)||_p via the change-of-variables route: the
    // integrand composed with the back-map alpha is a plain grid field.
    const GridSpec& g = cfg.grid;
    ScalarField W1(g), W2(g), direct(g);
    for (std::uint32_t i = 0; i < g.n; ++i)
      for (std::uint32_t j = 0; j < g.n; ++j) {
        const Vec2 z = g.point(i, j);
        const Vec2 label{z.x + pj.alpha_disp.u1.at(i, j), z.y + pj.alpha_disp.u2.at(i, j)};
        if (!b.in_support(label)) continue;
        const Vec2 gb = b.grad(label);
        const double w1 = gb.x * pj.e22.at(i, j);
        const double w2 = gb.y * pj.e21.at(i, j);
        W1.at(i, j) = w1;
        W2.at(i, j) = w2;
        direct.at(i, j) = -w1 + w2;
      }
    ScalarField split_combo(g);
    for (std::size_t q = 0; q < split_combo.size(); ++q)
      split_combo.values()[q] = -W1.values()[q] + W2.values()[q];

    const double witness_direct = lp_norm(direct, p);
    const double witness_split = lp_norm(split_combo, p);
    const double n1 = lp_norm(W1, p);
    const double n2 = lp_norm(W2, p);
    const double twopath =
        std::abs(witness_direct - witness_split) / std::max(witness_direct, 1e-300);
    twopath_worst = std::max(twopath_worst, twopath);
    const double triangle_slack = witness_direct - (n1 - n2);
    triangle_worst = std::min(triangle_worst, triangle_slack);

    rep.add("norm-inflation", "n=" + fmt(n) + ";series=witness", witness_direct, 0.0,
            Verdict::monitored);
    rep.add("norm-inflation", "n=" + fmt(n) + ";series=product_d1beta_d2eta2", n1,
            P.M * std::sqrt(b.carrier_k()) / b.lambda(), Verdict::monitored);
    rep.add("norm-inflation", "n=" + fmt(n) + ";series=product_d2beta_d1eta2", n2, 0.0,
            Verdict::monitored);

    // theta_n proxy sup_t (|u_n - u|_inf + ||Du_n - Du||_inf) over shared snapshots.
    double theta = 0.0;
    const std::size_t common = std::min(base.snaps.size(), tn.snaps.size());
    for (std::size_t si = 0; si < common; ++si) {
      const FieldSet a = si + 1 == common ? base_terminal : field_set(base.snaps[si].omega_hat);
      const FieldSet c = field_set(tn.snaps[si].omega_hat);
      const double du = std::max(max_abs_diff(a.u1, c.u1), max_abs_diff(a.u2, c.u2));
      const double dg = std::max({max_abs_diff(a.r11, c.r11), max_abs_diff(a.r12, c.r12),
                                  max_abs_diff(a.r22, c.r22)});
      theta = std::max(theta, du + dg);
    }
    rep.add("norm-inflation", "n=" + fmt(n) + ";series=theta_proxy", theta, 0.0,
            Verdict::monitored);

    used_n.push_back(n);
    data_norms.push_back(w1p_data);
    product1_series.push_back(n2);
    if (n > largest_n) {
      largest_n = n;
      largest_ratio = ratio;
      largest_beta = b;
    }
  }

  if (used_n.empty()) {
    rep.add("norm-inflation", "summary=no_resolvable_n", 1.0, 0.0, Verdict::violated);
    rep.sort();
    return rep;
  }

  // Particle-route cross-check of the product norm for the largest resolvable n.
  {
    const CarrierPerturbation& b = largest_beta;
    const double r = 2.0 / b.lambda();
    std::vector<Vec2> nodes;
    std::vector<double> wts;
    const std::uint32_t m = 48;
    for (int e1 = -1; e1 <= 1; e1 += 2)
      for (int e2 = -1; e2 <= 1; e2 += 2) {
        const Vec2 c{e1 * b.x_star.x, e2 * b.x_star.y};
        const double cell = 2.0 * r / m;
        for (std::uint32_t i = 0; i < m; ++i)
          for (std::uint32_t j = 0; j < m; ++j) {
            nodes.push_back({c.x - r + (i + 0.5) * cell, c.y - r + (j + 0.5) * cell});
            wts.push_back(cell * cell);
          }
      }
    FlowEnsemble bens(0.45 * cfg.grid.L);
    bens.add_group("beta", nodes, wts);
    bens.advance(vel, t0, snap_dt, cfg.threads);
    double acc = 0.0;
    const IndexRange br = bens.group("beta");
    for (std::size_t i = br.begin; i < br.end; ++i) {
      const Vec2 gb = b.grad(bens.seeds()[i]);
      acc += bens.weight(i) * std::pow(std::abs(gb.x * bens.jacobians()[i].d), p);
    }
    const double particle_norm = std::pow(acc, 1.0 / p);
    // Grid route for the same n (recompute; labels are exact there).
    double grid_norm = 0.0;
    {
      const GridSpec& g = cfg.grid;
      double s = 0.0;
      for (std::uint32_t i = 0; i < g.n; ++i)
        for (std::uint32_t j = 0; j < g.n; ++j) {
          const Vec2 z = g.point(i, j);
          const Vec2 label{z.x + pj.alpha_disp.u1.at(i, j), z.y + pj.alpha_disp.u2.at(i, j)};
          if (!b.in_support(label)) continue;
          s += std::pow(std::abs(b.grad(label).x * pj.e22.at(i, j)), p);
        }
      grid_norm = std::pow(g.h() * g.h() * s, 1.0 / p);
    }
    const double rel = std::abs(particle_norm - grid_norm) / std::max(grid_norm, 1e-300);
    rep.add("norm-inflation", "summary=route_crosscheck", rel, 0.0, pass(rel <= 0.01), 0.01);
  }

  const auto [dlo, dhi] = std::minmax_element(data_norms.begin(), data_norms.end());
  rep.add("norm-inflation", "summary=data_w1p_uniformity", *dhi / *dlo, 2.0,
          pass(*dhi / *dlo <= 2.0), 2.0);
  rep.add("norm-inflation", "summary=inflation_ratio_largest_n", largest_ratio, 1.5,
          pass(largest_ratio >= 1.5), 1.5);
  rep.add("norm-inflation", "summary=triangle_split_slack", triangle_worst, 0.0,
          pass(triangle_worst >= -1e-12), 1e-12);
  rep.add("norm-inflation", "summary=witness_two_paths", twopath_worst, 0.0,
          pass(twopath_worst <= 1e-6), 1e-6);
  if (used_n.size() >= 3) {
    const LogLogFit fit = loglog_fit(used_n, product1_series);
    rep.add("norm-inflation", "summary=product_decay_slope", fit.slope, -1.0,
            pass(fit.slope <= -0.8), 0.8);
  } else {
    rep.add("norm-inflation", "summary=product_decay_slope_skipped", double(used_n.size()), 3.0,
            Verdict::monitored);
  }
  rep.sort();
  return rep;
}

DiagnosticsReport flow_structure_check(const ExperimentConfig& cfg) {
  DiagnosticsReport rep;
  const ConstructionParams& P = cfg.construction;
  P.validate();
  require_inviscid(cfg.solver, "flow_structure_check");
  const double T = P.T_horizon;

  MultiScaleVorticity w0{P.M, P.N, P.N0, P.p, {}};
  const ScalarField f0 = w0.to_field(cfg.grid, ResolvePolicy::strict);
  SolverConfig scfg = cfg.solver;
  scfg.track_inverse_map = false;
  const Trajectory traj = evolve(f0, T, scfg);
  if (traj.aborted) {
    rep.add("flow-structure", "summary=solver_aborted", 1.0, 0.0, Verdict::violated);
    return rep;
  }

  TrajectoryVelocity vel(traj, cfg.flow.oversample);
  FlowEnsemble ens(0.45 * cfg.grid.L);
  const IndexRange origin_r = ens.add_origin();
  const IndexRange grid_r = ens.add_grid(cfg.flow.seed_grid, cfg.flow.seed_radius);
  ens.add_axes(cfg.flow.axis_seeds, cfg.flow.seed_radius);
  // Quadrature groups carry weight * omega0(x) so the integral reductions stay cheap.
  {
    QuadratureNodes q = quadrant_support_nodes(w0, cfg.flow.quad_nodes);
    for (std::size_t i = 0; i < q.w.size(); ++i) q.w[i] *= w0(q.pts[i]);
    ens.add_group("quadrant", q.pts, q.w);
    QuadratureNodes s = sector_support_nodes(w0, cfg.flow.quad_nodes);
    for (std::size_t i = 0; i < s.w.size(); ++i) s.w[i] *= w0(s.pts[i]);
    ens.add_group("sector", s.pts, s.w);
  }
  ens.add_ray(cfg.flow.ray_tip, cfg.flow.ray_nodes);
  ens.add_fd_stencils(grid_r, cfg.flow.fd_spacing_cells * cfg.grid.h(), cfg.flow.fd_stride);

  double C_T = 1.0;
  for (std::size_t j = 1; j < traj.snaps.size(); ++j) {
    const double dt_step = traj.snaps[j].t - traj.snaps[j - 1].t;
    ens.advance(vel, traj.snaps[j].t, dt_step, cfg.threads);
    C_T = std::max(C_T, ens.max_jacobian_norm());
    rep.merge(sector_ratio_monitor(ens, P.M, T));
  }

  rep.add("flow-structure", "summary=det_drift", ens.max_det_defect(), 0.0,
          pass(ens.max_det_defect() <= 1e-6), 1e-6);
  const double stagnation = ens.positions()[origin_r.begin].norm();
  rep.add("flow-structure", "summary=stagnation_defect", stagnation, 0.0,
          pass(stagnation <= 1e-8), 1e-8);

  double axis_defect = 0.0;
  const IndexRange ax = ens.group("axes");
  for (std::size_t i = ax.begin; i < ax.end; ++i) {
    const Vec2 seed = ens.seeds()[i];
    const Vec2 pos = ens.positions()[i];
    if (seed.y == 0.0) axis_defect = std::max(axis_defect, std::abs(pos.y));
    if (seed.x == 0.0) axis_defect = std::max(axis_defect, std::abs(pos.x));
  }
  rep.add("flow-structure", "summary=axis_defect", axis_defect, 0.0, pass(axis_defect <= 1e-8),
          1e-8);

  const SignPreservation sp = sign_preservation_check(ens, "grid");
  rep.add("flow-structure", "summary=sign_preservation_fraction", sp.fraction, 1.0,
          pass(sp.fraction == 1.0), 0.0);

  const DuhamelSplit ds = duhamel_split(ens);
  rep.add("flow-structure", "summary=duhamel_residual", ds.max_residual, 0.0,
          pass(ds.max_residual <= 1e-5), 1e-5);
  rep.add("flow-structure", "summary=detA_defect", ds.max_detA_defect, 0.0,
          pass(ds.max_detA_defect <= 1e-8), 1e-8);

  const RayReconstruction rr = ray_reconstruct(ens, "ray");
  const double ray_rel = rr.residual / cfg.flow.ray_tip.norm();
  rep.add("flow-structure", "summary=ray_residual", ray_rel, 0.0, pass(ray_rel <= 1e-5), 1e-5);

  double fd_worst = 0.0;
  for (const FdStencil& st : ens.fd_stencils()) {
    if (ens.escaped(st.base)) continue;
    const Vec2 px = ens.positions()[st.start];
    const Vec2 mx = ens.positions()[st.start + 1];
    const Vec2 py = ens.positions()[st.start + 2];
    const Vec2 my = ens.positions()[st.start + 3];
    const double inv = 1.0 / (2.0 * st.spacing);
    const Mat2 fd{(px.x - mx.x) * inv, (py.x - my.x) * inv, (px.y - mx.y) * inv,
                  (py.y - my.y) * inv};
    const Mat2 ode = ens.jacobians()[st.base];
    fd_worst = std::max(fd_worst, (ode - fd).max_abs_entry() / ode.max_abs_entry());
  }
  rep.add("flow-structure", "summary=jacobian_fd_crosscheck", fd_worst, 0.0,
          pass(fd_worst <= 0.05), 0.05);

  const double pull = inverse_pullback(traj, ens, "grid");
  rep.add("flow-structure", "summary=pullback_defect", pull, 0.0, pass(pull <= 1e-2), 1e-2);

  double max_lambda_int = 0.0;
  for (double v : ens.lambda_integral()) max_lambda_int = std::max(max_lambda_int, std::abs(v));
  rep.add("flow-structure", "summary=lambda_integral_vs_log2M", max_lambda_int,
          std::log(2.0 * P.M), Verdict::monitored);
  rep.add("flow-structure", "summary=max_jacobian_norm", C_T, P.M, Verdict::monitored);
  rep.add("flow-structure", "summary=boundary_contaminated",
          ens.boundary_contaminated() ? 1.0 : 0.0, 0.0, pass(!ens.boundary_contaminated()));

  rep.merge(lambda_lower_bound(traj, ens, traj.snaps.size() - 1));
  rep.merge(check_riesz_bound(traj, C_T, P.M, P.p));
  rep.merge(kato_ponce_monitor(traj, P.p));

  // Conservation drifts along the run.
  const auto series = conservation_series(traj);
  std::map<std::string, std::pair<double, double>> range;
  for (const auto& s : series) {
    auto it = range.find(s.name);
    if (it == range.end())
      range.emplace(s.name, std::make_pair(s.value, s.value));
    else {
      it->second.first = std::min(it->second.first, s.value);
      it->second.second = std::max(it->second.second, s.value);
    }
  }
  auto drift_row = [&](const std::string& name, double tol) {
    const auto& mm = range.at(name);
    const double drift = (mm.second - mm.first) / std::max(std::abs(mm.second), 1e-300);
    rep.add("flow-structure", "summary=drift_" + name, drift, 0.0, pass(drift <= tol), tol);
  };
  drift_row("sup_omega", 1e-3);
  drift_row("lp_omega_p2", 1e-3);
  drift_row("lp_omega_p2.5", 1e-3);
  drift_row("lp_omega_p3", 1e-3);
  drift_row("energy", 1e-6);
  const double parity_worst =
      std::max(range.at("parity_odd1").second, range.at("parity_odd2").second);
  rep.add("flow-structure", "summary=parity_defect", parity_worst, 0.0,
          pass(parity_worst <= 1e-8), 1e-8);
  rep.add("flow-structure", "summary=boundary_frame_sup", range.at("boundary_frame_sup").second,
          0.0, pass(range.at("boundary_frame_sup").second <= 1e-10), 1e-10);

  rep.sort();
  return rep;
}

const std::map<std::string, CheckFn>& check_registry() {
  static const std::map<std::string, CheckFn> registry = {
      {"spectral-identities",
       [](const ExperimentConfig&) { return check_spectral_identities(20, 256); }},
      {"steady-states",
       [](const ExperimentConfig&) { return check_steady_states(256, 100, 1e-3); }},
      {"initial-norm-uniformity",
       [](const ExperimentConfig& cfg) {
         const std::vector<double> Ms = cfg.sweep_M.empty() ? std::vector<double>{2, 3, 4}
                                                            : cfg.sweep_M;
         const std::vector<int> Ns =
             cfg.sweep_N.empty() ? std::vector<int>{1, 2, 3, 4, 5} : cfg.sweep_N;
         const std::vector<double> ps =
             cfg.sweep_p.empty() ? std::vector<double>{2.1, 2.5, 3.0} : cfg.sweep_p;
         return check_lemma_initial_norms(Ms, Ns, ps, cfg.grid);
       }},
      {"perturbation-bound-slopes",
       [](const ExperimentConfig& cfg) {
         std::vector<int> ns = cfg.sweep_n_pert;
         if (ns.empty()) ns = {1, 2, 3, 4, 5, 6, 7, 8};
         const Vec2 xs = cfg.construction.x_star.value_or(Vec2{0.5, 0.5});
         return check_beta_bounds(ns, cfg.construction.p, xs, cfg.grid);
       }},
      {"carrier-quadrature-constant",
       [](const ExperimentConfig&) { return check_carrier_constant(10); }},
      {"stagnation-integral-chain",
       [](const ExperimentConfig& cfg) { return check_lambda_chain_t0(cfg.construction); }},
      {"flow-comparison-linearity",
       [](const ExperimentConfig&) {
         const std::vector<double> eps{1e-2, 5e-3, 2.5e-3};
         return check_comparison_linearity(eps);
       }},
      {"flow-structure", flow_structure_check},
      {"norm-inflation", norm_inflation_experiment},
      {"gradient-growth",
       [](const ExperimentConfig& cfg) {
         // N = 5 needs h <= 2^-9; the default trend runs the strictly resolved
         // N <= 4 range on an L = 4 grid (same h as the preset).
         const GridSpec g(4.0, 1024);
         FlowOptions f = cfg.flow;
         f.seed_grid = 32;
         const std::vector<int> Ns{1, 2, 3, 4};
         return gradient_growth_experiment(cfg.construction.M, Ns, cfg.construction.p, g, f,
                                           cfg.threads);
       }},
  };
  return registry;
}

}  // namespace vil
