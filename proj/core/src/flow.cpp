#include "vil/flow.hpp"

#include <cmath>
#include <stdexcept>

#include "vil/norms.hpp"
#include "vil/parallel.hpp"

namespace vil {

std::size_t FlowEnsemble::add_seed(Vec2 x, double weight) {
  seeds_.push_back(x);
  pos_.push_back(x);
  jac_.push_back(Mat2::identity());
  lambda_int_.push_back(0.0);
  bhat_.push_back(Mat2{});
  weights_.push_back(weight);
  last_lambda_.push_back(0.0);
  last_pd_.push_back(Mat2{});
  escaped_.push_back(0);
  return seeds_.size() - 1;
}

IndexRange FlowEnsemble::add_group(const std::string& name, std::span<const Vec2> pts,
                                   std::span<const double> weights) {
  if (clock_started_) throw std::logic_error("FlowEnsemble: cannot add seeds after advancing");
  if (!weights.empty() && weights.size() != pts.size())
    throw std::invalid_argument("FlowEnsemble: weights size mismatch");
  IndexRange r{seeds_.size(), seeds_.size()};
  for (std::size_t i = 0; i < pts.size(); ++i)
    add_seed(pts[i], weights.empty() ? 0.0 : weights[i]);
  r.end = seeds_.size();
  groups_[name] = r;
  return r;
}

IndexRange FlowEnsemble::add_origin() {
  const Vec2 o{0.0, 0.0};
  return add_group("origin", std::span<const Vec2>(&o, 1));
}

IndexRange FlowEnsemble::add_grid(std::uint32_t per_side, double radius) {
  std::vector<Vec2> pts;
  pts.reserve(std::size_t(per_side) * per_side);
  for (std::uint32_t i = 0; i < per_side; ++i) {
    const double x = -radius + 2.0 * radius * (i + 0.5) / per_side;
    for (std::uint32_t j = 0; j < per_side; ++j) {
      const double y = -radius + 2.0 * radius * (j + 0.5) / per_side;
      if (x * x + y * y <= radius * radius) pts.push_back({x, y});
    }
  }
  return add_group("grid", pts);
}

IndexRange FlowEnsemble::add_axes(std::uint32_t per_axis, double extent) {
  std::vector<Vec2> pts;
  for (std::uint32_t i = 1; i <= per_axis; ++i) {
    const double s = extent * i / per_axis;
    pts.push_back({s, 0.0});
    pts.push_back({-s, 0.0});
    pts.push_back({0.0, s});
    pts.push_back({0.0, -s});
  }
  return add_group("axes", pts);
}

IndexRange FlowEnsemble::add_ray(Vec2 tip, std::uint32_t nodes) {
  if (nodes < 33) nodes = 33;
  if (nodes % 2 == 0) ++nodes;
  std::vector<Vec2> pts;
  std::vector<double> w;
  const double hr = 1.0 / (nodes - 1);
  for (std::uint32_t q = 0; q < nodes; ++q) {
    const double r = q * hr;
    pts.push_back(tip * r);
    double wq = (q == 0 || q + 1 == nodes) ? 1.0 : (q % 2 == 1 ? 4.0 : 2.0);
    w.push_back(wq * hr / 3.0);
  }
  return add_group("ray", pts, w);
}

IndexRange FlowEnsemble::add_fd_stencils(IndexRange base, double spacing, std::uint32_t stride) {
  std::vector<Vec2> pts;
  std::vector<FdStencil> meta;
  for (std::size_t i = base.begin; i < base.end; i += stride) {
    meta.push_back({i, seeds_.size() + pts.size(), spacing});
    const Vec2 x = seeds_[i];
    pts.push_back({x.x + spacing, x.y});
    pts.push_back({x.x - spacing, x.y});
    pts.push_back({x.x, x.y + spacing});
    pts.push_back({x.x, x.y - spacing});
  }
  const IndexRange r = add_group("fd", pts);
  fd_ = std::move(meta);
  return r;
}

Mat2 FlowEnsemble::exponential_part(std::size_t i) const {
  return Mat2::diag(std::exp(-lambda_int_[i]), std::exp(lambda_int_[i]));
}

IndexRange FlowEnsemble::group(const std::string& name) const {
  auto it = groups_.find(name);
  if (it == groups_.end()) throw std::out_of_range("FlowEnsemble: no seed group " + name);
  return it->second;
}

double FlowEnsemble::max_jacobian_norm() const {
  double m = 0.0;
  for (const Mat2& j : jac_) m = std::max(m, j.max_abs_entry());
  return m;
}

double FlowEnsemble::max_det_defect() const {
  double m = 0.0;
  for (const Mat2& j : jac_) m = std::max(m, std::abs(j.det() - 1.0));
  return m;
}

namespace {
// Lambda := G22 and P := G - diag(-G22, G22); exact for traceless G.
inline double lambda_of(const Mat2& g) { return g.d; }
inline Mat2 p_of(const Mat2& g) { return {g.a + g.d, g.b, g.c, 0.0}; }
}  // namespace

void FlowEnsemble::advance(VelocitySource& src, double t_target, double dt, int threads) {
  if (!(dt > 0.0)) throw std::invalid_argument("FlowEnsemble::advance: dt must be positive");
  const std::size_t n = seeds_.size();

  if (!clock_started_) {
    src.prepare(t_);
    parallel_for(n, threads, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        const Mat2 g = src.velocity_grad(t_, pos_[i]);
        last_lambda_[i] = lambda_of(g);
        last_pd_[i] = p_of(g) * jac_[i];
      }
    });
    clock_started_ = true;
  }

  std::vector<Vec2> k_pos(n), acc_pos(n);
  std::vector<Mat2> k_jac(n), acc_jac(n);

  while (t_ < t_target - 1e-14) {
    const double h = std::min(dt, t_target - t_);
    const double stage_t[4] = {t_, t_ + 0.5 * h, t_ + 0.5 * h, t_ + h};
    const double stage_c[4] = {0.0, 0.5 * h, 0.5 * h, h};
    const double comb[4] = {h / 6.0, h / 3.0, h / 3.0, h / 6.0};

    for (std::size_t i = 0; i < n; ++i) {
      acc_pos[i] = {0.0, 0.0};
      acc_jac[i] = Mat2{};
    }

    for (int s = 0; s < 4; ++s) {
      src.prepare(stage_t[s]);
      parallel_for(n, threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
          const Vec2 p = s == 0 ? pos_[i] : pos_[i] + stage_c[s] * k_pos[i];
          const Mat2 j = s == 0 ? jac_[i] : jac_[i] + stage_c[s] * k_jac[i];
          k_pos[i] = src.velocity(stage_t[s], p);
          k_jac[i] = src.velocity_grad(stage_t[s], p) * j;
          acc_pos[i] += comb[s] * k_pos[i];
          acc_jac[i] += comb[s] * k_jac[i];
        }
      });
    }

    t_ += h;
    src.prepare(t_);
    parallel_for(n, threads, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        pos_[i] += acc_pos[i];
        jac_[i] += acc_jac[i];
        if (pos_[i].norm_inf() > safe_radius_) escaped_[i] = 1;

        const Mat2 g = src.velocity_grad(t_, pos_[i]);
        const double lam = lambda_of(g);
        const Mat2 pd = p_of(g) * jac_[i];
        const double dI = 0.5 * h * (last_lambda_[i] + lam);
        lambda_int_[i] += dI;
        const double em = std::exp(-dI), ep = std::exp(dI);
        Mat2& B = bhat_[i];
        // Row scaling by the interval exponential, then the trapezoid increment.
        B = Mat2{em * B.a, em * B.b, ep * B.c, ep * B.d};
        const Mat2& P0 = last_pd_[i];
        B += Mat2{0.5 * h * (em * P0.a + pd.a), 0.5 * h * (em * P0.b + pd.b),
                  0.5 * h * (ep * P0.c + pd.c), 0.5 * h * (ep * P0.d + pd.d)};
        last_lambda_[i] = lam;
        last_pd_[i] = pd;
      }
    });
  }

  for (std::size_t i = 0; i < n; ++i)
    if (escaped_[i]) contaminated_ = true;
}

DuhamelSplit duhamel_split(const FlowEnsemble& ens) {
  if (!ens.clock_started())
    throw std::logic_error("duhamel_split: missing history (ensemble never advanced)");
  const std::size_t n = ens.size();
  DuhamelSplit out;
  out.A.resize(n);
  out.B.resize(n);
  out.Bhat.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.A[i] = ens.exponential_part(i);
    out.B[i] = ens.jacobians()[i] - out.A[i];
    out.Bhat[i] = ens.bhat()[i];
    const Mat2 res = out.A[i] + out.Bhat[i] - ens.jacobians()[i];
    out.max_residual = std::max(out.max_residual, res.max_abs_entry());
    out.max_detA_defect = std::max(out.max_detA_defect, std::abs(out.A[i].det() - 1.0));
  }
  return out;
}

RayReconstruction ray_reconstruct(const FlowEnsemble& ens, const std::string& ray_group) {
  const IndexRange r = ens.group(ray_group);
  if (r.size() < 33) throw std::invalid_argument("ray_reconstruct: need >= 33 ray nodes");
  for (std::size_t i = r.begin; i < r.end; ++i)
    if (ens.escaped(i)) throw std::runtime_error("ray_reconstruct: ray exits the box margin");
  const Vec2 tip_label = ens.seeds()[r.end - 1];
  RayReconstruction out;
  for (std::size_t i = r.begin; i < r.end; ++i) {
    const double w = ens.weight(i);
    const Mat2 A = ens.exponential_part(i);
    const Mat2 B = ens.jacobians()[i] - A;
    out.a_tilde += w * (A * tip_label);
    out.b_tilde += w * (B * tip_label);
  }
  const Vec2 res = out.a_tilde + out.b_tilde - ens.positions()[r.end - 1];
  out.residual = res.norm();
  return out;
}

double inverse_pullback(const Trajectory& traj, const FlowEnsemble& ens,
                        const std::string& seed_group) {
  const IndexRange r = ens.group(seed_group);
  const ScalarField w0 = traj.omega(0);
  const ScalarField wt = traj.omega(traj.snaps.size() - 1);
  const spectral::ExactSampler s0(w0);
  const spectral::ExactSampler st(wt);
  const double scale = sup_norm(w0);
  if (scale == 0.0) return 0.0;
  double defect = 0.0;
  const GridSpec& g = traj.grid;
  for (std::size_t i = r.begin; i < r.end; ++i) {
    const double a = st(g.fold(ens.positions()[i]));
    const double b = s0(g.fold(ens.seeds()[i]));
    defect = std::max(defect, std::abs(a - b));
  }
  return defect / scale;
}

SignPreservation sign_preservation_check(const FlowEnsemble& ens, const std::string& seed_group,
                                         double tol) {
  const IndexRange r = ens.group(seed_group);
  SignPreservation out;
  std::size_t ok = 0;
  for (std::size_t i = r.begin; i < r.end; ++i) {
    const Vec2 x = ens.seeds()[i];
    if (x.x < 0.0 || x.y < 0.0) continue;
    ++out.checked;
    const Vec2 p = ens.positions()[i];
    if (p.x >= -tol && p.y >= -tol) ++ok;
  }
  out.fraction = out.checked == 0 ? 1.0 : static_cast<double>(ok) / out.checked;
  return out;
}

LogLogFit loglog_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("loglog_fit: need >= 2 matching points");
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  const double denom = n * sxx - sx * sx;
  LogLogFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  const double ss_tot = syy - sy * sy / n;
  const double ss_res = ss_tot - fit.slope * (sxy - sx * sy / n);
  fit.r2 = ss_tot <= 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return fit;
}

ComparisonResult comparison_experiment(VelocitySource& base, VelocitySource& pert, double T,
                                       std::span<const double> eps_list, double dt,
                                       std::uint32_t seed_per_side, double seed_extent,
                                       double probe_extent) {
  std::vector<Vec2> probes;
  for (std::uint32_t i = 0; i < 48; ++i)
    for (std::uint32_t j = 0; j < 48; ++j)
      probes.push_back({-probe_extent + 2.0 * probe_extent * (i + 0.5) / 48,
                        -probe_extent + 2.0 * probe_extent * (j + 0.5) / 48});

  ComparisonResult out;
  const std::uint64_t steps = static_cast<std::uint64_t>(std::ceil(T / dt - 1e-12));
  const double h = T / static_cast<double>(steps);

  for (double eps : eps_list) {
    SuperposedVelocity mixed(base, pert, eps);
    FlowEnsemble ref(1e18), per(1e18);
    ref.add_grid(seed_per_side, seed_extent);
    per.add_grid(seed_per_side, seed_extent);

    double lhs = 0.0, lhs_pos = 0.0, lhs_jac = 0.0, rhs = 0.0;
    for (std::uint64_t s = 0; s < steps; ++s) {
      const double t1 = h * static_cast<double>(s + 1);
      ref.advance(base, t1, h);
      per.advance(mixed, t1, h);
      double dpos = 0.0, djac = 0.0;
      for (std::size_t i = 0; i < ref.size(); ++i) {
        dpos = std::max(dpos, (per.positions()[i] - ref.positions()[i]).norm_inf());
        djac = std::max(djac, (per.jacobians()[i] - ref.jacobians()[i]).max_abs_entry());
      }
      lhs = std::max(lhs, dpos + djac);
      lhs_pos = std::max(lhs_pos, dpos);
      lhs_jac = std::max(lhs_jac, djac);
      pert.prepare(t1);
      double vmax = 0.0, dvmax = 0.0;
      for (const Vec2& q : probes) {
        vmax = std::max(vmax, pert.velocity(t1, q).norm_inf());
        dvmax = std::max(dvmax, pert.velocity_grad(t1, q).max_abs_entry());
      }
      rhs = std::max(rhs, eps * (vmax + dvmax));
    }
    out.rows.push_back({eps, lhs, lhs_pos, lhs_jac, rhs});
  }

  std::vector<double> xs, ys;
  for (const auto& r : out.rows) {
    xs.push_back(r.eps);
    ys.push_back(std::max(r.lhs, 1e-300));
  }
  out.slope = loglog_fit(xs, ys).slope;
  return out;
}

}  // namespace vil
