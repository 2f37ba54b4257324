#pragma once

#include <map>
#include <span>
#include <string>

#include "vil/velocity.hpp"

namespace vil {

struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
};

struct FdStencil {
  std::size_t base = 0;   // seed whose Jacobian the stencil checks
  std::size_t start = 0;  // four companions: x +- s e1, x +- s e2
  double spacing = 0.0;
};

/// Particle ensemble co-evolving positions eta(t,x), Jacobians D eta(t,x), the
/// accumulated integral of Lambda = R12 omega along trajectories, and the
/// quadrature remainder Bhat of the diagonal-exponential splitting.
class FlowEnsemble {
 public:
  explicit FlowEnsemble(double safe_radius) : safe_radius_(safe_radius) {}

  std::size_t add_seed(Vec2 x, double weight = 0.0);
  IndexRange add_group(const std::string& name, std::span<const Vec2> pts,
                       std::span<const double> weights = {});
  IndexRange add_origin();
  /// per_side x per_side uniform grid over [-radius, radius]^2, kept inside B(0, radius).
  IndexRange add_grid(std::uint32_t per_side, double radius);
  IndexRange add_axes(std::uint32_t per_axis, double extent);
  /// Composite-Simpson nodes r*tip for r in [0,1] (node count made odd, >= 33).
  IndexRange add_ray(Vec2 tip, std::uint32_t nodes);
  /// Central-difference companions (x +- s e_j) for every stride-th seed of base.
  IndexRange add_fd_stencils(IndexRange base, double spacing, std::uint32_t stride);

  /// RK4 advance to t_target in steps of dt (last step shortened). Samples Lambda and
  /// P D eta after every step to push the trapezoid clock of the splitting.
  void advance(VelocitySource& src, double t_target, double dt, int threads = 1);

  std::size_t size() const { return seeds_.size(); }
  double time() const { return t_; }
  bool clock_started() const { return clock_started_; }
  bool boundary_contaminated() const { return contaminated_; }

  const std::vector<Vec2>& seeds() const { return seeds_; }
  const std::vector<Vec2>& positions() const { return pos_; }
  const std::vector<Mat2>& jacobians() const { return jac_; }
  const std::vector<double>& lambda_integral() const { return lambda_int_; }
  const std::vector<Mat2>& bhat() const { return bhat_; }
  double weight(std::size_t i) const { return weights_[i]; }
  bool escaped(std::size_t i) const { return escaped_[i] != 0; }

  /// Diagonal part diag(e^{-I}, e^{+I}) from the accumulated integral.
  Mat2 exponential_part(std::size_t i) const;

  IndexRange group(const std::string& name) const;
  bool has_group(const std::string& name) const { return groups_.count(name) != 0; }
  const std::vector<FdStencil>& fd_stencils() const { return fd_; }

  /// Max over seeds of the max-abs-entry of D eta (the reported growth statistic).
  double max_jacobian_norm() const;
  /// Max over seeds of |det D eta - 1|.
  double max_det_defect() const;

 private:
  double safe_radius_;
  double t_ = 0.0;
  bool clock_started_ = false;
  bool contaminated_ = false;

  std::vector<Vec2> seeds_, pos_;
  std::vector<Mat2> jac_;
  std::vector<double> lambda_int_;
  std::vector<Mat2> bhat_;
  std::vector<double> weights_;
  std::vector<double> last_lambda_;
  std::vector<Mat2> last_pd_;
  std::vector<std::uint8_t> escaped_;
  std::map<std::string, IndexRange> groups_;
  std::vector<FdStencil> fd_;
};

struct DuhamelSplit {
  std::vector<Mat2> A;     // diag(e^{-I}, e^{+I}) per seed
  std::vector<Mat2> B;     // D eta - A (definition)
  std::vector<Mat2> Bhat;  // independently quadratured remainder
  double max_residual = 0.0;     // sup_i ||A + Bhat - D eta||
  double max_detA_defect = 0.0;  // sup_i |A11 A22 - 1|
};

/// Requires the clock history (advance must have run from t = 0).
DuhamelSplit duhamel_split(const FlowEnsemble& ens);

struct RayReconstruction {
  Vec2 a_tilde;
  Vec2 b_tilde;
  double residual = 0.0;  // |A~ + B~ - eta(tip)|
};

/// Simpson quadrature of D eta along the stored ray seeds against the tip label.
RayReconstruction ray_reconstruct(const FlowEnsemble& ens, const std::string& ray_group);

/// Conservation cross-check max_i |omega(t, eta(t,x_i)) - omega0(x_i)| / sup|omega0|
/// over the given seed group, via exact sampling of the terminal snapshot.
double inverse_pullback(const Trajectory& traj, const FlowEnsemble& ens,
                        const std::string& seed_group);

struct SignPreservation {
  double fraction = 1.0;  // first-quadrant seeds with eta_i >= -1e-8
  std::size_t checked = 0;
};

SignPreservation sign_preservation_check(const FlowEnsemble& ens, const std::string& seed_group,
                                         double tol = 1e-8);

struct ComparisonRow {
  double eps = 0.0;
  double lhs = 0.0;      // sup_t (max|xi - eta| + max ||D xi - D eta||)
  double lhs_pos = 0.0;  // position part alone
  double lhs_jac = 0.0;  // Jacobian part alone
  double rhs = 0.0;      // sup_t (sup|eps v| + sup ||eps Dv||)
};

struct ComparisonResult {
  std::vector<ComparisonRow> rows;
  double slope = 0.0;  // log-log slope of lhs vs eps
};

/// Flows of base and base + eps * pert from identical seeds; the perturbation sup
/// norms are measured on a probe grid over [-probe_extent, probe_extent]^2.
ComparisonResult comparison_experiment(VelocitySource& base, VelocitySource& pert, double T,
                                       std::span<const double> eps_list, double dt,
                                       std::uint32_t seed_per_side, double seed_extent,
                                       double probe_extent);

/// Least-squares slope of log(y) vs log(x) plus the fit R^2.
struct LogLogFit {
  double slope = 0.0;
  double r2 = 0.0;
};
LogLogFit loglog_fit(std::span<const double> x, std::span<const double> y);

}  // namespace vil
