#include "vil/runner.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "vil/diagnostics.hpp"
#include "vil/initial_data.hpp"
#include "vil/norms.hpp"
#include "vil/snapshot_io.hpp"

namespace vil {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void stage_error(const std::string& stage, const std::exception& e) {
  throw std::runtime_error(stage + ": " + e.what());
}

std::string zero_pad(std::uint64_t v, int width) {
  std::ostringstream ss;
  ss << std::setw(width) << std::setfill('0') << v;
  return ss.str();
}

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string());
}

ScalarField build_omega0_field(const ExperimentConfig& cfg) {
  MultiScaleVorticity w0{cfg.construction.M, cfg.construction.N, cfg.construction.N0,
                         cfg.construction.p, {}};
  return w0.to_field(cfg.grid, ResolvePolicy::strict);
}

}  // namespace

std::string sha256_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("manifest: cannot open " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (is) {
    is.read(buf, sizeof buf);
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(is.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i)
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return hex.str();
}

void write_manifest(const fs::path& out_dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(out_dir)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().filename() == "manifest.json") continue;
    files.push_back(fs::relative(entry.path(), out_dir));
  }
  std::sort(files.begin(), files.end());
  std::ofstream os(out_dir / "manifest.json", std::ios::trunc);
  os << "{\n  \"files\": [\n";
  for (std::size_t i = 0; i < files.size(); ++i) {
    const fs::path full = out_dir / files[i];
    os << "    {\"path\": \"" << files[i].generic_string() << "\", \"sha256\": \""
       << sha256_file(full) << "\", \"bytes\": " << fs::file_size(full) << "}";
    os << (i + 1 < files.size() ? ",\n" : "\n");
  }
  os << "  ]\n}\n";
}

int run_synth(const ExperimentConfig& cfg) {
  prepare_out_dir(cfg.out_dir);
  try {
    const ScalarField f0 = build_omega0_field(cfg);
    write_snapshot(cfg.out_dir / "omega0.vil", f0, 0.0);

    ConstructionParams P = cfg.construction;
    if (!P.x_star) P.x_star = Vec2{0.5, 0.5};  // synth has no flow run to select from
    const CarrierPerturbation b = beta(P);
    const ScalarField bf = b.to_field(cfg.grid);
    write_snapshot(cfg.out_dir / "beta_n.vil", bf, 0.0);
    write_snapshot(cfg.out_dir / "omega0n.vil", omega0n(f0, bf), 0.0);
  } catch (const std::exception& e) {
    stage_error("synth", e);
  }
  write_manifest(cfg.out_dir);
  return 0;
}

int run_evolve(const ExperimentConfig& cfg, const std::optional<fs::path>& input_snapshot) {
  prepare_out_dir(cfg.out_dir);
  try {
    ScalarField f0 = input_snapshot ? read_scalar_snapshot(*input_snapshot)
                                    : build_omega0_field(cfg);
    const Trajectory traj = evolve(f0, cfg.construction.T_horizon, cfg.solver);
    for (std::size_t i = 0; i < traj.snaps.size(); ++i)
      write_snapshot(cfg.out_dir / ("omega_" + zero_pad(i, 6) + ".vil"), traj.omega(i),
                     traj.snaps[i].t);
    write_series_csv(cfg.out_dir / "conservation.csv", conservation_series(traj));
    if (traj.aborted) {
      write_manifest(cfg.out_dir);
      std::cerr << "evolve: aborted on NaN/overflow, last good snapshot retained\n";
      return 2;
    }
  } catch (const std::exception& e) {
    stage_error("evolve", e);
  }
  write_manifest(cfg.out_dir);
  return 0;
}

int run_flow(const ExperimentConfig& cfg, const fs::path& trajectory_dir) {
  prepare_out_dir(cfg.out_dir);
  try {
    std::vector<fs::path> snaps;
    for (const auto& entry : fs::directory_iterator(trajectory_dir))
      if (entry.is_regular_file() && entry.path().extension() == ".vil" &&
          entry.path().filename().string().rfind("omega_", 0) == 0)
        snaps.push_back(entry.path());
    std::sort(snaps.begin(), snaps.end());
    if (snaps.size() < 2)
      throw std::invalid_argument("flow: trajectory directory needs >= 2 omega_*.vil snapshots");

    Trajectory traj;
    traj.cfg = cfg.solver;
    for (const auto& path : snaps) {
      double t = 0.0;
      ScalarField w = read_scalar_snapshot(path, &t);
      if (traj.snaps.empty()) traj.grid = w.grid();
      Snapshot s;
      s.t = t;
      s.omega_hat = spectral::forward(w);
      traj.snaps.push_back(std::move(s));
    }

    TrajectoryVelocity vel(traj, cfg.flow.oversample);
    FlowEnsemble ens(0.45 * traj.grid.L);
    const IndexRange origin_r = ens.add_origin();
    ens.add_grid(cfg.flow.seed_grid, cfg.flow.seed_radius);
    ens.add_axes(cfg.flow.axis_seeds, cfg.flow.seed_radius);

    std::ofstream csv(cfg.out_dir / "flow_seeds.csv", std::ios::trunc);
    csv << "t,x1,x2,eta1,eta2,j11,j12,j21,j22,det,lambda_int\n";
    auto emit = [&](double t) {
      for (std::size_t i = 0; i < ens.size(); ++i) {
        const Vec2 x = ens.seeds()[i];
        const Vec2 e = ens.positions()[i];
        const Mat2& J = ens.jacobians()[i];
        csv << format_double(t) << ',' << format_double(x.x) << ',' << format_double(x.y) << ','
            << format_double(e.x) << ',' << format_double(e.y) << ',' << format_double(J.a)
            << ',' << format_double(J.b) << ',' << format_double(J.c) << ','
            << format_double(J.d) << ',' << format_double(J.det()) << ','
            << format_double(ens.lambda_integral()[i]) << '\n';
      }
    };
    emit(traj.t_begin());
    for (std::size_t j = 1; j < traj.snaps.size(); ++j) {
      ens.advance(vel, traj.snaps[j].t, traj.snaps[j].t - traj.snaps[j - 1].t, cfg.threads);
      emit(traj.snaps[j].t);
    }

    double axis_defect = 0.0;
    const IndexRange ax = ens.group("axes");
    for (std::size_t i = ax.begin; i < ax.end; ++i) {
      if (ens.seeds()[i].y == 0.0)
        axis_defect = std::max(axis_defect, std::abs(ens.positions()[i].y));
      if (ens.seeds()[i].x == 0.0)
        axis_defect = std::max(axis_defect, std::abs(ens.positions()[i].x));
    }
    std::ofstream js(cfg.out_dir / "flow_summary.json", std::ios::trunc);
    js << "{\n  \"max_jacobian_norm\": " << format_double(ens.max_jacobian_norm())
       << ",\n  \"det_drift\": " << format_double(ens.max_det_defect())
       << ",\n  \"axis_defect\": " << format_double(axis_defect)
       << ",\n  \"stagnation_defect\": "
       << format_double(ens.positions()[origin_r.begin].norm())
       << ",\n  \"boundary_contaminated\": "
       << (ens.boundary_contaminated() ? "true" : "false") << "\n}\n";
  } catch (const std::exception& e) {
    stage_error("flow", e);
  }
  write_manifest(cfg.out_dir);
  return 0;
}

int run_verify(const ExperimentConfig& cfg, const std::vector<std::string>& selected) {
  prepare_out_dir(cfg.out_dir);
  DiagnosticsReport all;
  const auto& registry = check_registry();
  std::vector<std::string> names;
  for (const std::string& s : selected.empty() ? cfg.checks : selected) {
    if (s == "all") {
      for (const auto& [name, _] : registry) names.push_back(name);
    } else {
      if (registry.find(s) == registry.end())
        throw std::invalid_argument("verify: unknown check \"" + s + "\"");
      names.push_back(s);
    }
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());

  for (const std::string& name : names) {
    try {
      all.merge(registry.at(name)(cfg));
    } catch (const std::exception& e) {
      stage_error("verify[" + name + "]", e);
    }
  }
  all.sort();
  all.write_csv(cfg.out_dir / "verify_report.csv");
  all.write_summary_json(cfg.out_dir / "verify_summary.json");
  write_manifest(cfg.out_dir);
  return all.clean() ? 0 : 1;
}

int run_sweep(const ExperimentConfig& cfg) {
  prepare_out_dir(cfg.out_dir);
  const std::vector<double> Ms = cfg.sweep_M.empty()
                                     ? std::vector<double>{cfg.construction.M}
                                     : cfg.sweep_M;
  const std::vector<int> Ns =
      cfg.sweep_N.empty() ? std::vector<int>{cfg.construction.N} : cfg.sweep_N;
  const std::vector<double> ps =
      cfg.sweep_p.empty() ? std::vector<double>{cfg.construction.p} : cfg.sweep_p;
  const std::vector<int> nps = cfg.sweep_n_pert.empty()
                                   ? std::vector<int>{cfg.construction.n_pert}
                                   : cfg.sweep_n_pert;

  DiagnosticsReport all;
  const auto& registry = check_registry();
  try {
    for (double M : Ms)
      for (int N : Ns)
        for (double p : ps)
          for (int np : nps) {
            ExperimentConfig cell = cfg;
            cell.construction.M = M;
            cell.construction.N = N;
            cell.construction.p = p;
            cell.construction.n_pert = np;
            cell.construction.T_horizon = cell.construction.default_horizon();
            cell.sweep_M.clear();
            cell.sweep_N.clear();
            cell.sweep_p.clear();
            cell.sweep_n_pert = {np};
            cell.validate();
            const std::string tag = "cell:M=" + format_double(M) + ";N=" + std::to_string(N) +
                                    ";p=" + format_double(p) + ";n_pert=" + std::to_string(np);
            for (const std::string& name : cfg.checks) {
              if (name == "all")
                throw std::invalid_argument(
                    "sweep: select explicit checks (\"all\" would repeat every check per cell)");
              if (registry.find(name) == registry.end())
                throw std::invalid_argument("sweep: unknown check \"" + name + "\"");
              DiagnosticsReport r = registry.at(name)(cell);
              for (ReportRow row : r.rows()) {
                row.params = tag + ";" + row.params;
                all.add(std::move(row));
              }
            }
          }
  } catch (const std::exception& e) {
    stage_error("sweep", e);
  }
  all.sort();
  all.write_csv(cfg.out_dir / "sweep_report.csv");
  all.write_summary_json(cfg.out_dir / "sweep_summary.json");
  write_manifest(cfg.out_dir);
  return all.clean() ? 0 : 1;
}

}  // namespace vil
