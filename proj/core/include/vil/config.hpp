#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vil/construction.hpp"
#include "vil/solver.hpp"

namespace vil {

struct FlowOptions {
  std::uint32_t seed_grid = 64;    // per side, uniform in B(0, seed_radius)
  double seed_radius = 1.5;
  std::uint32_t axis_seeds = 32;   // per half-axis
  std::uint32_t quad_nodes = 40;   // per-axis quadrature nodes per support bump
  std::uint32_t ray_nodes = 33;
  Vec2 ray_tip{0.5, 0.75};
  double fd_spacing_cells = 4.0;   // stencil spacing in units of h
  std::uint32_t fd_stride = 16;
  std::uint32_t oversample = 2;    // particle-sampling refinement factor
  double xstar_floor = 0.35;       // smallest |coordinate| an x* candidate may have

  void validate() const;
};

struct ExperimentConfig {
  ConstructionParams construction;
  GridSpec grid{8.0, 1024};
  SolverConfig solver;
  FlowOptions flow;
  std::filesystem::path out_dir = "out";
  std::vector<std::string> checks{"all"};
  std::vector<double> sweep_M;
  std::vector<int> sweep_N;
  std::vector<double> sweep_p;
  std::vector<int> sweep_n_pert;
  std::size_t sweep_cap = 256;
  int threads = 1;

  void validate() const;
};

/// Parse + validate a JSON config; schema violations name the JSON path of the
/// offending field. Missing fields take the preset defaults above.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig config_from_json_text(const std::string& text);

}  // namespace vil
