#include "vil/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace vil {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("config: " + path + ": " + what);
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* k : keys)
      if (key == k) known = true;
    if (!known) fail(path + "." + key, "unknown field");
  }
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

}  // namespace

void FlowOptions::validate() const {
  if (seed_grid < 2) throw std::invalid_argument("flow.seed_grid: must be >= 2");
  if (!(seed_radius > 0.0)) throw std::invalid_argument("flow.seed_radius: must be positive");
  if (ray_nodes < 33) throw std::invalid_argument("flow.ray_nodes: must be >= 33");
  if (!(fd_spacing_cells > 0.0))
    throw std::invalid_argument("flow.fd_spacing_cells: must be positive");
  if (fd_stride == 0) throw std::invalid_argument("flow.fd_stride: must be >= 1");
  if (oversample == 0 || oversample > 8)
    throw std::invalid_argument("flow.oversample: must lie in [1, 8]");
  if (!(xstar_floor >= 0.0)) throw std::invalid_argument("flow.xstar_floor: must be >= 0");
}

void ExperimentConfig::validate() const {
  construction.validate();
  try {
    grid.validate();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("config: grid: ") + e.what());
  }
  solver.validate();
  flow.validate();
  if (!construction.omega0_resolved(grid))
    throw std::invalid_argument(
        "config: construction.N: smallest scale 2^-(N0+N+2) unresolvable on this grid (< 2h)");
  if (!construction.beta_support_resolved(grid))
    throw std::invalid_argument(
        "config: construction.n_pert: perturbation support 2/lambda unresolvable (< 2h)");
  const std::size_t cells = std::max<std::size_t>(sweep_M.size(), 1) *
                            std::max<std::size_t>(sweep_N.size(), 1) *
                            std::max<std::size_t>(sweep_p.size(), 1) *
                            std::max<std::size_t>(sweep_n_pert.size(), 1);
  if (cells > sweep_cap)
    throw std::invalid_argument("config: sweep: cartesian product size " + std::to_string(cells) +
                                " exceeds the cap " + std::to_string(sweep_cap));
  if (threads < 1) throw std::invalid_argument("config: threads: must be >= 1");
}

ExperimentConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  check_keys(j, "$",
             {"construction", "grid", "solver", "flow", "out_dir", "checks", "sweep",
              "sweep_cap", "threads"});

  ExperimentConfig cfg;
  bool horizon_explicit = false;

  if (j.contains("construction")) {
    const json& c = j["construction"];
    if (!c.is_object()) fail("construction", "expected an object");
    check_keys(c, "construction", {"M", "N", "N0", "p", "n_pert", "x_star", "delta", "T"});
    if (c.contains("M")) cfg.construction.M = get_number(c["M"], "construction.M");
    if (c.contains("N")) cfg.construction.N = get_int(c["N"], "construction.N");
    if (c.contains("N0")) cfg.construction.N0 = get_int(c["N0"], "construction.N0");
    if (c.contains("p")) cfg.construction.p = get_number(c["p"], "construction.p");
    if (c.contains("n_pert"))
      cfg.construction.n_pert = get_int(c["n_pert"], "construction.n_pert");
    if (c.contains("x_star") && !c["x_star"].is_null()) {
      const json& x = c["x_star"];
      if (!x.is_array() || x.size() != 2) fail("construction.x_star", "expected [x1, x2]");
      cfg.construction.x_star =
          Vec2{get_number(x[0], "construction.x_star[0]"), get_number(x[1], "construction.x_star[1]")};
    }
    if (c.contains("delta") && !c["delta"].is_null())
      cfg.construction.delta = get_number(c["delta"], "construction.delta");
    if (c.contains("T") && !c["T"].is_null()) {
      cfg.construction.T_horizon = get_number(c["T"], "construction.T");
      horizon_explicit = true;
    }
  }
  if (!horizon_explicit) cfg.construction.T_horizon = cfg.construction.default_horizon();

  if (j.contains("grid")) {
    const json& g = j["grid"];
    if (!g.is_object()) fail("grid", "expected an object");
    check_keys(g, "grid", {"L", "n"});
    if (g.contains("L")) cfg.grid.L = get_number(g["L"], "grid.L");
    if (g.contains("n")) {
      const int n = get_int(g["n"], "grid.n");
      if (n <= 0) fail("grid.n", "must be positive");
      cfg.grid.n = static_cast<std::uint32_t>(n);
    }
  }

  if (j.contains("solver")) {
    const json& s = j["solver"];
    if (!s.is_object()) fail("solver", "expected an object");
    check_keys(s, "solver",
               {"dt", "cfl", "dealias", "hyper_nu", "hyper_order", "snapshot_every"});
    if (s.contains("dt")) cfg.solver.dt = get_number(s["dt"], "solver.dt");
    if (s.contains("cfl")) cfg.solver.cfl = get_number(s["cfl"], "solver.cfl");
    if (s.contains("dealias")) cfg.solver.dealias = get_bool(s["dealias"], "solver.dealias");
    if (s.contains("hyper_nu")) cfg.solver.hyper_nu = get_number(s["hyper_nu"], "solver.hyper_nu");
    if (s.contains("hyper_order"))
      cfg.solver.hyper_order = get_int(s["hyper_order"], "solver.hyper_order");
    if (s.contains("snapshot_every")) {
      const int c = get_int(s["snapshot_every"], "solver.snapshot_every");
      if (c <= 0) fail("solver.snapshot_every", "must be >= 1");
      cfg.solver.snapshot_every = static_cast<std::uint32_t>(c);
    }
  }

  if (j.contains("flow")) {
    const json& f = j["flow"];
    if (!f.is_object()) fail("flow", "expected an object");
    check_keys(f, "flow",
               {"seed_grid", "seed_radius", "axis_seeds", "quad_nodes", "ray_nodes", "ray_tip",
                "fd_spacing_cells", "fd_stride", "oversample", "xstar_floor"});
    auto get_u32 = [&](const char* key, std::uint32_t& dst) {
      if (!f.contains(key)) return;
      const int v = get_int(f[key], std::string("flow.") + key);
      if (v <= 0) fail(std::string("flow.") + key, "must be positive");
      dst = static_cast<std::uint32_t>(v);
    };
    get_u32("seed_grid", cfg.flow.seed_grid);
    if (f.contains("seed_radius"))
      cfg.flow.seed_radius = get_number(f["seed_radius"], "flow.seed_radius");
    get_u32("axis_seeds", cfg.flow.axis_seeds);
    get_u32("quad_nodes", cfg.flow.quad_nodes);
    get_u32("ray_nodes", cfg.flow.ray_nodes);
    if (f.contains("ray_tip")) {
      const json& x = f["ray_tip"];
      if (!x.is_array() || x.size() != 2) fail("flow.ray_tip", "expected [x1, x2]");
      cfg.flow.ray_tip = Vec2{get_number(x[0], "flow.ray_tip[0]"), get_number(x[1], "flow.ray_tip[1]")};
    }
    if (f.contains("fd_spacing_cells"))
      cfg.flow.fd_spacing_cells = get_number(f["fd_spacing_cells"], "flow.fd_spacing_cells");
    get_u32("fd_stride", cfg.flow.fd_stride);
    get_u32("oversample", cfg.flow.oversample);
    if (f.contains("xstar_floor"))
      cfg.flow.xstar_floor = get_number(f["xstar_floor"], "flow.xstar_floor");
  }

  if (j.contains("out_dir")) {
    if (!j["out_dir"].is_string()) fail("out_dir", "expected a string");
    cfg.out_dir = j["out_dir"].get<std::string>();
  }
  if (j.contains("checks")) {
    const json& c = j["checks"];
    if (!c.is_array()) fail("checks", "expected an array of check names");
    cfg.checks.clear();
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!c[i].is_string()) fail("checks[" + std::to_string(i) + "]", "expected a string");
      cfg.checks.push_back(c[i].get<std::string>());
    }
  }
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    if (!s.is_object()) fail("sweep", "expected an object");
    check_keys(s, "sweep", {"M", "N", "p", "n_pert"});
    auto get_list = [&](const char* key, auto& dst, auto conv) {
      if (!s.contains(key)) return;
      const json& a = s[key];
      if (!a.is_array()) fail(std::string("sweep.") + key, "expected an array");
      for (std::size_t i = 0; i < a.size(); ++i)
        dst.push_back(conv(a[i], "sweep." + std::string(key) + "[" + std::to_string(i) + "]"));
    };
    get_list("M", cfg.sweep_M, get_number);
    get_list("N", cfg.sweep_N, get_int);
    get_list("p", cfg.sweep_p, get_number);
    get_list("n_pert", cfg.sweep_n_pert, get_int);
  }
  if (j.contains("sweep_cap")) {
    const int c = get_int(j["sweep_cap"], "sweep_cap");
    if (c <= 0) fail("sweep_cap", "must be positive");
    cfg.sweep_cap = static_cast<std::size_t>(c);
  }
  if (j.contains("threads")) cfg.threads = get_int(j["threads"], "threads");

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("config: cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return config_from_json_text(ss.str());
}

}  // namespace vil
