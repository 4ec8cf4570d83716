#include "fpls/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace fpls {

namespace {

using json = nlohmann::json;

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok)
      throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
  }
}

WeightSpec parse_weight(const json& j, const std::string& name) {
  if (!j.is_object())
    throw ConfigError("weight \"" + name + "\" must be an object");
  WeightSpec w;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "const") {
    require_keys(j, "weights." + name, {"kind", "value"});
    w.kind = WeightSpec::Kind::Const;
    w.value = j.value("value", 1.0);
  } else if (kind == "sin") {
    require_keys(j, "weights." + name, {"kind", "k", "amp"});
    w.kind = WeightSpec::Kind::Sin;
    w.k = j.value("k", 1);
    w.amp = j.value("amp", 1.0);
  } else if (kind == "step") {
    require_keys(j, "weights." + name, {"kind", "split", "left", "right"});
    w.kind = WeightSpec::Kind::Step;
    w.split = j.value("split", 0.5);
    w.left = j.value("left", 1.0);
    w.right = j.value("right", -1.0);
  } else if (kind == "file") {
    require_keys(j, "weights." + name, {"kind", "path"});
    w.kind = WeightSpec::Kind::File;
    w.path = j.at("path").get<std::string>();
  } else {
    throw ConfigError("weight \"" + name + "\": unknown kind \"" + kind +
                      "\"");
  }
  return w;
}

ordered_json weight_to_json(const WeightSpec& w) {
  ordered_json j;
  switch (w.kind) {
    case WeightSpec::Kind::Const:
      j["kind"] = "const";
      j["value"] = w.value;
      break;
    case WeightSpec::Kind::Sin:
      j["kind"] = "sin";
      j["k"] = w.k;
      j["amp"] = w.amp;
      break;
    case WeightSpec::Kind::Step:
      j["kind"] = "step";
      j["split"] = w.split;
      j["left"] = w.left;
      j["right"] = w.right;
      break;
    case WeightSpec::Kind::File:
      j["kind"] = "file";
      j["path"] = w.path;
      break;
  }
  return j;
}

BranchMode parse_branch_mode(const std::string& s) {
  if (s == "plus") return BranchMode::Plus;
  if (s == "minus") return BranchMode::Minus;
  if (s == "both") return BranchMode::Both;
  throw ConfigError("solver.branch must be one of plus/minus/both");
}

std::string branch_mode_name(BranchMode b) {
  switch (b) {
    case BranchMode::Plus: return "plus";
    case BranchMode::Minus: return "minus";
    default: return "both";
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  require_keys(j, "config",
               {"grid", "frac", "exponents", "parameters", "weights", "solver",
                "output"});
  RunConfig cfg;

  const json& grid = j.at("grid");
  require_keys(grid, "grid", {"dim", "bounds", "n"});
  cfg.dim = grid.at("dim").get<int>();
  cfg.nodes_per_axis = grid.at("n").get<int>();
  cfg.bounds.clear();
  for (const auto& b : grid.at("bounds")) {
    if (!b.is_array() || b.size() != 2)
      throw ConfigError("grid.bounds entries must be [a, b] pairs");
    cfg.bounds.push_back({b[0].get<double>(), b[1].get<double>()});
  }

  const json& frac = j.at("frac");
  require_keys(frac, "frac", {"s", "p"});
  cfg.params.frac.s = frac.at("s").get<double>();
  cfg.params.frac.p = frac.at("p").get<double>();

  const json& ex = j.at("exponents");
  require_keys(ex, "exponents", {"q", "alpha", "beta"});
  cfg.params.q = ex.at("q").get<double>();
  cfg.params.alpha = ex.at("alpha").get<double>();
  cfg.params.beta = ex.at("beta").get<double>();

  const json& pr = j.at("parameters");
  require_keys(pr, "parameters", {"lambda", "mu"});
  cfg.params.lambda = pr.at("lambda").get<double>();
  cfg.params.mu = pr.at("mu").get<double>();

  const json& ws = j.at("weights");
  require_keys(ws, "weights", {"f", "g", "h"});
  cfg.wf = parse_weight(ws.at("f"), "f");
  cfg.wg = parse_weight(ws.at("g"), "g");
  cfg.wh = parse_weight(ws.at("h"), "h");

  if (j.contains("solver")) {
    const json& sv = j.at("solver");
    require_keys(sv, "solver",
                 {"branch", "max_outer", "step0", "armijo_c", "backtrack",
                  "tol_grad", "tol_energy", "n_starts", "seed", "force"});
    if (sv.contains("branch"))
      cfg.branch = parse_branch_mode(sv.at("branch").get<std::string>());
    cfg.solver.max_outer = sv.value("max_outer", cfg.solver.max_outer);
    cfg.solver.step0 = sv.value("step0", cfg.solver.step0);
    cfg.solver.armijo_c = sv.value("armijo_c", cfg.solver.armijo_c);
    cfg.solver.backtrack = sv.value("backtrack", cfg.solver.backtrack);
    cfg.solver.tol_grad = sv.value("tol_grad", cfg.solver.tol_grad);
    cfg.solver.tol_energy = sv.value("tol_energy", cfg.solver.tol_energy);
    cfg.solver.n_starts = sv.value("n_starts", cfg.solver.n_starts);
    cfg.solver.seed = sv.value("seed", cfg.solver.seed);
    cfg.solver.force = sv.value("force", cfg.solver.force);
  }
  cfg.output = j.value("output", cfg.output);

  // Structural checks, then all parameter-constraint violations at once.
  if (cfg.dim != 1 && cfg.dim != 2)
    throw ConfigError("grid.dim must be 1 or 2");
  if (static_cast<int>(cfg.bounds.size()) != cfg.dim)
    throw ConfigError("grid.bounds must have one [a,b] pair per axis");
  if (cfg.nodes_per_axis < 1) throw ConfigError("grid.n must be >= 1");
  auto violations = cfg.params.constraint_violations(cfg.dim);
  if (!violations.empty()) {
    std::string msg = "config violates problem constraints:";
    for (const auto& v : violations) msg += " [" + v + "]";
    throw ConfigError(msg);
  }
  cfg.solver.validate();
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

ordered_json config_to_json(const RunConfig& cfg) {
  ordered_json j;
  j["grid"]["dim"] = cfg.dim;
  ordered_json bounds = ordered_json::array();
  for (const auto& b : cfg.bounds) bounds.push_back({b[0], b[1]});
  j["grid"]["bounds"] = bounds;
  j["grid"]["n"] = cfg.nodes_per_axis;
  j["frac"]["s"] = cfg.params.frac.s;
  j["frac"]["p"] = cfg.params.frac.p;
  j["exponents"]["q"] = cfg.params.q;
  j["exponents"]["alpha"] = cfg.params.alpha;
  j["exponents"]["beta"] = cfg.params.beta;
  j["parameters"]["lambda"] = cfg.params.lambda;
  j["parameters"]["mu"] = cfg.params.mu;
  j["weights"]["f"] = weight_to_json(cfg.wf);
  j["weights"]["g"] = weight_to_json(cfg.wg);
  j["weights"]["h"] = weight_to_json(cfg.wh);
  j["solver"]["branch"] = branch_mode_name(cfg.branch);
  j["solver"]["max_outer"] = cfg.solver.max_outer;
  j["solver"]["step0"] = cfg.solver.step0;
  j["solver"]["armijo_c"] = cfg.solver.armijo_c;
  j["solver"]["backtrack"] = cfg.solver.backtrack;
  j["solver"]["tol_grad"] = cfg.solver.tol_grad;
  j["solver"]["tol_energy"] = cfg.solver.tol_energy;
  j["solver"]["n_starts"] = cfg.solver.n_starts;
  j["solver"]["seed"] = cfg.solver.seed;
  j["solver"]["force"] = cfg.solver.force;
  j["output"] = cfg.output;
  return j;
}

namespace {

double eval_weight(const WeightSpec& w, double x_hat) {
  switch (w.kind) {
    case WeightSpec::Kind::Const:
      return w.value;
    case WeightSpec::Kind::Sin:
      return w.amp * std::sin(w.k * std::numbers::pi * x_hat);
    case WeightSpec::Kind::Step:
      return x_hat < w.split ? w.left : w.right;
    default:
      throw ConfigError("eval_weight: file weights are loaded, not sampled");
  }
}

GridFunction build_weight(const WeightSpec& w, const GridPtr& grid) {
  if (w.kind == WeightSpec::Kind::File) {
    GridFunction f = read_grid_function_file(w.path);
    if (f.grid->node_count() != grid->node_count() ||
        f.grid->dim != grid->dim)
      throw ConfigError("weight file \"" + w.path +
                        "\" does not match the configured grid");
    return GridFunction(grid, std::move(f.values));
  }
  GridFunction f(grid);
  const double a = grid->lo[0], b = grid->hi[0];
  for (std::size_t i = 0; i < grid->node_count(); ++i) {
    const double x_hat = (grid->node_coords[i][0] - a) / (b - a);
    f[i] = eval_weight(w, x_hat);
  }
  return f;
}

}  // namespace

WeightSet build_weights(const RunConfig& cfg, const GridPtr& grid) {
  WeightSet ws{build_weight(cfg.wf, grid), build_weight(cfg.wg, grid),
               build_weight(cfg.wh, grid)};
  double hmax = 0.0;
  for (double x : ws.h.values) {
    if (x < 0.0) throw ConfigError("weight h must be nonnegative");
    hmax = std::max(hmax, x);
  }
  if (hmax == 0.0) throw ConfigError("weight h vanishes identically");
  for (auto& x : ws.h.values) x /= hmax;
  ws.validate();
  return ws;
}

std::string classification_name(Classification c) {
  switch (c) {
    case Classification::Nplus: return "Nplus";
    case Classification::Nzero: return "Nzero";
    case Classification::Nminus: return "Nminus";
    default: return "NotOnManifold";
  }
}

std::string branch_name(Branch b) {
  return b == Branch::Plus ? "plus" : "minus";
}

ordered_json thresholds_to_json(const ThresholdReport& th) {
  ordered_json j;
  j["S_d"] = th.S_d;
  j["C_theta"] = th.C_theta;
  j["C_theta_alt"] = th.C_theta_alt;
  j["D_psi"] = th.D_psi;
  j["norm_f_qstar"] = th.norm_f_qstar;
  j["norm_g_qstar"] = th.norm_g_qstar;
  j["lhs"] = th.lhs;
  j["in_theta"] = th.in_theta;
  j["in_psi"] = th.in_psi;
  return j;
}

ordered_json report_to_json(const RunConfig& cfg, const SolveReport& rep) {
  ordered_json j;
  j["format"] = "fpls-report-v1";
  j["config"] = config_to_json(cfg);
  j["branch"] = branch_name(rep.branch);
  j["converged"] = rep.converged;
  j["iterations"] = rep.iterations;
  j["energy"]["A"] = rep.energy.A;
  j["energy"]["B"] = rep.energy.B;
  j["energy"]["C"] = rep.energy.C;
  j["energy"]["I"] = rep.energy.I;
  j["nehari_residual"] = rep.nehari_residual;
  j["grad_residual"] = rep.grad_residual;
  j["classification"] = classification_name(rep.classification);
  if (rep.c0_bound)
    j["c0_bound"] = *rep.c0_bound;
  else
    j["c0_bound"] = nullptr;
  if (rep.distinctness)
    j["distinctness"] = *rep.distinctness;
  else
    j["distinctness"] = nullptr;
  j["thresholds"] = thresholds_to_json(rep.thresholds);
  return j;
}

void write_state_file(const std::string& path, const StatePair& z) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_grid_function(os, z.u);
  write_grid_function(os, z.v);
}

StatePair read_state_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  StatePair z;
  z.u = read_grid_function(is);
  z.v = read_grid_function(is);
  if (z.u.grid->node_count() != z.v.grid->node_count())
    throw std::runtime_error("state file: component grids differ");
  z.v.grid = z.u.grid;
  return z;
}

}  // namespace fpls
