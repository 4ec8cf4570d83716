#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fpls/config.hpp"
#include "fpls/util.hpp"

namespace fs = std::filesystem;
using namespace fpls;

namespace {

struct Problem {
  RunConfig cfg;
  GridPtr grid;
  WeightSet weights;
  KernelTable kernel;
  ThresholdReport thresholds;
};

Problem setup(const std::string& config_path) {
  Problem pb;
  pb.cfg = parse_config_file(config_path);
  pb.grid = build_grid(pb.cfg.dim, pb.cfg.bounds, pb.cfg.nodes_per_axis);
  pb.weights = build_weights(pb.cfg, pb.grid);
  pb.kernel = assemble_kernel(pb.grid, pb.cfg.params.frac);
  const auto sob = estimate_sobolev(pb.kernel, pb.cfg.params);
  pb.thresholds = membership(pb.cfg.params, pb.weights, sob.value);
  return pb;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

int run_constants(const std::string& config_path) {
  Problem pb = setup(config_path);
  const ordered_json j = thresholds_to_json(pb.thresholds);
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  fs::create_directories(pb.cfg.output);
  write_text(fs::path(pb.cfg.output) / "constants.json", text);
  return 0;
}

int run_solve(const std::string& config_path, std::string branch_opt,
              bool force) {
  Problem pb = setup(config_path);
  if (!branch_opt.empty()) {
    if (branch_opt == "plus")
      pb.cfg.branch = BranchMode::Plus;
    else if (branch_opt == "minus")
      pb.cfg.branch = BranchMode::Minus;
    else if (branch_opt == "both")
      pb.cfg.branch = BranchMode::Both;
    else
      throw ConfigError("--branch must be plus, minus or both");
  }
  if (force) pb.cfg.solver.force = true;

  const fs::path out(pb.cfg.output);
  fs::create_directories(out);

  auto emit = [&](const SolveReport& rep, const std::string& suffix) {
    write_text(out / ("report" + suffix + ".json"),
               report_to_json(pb.cfg, rep).dump(2) + "\n");
    write_grid_function_file((out / ("u" + suffix + ".dat")).string(),
                             rep.state.u);
    write_grid_function_file((out / ("v" + suffix + ".dat")).string(),
                             rep.state.v);
    std::cout << "branch " << branch_name(rep.branch) << ": I = "
              << rep.energy.I << ", converged = " << rep.converged
              << ", classification = "
              << classification_name(rep.classification) << "\n";
  };

  bool all_converged = true;
  if (pb.cfg.branch == BranchMode::Both) {
    auto [plus, minus] = minimize_both(pb.cfg.params, pb.weights, pb.kernel,
                                       pb.cfg.solver, pb.thresholds);
    emit(plus, "_plus");
    emit(minus, "_minus");
    std::cout << "distinctness = " << *plus.distinctness << "\n";
    all_converged = plus.converged && minus.converged;
  } else {
    const Branch br =
        pb.cfg.branch == BranchMode::Plus ? Branch::Plus : Branch::Minus;
    SolveReport rep = minimize_branch(pb.cfg.params, pb.weights, pb.kernel,
                                      pb.cfg.solver, br, pb.thresholds);
    emit(rep, "");
    all_converged = rep.converged;
  }
  return all_converged ? 0 : 3;
}

std::vector<double> parse_range(const std::string& spec) {
  double a, b;
  int n;
  char c1, c2;
  std::istringstream ss(spec);
  if (!(ss >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1)
    throw ConfigError("range must have the form a:b:n with n >= 1");
  std::vector<double> out;
  for (int i = 0; i < n; ++i)
    out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return out;
}

int run_sweep(const std::string& config_path, const std::string& lspec,
              const std::string& mspec) {
  Problem pb = setup(config_path);
  const auto lambdas = parse_range(lspec);
  const auto mus = parse_range(mspec);

  struct Row {
    double lambda, mu, lhs;
    bool in_theta, in_psi;
    std::string i_plus, i_minus, conv_plus, conv_minus;
  };
  std::vector<Row> rows(lambdas.size() * mus.size());

  parallel_for(rows.size(), [&](std::size_t idx) {
    Row& row = rows[idx];
    row.lambda = lambdas[idx / mus.size()];
    row.mu = mus[idx % mus.size()];
    ProblemParams params = pb.cfg.params;
    params.lambda = row.lambda;
    params.mu = row.mu;
    ThresholdReport th;
    try {
      th = membership(params, pb.weights, pb.thresholds.S_d);
    } catch (const std::exception&) {
      row.lhs = 0.0;
      row.in_theta = row.in_psi = false;
      return;
    }
    row.lhs = th.lhs;
    row.in_theta = th.in_theta;
    row.in_psi = th.in_psi;
    auto fmt = [](double v) {
      std::ostringstream os;
      os.precision(17);
      os << v;
      return os.str();
    };
    if (th.in_theta) {
      try {
        auto rep = minimize_branch(params, pb.weights, pb.kernel,
                                   pb.cfg.solver, Branch::Plus, th);
        row.i_plus = fmt(rep.energy.I);
        row.conv_plus = rep.converged ? "1" : "0";
      } catch (const std::exception&) {
      }
    }
    if (th.in_psi) {
      try {
        auto rep = minimize_branch(params, pb.weights, pb.kernel,
                                   pb.cfg.solver, Branch::Minus, th);
        row.i_minus = fmt(rep.energy.I);
        row.conv_minus = rep.converged ? "1" : "0";
      } catch (const std::exception&) {
      }
    }
  });

  fs::create_directories(pb.cfg.output);
  std::ostringstream csv;
  csv.precision(17);
  csv << "lambda,mu,lhs,in_theta,in_psi,I_plus,I_minus,converged_plus,"
         "converged_minus\n";
  for (const Row& r : rows)
    csv << r.lambda << "," << r.mu << "," << r.lhs << "," << r.in_theta << ","
        << r.in_psi << "," << r.i_plus << "," << r.i_minus << ","
        << r.conv_plus << "," << r.conv_minus << "\n";
  write_text(fs::path(pb.cfg.output) / "sweep.csv", csv.str());
  std::cout << csv.str();
  return 0;
}

int run_project(const std::string& config_path, const std::string& state_path,
                const std::string& branch_opt) {
  Problem pb = setup(config_path);
  StatePair z = read_state_file(state_path);
  if (z.u.grid->node_count() != pb.grid->node_count())
    throw ConfigError("state file grid does not match config grid");
  z.u.grid = pb.grid;
  z.v.grid = pb.grid;
  const Branch br = branch_opt == "plus" ? Branch::Plus : Branch::Minus;
  StatePair proj = project(pb.cfg.params, pb.weights, pb.kernel, z, br);
  fs::create_directories(pb.cfg.output);
  write_state_file((fs::path(pb.cfg.output) / "projected.dat").string(), proj);
  const EnergyBreakdown e = energy(pb.cfg.params, pb.weights, pb.kernel, proj);
  std::cout << "projected onto " << branch_opt << " branch: I = " << e.I
            << ", classification = "
            << classification_name(
                   classify(pb.cfg.params, pb.weights, pb.kernel, proj))
            << "\n";
  return 0;
}

int run_check(const std::string& config_path, const std::string& state_path) {
  Problem pb = setup(config_path);
  StatePair z = read_state_file(state_path);
  if (z.u.grid->node_count() != pb.grid->node_count())
    throw ConfigError("state file grid does not match config grid");
  z.u.grid = pb.grid;
  z.v.grid = pb.grid;
  const EnergyBreakdown e = energy(pb.cfg.params, pb.weights, pb.kernel, z);
  ordered_json j;
  j["energy"]["A"] = e.A;
  j["energy"]["B"] = e.B;
  j["energy"]["C"] = e.C;
  j["energy"]["I"] = e.I;
  j["nehari_pairing"] = nehari_pairing(pb.cfg.params, pb.weights, pb.kernel, z);
  j["phi_prime_pairing"] =
      phi_prime_pairing(pb.cfg.params, pb.weights, pb.kernel, z);
  j["classification"] = classification_name(
      classify(pb.cfg.params, pb.weights, pb.kernel, z));
  j["weak_residual"] = weak_residual(pb.cfg.params, pb.weights, pb.kernel, z);
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nehari-manifold solver for a fractional p-Laplacian system"};
  app.require_subcommand(1);

  std::string config_path, branch = "", state_path, lspec, mspec;
  bool force = false;

  auto* c_const = app.add_subcommand("constants", "thresholds and membership");
  c_const->add_option("--config", config_path)->required();

  auto* c_solve = app.add_subcommand("solve", "minimize on a Nehari branch");
  c_solve->add_option("--config", config_path)->required();
  c_solve->add_option("--branch", branch)
      ->check(CLI::IsMember({"plus", "minus", "both"}));
  c_solve->add_flag("--force", force, "skip the Theta/Psi membership gate");

  auto* c_sweep = app.add_subcommand("sweep", "scan the (lambda,mu) plane");
  c_sweep->add_option("--config", config_path)->required();
  c_sweep->add_option("--lambda", lspec, "a:b:n")->required();
  c_sweep->add_option("--mu", mspec, "a:b:n")->required();

  auto* c_proj = app.add_subcommand("project", "project a state onto a branch");
  c_proj->add_option("--config", config_path)->required();
  c_proj->add_option("--state", state_path)->required();
  c_proj->add_option("--branch", branch)
      ->required()
      ->check(CLI::IsMember({"plus", "minus"}));

  auto* c_check = app.add_subcommand("check", "energy and residuals of a state");
  c_check->add_option("--config", config_path)->required();
  c_check->add_option("--state", state_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_const->parsed()) return run_constants(config_path);
    if (c_solve->parsed()) return run_solve(config_path, branch, force);
    if (c_sweep->parsed()) return run_sweep(config_path, lspec, mspec);
    if (c_proj->parsed()) return run_project(config_path, state_path, branch);
    if (c_check->parsed()) return run_check(config_path, state_path);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
