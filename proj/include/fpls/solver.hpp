#pragma once

#include "fpls/constants.hpp"
#include "fpls/fibering.hpp"

namespace fpls {

struct SolverConfig {
  int max_outer = 5000;
  double step0 = 1.0;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  double tol_grad = 1e-7;
  double tol_energy = 1e-12;
  int n_starts = 8;
  std::uint64_t seed = 1;
  bool force = false;  // skip the Theta/Psi membership gate

  void validate() const;
};

struct SolveReport {
  Branch branch = Branch::Plus;
  StatePair state;
  EnergyBreakdown energy;
  double nehari_residual = 0.0;
  double grad_residual = 0.0;
  Classification classification = Classification::NotOnManifold;
  int iterations = 0;
  bool converged = false;
  std::optional<double> c0_bound;
  std::optional<double> distinctness;  // set when both branches were solved
  ThresholdReport thresholds;
};

/// Closed-form positive lower bound on the minus-branch energy level for
/// (lambda, mu) in Psi; may be nonpositive outside Psi.
double c0_lower_bound(const ProblemParams& params, double lhs, double S_d);

/// Sup-norm of the weak-form residual against nodal test functions
/// (identical to the sup-norm of energy_gradient).
double weak_residual(const ProblemParams& params, const WeightSet& w,
                     const KernelTable& k, const StatePair& z);

/// Projected gradient descent on the requested Nehari branch with
/// fibering-root retraction and Armijo backtracking; multi-start, returns
/// the lowest-energy converged run.
SolveReport minimize_branch(const ProblemParams& params, const WeightSet& w,
                            const KernelTable& k, const SolverConfig& cfg,
                            Branch branch, const ThresholdReport& thresholds);

/// Runs both branches and fills in the distinctness metric
/// ||z_plus - z_minus|| on each report.
std::pair<SolveReport, SolveReport> minimize_both(
    const ProblemParams& params, const WeightSet& w, const KernelTable& k,
    const SolverConfig& cfg, const ThresholdReport& thresholds);

}  // namespace fpls
