#pragma once

#include "fpls/functional.hpp"

namespace fpls {

struct SobolevOptions {
  int n_random_starts = 20;
  int max_iter = 10000;
  double tol = 1e-10;
  std::uint64_t seed = 12345;
};

struct SobolevEstimate {
  double value = 0.0;
  std::vector<double> per_start;  // converged starts only carry finite values
};

/// Discrete best constant of the embedding into L^(alpha+beta):
/// minimizes the Rayleigh quotient seminorm_energy(u) / lr_norm(u, ab)^p
/// by normalized gradient descent from the constant profile plus random
/// starts. Throws when no start converges within max_iter.
SobolevEstimate estimate_sobolev(const KernelTable& k,
                                 const ProblemParams& params,
                                 const SobolevOptions& opts = {});

/// Threshold defining the parameter region for one solution:
///   [ (p-q)/(2(ab-q)) S^(ab/p) ]^(p/(ab-p)) *
///   ( S^(-q/p) (ab-q)/(ab-p) )^(-p/(p-q)).
double threshold_C(const ProblemParams& params, double S);

/// Same bracket with the (ab-p) denominator variant; reported for
/// cross-checking only, never used for membership.
double threshold_C_alt(const ProblemParams& params, double S);

/// (q/p)^(p/(p-q)) * threshold_C; defines the two-solution region.
double threshold_D(const ProblemParams& params, double S);

struct ThresholdReport {
  double S_d = 0.0;
  double C_theta = 0.0;
  double C_theta_alt = 0.0;
  double D_psi = 0.0;
  double norm_f_qstar = 0.0;
  double norm_g_qstar = 0.0;
  double lhs = 0.0;  // (|lambda| ||f||_{q*})^(p/(p-q)) + (|mu| ||g||_{q*})^(p/(p-q))
  bool in_theta = false;
  bool in_psi = false;
};

ThresholdReport membership(const ProblemParams& params, const WeightSet& w,
                           double S_d);

}  // namespace fpls
