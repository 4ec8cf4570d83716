#pragma once

#include "fpls/kernel.hpp"

namespace fpls {

/// Exponents and parameters of the coupled system. Admissible when
/// 1 < q < p, alpha > 1, beta > 1, p < alpha+beta < p*, and
/// (lambda, mu) != (0, 0).
struct ProblemParams {
  FracParams frac;
  double q = 1.5;
  double alpha = 1.5;
  double beta = 1.5;
  double lambda = 0.0;
  double mu = 0.0;

  double ab() const { return alpha + beta; }
  double q_star() const { return ab() / (ab() - q); }
  void validate(int dim) const;

  /// Collects every constraint violation (empty when admissible).
  std::vector<std::string> constraint_violations(int dim) const;
};

/// Weight samples f, g (sign-changing, L^{q*}) and h (nonnegative,
/// sup-norm 1).
struct WeightSet {
  GridFunction f;
  GridFunction g;
  GridFunction h;

  void validate() const;
};

/// The three integrals of the energy and their combination
/// I = A/p - B/q - 2C/(alpha+beta).
struct EnergyBreakdown {
  double A = 0.0;  // ||z||^p
  double B = 0.0;  // int (lambda f |u|^q + mu g |v|^q)
  double C = 0.0;  // int h |u|^alpha |v|^beta
  double I = 0.0;
};

double term_B(const ProblemParams& params, const WeightSet& w,
              const StatePair& z);
double term_C(const ProblemParams& params, const WeightSet& w,
              const StatePair& z);

EnergyBreakdown energy(const ProblemParams& params, const WeightSet& w,
                       const KernelTable& k, const StatePair& z);

/// Exact nodal gradient of energy(...).I; its sup-norm is the weak-form
/// residual against the nodal basis.
StatePair energy_gradient(const ProblemParams& params, const WeightSet& w,
                          const KernelTable& k, const StatePair& z);

/// <I'(z), z> = A - B - 2C.
double nehari_pairing(const ProblemParams& params, const WeightSet& w,
                      const KernelTable& k, const StatePair& z);

/// <Phi'(z), z> = p A - q B - 2(alpha+beta) C.
double phi_prime_pairing(const ProblemParams& params, const WeightSet& w,
                         const KernelTable& k, const StatePair& z);

}  // namespace fpls
