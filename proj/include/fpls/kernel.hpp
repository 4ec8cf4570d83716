#pragma once

#include <cmath>
#include <limits>

#include "fpls/grid.hpp"

namespace fpls {

/// Fractional order s and integrability exponent p. Valid when p > 1,
/// 0 < s < 1 and dim > p*s (subcritical space condition).
struct FracParams {
  double s = 0.5;
  double p = 2.0;

  void validate(int dim) const;
  /// Critical exponent n*p / (n - p*s); +infinity when n == p*s.
  double p_star(int dim) const {
    const double denom = dim - p * s;
    if (denom <= 0.0) return std::numeric_limits<double>::infinity();
    return dim * p / denom;
  }
};

/// Dense pairwise kernel weights plus per-node exterior-tail weights.
///
///   w_ij = measure^2 / |x_i - x_j|^(n + ps)   (i != j, w_ii = 0)
///   e_i  = 2 * measure * \int_{R^n \ Omega} |x_i - y|^-(n+ps) dy
///
/// In 1D the tail integral has the closed form
/// ((x_i - a)^-ps + (b - x_i)^-ps) / ps; in 2D it is computed by
/// adaptive angular quadrature to relative tolerance 1e-8.
struct KernelTable {
  GridPtr grid;
  FracParams frac;
  std::vector<double> pair_weights;  // row-major, node_count x node_count
  std::vector<double> exterior_weights;

  double w(std::size_t i, std::size_t j) const {
    return pair_weights[i * grid->node_count() + j];
  }
};

KernelTable assemble_kernel(const GridPtr& grid, const FracParams& frac);

/// Discrete Gagliardo energy ||u||_{X0}^p:
///   sum_{i<j} 2 w_ij |u_i - u_j|^p  +  sum_i e_i |u_i|^p.
double seminorm_energy(const KernelTable& k, const GridFunction& u);

/// Exact nodal gradient of seminorm_energy. Component i:
///   2p sum_{j != i} w_ij |u_i - u_j|^(p-2) (u_i - u_j) + p e_i |u_i|^(p-2) u_i
/// with the convention |0|^(p-2) * 0 = 0 for 1 < p < 2.
GridFunction seminorm_gradient(const KernelTable& k, const GridFunction& u);

struct StatePair {
  GridFunction u;
  GridFunction v;
};

/// ||z||^p = ||u||_{X0}^p + ||v||_{X0}^p (the p-th power of the E-norm).
double pair_norm_p(const KernelTable& k, const StatePair& z);

/// |t|^(r-2) * t with the removable singularity at t = 0 set to 0.
inline double signed_pow(double t, double r) {
  if (t == 0.0) return 0.0;
  double a = std::pow(std::abs(t), r - 1.0);
  return t > 0 ? a : -a;
}

}  // namespace fpls
