#include "fpls/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fpls {

void FracParams::validate(int dim) const {
  if (!(s > 0.0 && s < 1.0))
    throw std::invalid_argument("FracParams: s must lie in (0,1)");
  if (!(p > 1.0)) throw std::invalid_argument("FracParams: p must exceed 1");
  // At dim == p*s the critical exponent is +infinity; every finite
  // alpha+beta is subcritical, so equality is admissible.
  if (dim < p * s)
    throw std::invalid_argument("FracParams: need n >= p*s");
}

namespace {

// Exit distance from interior point x along direction (cos a, sin a) to the
// boundary of [lo0,hi0] x [lo1,hi1].
double ray_exit_distance(const GridSpec& g, double x0, double x1, double a) {
  const double d0 = std::cos(a), d1 = std::sin(a);
  double t = std::numeric_limits<double>::infinity();
  if (d0 > 0)
    t = std::min(t, (g.hi[0] - x0) / d0);
  else if (d0 < 0)
    t = std::min(t, (g.lo[0] - x0) / d0);
  if (d1 > 0)
    t = std::min(t, (g.hi[1] - x1) / d1);
  else if (d1 < 0)
    t = std::min(t, (g.lo[1] - x1) / d1);
  return t;
}

struct TailIntegrand {
  const GridSpec& g;
  double x0, x1, ps;
  double operator()(double a) const {
    return std::pow(ray_exit_distance(g, x0, x1, a), -ps);
  }
};

double adaptive_simpson(const TailIntegrand& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0)
    throw std::runtime_error(
        "assemble_kernel: 2D tail quadrature failed to converge");
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// \int_{R^2 \ Omega} |x - y|^-(2+ps) dy for interior x. In polar
// coordinates centered at x this reduces to the angular integral
// (1/ps) \int_0^{2pi} R(theta)^-ps dtheta with R the boundary exit
// distance; R is smooth between corner directions, so the quadrature
// splits there.
double exterior_tail_2d(const GridSpec& g, double x0, double x1, double ps) {
  TailIntegrand f{g, x0, x1, ps};
  std::vector<double> angles;
  const double corners[4][2] = {{g.lo[0], g.lo[1]},
                                {g.hi[0], g.lo[1]},
                                {g.hi[0], g.hi[1]},
                                {g.lo[0], g.hi[1]}};
  for (auto& c : corners) {
    double a = std::atan2(c[1] - x1, c[0] - x0);
    if (a < 0) a += 2.0 * std::numbers::pi;
    angles.push_back(a);
  }
  std::sort(angles.begin(), angles.end());
  angles.push_back(angles.front() + 2.0 * std::numbers::pi);

  // Coarse pass to set an absolute tolerance from the magnitude.
  double coarse = 0.0;
  for (std::size_t k = 0; k + 1 < angles.size(); ++k)
    coarse += (angles[k + 1] - angles[k]) *
              f(0.5 * (angles[k] + angles[k + 1]));
  const double tol_per_panel = 1e-8 * std::abs(coarse) / 4.0;

  double total = 0.0;
  for (std::size_t k = 0; k + 1 < angles.size(); ++k) {
    const double a = angles[k], b = angles[k + 1];
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    total += adaptive_simpson(f, a, b, fa, fm, fb, whole, tol_per_panel, 40);
  }
  return total / ps;
}

}  // namespace

KernelTable assemble_kernel(const GridPtr& grid, const FracParams& frac) {
  frac.validate(grid->dim);
  const std::size_t n = grid->node_count();
  const double ps = frac.p * frac.s;
  const double exponent = grid->dim + ps;
  const double m = grid->cell_measure();

  KernelTable k;
  k.grid = grid;
  k.frac = frac;
  k.pair_weights.assign(n * n, 0.0);
  k.exterior_weights.resize(n);

  // Row-by-row fill keeps the result bit-deterministic regardless of how
  // rows are scheduled.
  for (std::size_t i = 0; i < n; ++i) {
    const auto& xi = grid->node_coords[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto& xj = grid->node_coords[j];
      const double dx = xi[0] - xj[0], dy = xi[1] - xj[1];
      const double dist = std::sqrt(dx * dx + dy * dy);
      k.pair_weights[i * n + j] = m * m / std::pow(dist, exponent);
    }
    if (grid->dim == 1) {
      const double left = xi[0] - grid->lo[0];
      const double right = grid->hi[0] - xi[0];
      k.exterior_weights[i] =
          2.0 * m * (std::pow(left, -ps) + std::pow(right, -ps)) / ps;
    } else {
      k.exterior_weights[i] =
          2.0 * m * exterior_tail_2d(*grid, xi[0], xi[1], ps);
    }
  }
  return k;
}

double seminorm_energy(const KernelTable& k, const GridFunction& u) {
  const std::size_t n = k.grid->node_count();
  if (u.size() != n)
    throw std::invalid_argument("seminorm_energy: grid mismatch");
  const double p = k.frac.p;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = i + 1; j < n; ++j)
      row += 2.0 * k.pair_weights[i * n + j] *
             std::pow(std::abs(u[i] - u[j]), p);
    row += k.exterior_weights[i] * std::pow(std::abs(u[i]), p);
    total += row;
  }
  return total;
}

GridFunction seminorm_gradient(const KernelTable& k, const GridFunction& u) {
  const std::size_t n = k.grid->node_count();
  if (u.size() != n)
    throw std::invalid_argument("seminorm_gradient: grid mismatch");
  const double p = k.frac.p;
  GridFunction g(u.grid);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      acc += k.pair_weights[i * n + j] * signed_pow(u[i] - u[j], p);
    }
    g[i] = 2.0 * p * acc + p * k.exterior_weights[i] * signed_pow(u[i], p);
  }
  return g;
}

double pair_norm_p(const KernelTable& k, const StatePair& z) {
  return seminorm_energy(k, z.u) + seminorm_energy(k, z.v);
}

}  // namespace fpls
