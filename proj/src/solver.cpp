#include "fpls/solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fpls/util.hpp"

namespace fpls {

void SolverConfig::validate() const {
  if (max_outer < 1 || n_starts < 1)
    throw std::invalid_argument("SolverConfig: counts must be >= 1");
  if (!(step0 > 0.0 && armijo_c > 0.0 && tol_grad > 0.0 && tol_energy > 0.0))
    throw std::invalid_argument("SolverConfig: tolerances must be positive");
  if (!(backtrack > 0.0 && backtrack < 1.0))
    throw std::invalid_argument("SolverConfig: backtrack must lie in (0,1)");
}

double c0_lower_bound(const ProblemParams& params, double lhs, double S_d) {
  const double p = params.frac.p, q = params.q, ab = params.ab();
  const double K = (p - q) / (2.0 * (ab - q)) * std::pow(S_d, ab / p);
  const double neg = -(ab - q) / (q * ab) * std::pow(lhs, (p - q) / p) *
                     std::pow(S_d, -q / p);
  const double pos = (ab - p) / (p * ab) * std::pow(K, (p - q) / (ab - p));
  return (neg + pos) * std::pow(K, q / (ab - p));
}

double weak_residual(const ProblemParams& params, const WeightSet& w,
                     const KernelTable& k, const StatePair& z) {
  const StatePair g = energy_gradient(params, w, k, z);
  double sup = 0.0;
  for (double x : g.u.values) sup = std::max(sup, std::abs(x));
  for (double x : g.v.values) sup = std::max(sup, std::abs(x));
  return sup;
}

namespace {

double sup_norm(const StatePair& g) {
  double sup = 0.0;
  for (double x : g.u.values) sup = std::max(sup, std::abs(x));
  for (double x : g.v.values) sup = std::max(sup, std::abs(x));
  return sup;
}

double dot(const StatePair& a, const StatePair& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.u.size(); ++i) s += a.u[i] * b.u[i];
  for (std::size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * b.v[i];
  return s;
}

StatePair axpy(const StatePair& z, double c, const StatePair& d) {
  StatePair out = z;
  for (std::size_t i = 0; i < z.u.size(); ++i) out.u[i] += c * d.u[i];
  for (std::size_t i = 0; i < z.v.size(); ++i) out.v[i] += c * d.v[i];
  return out;
}

// Largest A with c1*A - c2*A^(q/p) <= level; iterates above 1e3x this
// radius trip the boundedness watchdog.
double coercivity_radius(double c1, double c2, double qop, double level) {
  double hi = 1.0;
  auto f = [&](double A) { return c1 * A - c2 * std::pow(A, qop) - level; };
  int guard = 0;
  while (f(hi) < 0.0) {
    hi *= 2.0;
    if (++guard > 600) return hi;
  }
  double lo = hi * 0.5;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return hi;
}

struct RunResult {
  StatePair state;
  EnergyBreakdown energy;
  double grad_sup = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
  bool usable = false;
};

RunResult run_one_start(const ProblemParams& params, const WeightSet& w,
                        const KernelTable& k, const SolverConfig& cfg,
                        Branch branch, const ThresholdReport& th,
                        StatePair z0) {
  RunResult res;
  StatePair z{GridFunction(k.grid), GridFunction(k.grid)};
  try {
    z = project(params, w, k, z0, branch);
  } catch (const std::exception&) {
    return res;  // ray does not admit the branch; start unusable
  }
  res.usable = true;

  EnergyBreakdown e = energy(params, w, k, z);
  const double p = params.frac.p, q = params.q, ab = params.ab();
  const double c1 = (ab - p) / (p * ab);
  const double c2 = (ab - q) / (q * ab) * std::pow(th.lhs, (p - q) / p) *
                    std::pow(th.S_d, -q / p);
  const double a_watch =
      1e3 * coercivity_radius(c1, c2, q / p, std::abs(e.I) + 1.0);

  StatePair prev_z = z, prev_g = z;
  bool have_prev = false;
  double step = cfg.step0;
  double rel_change = std::numeric_limits<double>::infinity();

  for (int it = 0; it < cfg.max_outer; ++it) {
    res.iterations = it;
    StatePair g = energy_gradient(params, w, k, z);
    const double gsup = sup_norm(g);
    res.grad_sup = gsup;
    if (gsup <= cfg.tol_grad * (1.0 + e.A) && rel_change <= cfg.tol_energy) {
      res.converged = true;
      break;
    }
    if (std::pow(e.A, 1.0 / p) > std::pow(a_watch, 1.0 / p))
      throw std::runtime_error("solver: iterate-boundedness watchdog tripped");

    if (have_prev) {
      StatePair s = axpy(z, -1.0, prev_z);
      StatePair y = axpy(g, -1.0, prev_g);
      const double sy = dot(s, y);
      if (sy > 0.0)
        step = std::min(std::max(dot(s, s) / sy, 1e-14), 1e8);
      else
        step = cfg.step0;
    }
    prev_z = z;
    prev_g = g;
    have_prev = true;

    const double g2 = dot(g, g);
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      StatePair trial_ray = axpy(z, -step, g);
      StatePair trial;
      try {
        trial = project(params, w, k, trial_ray, branch);
      } catch (const std::exception&) {
        step *= cfg.backtrack;  // branch lost along the ray
        continue;
      }
      const EnergyBreakdown et = energy(params, w, k, trial);
      if (et.I <= e.I - cfg.armijo_c * step * g2) {
        rel_change = std::abs(e.I - et.I) / (1.0 + std::abs(e.I));
        z = std::move(trial);
        e = et;
        accepted = true;
        break;
      }
      step *= cfg.backtrack;
    }
    if (!accepted) {
      // No further descent possible along this direction.
      res.converged = gsup <= cfg.tol_grad * (1.0 + e.A);
      break;
    }
  }
  res.state = std::move(z);
  res.energy = e;
  res.grad_sup = weak_residual(params, w, k, res.state);
  return res;
}

StatePair make_start(const GridPtr& grid, std::uint64_t seed, int index) {
  Rng rng(seed * 0x10001 + 0x51 * index + 7);
  StatePair z{GridFunction(grid), GridFunction(grid)};
  if (index == 0) {
    // Nonnegative perturbation of the constant pair.
    for (auto& x : z.u.values) x = 1.0 + 0.2 * rng.uniform();
    for (auto& x : z.v.values) x = 1.0 + 0.2 * rng.uniform();
  } else {
    for (auto& x : z.u.values) x = rng.uniform(-1.0, 1.0);
    for (auto& x : z.v.values) x = rng.uniform(-1.0, 1.0);
  }
  return z;
}

}  // namespace

SolveReport minimize_branch(const ProblemParams& params, const WeightSet& w,
                            const KernelTable& k, const SolverConfig& cfg,
                            Branch branch, const ThresholdReport& th) {
  cfg.validate();
  const bool member = branch == Branch::Plus ? th.in_theta : th.in_psi;
  if (!member && !cfg.force)
    throw std::invalid_argument(
        branch == Branch::Plus
            ? "minimize_branch: (lambda,mu) outside Theta (use force to "
              "override)"
            : "minimize_branch: (lambda,mu) outside Psi (use force to "
              "override)");

  std::vector<RunResult> runs(cfg.n_starts);
  parallel_for(cfg.n_starts, [&](std::size_t i) {
    runs[i] = run_one_start(params, w, k, cfg, branch, th,
                            make_start(k.grid, cfg.seed, static_cast<int>(i)));
  });

  int best = -1;
  bool any_usable = false;
  for (int i = 0; i < cfg.n_starts; ++i) {
    if (!runs[i].usable) continue;
    any_usable = true;
    if (!runs[i].converged) continue;
    if (best < 0 || runs[i].energy.I < runs[best].energy.I) best = i;
  }
  if (!any_usable)
    throw std::runtime_error(
        "minimize_branch: no start admits the requested projection");
  if (best < 0) {
    // Nothing converged; report the lowest-energy usable run as-is.
    for (int i = 0; i < cfg.n_starts; ++i)
      if (runs[i].usable &&
          (best < 0 || runs[i].energy.I < runs[best].energy.I))
        best = i;
  }

  const RunResult& r = runs[best];
  SolveReport rep;
  rep.branch = branch;
  rep.state = r.state;
  rep.energy = r.energy;
  rep.nehari_residual = std::abs(nehari_pairing(params, w, k, r.state));
  rep.grad_residual = r.grad_sup;
  rep.classification = classify(params, w, k, r.state);
  rep.iterations = r.iterations;
  rep.converged = r.converged;
  rep.thresholds = th;
  if (branch == Branch::Minus)
    rep.c0_bound = c0_lower_bound(params, th.lhs, th.S_d);
  return rep;
}

std::pair<SolveReport, SolveReport> minimize_both(
    const ProblemParams& params, const WeightSet& w, const KernelTable& k,
    const SolverConfig& cfg, const ThresholdReport& th) {
  SolveReport plus = minimize_branch(params, w, k, cfg, Branch::Plus, th);
  SolveReport minus = minimize_branch(params, w, k, cfg, Branch::Minus, th);
  StatePair diff = axpy(plus.state, -1.0, minus.state);
  const double dist = std::pow(pair_norm_p(k, diff), 1.0 / params.frac.p);
  plus.distinctness = dist;
  minus.distinctness = dist;
  return {std::move(plus), std::move(minus)};
}

}  // namespace fpls
