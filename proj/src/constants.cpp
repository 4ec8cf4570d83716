#include "fpls/constants.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fpls/util.hpp"

namespace fpls {

namespace {

struct StartResult {
  double value = std::numeric_limits<double>::infinity();
  bool converged = false;
};

double rayleigh(const KernelTable& k, const GridFunction& u, double r,
                double p) {
  const double L = lr_norm(u, r);
  if (L == 0.0) return std::numeric_limits<double>::infinity();
  return seminorm_energy(k, u) / std::pow(L, p);
}

void normalize(GridFunction& u, double r) {
  const double L = lr_norm(u, r);
  if (L == 0.0) throw std::runtime_error("estimate_sobolev: zero iterate");
  for (auto& x : u.values) x /= L;
}

StartResult descend(const KernelTable& k, const ProblemParams& params,
                    GridFunction u, const SobolevOptions& opts) {
  const double p = params.frac.p;
  const double r = params.ab();
  const double m = u.grid->cell_measure();
  normalize(u, r);

  StartResult res;
  double R = seminorm_energy(k, u);  // L = 1 after normalization
  GridFunction prev_u = u, prev_g = u;
  bool have_prev = false;
  double step = 1.0;

  for (int it = 0; it < opts.max_iter; ++it) {
    // Rayleigh-quotient gradient at L = 1.
    GridFunction g = seminorm_gradient(k, u);
    for (std::size_t i = 0; i < u.size(); ++i)
      g[i] -= R * p * m * signed_pow(u[i], r);

    if (have_prev) {
      // Barzilai-Borwein step, clamped; Armijo below keeps descent monotone.
      double sy = 0.0, ss = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double si = u[i] - prev_u[i];
        sy += si * (g[i] - prev_g[i]);
        ss += si * si;
      }
      if (sy > 0.0) step = std::min(std::max(ss / sy, 1e-12), 1e6);
    }
    prev_u = u;
    prev_g = g;
    have_prev = true;

    double g2 = 0.0;
    for (double x : g.values) g2 += x * x;
    if (g2 == 0.0) {
      res.value = R;
      res.converged = true;
      return res;
    }

    double R_new = R;
    GridFunction trial = u;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t i = 0; i < u.size(); ++i)
        trial[i] = u[i] - step * g[i];
      const double cand = rayleigh(k, trial, r, p);
      if (cand <= R - 1e-4 * step * g2) {
        R_new = cand;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // Line search exhausted: the quotient is flat to machine precision.
      res.value = R;
      res.converged = true;
      return res;
    }
    normalize(trial, r);
    u = std::move(trial);
    const double change = std::abs(R - R_new);
    R = R_new;
    if (change <= opts.tol * (1.0 + std::abs(R))) {
      res.value = R;
      res.converged = true;
      return res;
    }
  }
  res.value = R;
  return res;
}

}  // namespace

SobolevEstimate estimate_sobolev(const KernelTable& k,
                                 const ProblemParams& params,
                                 const SobolevOptions& opts) {
  const std::size_t n_starts = 1 + opts.n_random_starts;
  std::vector<GridFunction> starts;
  starts.reserve(n_starts);
  starts.emplace_back(k.grid);
  for (auto& x : starts[0].values) x = 1.0;
  for (int s = 0; s < opts.n_random_starts; ++s) {
    Rng rng(opts.seed + 0x1000 * (s + 1));
    GridFunction u(k.grid);
    for (auto& x : u.values) x = rng.uniform(-1.0, 1.0);
    starts.push_back(std::move(u));
  }

  std::vector<StartResult> results(n_starts);
  parallel_for(n_starts, [&](std::size_t i) {
    results[i] = descend(k, params, starts[i], opts);
  });

  SobolevEstimate est;
  est.value = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& r : results) {
    est.per_start.push_back(r.value);
    if (r.converged) {
      any = true;
      est.value = std::min(est.value, r.value);
    }
  }
  if (!any)
    throw std::runtime_error(
        "estimate_sobolev: no start converged within max_iter");
  return est;
}

double threshold_C(const ProblemParams& params, double S) {
  if (!(S > 0.0)) throw std::invalid_argument("threshold_C: need S > 0");
  const double p = params.frac.p, q = params.q, ab = params.ab();
  const double bracket =
      std::pow((p - q) / (2.0 * (ab - q)) * std::pow(S, ab / p), p / (ab - p));
  const double tail =
      std::pow(std::pow(S, -q / p) * (ab - q) / (ab - p), -p / (p - q));
  return bracket * tail;
}

double threshold_C_alt(const ProblemParams& params, double S) {
  if (!(S > 0.0)) throw std::invalid_argument("threshold_C_alt: need S > 0");
  const double p = params.frac.p, q = params.q, ab = params.ab();
  const double bracket =
      std::pow((p - q) / (2.0 * (ab - p)) * std::pow(S, ab / p), p / (ab - p));
  const double tail =
      std::pow(std::pow(S, -q / p) * (ab - q) / (ab - p), -p / (p - q));
  return bracket * tail;
}

double threshold_D(const ProblemParams& params, double S) {
  const double p = params.frac.p, q = params.q;
  return std::pow(q / p, p / (p - q)) * threshold_C(params, S);
}

ThresholdReport membership(const ProblemParams& params, const WeightSet& w,
                           double S_d) {
  ThresholdReport rep;
  rep.S_d = S_d;
  rep.C_theta = threshold_C(params, S_d);
  rep.C_theta_alt = threshold_C_alt(params, S_d);
  rep.D_psi = threshold_D(params, S_d);
  rep.norm_f_qstar = lr_norm(w.f, params.q_star());
  rep.norm_g_qstar = lr_norm(w.g, params.q_star());
  const double p = params.frac.p, q = params.q;
  const double e = p / (p - q);
  rep.lhs = std::pow(std::abs(params.lambda) * rep.norm_f_qstar, e) +
            std::pow(std::abs(params.mu) * rep.norm_g_qstar, e);
  if (rep.lhs == 0.0)
    throw std::invalid_argument(
        "membership: lhs vanishes; (lambda,mu) with the given weights is "
        "degenerate");
  rep.in_theta = rep.lhs < rep.C_theta;
  rep.in_psi = rep.lhs < rep.D_psi;
  return rep;
}

}  // namespace fpls
