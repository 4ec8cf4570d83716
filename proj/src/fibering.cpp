#include "fpls/fibering.hpp"

#include <cmath>
#include <stdexcept>

namespace fpls {

double m_value(double A, double C, const ProblemParams& params, double t) {
  if (t < 0.0) throw std::invalid_argument("m_value: t must be >= 0");
  if (t == 0.0) return 0.0;
  const double p = params.frac.p, q = params.q, ab = params.ab();
  return std::pow(t, p - q) * A - 2.0 * std::pow(t, ab - q) * C;
}

double m_deriv(double A, double C, const ProblemParams& params, double t) {
  const double p = params.frac.p, q = params.q, ab = params.ab();
  return (p - q) * std::pow(t, p - q - 1.0) * A -
         2.0 * (ab - q) * std::pow(t, ab - q - 1.0) * C;
}

double t_max_of(double A, double C, const ProblemParams& params) {
  if (!(A > 0.0)) throw std::invalid_argument("t_max_of: need A > 0");
  if (!(C > 0.0))
    throw std::invalid_argument("t_max_of: m has no maximizer when C <= 0");
  const double p = params.frac.p, q = params.q, ab = params.ab();
  return std::pow((p - q) * A / (2.0 * (ab - q) * C), 1.0 / (ab - p));
}

namespace {

// Bisection for m(t) = B on a bracket where m - B changes sign.
// increasing: whether m is increasing on the bracket.
double bisect_root(double A, double B, double C, const ProblemParams& params,
                   double lo, double hi, bool increasing) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= kTolRoot * mid) return mid;
    const double val = m_value(A, C, params, mid) - B;
    const bool go_right = increasing ? (val < 0.0) : (val > 0.0);
    if (go_right)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

FiberRoots solve_roots(double A, double B, double C,
                       const ProblemParams& params) {
  if (!(A > 0.0)) throw std::invalid_argument("solve_roots: need A > 0");
  FiberRoots r;

  if (C > 0.0) {
    const double tm = t_max_of(A, C, params);
    const double mmax = m_value(A, C, params, tm);
    if (B >= mmax) {
      r.kind = RootKind::NoRoot;
      r.outside_regime = true;
      return r;
    }
    // Decreasing branch: double the upper end until m drops below B.
    double hi = 2.0 * tm;
    int guard = 0;
    while (m_value(A, C, params, hi) > B) {
      hi *= 2.0;
      if (++guard > 200)
        throw std::runtime_error("solve_roots: bracket doubling failed");
    }
    const double tminus = bisect_root(A, B, C, params, tm, hi, false);
    if (B <= 0.0) {
      r.kind = RootKind::SingleMinus;
      r.t_minus = tminus;
      return r;
    }
    // Increasing branch: halve the lower end until m drops below B.
    double lo = 0.5 * tm;
    guard = 0;
    while (m_value(A, C, params, lo) > B) {
      lo *= 0.5;
      if (++guard > 200)
        throw std::runtime_error("solve_roots: bracket halving failed");
    }
    r.kind = RootKind::TwoRoots;
    r.t_plus = bisect_root(A, B, C, params, lo, tm, true);
    r.t_minus = tminus;
    return r;
  }

  // C <= 0: m is strictly increasing from 0, so only B > 0 yields a root.
  if (B <= 0.0) {
    r.kind = RootKind::NoRoot;
    return r;
  }
  double hi = 1.0;
  int guard = 0;
  while (m_value(A, C, params, hi) < B) {
    hi *= 2.0;
    if (++guard > 200)
      throw std::runtime_error("solve_roots: bracket doubling failed");
  }
  double lo = hi * 0.5;
  guard = 0;
  while (m_value(A, C, params, lo) > B) {
    lo *= 0.5;
    if (++guard > 200)
      throw std::runtime_error("solve_roots: bracket halving failed");
  }
  r.kind = RootKind::SinglePlus;
  r.t_plus = bisect_root(A, B, C, params, lo, hi, true);
  return r;
}

FiberingReport analyze_ray(const ProblemParams& params, const WeightSet& w,
                           const KernelTable& k, const StatePair& z) {
  FiberingReport rep;
  rep.A = pair_norm_p(k, z);
  rep.B = term_B(params, w, z);
  rep.C = term_C(params, w, z);
  if (rep.A > 0.0 && rep.C > 0.0) {
    rep.t_max = t_max_of(rep.A, rep.C, params);
    rep.m_at_tmax = m_value(rep.A, rep.C, params, *rep.t_max);
  }
  if (rep.A > 0.0) rep.roots = solve_roots(rep.A, rep.B, rep.C, params);
  return rep;
}

Classification classify(const ProblemParams& params, const WeightSet& w,
                        const KernelTable& k, const StatePair& z) {
  const double A = pair_norm_p(k, z);
  if (A == 0.0) throw std::invalid_argument("classify: zero state");
  const double nehari = nehari_pairing(params, w, k, z);
  if (std::abs(nehari) > kTolManifold * (1.0 + A))
    return Classification::NotOnManifold;
  const double phi = phi_prime_pairing(params, w, k, z);
  const double tol_zero = 1e-10 * (1.0 + A);
  if (phi > tol_zero) return Classification::Nplus;
  if (phi < -tol_zero) return Classification::Nminus;
  return Classification::Nzero;
}

StatePair scaled(const StatePair& z, double t) {
  StatePair out = z;
  for (auto& x : out.u.values) x *= t;
  for (auto& x : out.v.values) x *= t;
  return out;
}

StatePair project(const ProblemParams& params, const WeightSet& w,
                  const KernelTable& k, const StatePair& z, Branch branch) {
  const FiberingReport rep = analyze_ray(params, w, k, z);
  if (!(rep.A > 0.0)) throw std::invalid_argument("project: zero state");
  const auto& t =
      branch == Branch::Plus ? rep.roots.t_plus : rep.roots.t_minus;
  if (!t)
    throw std::runtime_error(
        branch == Branch::Plus
            ? "project: plus branch unavailable on this ray"
            : "project: minus branch unavailable on this ray");
  return scaled(z, *t);
}

}  // namespace fpls
