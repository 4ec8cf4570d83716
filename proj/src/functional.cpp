#include "fpls/functional.hpp"

#include <cmath>
#include <stdexcept>

namespace fpls {

std::vector<std::string> ProblemParams::constraint_violations(int dim) const {
  std::vector<std::string> out;
  if (!(frac.s > 0.0 && frac.s < 1.0)) out.push_back("s must satisfy 0<s<1");
  if (!(frac.p > 1.0)) out.push_back("p must satisfy p>1");
  if (frac.p > 1.0 && dim < frac.p * frac.s)
    out.push_back("dimension must satisfy n>=ps");
  if (!(1.0 < q && q < frac.p)) out.push_back("q must satisfy 1<q<p");
  if (!(alpha > 1.0)) out.push_back("alpha must satisfy alpha>1");
  if (!(beta > 1.0)) out.push_back("beta must satisfy beta>1");
  if (frac.p > 1.0 && dim >= frac.p * frac.s) {
    const double pstar = frac.p_star(dim);
    if (!(frac.p < ab() && ab() < pstar))
      out.push_back("alpha+beta must satisfy p<alpha+beta<p*");
  }
  if (lambda == 0.0 && mu == 0.0)
    out.push_back("(lambda,mu) must differ from (0,0)");
  return out;
}

void ProblemParams::validate(int dim) const {
  auto v = constraint_violations(dim);
  if (v.empty()) return;
  std::string msg = "invalid problem parameters:";
  for (const auto& s : v) msg += " [" + s + "]";
  throw std::invalid_argument(msg);
}

void WeightSet::validate() const {
  double hmax = 0.0;
  for (double x : h.values) {
    if (x < 0.0) throw std::invalid_argument("weight h must be nonnegative");
    hmax = std::max(hmax, x);
  }
  if (std::abs(hmax - 1.0) > 1e-12)
    throw std::invalid_argument("weight h must have max value 1");
  bool pos = false;
  for (double x : f.values) pos = pos || x > 0.0;
  for (double x : g.values) pos = pos || x > 0.0;
  if (!pos)
    throw std::invalid_argument(
        "at least one of f, g must take a positive value");
}

double term_B(const ProblemParams& params, const WeightSet& w,
              const StatePair& z) {
  const double m = z.u.grid->cell_measure();
  double sum = 0.0;
  for (std::size_t i = 0; i < z.u.size(); ++i)
    sum += m * (params.lambda * w.f[i] * std::pow(std::abs(z.u[i]), params.q) +
                params.mu * w.g[i] * std::pow(std::abs(z.v[i]), params.q));
  return sum;
}

double term_C(const ProblemParams& params, const WeightSet& w,
              const StatePair& z) {
  const double m = z.u.grid->cell_measure();
  double sum = 0.0;
  for (std::size_t i = 0; i < z.u.size(); ++i)
    sum += m * w.h[i] * std::pow(std::abs(z.u[i]), params.alpha) *
           std::pow(std::abs(z.v[i]), params.beta);
  return sum;
}

EnergyBreakdown energy(const ProblemParams& params, const WeightSet& w,
                       const KernelTable& k, const StatePair& z) {
  EnergyBreakdown e;
  e.A = pair_norm_p(k, z);
  e.B = term_B(params, w, z);
  e.C = term_C(params, w, z);
  e.I = e.A / params.frac.p - e.B / params.q - 2.0 * e.C / params.ab();
  return e;
}

StatePair energy_gradient(const ProblemParams& params, const WeightSet& w,
                          const KernelTable& k, const StatePair& z) {
  const double p = params.frac.p;
  const double m = z.u.grid->cell_measure();
  StatePair g{seminorm_gradient(k, z.u), seminorm_gradient(k, z.v)};
  const double cu = 2.0 * params.alpha / params.ab();
  const double cv = 2.0 * params.beta / params.ab();
  for (std::size_t i = 0; i < z.u.size(); ++i) {
    const double au = std::pow(std::abs(z.u[i]), params.alpha);
    const double bv = std::pow(std::abs(z.v[i]), params.beta);
    g.u[i] = g.u[i] / p -
             m * (params.lambda * w.f[i] * signed_pow(z.u[i], params.q) +
                  cu * w.h[i] * signed_pow(z.u[i], params.alpha) * bv);
    g.v[i] = g.v[i] / p -
             m * (params.mu * w.g[i] * signed_pow(z.v[i], params.q) +
                  cv * w.h[i] * au * signed_pow(z.v[i], params.beta));
  }
  return g;
}

double nehari_pairing(const ProblemParams& params, const WeightSet& w,
                      const KernelTable& k, const StatePair& z) {
  return pair_norm_p(k, z) - term_B(params, w, z) - 2.0 * term_C(params, w, z);
}

double phi_prime_pairing(const ProblemParams& params, const WeightSet& w,
                         const KernelTable& k, const StatePair& z) {
  return params.frac.p * pair_norm_p(k, z) - params.q * term_B(params, w, z) -
         2.0 * params.ab() * term_C(params, w, z);
}

}  // namespace fpls
