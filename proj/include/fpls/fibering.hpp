#pragma once

#include <optional>

#include "fpls/functional.hpp"

namespace fpls {

/// Roots of m(t) = B along the ray t -> t*z, where
///   m(t) = t^(p-q) A - 2 t^(alpha+beta-q) C.
/// TwoRoots orders them 0 < t_plus < t_max < t_minus. SinglePlus covers
/// the monotone case C <= 0, B > 0 (the unique root has m' > 0).
enum class RootKind { NoRoot, SinglePlus, SingleMinus, TwoRoots };

struct FiberRoots {
  RootKind kind = RootKind::NoRoot;
  std::optional<double> t_plus;
  std::optional<double> t_minus;
  bool outside_regime = false;  // C > 0 with B >= m(t_max)
};

struct FiberingReport {
  double A = 0.0, B = 0.0, C = 0.0;
  std::optional<double> t_max;
  std::optional<double> m_at_tmax;
  FiberRoots roots;
};

enum class Classification { Nplus, Nzero, Nminus, NotOnManifold };
enum class Branch { Plus, Minus };

inline constexpr double kTolRoot = 1e-10;
inline constexpr double kTolManifold = 1e-8;

double m_value(double A, double C, const ProblemParams& params, double t);
double m_deriv(double A, double C, const ProblemParams& params, double t);

/// Argmax of m when C > 0:
///   t_max = ((p-q) A / (2 (alpha+beta-q) C))^(1/(alpha+beta-p)).
/// Throws when C <= 0 (m is then monotone increasing).
double t_max_of(double A, double C, const ProblemParams& params);

FiberRoots solve_roots(double A, double B, double C,
                       const ProblemParams& params);

FiberingReport analyze_ray(const ProblemParams& params, const WeightSet& w,
                           const KernelTable& k, const StatePair& z);

Classification classify(const ProblemParams& params, const WeightSet& w,
                        const KernelTable& k, const StatePair& z);

/// Scales z onto the requested Nehari branch using the fibering root.
/// Throws when the branch is unavailable on this ray.
StatePair project(const ProblemParams& params, const WeightSet& w,
                  const KernelTable& k, const StatePair& z, Branch branch);

StatePair scaled(const StatePair& z, double t);

}  // namespace fpls
