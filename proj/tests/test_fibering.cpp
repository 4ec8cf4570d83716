#include <doctest.h>

#include <cmath>

#include "fpls/fibering.hpp"
#include "fpls/util.hpp"

using namespace fpls;

namespace {

ProblemParams std_params() {
  ProblemParams params;
  params.frac = {0.5, 2.0};
  params.q = 1.5;
  params.alpha = 1.5;
  params.beta = 1.5;
  params.lambda = 0.05;
  params.mu = 0.05;
  return params;
}

// Independent root oracle: dense scan for sign changes of m(t) - B,
// then bisection refinement on the scan cells.
std::vector<double> oracle_roots(double A, double B, double C,
                                 const ProblemParams& params, double t_hi,
                                 int samples = 1000000) {
  std::vector<double> roots;
  double prev_t = t_hi / samples;
  double prev_v = m_value(A, C, params, prev_t) - B;
  for (int i = 2; i <= samples; ++i) {
    const double t = t_hi * i / samples;
    const double v = m_value(A, C, params, t) - B;
    if ((prev_v <= 0.0 && v > 0.0) || (prev_v >= 0.0 && v < 0.0)) {
      double lo = prev_t, hi = t, vlo = prev_v;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double vm = m_value(A, C, params, mid) - B;
        if ((vlo <= 0.0) == (vm <= 0.0)) {
          lo = mid;
          vlo = vm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_t = t;
    prev_v = v;
  }
  return roots;
}

struct Fixture {
  GridPtr grid;
  KernelTable kernel;
  WeightSet weights;

  explicit Fixture(int n)
      : grid(build_grid(1, {{-1.0, 1.0}}, n)),
        kernel(assemble_kernel(grid, FracParams{0.5, 2.0})),
        weights{GridFunction(grid), GridFunction(grid), GridFunction(grid)} {
    for (std::size_t i = 0; i < grid->node_count(); ++i) {
      const double xh = (grid->node_coords[i][0] + 1.0) / 2.0;
      weights.f[i] = std::sin(2.0 * M_PI * xh);
      weights.g[i] = -std::sin(2.0 * M_PI * xh);
      weights.h[i] = 1.0;
    }
  }
};

StatePair random_state(const GridPtr& g, Rng& rng) {
  StatePair z{GridFunction(g), GridFunction(g)};
  for (auto& x : z.u.values) x = rng.uniform(-1.0, 1.0);
  for (auto& x : z.v.values) x = rng.uniform(-1.0, 1.0);
  return z;
}

}  // namespace

TEST_CASE("m_value basics") {
  auto params = std_params();
  CHECK(m_value(1.0, 0.5, params, 0.0) == 0.0);
  CHECK(m_value(1.0, 0.5, params, 1.0) == doctest::Approx(0.0));
  // C <= 0 makes m strictly increasing.
  CHECK(m_value(1.0, -1.0, params, 2.0) > m_value(1.0, -1.0, params, 1.0));
}

TEST_CASE("t_max closed form and scaling") {
  auto params = std_params();
  const double tm = t_max_of(1.0, 0.5, params);
  CHECK(tm == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(m_value(1.0, 0.5, params, tm) ==
        doctest::Approx(0.384900).epsilon(1e-5));
  CHECK_THROWS(t_max_of(1.0, -0.5, params));

  // z -> c z scales A by c^p, C by c^(a+b), t_max by 1/c.
  const double c = 2.0;
  const double tm_scaled = t_max_of(std::pow(c, params.frac.p) * 1.0,
                                    std::pow(c, params.ab()) * 0.5, params);
  CHECK(tm_scaled == doctest::Approx(tm / c).epsilon(1e-12));
}

TEST_CASE("solve_roots against the dense-scan oracle") {
  auto params = std_params();
  const double A = 1.0, C = 0.5;

  SUBCASE("two roots") {
    const double B = 0.2;
    auto r = solve_roots(A, B, C, params);
    REQUIRE(r.kind == RootKind::TwoRoots);
    CHECK(std::abs(m_value(A, C, params, *r.t_plus) - B) <= 1e-10 * (1 + B));
    CHECK(std::abs(m_value(A, C, params, *r.t_minus) - B) <= 1e-10 * (1 + B));
    auto oracle = oracle_roots(A, B, C, params, 10.0);
    REQUIRE(oracle.size() == 2);
    CHECK(*r.t_plus == doctest::Approx(oracle[0]).epsilon(1e-8));
    CHECK(*r.t_minus == doctest::Approx(oracle[1]).epsilon(1e-8));
    CHECK(m_deriv(A, C, params, *r.t_plus) > 0.0);
    CHECK(m_deriv(A, C, params, *r.t_minus) < 0.0);
  }

  SUBCASE("single minus root for B <= 0") {
    const double B = -0.1;
    auto r = solve_roots(A, B, C, params);
    REQUIRE(r.kind == RootKind::SingleMinus);
    CHECK(*r.t_minus > 1.0 / 3.0);
    CHECK(m_value(A, C, params, *r.t_minus) == doctest::Approx(B).epsilon(1e-9));
    auto oracle = oracle_roots(A, B, C, params, 10.0);
    REQUIRE(oracle.size() == 1);
    CHECK(*r.t_minus == doctest::Approx(oracle[0]).epsilon(1e-8));
  }

  SUBCASE("no root above the fold") {
    auto r = solve_roots(A, 0.5, C, params);
    CHECK(r.kind == RootKind::NoRoot);
    CHECK(r.outside_regime);
  }

  SUBCASE("monotone branch for C <= 0") {
    auto r = solve_roots(A, 0.3, -0.2, params);
    REQUIRE(r.kind == RootKind::SinglePlus);
    CHECK(m_value(A, -0.2, params, *r.t_plus) ==
          doctest::Approx(0.3).epsilon(1e-9));
    CHECK(m_deriv(A, -0.2, params, *r.t_plus) > 0.0);
    auto none = solve_roots(A, -0.3, -0.2, params);
    CHECK(none.kind == RootKind::NoRoot);
    CHECK_FALSE(none.outside_regime);
  }

  CHECK_THROWS(solve_roots(0.0, 0.1, 0.1, params));
}

TEST_CASE("projection lands on the manifold with the right class") {
  Fixture fx(12);
  auto params = std_params();
  params.lambda = 1.0;
  params.mu = 0.2;
  Rng rng(77);
  int projected = 0;
  for (int trial = 0; trial < 2000 && projected < 10; ++trial) {
    StatePair z = random_state(fx.grid, rng);
    // Normalize the ray to A = 1 so the B filter is scale-free.
    z = scaled(z, std::pow(pair_norm_p(fx.kernel, z), -1.0 / params.frac.p));
    const double B = term_B(params, fx.weights, z);
    const double C = term_C(params, fx.weights, z);
    if (!(B > 0.01 && C > 0.0)) continue;
    if (analyze_ray(params, fx.weights, fx.kernel, z).roots.kind !=
        RootKind::TwoRoots)
      continue;
    ++projected;

    StatePair zp = project(params, fx.weights, fx.kernel, z, Branch::Plus);
    StatePair zm = project(params, fx.weights, fx.kernel, z, Branch::Minus);
    CHECK(classify(params, fx.weights, fx.kernel, zp) ==
          Classification::Nplus);
    CHECK(classify(params, fx.weights, fx.kernel, zm) ==
          Classification::Nminus);
    const double Ap = pair_norm_p(fx.kernel, zp);
    CHECK(std::abs(nehari_pairing(params, fx.weights, fx.kernel, zp)) <=
          kTolManifold * (1.0 + Ap));
    // Unprojected generic state is off-manifold.
    if (std::abs(nehari_pairing(params, fx.weights, fx.kernel, z)) >
        kTolManifold * (1.0 + pair_norm_p(fx.kernel, z)))
      CHECK(classify(params, fx.weights, fx.kernel, z) ==
            Classification::NotOnManifold);
  }
  CHECK(projected >= 10);
}

TEST_CASE("projection idempotence and ray invariance") {
  Fixture fx(12);
  auto params = std_params();
  Rng rng(31);
  StatePair z = random_state(fx.grid, rng);
  while (!(term_C(params, fx.weights, z) > 0.0)) z = random_state(fx.grid, rng);

  StatePair once = project(params, fx.weights, fx.kernel, z, Branch::Minus);
  StatePair twice = project(params, fx.weights, fx.kernel, once, Branch::Minus);
  for (std::size_t i = 0; i < once.u.size(); ++i) {
    CHECK(twice.u[i] == doctest::Approx(once.u[i]).epsilon(1e-9));
    CHECK(twice.v[i] == doctest::Approx(once.v[i]).epsilon(1e-9));
  }

  StatePair from_scaled =
      project(params, fx.weights, fx.kernel, scaled(z, 2.0), Branch::Minus);
  for (std::size_t i = 0; i < once.u.size(); ++i)
    CHECK(from_scaled.u[i] == doctest::Approx(once.u[i]).epsilon(1e-9));
}

TEST_CASE("energy ordering along the ray") {
  Fixture fx(12);
  auto params = std_params();
  Rng rng(13);
  StatePair z = random_state(fx.grid, rng);
  while (!(term_B(params, fx.weights, z) > 0.0 &&
           term_C(params, fx.weights, z) > 0.0))
    z = random_state(fx.grid, rng);

  const FiberingReport rep = analyze_ray(params, fx.weights, fx.kernel, z);
  REQUIRE(rep.roots.kind == RootKind::TwoRoots);
  const double tp = *rep.roots.t_plus, tm = *rep.roots.t_minus;
  auto I_at = [&](double t) {
    return energy(params, fx.weights, fx.kernel, scaled(z, t)).I;
  };

  const double I_plus = I_at(tp);
  for (double t : {0.5 * tp, tp, 0.5 * (tp + tm)})
    CHECK(I_plus <= I_at(t) + 1e-12);

  // t_minus maximizes I over a dense t-grid.
  const double I_minus = I_at(tm);
  double best = -1e300;
  for (int i = 1; i <= 10000; ++i) best = std::max(best, I_at(2.0 * tm * i / 10000));
  CHECK(I_minus >= best - 1e-9 * (1.0 + std::abs(I_minus)));
}

TEST_CASE("branch unavailable errors") {
  Fixture fx(8);
  auto params = std_params();
  Rng rng(55);
  StatePair z = random_state(fx.grid, rng);
  while (!(term_B(params, fx.weights, z) <= 0.0 &&
           term_C(params, fx.weights, z) > 0.0))
    z = random_state(fx.grid, rng);
  CHECK_THROWS(project(params, fx.weights, fx.kernel, z, Branch::Plus));
  CHECK_NOTHROW(project(params, fx.weights, fx.kernel, z, Branch::Minus));
}

TEST_CASE("sign dichotomy on projected states") {
  Fixture fx(12);
  auto params = std_params();
  Rng rng(99);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 25; ++trial) {
    StatePair z = random_state(fx.grid, rng);
    const double C = term_C(params, fx.weights, z);
    if (!(C > 0.0)) continue;
    const FiberingReport rep = analyze_ray(params, fx.weights, fx.kernel, z);
    if (rep.roots.t_minus) {
      StatePair zm = scaled(z, *rep.roots.t_minus);
      CHECK(term_C(params, fx.weights, zm) > 0.0);
      ++checked;
    }
    if (rep.roots.t_plus) {
      StatePair zp = scaled(z, *rep.roots.t_plus);
      CHECK(term_B(params, fx.weights, zp) > 0.0);
    }
  }
  CHECK(checked >= 25);
}
