#include <doctest.h>

#include <cmath>

#include "fpls/kernel.hpp"
#include "fpls/util.hpp"

using namespace fpls;

namespace {

KernelTable one_node_fixture() {
  auto g = build_grid(1, {{-1.0, 1.0}}, 1);
  return assemble_kernel(g, FracParams{0.5, 2.0});
}

}  // namespace

TEST_CASE("FracParams validation") {
  CHECK_THROWS(FracParams{0.5, 2.5}.validate(1));  // ps = 1.25 >= n = 1
  CHECK_THROWS(FracParams{1.5, 2.0}.validate(2));
  CHECK_THROWS(FracParams{0.5, 0.9}.validate(1));
  CHECK_NOTHROW(FracParams{0.4, 2.0}.validate(1));
}

TEST_CASE("1D exterior weight closed form") {
  // Single node at 0 on (-1,1), s=0.5, p=2: e = 2*2*(1 + 1)/1 = 8.
  auto k = one_node_fixture();
  REQUIRE(k.exterior_weights.size() == 1);
  CHECK(k.exterior_weights[0] == doctest::Approx(8.0).epsilon(1e-13));
  CHECK(k.pair_weights[0] == 0.0);
}

TEST_CASE("1D pair weight formula") {
  auto g = build_grid(1, {{-1.0, 1.0}}, 2);  // nodes at -0.5, 0.5, h = 1
  auto k = assemble_kernel(g, FracParams{0.5, 2.0});
  CHECK(k.w(0, 1) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(k.w(1, 0) == k.w(0, 1));
  CHECK(k.w(0, 0) == 0.0);
}

TEST_CASE("pair weights are symmetric") {
  auto g = build_grid(2, {{0.0, 1.0}, {0.0, 2.0}}, 4);
  auto k = assemble_kernel(g, FracParams{0.3, 2.0});
  const std::size_t n = g->node_count();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) CHECK(k.w(i, j) == k.w(j, i));
}

TEST_CASE("2D exterior weight against the square closed form") {
  // Center of the unit square, ps = 1: the angular integral of R^-1 is
  // 16 sin(pi/4), so the tail integral equals 8*sqrt(2).
  auto g = build_grid(2, {{0.0, 1.0}, {0.0, 1.0}}, 1);
  auto k = assemble_kernel(g, FracParams{0.5, 2.0});
  const double expected = 2.0 * 1.0 * 8.0 * std::sqrt(2.0);
  CHECK(k.exterior_weights[0] == doctest::Approx(expected).epsilon(1e-7));
}

TEST_CASE("2D exterior weights respect grid symmetry") {
  auto g = build_grid(2, {{0.0, 1.0}, {0.0, 1.0}}, 2);
  auto k = assemble_kernel(g, FracParams{0.4, 2.0});
  // All four nodes are related by square symmetries.
  CHECK(k.exterior_weights[0] == doctest::Approx(k.exterior_weights[1]).epsilon(1e-10));
  CHECK(k.exterior_weights[0] == doctest::Approx(k.exterior_weights[2]).epsilon(1e-10));
  CHECK(k.exterior_weights[0] == doctest::Approx(k.exterior_weights[3]).epsilon(1e-10));
}

TEST_CASE("seminorm energy on fixtures") {
  auto k = one_node_fixture();
  GridFunction zero(k.grid);
  CHECK(seminorm_energy(k, zero) == 0.0);
  GridFunction one(k.grid, {1.0});
  CHECK(seminorm_energy(k, one) == doctest::Approx(8.0).epsilon(1e-13));
}

TEST_CASE("seminorm energy p-homogeneity") {
  auto g = build_grid(1, {{-1.0, 1.0}}, 8);
  const double p = 2.5;
  auto k = assemble_kernel(g, FracParams{0.3, p});
  Rng rng(7);
  GridFunction u(g);
  for (auto& x : u.values) x = rng.uniform(-1.0, 1.0);
  GridFunction cu = u;
  for (auto& x : cu.values) x *= 3.0;
  CHECK(seminorm_energy(k, cu) ==
        doctest::Approx(std::pow(3.0, p) * seminorm_energy(k, u)).epsilon(1e-12));
}

TEST_CASE("zero extension is not translation invariant") {
  auto g = build_grid(1, {{-1.0, 1.0}}, 8);
  auto k = assemble_kernel(g, FracParams{0.5, 2.0});
  GridFunction u(g);
  u[3] = 1.0;  // has zero nodes
  GridFunction shifted = u;
  for (auto& x : shifted.values) x += 1.0;
  CHECK(seminorm_energy(k, shifted) != seminorm_energy(k, u));
}

TEST_CASE("seminorm gradient fixtures") {
  auto k = one_node_fixture();
  GridFunction zero(k.grid);
  auto gz = seminorm_gradient(k, zero);
  CHECK(gz[0] == 0.0);
  GridFunction one(k.grid, {1.0});
  auto g1 = seminorm_gradient(k, one);
  CHECK(g1[0] == doctest::Approx(16.0).epsilon(1e-13));
}

TEST_CASE("seminorm gradient matches central differences") {
  auto grid = build_grid(1, {{-1.0, 1.0}}, 8);
  for (double p : {2.0, 2.5, 3.0}) {
    auto k = assemble_kernel(grid, FracParams{0.3, p});
    Rng rng(42);
    GridFunction u(grid), d(grid);
    for (auto& x : u.values) x = rng.uniform(-1.0, 1.0);
    for (auto& x : d.values) x = rng.uniform(-1.0, 1.0);
    auto g = seminorm_gradient(k, u);
    double gd = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) gd += g[i] * d[i];
    const double eps = 1e-5;
    GridFunction up = u, um = u;
    for (std::size_t i = 0; i < u.size(); ++i) {
      up[i] += eps * d[i];
      um[i] -= eps * d[i];
    }
    const double fd =
        (seminorm_energy(k, up) - seminorm_energy(k, um)) / (2.0 * eps);
    CHECK(std::abs(gd - fd) <= 1e-6 * (1.0 + std::abs(gd)));
  }
}

TEST_CASE("pair norm structure") {
  auto g = build_grid(1, {{-1.0, 1.0}}, 6);
  auto k = assemble_kernel(g, FracParams{0.5, 2.0});
  Rng rng(3);
  GridFunction u(g), v(g);
  for (auto& x : u.values) x = rng.uniform(-1.0, 1.0);
  for (auto& x : v.values) x = rng.uniform(-1.0, 1.0);
  GridFunction zero(g);

  CHECK(pair_norm_p(k, {zero, zero}) == 0.0);
  CHECK(pair_norm_p(k, {u, zero}) == doctest::Approx(seminorm_energy(k, u)));
  CHECK(pair_norm_p(k, {u, v}) == doctest::Approx(pair_norm_p(k, {v, u})));
}
