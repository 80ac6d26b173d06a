#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "bi/grid.hpp"

using namespace bi;

namespace {

ScalarField random_interior(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  ScalarField f(g);
  for (int i = 1; i < g.cells; ++i)
    for (int j = 1; j < g.cells; ++j)
      for (int k = 1; k < g.cells; ++k) f(i, j, k) = gauss(rng);
  return f;
}

VectorField random_vector(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  VectorField F(g);
  for (auto& c : F.comp)
    for (auto& v : c) v = gauss(rng);
  return F;
}

}  // namespace

TEST_CASE("grid geometry") {
  Grid g(4.0, 16);
  CHECK(g.spacing() == doctest::Approx(0.5));
  CHECK(g.node_count() == 17u * 17u * 17u);
  CHECK(g.coord(0) == -4.0);
  CHECK(g.coord(16) == 4.0);
  CHECK(g.is_boundary(0, 5, 5));
  CHECK(!g.is_boundary(1, 5, 5));
  CHECK_THROWS(Grid(1.0, 4));
  CHECK_THROWS(Grid(-1.0, 16));
}

TEST_CASE("forward and backward differences are adjoint pairs") {
  Grid g(1.5, 10);
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 5; ++trial) {
    const ScalarField u = random_interior(g, rng);
    const VectorField F = random_vector(g, rng);
    // <D+ u, F> = -<u, div F> and <D- u, F> = -<u, fdiv F>
    CHECK(inner_product(gradient(u), F) ==
          doctest::Approx(-inner_product(u, divergence(F))).epsilon(1e-12));
    CHECK(inner_product(backward_gradient(u), F) ==
          doctest::Approx(-inner_product(u, forward_divergence(F))).epsilon(1e-12));
  }
}

TEST_CASE("differences are exact on affine fields") {
  Grid g(2.0, 12);
  ScalarField u(g);
  for (int i = 0; i <= g.cells; ++i)
    for (int j = 0; j <= g.cells; ++j)
      for (int k = 0; k <= g.cells; ++k) {
        const auto x = g.point(i, j, k);
        u(i, j, k) = 2.0 * x[0] - 0.5 * x[1] + 3.0 * x[2] + 1.0;
      }
  const VectorField gf = gradient(u);
  const VectorField gc = centered_gradient(u);
  for (int i = 1; i < g.cells - 1; ++i) {
    const std::size_t id = g.index(i, 5, 5);
    CHECK(gf.comp[0][id] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(gf.comp[1][id] == doctest::Approx(-0.5).epsilon(1e-13));
    CHECK(gf.comp[2][id] == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(gc.comp[0][id] == doctest::Approx(2.0).epsilon(1e-13));
  }
}

TEST_CASE("second differences of a quadratic are exact") {
  Grid g(1.0, 10);
  ScalarField u(g);
  for (int i = 0; i <= g.cells; ++i)
    for (int j = 0; j <= g.cells; ++j)
      for (int k = 0; k <= g.cells; ++k) {
        const auto x = g.point(i, j, k);
        u(i, j, k) = x[0] * x[0] + 2.0 * x[0] * x[1] - x[1] * x[2];
      }
  const SymTensorField s = second_derivatives(u);
  const std::size_t id = g.index(4, 6, 5);
  CHECK(s.comp[0][id] == doctest::Approx(2.0).epsilon(1e-11));   // xx
  CHECK(s.comp[1][id] == doctest::Approx(0.0).epsilon(1e-11));   // yy
  CHECK(s.comp[2][id] == doctest::Approx(0.0).epsilon(1e-11));   // zz
  CHECK(s.comp[3][id] == doctest::Approx(2.0).epsilon(1e-11));   // xy
  CHECK(s.comp[4][id] == doctest::Approx(0.0).epsilon(1e-11));   // xz
  CHECK(s.comp[5][id] == doctest::Approx(-1.0).epsilon(1e-11));  // yz
}

TEST_CASE("norms and ball averages") {
  Grid g(1.0, 8);
  ScalarField f(g, 2.0);
  CHECK(lp_norm(f, std::numeric_limits<double>::infinity()) == 2.0);
  // all 9^3 nodes carry weight h^3 = 0.25^3
  CHECK(lp_norm(f, 2.0) ==
        doctest::Approx(std::sqrt(4.0 * 729.0 * 0.015625)).epsilon(1e-12));
  CHECK(ball_average(f, {0, 0, 0}, 0.7, 3.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(ball_sup(f, {0, 0, 0}, 0.3) == 2.0);
}

TEST_CASE("field dump round-trips bit-exactly") {
  Grid g(2.5, 9);
  std::mt19937_64 rng(7);
  ScalarField f = random_interior(g, rng);
  f(0, 0, 0) = 1.0 / 3.0;
  std::stringstream ss;
  write_field(ss, f);
  const ScalarField r = read_field(ss);
  REQUIRE(r.grid == g);
  for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(r.values[i] == f.values[i]);
}

TEST_CASE("file dump round-trip") {
  Grid g(1.0, 8);
  std::mt19937_64 rng(11);
  const ScalarField f = random_interior(g, rng);
  const std::string path = "test_grid_dump.bin";
  write_field_file(path, f);
  const ScalarField r = read_field_file(path);
  std::remove(path.c_str());
  REQUIRE(r.grid == g);
  for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(r.values[i] == f.values[i]);
}

TEST_CASE("prolongation reproduces trilinear fields exactly") {
  Grid coarse(2.0, 8), fine(2.0, 16);
  ScalarField u(coarse);
  for (int i = 0; i <= 8; ++i)
    for (int j = 0; j <= 8; ++j)
      for (int k = 0; k <= 8; ++k) {
        const auto x = coarse.point(i, j, k);
        u(i, j, k) = 1.0 + 0.5 * x[0] - x[1] + 0.25 * x[2] + 0.1 * x[0] * x[1] * x[2];
      }
  const ScalarField v = prolong(u, fine);
  for (int i = 0; i <= 16; ++i)
    for (int j = 0; j <= 16; ++j)
      for (int k = 0; k <= 16; ++k) {
        const auto x = fine.point(i, j, k);
        const double exact =
            1.0 + 0.5 * x[0] - x[1] + 0.25 * x[2] + 0.1 * x[0] * x[1] * x[2];
        CHECK(v(i, j, k) == doctest::Approx(exact).epsilon(1e-12));
      }
}

TEST_CASE("prolongation between nested grids cannot enlarge per-direction slopes") {
  Grid coarse(1.0, 8), fine(1.0, 16);
  std::mt19937_64 rng(3);
  ScalarField u = random_interior(coarse, rng);
  for (auto& v : u.values) v *= 0.01;
  // the guarantee is per coordinate direction, not for the gradient norm
  const auto sup_comp = [](const VectorField& g, int c) {
    double m = 0.0;
    for (double v : g.comp[c]) m = std::max(m, std::abs(v));
    return m;
  };
  const ScalarField v = prolong(u, fine);
  for (int c = 0; c < 3; ++c) {
    const double coarse_sup = std::max(sup_comp(gradient(u), c),
                                       sup_comp(backward_gradient(u), c));
    const double fine_sup = std::max(sup_comp(gradient(v), c),
                                     sup_comp(backward_gradient(v), c));
    CHECK(fine_sup <= coarse_sup * (1.0 + 1e-12));
  }
}

TEST_CASE("far-field boundary data") {
  Grid g(4.0, 8);
  const double q = -4.0 * std::acos(-1.0);
  const ScalarField b = far_field_boundary(g, q);
  // face center: |x| = 4, u = q / (4 pi |x|)
  CHECK(b(0, 4, 4) == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(b(4, 4, 4) == 0.0);  // interior untouched
  const double corner = 4.0 * std::sqrt(3.0);
  CHECK(b(0, 0, 0) == doctest::Approx(-1.0 / corner).epsilon(1e-12));
}
