#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "bi/lagrangian.hpp"

using namespace bi;

namespace {

std::vector<double> random_xi(std::mt19937_64& rng, int n, double max_norm) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, max_norm);
  std::vector<double> xi(n);
  double s = 0.0;
  for (auto& x : xi) {
    x = gauss(rng);
    s += x * x;
  }
  const double target = unif(rng);
  for (auto& x : xi) x *= target / std::sqrt(std::max(s, 1e-300));
  return xi;
}

}  // namespace

TEST_CASE("value and tilt factor at closed-form points") {
  std::vector<double> zero(3, 0.0);
  CHECK(eval_f(zero) == 0.0);
  CHECK(eval_full(zero).nu == 1.0);

  std::vector<double> xi{0.6, 0.0, 0.0};
  CHECK(eval_f(xi) == doctest::Approx(1.0 - 0.8).epsilon(1e-15));
  CHECK(eval_full(xi).nu == doctest::Approx(1.0 / 0.8).epsilon(1e-15));
}

TEST_CASE("light-cone clamp and rejection") {
  std::vector<double> on_cone{1.0, 0.0, 0.0};
  CHECK(eval_f(on_cone) == doctest::Approx(1.0));
  std::vector<double> slightly_out{1.0 + 5e-13, 0.0, 0.0};
  CHECK(eval_f(slightly_out) == doctest::Approx(1.0));
  std::vector<double> far_out{1.1, 0.0, 0.0};
  CHECK_THROWS(eval_f(far_out));
  CHECK_THROWS(eval_grad(on_cone));
}

TEST_CASE("gradient is nu xi") {
  std::vector<double> xi{0.3, -0.4, 0.5};
  const double nu = 1.0 / std::sqrt(1.0 - norm_sq(xi));
  const auto g = eval_grad(xi);
  for (int i = 0; i < 3; ++i) CHECK(g[i] == doctest::Approx(nu * xi[i]).epsilon(1e-15));
}

TEST_CASE("hessian factorization, A xi = xi, ellipticity sandwiches") {
  std::mt19937_64 rng(20240811);
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const int n = 3;
    const auto xi = random_xi(rng, n, 0.99);
    const auto ev = eval_full(xi);
    const double nu = ev.nu;
    const double nu3 = nu * nu * nu;

    // D^2F = nu I + nu^3 xi (x) xi and A = nu^-2 I + xi (x) xi, entrywise
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double hij = (i == j ? nu : 0.0) + nu3 * xi[i] * xi[j];
        const double aij = (i == j ? 1.0 / (nu * nu) : 0.0) + xi[i] * xi[j];
        CHECK(ev.hess[i * n + j] == doctest::Approx(hij).epsilon(1e-12));
        CHECK(ev.a[i * n + j] == doctest::Approx(aij).epsilon(1e-12));
      }

    // A xi = xi
    for (int i = 0; i < n; ++i) {
      double axi = 0.0;
      for (int j = 0; j < n; ++j) axi += ev.a[i * n + j] * xi[j];
      CHECK(axi == doctest::Approx(xi[i]).epsilon(1e-12));
    }

    // eigenvalue sandwiches via an independent dense eigensolver:
    // spec(D^2F) in [nu, nu^3], spec(A) in [nu^-2, 1]
    Eigen::Matrix3d H, A;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        H(i, j) = ev.hess[i * n + j];
        A(i, j) = ev.a[i * n + j];
      }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> esH(H), esA(A);
    CHECK(esH.eigenvalues().minCoeff() >= nu * (1.0 - 1e-12));
    CHECK(esH.eigenvalues().maxCoeff() <= nu3 * (1.0 + 1e-12));
    CHECK(esA.eigenvalues().minCoeff() >= (1.0 / (nu * nu)) * (1.0 - 1e-12));
    CHECK(esA.eigenvalues().maxCoeff() <= 1.0 + 1e-12);
  }
}

TEST_CASE("spacelike projection") {
  std::vector<double> inside{0.1, 0.2, 0.0};
  auto p = project_spacelike(inside, 0.05);
  for (int i = 0; i < 3; ++i) CHECK(p.xi[i] == inside[i]);
  CHECK(p.margin == doctest::Approx(1.0 - std::sqrt(0.05)).epsilon(1e-12));

  std::vector<double> outside{3.0, 4.0, 0.0};
  auto q = project_spacelike(outside, 0.2);
  const double r = std::sqrt(norm_sq(q.xi));
  CHECK(r == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(q.xi[0] / q.xi[1] == doctest::Approx(0.75).epsilon(1e-14));
  // idempotent
  auto q2 = project_spacelike(q.xi, 0.2);
  for (int i = 0; i < 3; ++i) CHECK(q2.xi[i] == doctest::Approx(q.xi[i]).epsilon(1e-15));
}

TEST_CASE("monotonicity gap is nonnegative") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 1000; ++t) {
    const auto a = random_xi(rng, 3, 0.95);
    const auto b = random_xi(rng, 3, 0.95);
    CHECK(monotonicity_gap(a, b) >= -1e-14);
  }
}
