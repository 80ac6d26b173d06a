#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "bi/kernels.hpp"

using namespace bi::kernels;

namespace {

struct GradData {
  std::vector<double> gx, gy, gz;
};

// |g| <= max_norm at every element, odd length to exercise the tail lanes
GradData random_grad(std::mt19937_64& rng, std::size_t n, double max_norm) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, max_norm);
  GradData d{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    double x = gauss(rng), y = gauss(rng), z = gauss(rng);
    const double r = std::sqrt(x * x + y * y + z * z);
    const double target = unif(rng);
    const double c = r > 0 ? target / r : 0.0;
    d.gx[i] = c * x;
    d.gy[i] = c * y;
    d.gz[i] = c * z;
  }
  return d;
}

}  // namespace

TEST_CASE("scalar flux and nu match the closed forms") {
  std::vector<double> gx{0.6, 0.0}, gy{0.0, 0.3}, gz{0.0, 0.0};
  std::vector<double> fx(2), fy(2), fz(2), nu(2);
  flux3_scalar(gx.data(), gy.data(), gz.data(), fx.data(), fy.data(), fz.data(), 2);
  nu3_scalar(gx.data(), gy.data(), gz.data(), nu.data(), 2);
  CHECK(fx[0] == doctest::Approx(0.6 / 0.8).epsilon(1e-15));
  CHECK(fy[0] == 0.0);
  CHECK(nu[0] == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(fy[1] == doctest::Approx(0.3 / std::sqrt(0.91)).epsilon(1e-15));
  CHECK(nu[1] == doctest::Approx(1.0 / std::sqrt(0.91)).epsilon(1e-15));
}

TEST_CASE("axpy") {
  std::vector<double> x{1.0, -2.0, 0.5}, y{0.0, 1.0, 2.0};
  axpy_scalar(2.0, x.data(), y.data(), 3);
  CHECK(y[0] == 2.0);
  CHECK(y[1] == -3.0);
  CHECK(y[2] == 3.0);
}

#if defined(__x86_64__) || defined(_M_X64)
TEST_CASE("avx2 variants are bit-identical to the scalar reference") {
  if (!__builtin_cpu_supports("avx2")) {
    MESSAGE("avx2 not available on this host; skipping");
    return;
  }
  std::mt19937_64 rng(99);
  for (std::size_t n : {1u, 4u, 7u, 64u, 1023u}) {
    auto d = random_grad(rng, n, 0.999);
    std::vector<double> fx1(n), fy1(n), fz1(n), nu1(n);
    std::vector<double> fx2(n), fy2(n), fz2(n), nu2(n);
    flux3_scalar(d.gx.data(), d.gy.data(), d.gz.data(), fx1.data(), fy1.data(), fz1.data(), n);
    flux3_avx2(d.gx.data(), d.gy.data(), d.gz.data(), fx2.data(), fy2.data(), fz2.data(), n);
    nu3_scalar(d.gx.data(), d.gy.data(), d.gz.data(), nu1.data(), n);
    nu3_avx2(d.gx.data(), d.gy.data(), d.gz.data(), nu2.data(), n);
    CHECK(std::memcmp(fx1.data(), fx2.data(), n * sizeof(double)) == 0);
    CHECK(std::memcmp(fy1.data(), fy2.data(), n * sizeof(double)) == 0);
    CHECK(std::memcmp(fz1.data(), fz2.data(), n * sizeof(double)) == 0);
    CHECK(std::memcmp(nu1.data(), nu2.data(), n * sizeof(double)) == 0);

    std::vector<double> ya(n, 0.25), yb(n, 0.25);
    axpy_scalar(-1.75, d.gx.data(), ya.data(), n);
    axpy_avx2(-1.75, d.gx.data(), yb.data(), n);
    CHECK(std::memcmp(ya.data(), yb.data(), n * sizeof(double)) == 0);
  }
}
#endif

TEST_CASE("active backend reports a known name") {
  const std::string b = active_backend();
  CHECK((b == "avx2" || b == "scalar"));
}
