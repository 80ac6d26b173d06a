#include "bi/lagrangian.hpp"

#include <cmath>

namespace bi {

double norm_sq(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

double eval_f(std::span<const double> xi) {
  double s = norm_sq(xi);
  if (s > 1.0) {
    if (s > 1.0 + kLightConeSlack) throw std::domain_error("non-spacelike argument");
    s = 1.0;  // rounding noise, clamp to the light cone
  }
  return 1.0 - std::sqrt(1.0 - s);
}

static double tilt_factor(std::span<const double> xi) {
  const double s = norm_sq(xi);
  if (s >= 1.0) throw std::domain_error("non-spacelike argument: |xi| >= 1");
  return 1.0 / std::sqrt(1.0 - s);
}

std::vector<double> eval_grad(std::span<const double> xi) {
  const double nu = tilt_factor(xi);
  std::vector<double> g(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) g[i] = nu * xi[i];
  return g;
}

LagrangianEval eval_full(std::span<const double> xi) {
  const std::size_t n = xi.size();
  LagrangianEval e;
  e.nu = tilt_factor(xi);
  e.f = 1.0 - 1.0 / e.nu;
  e.grad.resize(n);
  for (std::size_t i = 0; i < n; ++i) e.grad[i] = e.nu * xi[i];
  const double nu3 = e.nu * e.nu * e.nu;
  const double inv_nu2 = 1.0 / (e.nu * e.nu);
  e.hess.assign(n * n, 0.0);
  e.a.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      e.hess[i * n + j] = nu3 * xi[i] * xi[j];
      e.a[i * n + j] = xi[i] * xi[j];
    }
    e.hess[i * n + i] += e.nu;
    e.a[i * n + i] += inv_nu2;
  }
  return e;
}

SpacelikeVector project_spacelike(std::span<const double> xi, double margin) {
  if (!(margin > 0.0 && margin < 1.0)) throw std::invalid_argument("margin must be in (0,1)");
  SpacelikeVector out;
  out.xi.assign(xi.begin(), xi.end());
  const double r = std::sqrt(norm_sq(xi));
  const double cap = 1.0 - margin;
  if (r > cap) {
    const double scale = cap / r;
    for (double& x : out.xi) x *= scale;
    out.margin = margin;
  } else {
    out.margin = 1.0 - r;
  }
  return out;
}

double monotonicity_gap(std::span<const double> xi1, std::span<const double> xi2) {
  const auto g1 = eval_grad(xi1);
  const auto g2 = eval_grad(xi2);
  double inner = 0.0, diff_sq = 0.0;
  for (std::size_t i = 0; i < xi1.size(); ++i) {
    const double d = xi2[i] - xi1[i];
    inner += (g2[i] - g1[i]) * d;
    diff_sq += d * d;
  }
  return inner - diff_sq;
}

}  // namespace bi
