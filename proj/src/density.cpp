#include "bi/density.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bi/quadrature.hpp"

namespace bi {

namespace {

constexpr double kGaussianCutoffSigmas = 12.0;

double dist(const std::array<double, 3>& x, const std::array<double, 3>& c) {
  const double dx = x[0] - c[0], dy = x[1] - c[1], dz = x[2] - c[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double gaussian_profile(double r, double sigma, double weight) {
  const double norm = std::pow(2.0 * std::numbers::pi * sigma * sigma, -1.5);
  return weight * norm * std::exp(-r * r / (2.0 * sigma * sigma));
}

}  // namespace

double DensityTerm::value_at(const std::array<double, 3>& x) const {
  const double r = dist(x, center);
  switch (kind) {
    case Kind::gaussian:
    case Kind::mollified_point:
      return gaussian_profile(r, width, weight);
    case Kind::ball_constant:
      return r <= width ? weight : 0.0;
    case Kind::radial_power_bump:
      if (r > width) return 0.0;
      if (r == 0.0) return 0.0;  // finite part; the singularity is integrable
      return weight * std::pow(r, -exponent);
  }
  return 0.0;
}

std::array<double, 3> DensityTerm::gradient_at(const std::array<double, 3>& x) const {
  if (!smooth()) throw std::domain_error("density term has no classical gradient");
  const double v = value_at(x);
  const double inv_s2 = 1.0 / (width * width);
  return {-(x[0] - center[0]) * inv_s2 * v, -(x[1] - center[1]) * inv_s2 * v,
          -(x[2] - center[2]) * inv_s2 * v};
}

double DensityTerm::total_charge() const {
  constexpr int n = 3;
  switch (kind) {
    case Kind::gaussian:
    case Kind::mollified_point:
      return weight;
    case Kind::ball_constant:
      return weight * unit_ball_volume(n) * std::pow(width, n);
    case Kind::radial_power_bump:
      if (exponent >= n) throw std::domain_error("power bump is not integrable");
      return weight * n * unit_ball_volume(n) * std::pow(width, n - exponent) /
             (n - exponent);
  }
  return 0.0;
}

double DensityTerm::lp_norm(double p) const {
  if (p < 1) throw std::domain_error("lp_norm requires p >= 1");
  constexpr int n = 3;
  const double sphere = n * unit_ball_volume(n);  // |S^{n-1}|
  switch (kind) {
    case Kind::gaussian:
    case Kind::mollified_point: {
      const double s2 = 2.0 * std::numbers::pi * width * width;
      return std::abs(weight) * std::pow(s2, -n / 2.0) *
             std::pow(s2 / p, n / (2.0 * p));
    }
    case Kind::ball_constant:
      return std::abs(weight) *
             std::pow(unit_ball_volume(n) * std::pow(width, n), 1.0 / p);
    case Kind::radial_power_bump: {
      // int_0^R r^{-sp + n - 1} dr finite iff sp < n
      const double e = n - exponent * p;
      if (e <= 0) throw std::domain_error("power bump not in L^p for this p");
      return std::abs(weight) *
             std::pow(sphere * std::pow(width, e) / e, 1.0 / p);
    }
  }
  return 0.0;
}

double DensityTerm::support_radius() const {
  switch (kind) {
    case Kind::gaussian:
    case Kind::mollified_point:
      return kGaussianCutoffSigmas * width;
    case Kind::ball_constant:
    case Kind::radial_power_bump:
      return width;
  }
  return 0.0;
}

bool ChargeDensity::smooth() const {
  for (const auto& t : terms)
    if (!t.smooth()) return false;
  return true;
}

bool ChargeDensity::radial_about_origin() const {
  for (const auto& t : terms)
    if (t.center != std::array<double, 3>{0.0, 0.0, 0.0}) return false;
  return true;
}

double ChargeDensity::value_at(const std::array<double, 3>& x) const {
  double v = 0.0;
  for (const auto& t : terms) v += t.value_at(x);
  return v;
}

std::array<double, 3> ChargeDensity::gradient_at(const std::array<double, 3>& x) const {
  std::array<double, 3> g{0.0, 0.0, 0.0};
  for (const auto& t : terms) {
    const auto tg = t.gradient_at(x);
    for (int a = 0; a < 3; ++a) g[a] += tg[a];
  }
  return g;
}

double ChargeDensity::total_charge() const {
  double q = 0.0;
  for (const auto& t : terms) q += t.total_charge();
  return q;
}

double ChargeDensity::support_radius() const {
  double r = 0.0;
  for (const auto& t : terms) {
    const double c = dist(t.center, {0.0, 0.0, 0.0});
    r = std::max(r, c + t.support_radius());
  }
  return r;
}

double ChargeDensity::lp_norm(double p) const {
  if (p < 1) throw std::domain_error("lp_norm requires p >= 1");
  if (terms.empty()) return 0.0;
  if (terms.size() == 1) return terms[0].lp_norm(p);
  // check integrability term-wise first so the error message is precise
  for (const auto& t : terms) (void)t.lp_norm(p);
  constexpr int n = 3;
  const double sphere = n * unit_ball_volume(n);
  if (radial_about_origin()) {
    const double R = support_radius();
    const double s = integrate(
        [&](double r) {
          return std::pow(std::abs(value_at({r, 0.0, 0.0})), p) *
                 sphere * std::pow(r, n - 1);
        },
        0.0, R, 1e-12);
    return std::pow(s, 1.0 / p);
  }
  // general case: nested quadrature over the bounding box
  double R = 0.0;
  for (const auto& t : terms)
    R = std::max({R, std::abs(t.center[0]) + t.support_radius(),
                  std::abs(t.center[1]) + t.support_radius(),
                  std::abs(t.center[2]) + t.support_radius()});
  const auto fz = [&](double x, double y) {
    return integrate(
        [&](double z) { return std::pow(std::abs(value_at({x, y, z})), p); },
        -R, R, 1e-9);
  };
  const auto fy = [&](double x) {
    return integrate([&](double y) { return fz(x, y); }, -R, R, 1e-8);
  };
  const double s = integrate(fy, -R, R, 1e-7);
  return std::pow(s, 1.0 / p);
}

RadialDensity ChargeDensity::radial() const {
  if (!radial_about_origin())
    throw std::domain_error("density is not radial about the origin");
  RadialDensity rd;
  rd.support_radius = support_radius();
  const ChargeDensity copy = *this;
  rd.profile = [copy](double r) { return copy.value_at({r, 0.0, 0.0}); };
  return rd;
}

ScalarField sample_density(const ChargeDensity& d, const Grid& grid) {
  ScalarField f(grid);
  const int N = grid.nodes_per_axis();
  for (const DensityTerm& t : d.terms) {
    ScalarField s(grid);
    double sum = 0.0;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) {
          const double v = t.value_at(grid.point(i, j, k));
          s(i, j, k) = v;
          sum += v;
        }
    // A mollified point charge stands in for a Dirac mass; its one physical
    // invariant is the total charge, so rescale the node samples to carry it
    // exactly (the factor is 1 + O(exp(-2 pi^2 sigma^2 / h^2))). Plain terms
    // stay raw point samples.
    double scale = 1.0;
    if (t.kind == DensityTerm::Kind::mollified_point) {
      const double q_grid = sum * grid.cell_volume();
      if (std::abs(q_grid) > 0.5 * std::abs(t.weight))
        scale = t.weight / q_grid;
    }
    for (std::size_t n = 0; n < f.values.size(); ++n)
      f.values[n] += scale * s.values[n];
  }
  return f;
}

VectorField sample_density_gradient(const ChargeDensity& d, const Grid& grid) {
  VectorField F(grid);
  const int N = grid.nodes_per_axis();
  for (const DensityTerm& t : d.terms) {
    // same charge-exact rescale as sample_density
    double scale = 1.0;
    if (t.kind == DensityTerm::Kind::mollified_point) {
      double sum = 0.0;
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
          for (int k = 0; k < N; ++k) sum += t.value_at(grid.point(i, j, k));
      const double q_grid = sum * grid.cell_volume();
      if (std::abs(q_grid) > 0.5 * std::abs(t.weight)) scale = t.weight / q_grid;
    }
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) {
          const auto g = t.gradient_at(grid.point(i, j, k));
          const std::size_t id = grid.index(i, j, k);
          for (int a = 0; a < 3; ++a) F.comp[a][id] += scale * g[a];
        }
  }
  return F;
}

const char* kind_name(DensityTerm::Kind k) {
  switch (k) {
    case DensityTerm::Kind::gaussian: return "gaussian";
    case DensityTerm::Kind::ball_constant: return "ball_constant";
    case DensityTerm::Kind::radial_power_bump: return "radial_power_bump";
    case DensityTerm::Kind::mollified_point: return "mollified_point";
  }
  return "?";
}

std::optional<DensityTerm::Kind> kind_from_name(const std::string& name) {
  if (name == "gaussian") return DensityTerm::Kind::gaussian;
  if (name == "ball_constant") return DensityTerm::Kind::ball_constant;
  if (name == "radial_power_bump") return DensityTerm::Kind::radial_power_bump;
  if (name == "mollified_point") return DensityTerm::Kind::mollified_point;
  return std::nullopt;
}

}  // namespace bi
