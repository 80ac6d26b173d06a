#include "bi/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "bi/quadrature.hpp"

namespace bi {

namespace {

void check_dim(int n) {
  if (n < 3) throw std::invalid_argument("dimension must be >= 3");
}

double cubic_hermite(double t, double h, double f0, double f1, double d0, double d1) {
  // t in [0,1] across an interval of width h
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * d0 +
         (-2 * t3 + 3 * t2) * f1 + (t3 - t2) * h * d1;
}

double slope_from_g(double g, double r, int n) {
  const double rp = std::pow(r, n - 1);
  return g / std::sqrt(rp * rp + g * g);
}

}  // namespace

double unit_ball_volume(int n) {
  check_dim(n);
  return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

double cumulative_charge(const RadialDensity& rho, int n, double r, double abs_tol) {
  check_dim(n);
  if (r < 0) throw std::invalid_argument("r must be >= 0");
  const double upper = std::min(r, rho.support_radius);
  if (upper <= 0 || !rho.profile) return 0.0;
  return integrate([&](double s) { return rho.profile(s) * std::pow(s, n - 1); },
                   0.0, upper, abs_tol);
}

double dirac_coefficient(const RadialDensity& rho, int n) {
  return -rho.point_charge / (n * unit_ball_volume(n));
}

double radial_slope(const RadialDensity& rho, int n, double r, double abs_tol) {
  if (!(r > 0)) throw std::invalid_argument("r must be > 0");
  const double g = dirac_coefficient(rho, n) - cumulative_charge(rho, n, r, abs_tol);
  return slope_from_g(g, r, n);
}

double radial_value(const RadialDensity& rho, int n, double r, double abs_tol) {
  check_dim(n);
  if (r < 0 || (r == 0 && rho.point_charge != 0))
    throw std::invalid_argument("r = 0 not allowed with a point charge");
  const double s0 = std::max(r, rho.support_radius);
  double head = 0.0;
  if (s0 > r)
    head = integrate([&](double s) { return radial_slope(rho, n, s, abs_tol); },
                     r, s0, abs_tol);
  const double g_inf = dirac_coefficient(rho, n) - cumulative_charge(rho, n, s0, abs_tol);
  const double tail = integrate_to_inf(
      [&](double s) { return slope_from_g(g_inf, s, n); }, s0, abs_tol);
  return -(head + tail);
}

double barrier_w(double a, double Lambda, int n, double r, double abs_tol) {
  check_dim(n);
  if (r < 0) throw std::invalid_argument("r must be >= 0");
  if (a == 0 && Lambda == 0) return 0.0;
  return integrate(
      [&](double t) {
        const double g = a - Lambda * std::pow(t, n) / n;
        const double tp = std::pow(t, n - 1);
        return g / std::sqrt(tp * tp + g * g);
      },
      0.0, r, abs_tol);
}

RadialSolution::RadialSolution(RadialDensity rho, int n, double r_max,
                               int table_size, double abs_tol)
    : rho_(std::move(rho)), n_(n), r_max_(std::max(r_max, rho_.support_radius)) {
  check_dim(n);
  if (table_size < 16) throw std::invalid_argument("table too small");
  dr_ = r_max_ / table_size;
  a_eff_ = dirac_coefficient(rho_, n_);

  p_.assign(table_size + 1, 0.0);
  if (rho_.profile && rho_.support_radius > 0) {
    const auto integrand = [&](double s) {
      return s < rho_.support_radius ? rho_.profile(s) * std::pow(s, n_ - 1) : 0.0;
    };
    for (int i = 0; i < table_size; ++i)
      p_[i + 1] = p_[i] + integrate(integrand, i * dr_, (i + 1) * dr_, abs_tol);
  }
  p_total_ = p_.back();

  const double g_inf = a_eff_ - p_total_;
  u_at_rmax_ = -integrate_to_inf(
      [&](double s) { return slope_from_g(g_inf, s, n_); }, r_max_, abs_tol);

  u_.assign(table_size + 1, 0.0);
  u_[table_size] = u_at_rmax_;
  for (int i = table_size - 1; i >= 0; --i) {
    const double seg = integrate([&](double s) { return slope(s); },
                                 i * dr_, (i + 1) * dr_, abs_tol);
    u_[i] = u_[i + 1] - seg;
  }
}

double RadialSolution::total_charge() const {
  return n_ * unit_ball_volume(n_) * p_total_ + rho_.point_charge;
}

double RadialSolution::p_of_r(double r) const {
  if (r >= r_max_) return p_total_;
  const int i = std::min(static_cast<int>(r / dr_), static_cast<int>(p_.size()) - 2);
  const double t = r / dr_ - i;
  const auto dens = [&](double s) {
    return (rho_.profile && s < rho_.support_radius)
               ? rho_.profile(s) * std::pow(s, n_ - 1)
               : 0.0;
  };
  return cubic_hermite(t, dr_, p_[i], p_[i + 1], dens(i * dr_), dens((i + 1) * dr_));
}

double RadialSolution::g(double r) const { return a_eff_ - p_of_r(r); }

double RadialSolution::slope(double r) const {
  if (r == 0.0) {
    if (rho_.point_charge == 0) return 0.0;
    return a_eff_ > 0 ? 1.0 : -1.0;  // conelike singularity
  }
  return slope_from_g(g(r), r, n_);
}

double RadialSolution::nu(double r) const {
  if (r < 0) throw std::invalid_argument("r must be >= 0");
  if (r == 0) {
    // G(r) ~ -rho(0) r^n / n for a bulk density, so G/r^(n-1) -> 0; a point
    // charge makes the origin lightlike
    return rho_.point_charge == 0
               ? 1.0
               : std::numeric_limits<double>::infinity();
  }
  const double ratio = g(r) / std::pow(r, n_ - 1);
  return std::sqrt(1.0 + ratio * ratio);
}

double RadialSolution::flux(double r) const {
  if (r < 0) throw std::invalid_argument("r must be >= 0");
  // nu u' = G / r^(n-1) exactly, so the flux is n omega_n G(r) at every r
  return n_ * unit_ball_volume(n_) * g(r);
}

double RadialSolution::value(double r) const {
  if (r < 0) throw std::invalid_argument("r must be >= 0");
  if (r >= r_max_) {
    const double g_inf = a_eff_ - p_total_;
    if (g_inf == 0.0) return 0.0;
    return -integrate_to_inf(
        [&](double s) { return slope_from_g(g_inf, s, n_); }, r, 1e-10);
  }
  const int i = std::min(static_cast<int>(r / dr_), static_cast<int>(u_.size()) - 2);
  const double t = r / dr_ - i;
  return cubic_hermite(t, dr_, u_[i], u_[i + 1], slope(i * dr_), slope((i + 1) * dr_));
}

}  // namespace bi
