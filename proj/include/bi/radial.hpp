#pragma once

// Semi-analytic solutions of -div(DF(Du)) = rho for radial charge densities,
// with an optional point charge at the origin. Obtained by reducing the
// divergence over balls: with P(r) = int_0^r rho(s) s^{n-1} ds and
// G(r) = a_eff - P(r), a_eff = -q/(n omega_n),
//
//   u'(r) = G(r) / sqrt(r^{2(n-1)} + G(r)^2),   u(r) = -int_r^inf u'(s) ds.
//
// These serve as ground truth for the grid solvers.

#include <functional>
#include <vector>

namespace bi {

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

struct RadialDensity {
  std::function<double(double)> profile;  // rho(r); ignored beyond support_radius
  double support_radius = 0.0;
  double point_charge = 0.0;  // signed Dirac weight q at the origin
};

/// P(r) = int_0^r rho(s) s^{n-1} ds, by adaptive quadrature.
double cumulative_charge(const RadialDensity& rho, int n, double r,
                         double abs_tol = 1e-10);

/// a_eff = -q/(n omega_n): the Dirac contribution to G(r).
double dirac_coefficient(const RadialDensity& rho, int n);

/// u'(r); always in (-1, 1).
double radial_slope(const RadialDensity& rho, int n, double r,
                    double abs_tol = 1e-10);

/// u(r) with the vanish-at-infinity normalization. Direct nested quadrature;
/// use RadialSolution for bulk evaluation.
double radial_value(const RadialDensity& rho, int n, double r,
                    double abs_tol = 1e-10);

/// The barrier w_{a,Lambda}(r) = int_0^r (a - Lambda t^n / n) /
/// sqrt(t^{2(n-1)} + (a - Lambda t^n / n)^2) dt, normalized w(0) = 0.
double barrier_w(double a, double Lambda, int n, double r,
                 double abs_tol = 1e-10);

// Tabulated solution: P on a fine uniform r-grid, u by integrating the slope
// inward from a quadrature value at r_max, cubic Hermite in between (the
// exact slope is known at every table point).
class RadialSolution {
 public:
  RadialSolution(RadialDensity rho, int n, double r_max, int table_size = 4096,
                 double abs_tol = 1e-10);

  int dimension() const { return n_; }
  double total_charge() const;  // bulk integral + point charge

  double slope(double r) const;  // u'(r)
  double value(double r) const;  // u(r), u(inf) = 0
  double nu(double r) const;
  /// n omega_n r^{n-1} nu(r) u'(r); equals -(enclosed charge).
  double flux(double r) const;

  double g(double r) const;  // G(r) = a_eff - P(r)

 private:
  double p_of_r(double r) const;

  RadialDensity rho_;
  int n_;
  double r_max_;
  double dr_;
  double a_eff_;
  double p_total_;
  double u_at_rmax_;
  std::vector<double> p_;  // P at table points
  std::vector<double> u_;  // u at table points
};

}  // namespace bi
