#include "bi/minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bi/kernels.hpp"
#include "bi/poisson.hpp"
#include "bi/diagnostics.hpp"

namespace bi {

void MinimizeOptions::validate() const {
  if (!(safeguard_margin > 0.0 && safeguard_margin <= 0.1))
    throw std::invalid_argument("safeguard_margin must be in (0, 0.1]");
  if (!(tolerance_factor > 0.0)) throw std::invalid_argument("tolerance_factor must be > 0");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
}

double discrete_energy(const EnergyModel& model, const ScalarField& u) {
  return model.energy(u);
}

ScalarField energy_gradient(const EnergyModel& model, const ScalarField& u,
                            double min_margin) {
  ScalarField r;
  model.residual(u, r, min_margin);
  return r;
}

// Feasible starting field carrying the far-field boundary values: the exact
// Newtonian data on the boundary, a smoothly flattened version of it inside
// (the raw Newtonian potential of a unit charge is not spacelike near the
// origin).
ScalarField newtonian_lift(const Grid& grid, double total_charge) {
  ScalarField u = far_field_boundary(grid, total_charge);
  if (total_charge == 0.0) return u;
  constexpr int n = Grid::dim;
  const double c_n = 1.0 / ((n - 2) * n * unit_ball_volume(n));
  // cap |grad| of the lift at ~0.4 regardless of charge
  const double r0_sq = std::abs(total_charge) * c_n / 0.4;
  for (int i = 1; i < grid.cells; ++i)
    for (int j = 1; j < grid.cells; ++j)
      for (int k = 1; k < grid.cells; ++k) {
        const auto x = grid.point(i, j, k);
        const double r_sq = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        u(i, j, k) = total_charge * c_n / std::sqrt(r_sq + r0_sq);
      }
  return u;
}

namespace {

// 7-point -Lap_h at interior nodes (zero boundary); pairs with PoissonSolver.
ScalarField neg_laplacian(const ScalarField& s) {
  const Grid& g = s.grid;
  const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
  ScalarField out(g);
  for (int i = 1; i < g.cells; ++i)
    for (int j = 1; j < g.cells; ++j)
      for (int k = 1; k < g.cells; ++k)
        out(i, j, k) = inv_h2 * (6.0 * s(i, j, k) - s(i + 1, j, k) -
                                 s(i - 1, j, k) - s(i, j + 1, k) -
                                 s(i, j - 1, k) - s(i, j, k + 1) -
                                 s(i, j, k - 1));
  return out;
}

// Largest step a such that every one-sided gradient of u - a*d stays inside
// the ball of radius `limit` (exit root of a node-wise quadratic).
double max_feasible_step(const ScalarField& u, const ScalarField& d,
                         double limit) {
  double a_max = std::numeric_limits<double>::infinity();
  const double lim2 = limit * limit;
  for (const bool forward : {true, false}) {
    const VectorField gu = forward ? gradient(u) : backward_gradient(u);
    const VectorField gd = forward ? gradient(d) : backward_gradient(d);
    const std::size_t nn = gu.comp[0].size();
    for (std::size_t i = 0; i < nn; ++i) {
      const double qx = gd.comp[0][i], qy = gd.comp[1][i], qz = gd.comp[2][i];
      const double q2 = qx * qx + qy * qy + qz * qz;
      if (q2 == 0.0) continue;
      const double gx = gu.comp[0][i], gy = gu.comp[1][i], gz = gu.comp[2][i];
      const double gq = gx * qx + gy * qy + gz * qz;
      const double g2 = gx * gx + gy * gy + gz * gz;
      const double disc = gq * gq + q2 * (lim2 - g2);
      if (disc <= 0.0) return 0.0;  // already outside the limit ball
      a_max = std::min(a_max, (gq + std::sqrt(disc)) / q2);
    }
  }
  return a_max;
}

}  // namespace

SolveReport minimize(const ChargeDensity& rho, const Grid& grid,
                     const MinimizeOptions& opts, const ScalarField* initial) {
  opts.validate();
  EnergyModel model(grid, sample_density(rho, grid));
  const double delta = opts.safeguard_margin;

  ScalarField u = initial ? *initial : newtonian_lift(grid, rho.total_charge());
  if (initial && initial->grid != grid)
    throw std::invalid_argument("initial field on a different grid");
  if (model.max_one_sided_gradient(u) > 1.0 - delta)
    throw std::invalid_argument("initial field violates the spacelike safeguard");

  const double rho_scale = lp_norm(model.rho(), 2.0);
  const double tol =
      std::max(opts.tolerance_factor * rho_scale, opts.absolute_tolerance_floor);

  PoissonSolver poisson(grid);
  const std::size_t nn = grid.node_count();
  const double vol = grid.cell_volume();

  double energy = model.energy(u);
  ScalarField r(grid);
  model.residual(u, r, delta * 1e-3);
  double res_norm = model.interior_l2(r);

  // SPD variable preconditioner P = W^1/2 (-Lap)^-1 W^1/2 with W = nu^-3:
  // the Laplacian smooths globally while the nu weight damps the direction
  // where the Hessian of F blows up near the light cone.
  ScalarField w_half(grid, 1.0);
  constexpr double wexp = 1.5;
  const auto update_weights = [&](const ScalarField& field) {
    const ScalarField nu = nu_field(field);
    for (std::size_t i = 0; i < nn; ++i)
      w_half.values[i] = 1.0 / std::pow(nu.values[i], wexp);
  };
  const auto precondition = [&](const ScalarField& g) {
    ScalarField t = g;
    for (std::size_t i = 0; i < nn; ++i) t.values[i] *= w_half.values[i];
    t = poisson.solve(t);
    for (std::size_t i = 0; i < nn; ++i) t.values[i] *= w_half.values[i];
    return t;
  };

  update_weights(u);
  ScalarField d = precondition(r);
  ScalarField s(grid), y(grid);
  ScalarField r_prev = r, d_prev = d;

  // non-monotone (GLL) acceptance window
  std::vector<double> recent_energy{energy};
  constexpr std::size_t kWindow = 10;

  SolveReport rep;
  rep.tolerance = tol;
  double alpha = 1.0;
  int it = 0;

  while (res_norm > tol && it < opts.max_iterations) {
    // directional derivative of the energy along -d (d vanishes on boundary)
    double gd = 0.0;
    for (std::size_t i = 0; i < nn; ++i) gd += r.values[i] * d.values[i];
    gd *= vol;
    if (!(gd > 0.0)) {  // preconditioner guarantees descent; guard anyway
      d = r;
      gd = model.interior_l2(r);
      gd *= gd;
    }

    const double a_feas = max_feasible_step(u, d, 1.0 - delta);
    double step = std::min(alpha, 0.99 * a_feas);
    const double e_ref = *std::max_element(recent_energy.begin(), recent_energy.end());
    const double e_slack = 1e-14 * (std::abs(energy) + 1.0);

    ScalarField trial = u;
    bool accepted = false;
    for (int bt = 0; bt <= opts.max_backtracks && step > 0.0; ++bt) {
      trial = u;
      kernels::axpy(-step, d.values.data(), trial.values.data(), nn);
      const double e_t = model.energy(trial);
      if (std::isfinite(e_t) && e_t <= e_ref - 1e-4 * step * gd + e_slack) {
        accepted = true;
        energy = e_t;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      rep.flag = "line_search_failed";
      break;
    }

    for (std::size_t i = 0; i < nn; ++i)
      s.values[i] = trial.values[i] - u.values[i];
    u = std::move(trial);
    r_prev = r;
    d_prev = d;
    model.residual(u, r, delta * 1e-3);
    res_norm = model.interior_l2(r);
    update_weights(u);
    d = precondition(r);
    ++it;

    recent_energy.push_back(energy);
    if (recent_energy.size() > kWindow)
      recent_energy.erase(recent_energy.begin());

    // Barzilai-Borwein step, alternating the two rules in the metric of the
    // Laplacian preconditioner M: BB1 = <Ms,s>/<s,y>, BB2 = <s,y>/<y,M^-1 y>
    for (std::size_t i = 0; i < nn; ++i)
      y.values[i] = r.values[i] - r_prev.values[i];
    double sy = 0.0;
    for (std::size_t i = 0; i < nn; ++i) sy += s.values[i] * y.values[i];
    double num;
    if (it % 2 == 0) {
      // P^-1 s = W^-1/2 (-Lap) W^-1/2 s
      ScalarField t = s;
      for (std::size_t i = 0; i < nn; ++i) t.values[i] /= w_half.values[i];
      t = neg_laplacian(t);
      double sMs = 0.0;
      for (std::size_t i = 0; i < nn; ++i)
        sMs += s.values[i] / w_half.values[i] * t.values[i];
      num = sy > 0.0 ? sMs / sy : 0.0;
    } else {
      double yMy = 0.0;
      for (std::size_t i = 0; i < nn; ++i)
        yMy += y.values[i] * (d.values[i] - d_prev.values[i]);
      num = yMy > 0.0 ? sy / yMy : 0.0;
    }
    alpha = num > 0.0 ? std::min(std::max(num, 1e-8), 1e8) : 1.0;

    if (opts.verbose && it % 50 == 0)
      std::fprintf(stderr, "min iter %d residual %.3e energy %.12e step %.3e\n", it,
                   res_norm, energy, step);
  }

  rep.u = std::move(u);
  rep.energy = energy;
  rep.residual_norm = res_norm;
  rep.iterations = it;
  rep.converged = res_norm <= tol && rep.flag.empty();
  if (!rep.converged && rep.flag.empty()) rep.flag = "max_iterations";
  rep.theta = spacelike_margin(rep.u);
  rep.sup_u = lp_norm(rep.u, std::numeric_limits<double>::infinity());
  return rep;
}

}  // namespace bi
