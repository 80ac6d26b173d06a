#include "bi/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "bi/diagnostics.hpp"
#include "bi/energy.hpp"
#include "bi/lagrangian.hpp"
#include "bi/minimizer.hpp"
#include "bi/poisson.hpp"

namespace bi {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double one_sided_sup(const ScalarField& f) {
  return std::max(linf_norm_vector(gradient(f)),
                  linf_norm_vector(backward_gradient(f)));
}

// Max one-sided gradient length over nodes outside B(0, R).
double far_one_sided_sup(const ScalarField& f, double R) {
  const Grid& gr = f.grid;
  const VectorField gf = gradient(f);
  const VectorField gb = backward_gradient(f);
  const int N = gr.nodes_per_axis();
  const double R2 = R * R;
  double far = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        const auto x = gr.point(i, j, k);
        if (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] <= R2) continue;
        const std::size_t id = gr.index(i, j, k);
        for (const VectorField* g : {&gf, &gb}) {
          const double s = g->comp[0][id] * g->comp[0][id] +
                           g->comp[1][id] * g->comp[1][id] +
                           g->comp[2][id] * g->comp[2][id];
          far = std::max(far, s);
        }
      }
  return std::sqrt(far);
}

// node-wise D2F at a one-sided gradient; out layout xx,yy,zz,xy,xz,yz
void hessian_coefficients(const VectorField& g,
                          std::array<std::vector<double>, 6>& out) {
  const std::size_t nn = g.comp[0].size();
  for (auto& c : out) c.resize(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    const double x = g.comp[0][i], y = g.comp[1][i], z = g.comp[2][i];
    const double s = x * x + y * y + z * z;
    if (s >= 1.0) throw std::domain_error("non-spacelike gradient in coefficient assembly");
    const double nu = 1.0 / std::sqrt(1.0 - s);
    const double nu3 = nu * nu * nu;
    out[0][i] = nu + nu3 * x * x;
    out[1][i] = nu + nu3 * y * y;
    out[2][i] = nu + nu3 * z * z;
    out[3][i] = nu3 * x * y;
    out[4][i] = nu3 * x * z;
    out[5][i] = nu3 * y * z;
  }
}

// J e = -1/2 (div(H_f D+e) + fdiv(H_b D-e)); SPD on zero-boundary fields.
struct DivergenceJacobian {
  const Grid& grid;
  std::array<std::vector<double>, 6> hf, hb;

  explicit DivergenceJacobian(const ScalarField& u) : grid(u.grid) {
    hessian_coefficients(gradient(u), hf);
    hessian_coefficients(backward_gradient(u), hb);
  }

  ScalarField apply(const ScalarField& e) const {
    const VectorField gf = gradient(e);
    const VectorField gb = backward_gradient(e);
    VectorField Ff(grid), Fb(grid);
    const std::size_t nn = grid.node_count();
    for (std::size_t i = 0; i < nn; ++i) {
      Ff.comp[0][i] = hf[0][i] * gf.comp[0][i] + hf[3][i] * gf.comp[1][i] +
                      hf[4][i] * gf.comp[2][i];
      Ff.comp[1][i] = hf[3][i] * gf.comp[0][i] + hf[1][i] * gf.comp[1][i] +
                      hf[5][i] * gf.comp[2][i];
      Ff.comp[2][i] = hf[4][i] * gf.comp[0][i] + hf[5][i] * gf.comp[1][i] +
                      hf[2][i] * gf.comp[2][i];
      Fb.comp[0][i] = hb[0][i] * gb.comp[0][i] + hb[3][i] * gb.comp[1][i] +
                      hb[4][i] * gb.comp[2][i];
      Fb.comp[1][i] = hb[3][i] * gb.comp[0][i] + hb[1][i] * gb.comp[1][i] +
                      hb[5][i] * gb.comp[2][i];
      Fb.comp[2][i] = hb[4][i] * gb.comp[0][i] + hb[5][i] * gb.comp[1][i] +
                      hb[2][i] * gb.comp[2][i];
    }
    ScalarField out = divergence(Ff);
    const ScalarField d2 = forward_divergence(Fb);
    for (std::size_t i = 0; i < nn; ++i)
      out.values[i] = -0.5 * (out.values[i] + d2.values[i]);
    return out;
  }
};

// Preconditioned CG for the SPD divergence-form Jacobian; rhs and solution
// vanish on the boundary.
ScalarField pcg(const DivergenceJacobian& J, const ScalarField& rhs,
                PoissonSolver& poisson, double rel_tol, int max_iter) {
  ScalarField x(J.grid);
  ScalarField r = rhs;
  ScalarField z = poisson.solve(r);
  ScalarField p = z;
  double rz = dot(r.values, z.values);
  const double rhs_norm = std::sqrt(dot(rhs.values, rhs.values));
  if (rhs_norm == 0.0) return x;
  for (int it = 0; it < max_iter; ++it) {
    const ScalarField Ap = J.apply(p);
    const double pAp = dot(p.values, Ap.values);
    if (!(pAp > 0.0)) break;
    const double alpha = rz / pAp;
    for (std::size_t i = 0; i < x.values.size(); ++i) {
      x.values[i] += alpha * p.values[i];
      r.values[i] -= alpha * Ap.values[i];
    }
    if (std::sqrt(dot(r.values, r.values)) <= rel_tol * rhs_norm) break;
    z = poisson.solve(r);
    const double rz_new = dot(r.values, z.values);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < p.values.size(); ++i)
      p.values[i] = z.values[i] + beta * p.values[i];
  }
  return x;
}

// Restarted GMRES on M^-1 Q_v w = M^-1 rhs, M = -Lap_h; w zero on boundary.
ScalarField gmres(const FrozenOperator& op, const ScalarField& rhs,
                  PoissonSolver& poisson, double rel_tol, int restart,
                  int max_total) {
  const std::size_t nn = op.grid.node_count();
  ScalarField x(op.grid);
  std::vector<double> history;

  const ScalarField b = poisson.solve(rhs);
  const double b_norm = std::sqrt(dot(b.values, b.values));
  if (b_norm == 0.0) return x;

  int total = 0;
  double res = b_norm;
  while (total < max_total) {
    // r0 = M^-1 (rhs - Q x)
    ScalarField qx = apply_frozen(op, x);
    for (std::size_t i = 0; i < nn; ++i) qx.values[i] = rhs.values[i] - qx.values[i];
    ScalarField r0 = poisson.solve(qx);
    const double beta = std::sqrt(dot(r0.values, r0.values));
    res = beta;
    history.push_back(res / b_norm);
    if (res <= rel_tol * b_norm) return x;

    std::vector<std::vector<double>> V;
    V.reserve(restart + 1);
    for (auto& v : r0.values) v /= beta;
    V.push_back(r0.values);

    std::vector<std::vector<double>> H(restart + 1, std::vector<double>(restart, 0.0));
    std::vector<double> cs(restart, 0.0), sn(restart, 0.0), g(restart + 1, 0.0);
    g[0] = beta;
    int j_final = 0;

    for (int j = 0; j < restart && total < max_total; ++j) {
      ++total;
      ScalarField vj(op.grid);
      vj.values = V[j];
      ScalarField w = poisson.solve(apply_frozen(op, vj));
      for (int i = 0; i <= j; ++i) {
        H[i][j] = dot(w.values, V[i]);
        for (std::size_t t = 0; t < nn; ++t) w.values[t] -= H[i][j] * V[i][t];
      }
      const double h_sub = std::sqrt(dot(w.values, w.values));
      H[j + 1][j] = h_sub;
      if (h_sub > 0.0) {
        for (auto& v : w.values) v /= h_sub;
        V.push_back(w.values);
      }
      // apply stored Givens rotations, then the new one
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * H[i][j] + sn[i] * H[i + 1][j];
        H[i + 1][j] = -sn[i] * H[i][j] + cs[i] * H[i + 1][j];
        H[i][j] = t;
      }
      const double denom = std::hypot(H[j][j], H[j + 1][j]);
      cs[j] = denom > 0.0 ? H[j][j] / denom : 1.0;
      sn[j] = denom > 0.0 ? H[j + 1][j] / denom : 0.0;
      H[j][j] = denom;
      H[j + 1][j] = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      j_final = j + 1;
      res = std::abs(g[j + 1]);
      history.push_back(res / b_norm);
      if (res <= rel_tol * b_norm || h_sub == 0.0) break;
    }

    // back-substitute and update x
    std::vector<double> y(j_final, 0.0);
    for (int i = j_final - 1; i >= 0; --i) {
      double s = g[i];
      for (int k = i + 1; k < j_final; ++k) s -= H[i][k] * y[k];
      y[i] = s / H[i][i];
    }
    for (int i = 0; i < j_final; ++i)
      for (std::size_t t = 0; t < nn; ++t) x.values[t] += y[i] * V[i][t];
    if (res <= rel_tol * b_norm) return x;
  }
  if (res > rel_tol * b_norm * 1e4)
    throw LinearSolveFailure("frozen-coefficient solve stagnated", std::move(history));
  return x;
}

ScalarField linear_solve_impl(const FrozenOperator& op, const ScalarField& mu,
                              const ScalarField& boundary, double rel_tol,
                              PoissonSolver& poisson) {
  const Grid& g = op.grid;
  // boundary extension: prescribed values on the boundary, zero inside
  ScalarField bext(g);
  const int N = g.nodes_per_axis();
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        if (g.is_boundary(i, j, k)) bext(i, j, k) = boundary(i, j, k);
  ScalarField rhs = apply_frozen(op, bext);
  for (int i = 1; i < g.cells; ++i)
    for (int j = 1; j < g.cells; ++j)
      for (int k = 1; k < g.cells; ++k) {
        const std::size_t id = g.index(i, j, k);
        rhs.values[id] = mu.values[id] - rhs.values[id];
      }
  ScalarField w = gmres(op, rhs, poisson, rel_tol, 30, 3000);
  for (std::size_t i = 0; i < w.values.size(); ++i) w.values[i] += bext.values[i];
  return w;
}

}  // namespace

void TauPolicy::validate() const {
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("theta must lie in (0, 1)");
  if (!(far_eps > 0.0 && far_eps < 1.0))
    throw std::invalid_argument("far_eps must lie in (0, 1)");
  if (far_radius < 0.0) throw std::invalid_argument("far_radius must be >= 0");
}

FrozenOperator assemble(const ScalarField& v, double theta) {
  const VectorField g = centered_gradient(v);
  const double cap = 1.0 - 0.5 * theta;
  const double sup = linf_norm_vector(g);
  if (sup > cap + 1e-12)
    throw std::domain_error("coefficient field gradient exceeds the damping cap");
  FrozenOperator op;
  op.grid = v.grid;
  hessian_coefficients(g, op.coeff);
  return op;
}

ScalarField apply_frozen(const FrozenOperator& op, const ScalarField& u) {
  const Grid& g = op.grid;
  const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
  ScalarField out(g);
  for (int i = 1; i < g.cells; ++i)
    for (int j = 1; j < g.cells; ++j)
      for (int k = 1; k < g.cells; ++k) {
        const double c = u(i, j, k);
        const double uxx = (u(i + 1, j, k) - 2 * c + u(i - 1, j, k)) * inv_h2;
        const double uyy = (u(i, j + 1, k) - 2 * c + u(i, j - 1, k)) * inv_h2;
        const double uzz = (u(i, j, k + 1) - 2 * c + u(i, j, k - 1)) * inv_h2;
        const double uxy = (u(i + 1, j + 1, k) - u(i + 1, j - 1, k) -
                            u(i - 1, j + 1, k) + u(i - 1, j - 1, k)) *
                           0.25 * inv_h2;
        const double uxz = (u(i + 1, j, k + 1) - u(i + 1, j, k - 1) -
                            u(i - 1, j, k + 1) + u(i - 1, j, k - 1)) *
                           0.25 * inv_h2;
        const double uyz = (u(i, j + 1, k + 1) - u(i, j + 1, k - 1) -
                            u(i, j - 1, k + 1) + u(i, j - 1, k - 1)) *
                           0.25 * inv_h2;
        const std::size_t id = g.index(i, j, k);
        out.values[id] = -(op.coeff[0][id] * uxx + op.coeff[1][id] * uyy +
                           op.coeff[2][id] * uzz +
                           2.0 * (op.coeff[3][id] * uxy + op.coeff[4][id] * uxz +
                                  op.coeff[5][id] * uyz));
      }
  return out;
}

ScalarField linear_solve(const FrozenOperator& op, const ScalarField& mu,
                         const ScalarField& boundary, double rel_tol) {
  PoissonSolver poisson(op.grid);
  return linear_solve_impl(op, mu, boundary, rel_tol, poisson);
}

double tau(const ScalarField& v_next, const TauPolicy& policy) {
  policy.validate();
  // Feasibility of the energy (and of the next coefficient assembly) is
  // governed by the one-sided difference quotients, which dominate the
  // centered ones; cap those.
  double t = 1.0;
  const double sup = one_sided_sup(v_next);
  if (sup > 0.0) t = std::min(t, (1.0 - 0.5 * policy.theta) / sup);
  if (policy.far_radius > 0.0) {
    const double far = far_one_sided_sup(v_next, policy.far_radius);
    if (far > 0.0) t = std::min(t, policy.far_eps / far);
  }
  return t;
}

SolveReport fixed_point_solve(const ChargeDensity& rho, const Grid& grid,
                              const TauPolicy& policy,
                              const FixedPointOptions& opts,
                              const ScalarField* initial) {
  policy.validate();
  if (opts.max_iterations < 1 || !(opts.dv_tolerance > 0.0) ||
      !(opts.linear_tolerance > 0.0))
    throw std::invalid_argument("invalid fixed-point options");

  const ScalarField rho_s = sample_density(rho, grid);
  const ScalarField boundary = far_field_boundary(grid, rho.total_charge());
  EnergyModel model(grid, rho_s);
  PoissonSolver poisson(grid);
  const std::size_t nn = grid.node_count();
  const double tol = std::max(opts.tolerance_factor * lp_norm(rho_s, 2.0),
                              opts.absolute_tolerance_floor);

  SolveReport rep;
  rep.tolerance = tol;

  // Damping scales the iterate toward a fixed strictly spacelike background
  // that carries the exact Dirichlet data (scaling toward zero would scale
  // the boundary values away with it and silently change the boundary-value
  // problem whenever the clamp stays active). Feasibility follows from
  // convexity of the spacelike ball.
  const ScalarField base = newtonian_lift(grid, rho.total_charge());
  const double base_sup = one_sided_sup(base);
  const double cap = 1.0 - 0.5 * policy.theta;

  ScalarField v = base;
  if (initial) {
    if (initial->grid != grid)
      throw std::invalid_argument("initial field on a different grid");
    v = *initial;
    // pull a warm start that crept past the damping cap back toward the base
    const double sup = one_sided_sup(v);
    if (sup > cap) {
      ScalarField diff = v;
      for (std::size_t i = 0; i < nn; ++i) diff.values[i] -= base.values[i];
      const double sd = one_sided_sup(diff);
      const double c = sd > 0.0 ? std::max(0.0, (cap - base_sup) / sd) : 0.0;
      for (std::size_t i = 0; i < nn; ++i)
        v.values[i] = base.values[i] + c * diff.values[i];
    }
  }

  bool picard_done = false;
  double last_tau = 1.0;
  ScalarField diff(grid);
  for (int it = 0; it < opts.max_iterations; ++it) {
    const FrozenOperator op = assemble(v, policy.theta);
    const ScalarField w =
        linear_solve_impl(op, rho_s, boundary, opts.linear_tolerance, poisson);
    double t = tau(w, policy);
    if (t < 1.0) {
      // clamp active: interpolate toward the base instead of scaling w
      for (std::size_t i = 0; i < nn; ++i)
        diff.values[i] = w.values[i] - base.values[i];
      const double sd = one_sided_sup(diff);
      t = sd > 0.0 ? std::min(1.0, std::max(0.0, (cap - base_sup) / sd)) : 1.0;
      if (policy.far_radius > 0.0) {
        const double f0 = far_one_sided_sup(base, policy.far_radius);
        const double fd = far_one_sided_sup(diff, policy.far_radius);
        if (fd > 0.0 && f0 + t * fd > policy.far_eps)
          t = std::min(t, std::max(0.0, (policy.far_eps - f0) / fd));
      }
    } else {
      for (std::size_t i = 0; i < nn; ++i)
        diff.values[i] = w.values[i] - base.values[i];
    }
    last_tau = t;
    rep.tau_history.push_back(t);

    double dv_inf = 0.0;
    for (std::size_t i = 0; i < nn; ++i) {
      const double nv = base.values[i] + t * diff.values[i];
      dv_inf = std::max(dv_inf, std::abs(nv - v.values[i]));
      v.values[i] = nv;
    }
    ++rep.iterations;

    double res = std::numeric_limits<double>::quiet_NaN();
    if (model.max_one_sided_gradient(v) < 1.0) {
      ScalarField r(grid);
      model.residual(v, r, 0.0);
      res = model.interior_l2(r);
    }
    if (opts.verbose)
      std::fprintf(stderr, "iter %d tau %.6f residual %.6e dv_inf %.6e\n",
                   rep.iterations, t, res, dv_inf);

    if (dv_inf <= opts.dv_tolerance) {
      // With t = 1 this is a fixed point of the undamped map; with t < 1 the
      // damped map has settled and further sweeps cannot move it, so hand
      // off to the refinement below.
      picard_done = t == 1.0;
      rep.residual_norm = res;
      break;
    }
  }
  if (!picard_done) rep.flag = last_tau < 1.0 ? "clamp active" : "max_iterations";

  // Newton refinement in divergence form, so acceptance is judged against
  // the same residual the energy minimizer targets. Damped stages scale the
  // boundary data by tau; reinstate the exact values first, but only if the
  // resulting field is still strictly spacelike.
  bool polish_ok = false;
  if (opts.polish) {
    ScalarField trial = v;
    const int N = grid.nodes_per_axis();
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k)
          if (grid.is_boundary(i, j, k)) trial(i, j, k) = boundary(i, j, k);
    if (model.max_one_sided_gradient(trial) < 1.0) {
      v = std::move(trial);
      polish_ok = true;
    } else if (model.max_one_sided_gradient(v) < 1.0) {
      polish_ok = true;  // keep the damped boundary values
    }
  }
  if (polish_ok) {
    ScalarField r(grid);
    model.residual(v, r, 0.0);
    double rn = model.interior_l2(r);
    double rn_prev = rn;
    for (int nit = 0; nit < 30 && rn > tol; ++nit) {
      const DivergenceJacobian J(v);
      const double eta =
          std::clamp(0.5 * rn / std::max(rn_prev, rn), 1e-10, 1e-2);
      const ScalarField e = pcg(J, r, poisson, eta, 2000);
      double step = 1.0;
      bool ok = false;
      for (int bt = 0; bt < 40; ++bt) {
        ScalarField trial = v;
        for (std::size_t i = 0; i < nn; ++i)
          trial.values[i] -= step * e.values[i];
        if (model.max_one_sided_gradient(trial) < 1.0) {
          model.residual(trial, r, 0.0);
          const double rn_t = model.interior_l2(r);
          if (rn_t < rn) {
            v = std::move(trial);
            rn_prev = rn;
            rn = rn_t;
            ok = true;
            break;
          }
        }
        step *= 0.5;
      }
      ++rep.iterations;
      if (opts.verbose)
        std::fprintf(stderr, "newton %d residual %.6e step %.3e\n", nit, rn, step);
      if (!ok) break;
    }
    rep.residual_norm = rn;
  } else if (std::isnan(rep.residual_norm) || rep.residual_norm == 0.0) {
    if (model.max_one_sided_gradient(v) < 1.0) {
      ScalarField r(grid);
      model.residual(v, r, 0.0);
      rep.residual_norm = model.interior_l2(r);
    } else {
      rep.residual_norm = std::numeric_limits<double>::infinity();
    }
  }

  rep.u = std::move(v);
  rep.converged = rep.residual_norm <= tol;
  if (rep.converged) rep.flag.clear();
  rep.theta = spacelike_margin(rep.u);
  rep.sup_u = lp_norm(rep.u, std::numeric_limits<double>::infinity());
  rep.energy = model.max_one_sided_gradient(rep.u) < 1.0
                   ? model.energy(rep.u)
                   : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

std::vector<SolveReport> continuation_solve(const ChargeDensity& rho,
                                            const Grid& grid,
                                            const std::vector<double>& schedule,
                                            const TauPolicy& policy,
                                            const FixedPointOptions& opts) {
  if (schedule.empty() || std::abs(schedule.back() - 1.0) > 1e-12)
    throw std::invalid_argument("continuation schedule must end at 1");
  for (std::size_t i = 0; i + 1 < schedule.size(); ++i)
    if (!(schedule[i] < schedule[i + 1]) || !(schedule[i] > 0.0))
      throw std::invalid_argument("continuation schedule must be positive and increasing");

  std::vector<SolveReport> stages;
  const ScalarField* warm = nullptr;
  for (double s : schedule) {
    ChargeDensity scaled = rho;
    for (auto& term : scaled.terms) term.weight *= s;
    SolveReport rep = fixed_point_solve(scaled, grid, policy, opts, warm);
    const bool ok = rep.converged;
    stages.push_back(std::move(rep));
    if (!ok) break;  // keep the last good stage; report the failure
    warm = &stages.back().u;
  }
  return stages;
}

}  // namespace bi
