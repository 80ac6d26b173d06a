#pragma once

// Damped frozen-coefficient iteration for the discrete Born-Infeld equation:
// assemble the Hessian coefficients at the current iterate, solve the
// non-divergence linear problem, damp the update to keep the gradient away
// from the light cone, and (optionally) continue along a scaled family of
// densities. A Newton polish in divergence form drives the final field to
// the same residual the energy minimizer targets.

#include <vector>

#include "bi/density.hpp"
#include "bi/grid.hpp"
#include "bi/solve_report.hpp"

namespace bi {

/// Node-wise symmetric coefficient matrix D2F(Dv) (centered gradient of v).
/// At every node the eigenvalues lie in [nu, nu^3] of the local gradient.
struct FrozenOperator {
  Grid grid;
  // order: xx, yy, zz, xy, xz, yz
  std::array<std::vector<double>, 6> coeff;
};

struct TauPolicy {
  double theta = 0.1;     // target margin; gradient cap is 1 - theta/2
  double far_eps = 0.5;   // cap on the gradient outside B(0, far_radius)
  double far_radius = 0.0;  // 0 disables the far clamp

  void validate() const;
};

struct FixedPointOptions {
  int max_iterations = 200;        // damped Picard sweeps
  double dv_tolerance = 1e-9;      // stop when ||v_{k+1} - v_k||_inf <= this
  // divergence-form residual target: tolerance_factor * ||rho||_2, floored
  double tolerance_factor = 1e-8;
  double absolute_tolerance_floor = 1e-14;
  double linear_tolerance = 1e-10;  // relative, for the inner Krylov solves
  bool polish = true;               // Newton refinement in divergence form
  bool verbose = false;
};

/// Coefficients of Q_v u = -<D2F(Dv), D2 u>. Requires ||Dv||_inf <= 1 - theta/2.
FrozenOperator assemble(const ScalarField& v, double theta);

/// Q_v u at interior nodes (centered second differences contracted with the
/// coefficients, sign-flipped); zero on the boundary.
ScalarField apply_frozen(const FrozenOperator& op, const ScalarField& u);

struct LinearSolveFailure : std::runtime_error {
  std::vector<double> residual_history;
  explicit LinearSolveFailure(const std::string& what, std::vector<double> hist)
      : std::runtime_error(what), residual_history(std::move(hist)) {}
};

/// Solve op u = mu with the boundary values of `boundary` prescribed.
/// Restarted GMRES on the zero-boundary correction, preconditioned by the
/// exact inverse of the discrete Laplacian; relative tolerance `rel_tol`.
ScalarField linear_solve(const FrozenOperator& op, const ScalarField& mu,
                         const ScalarField& boundary, double rel_tol = 1e-10);

/// tau = min{1, (1 - theta/2)/||Dv||_inf, far_eps/||Dv||_{inf, |x|>R}}.
double tau(const ScalarField& v_next, const TauPolicy& policy);

SolveReport fixed_point_solve(const ChargeDensity& rho, const Grid& grid,
                              const TauPolicy& policy,
                              const FixedPointOptions& opts,
                              const ScalarField* initial = nullptr);

/// Warm-started solves along the scaled densities s*rho for s in `schedule`
/// (increasing, ending at 1). Returns one report per stage; the last stage is
/// the solution of the original problem.
std::vector<SolveReport> continuation_solve(const ChargeDensity& rho,
                                            const Grid& grid,
                                            const std::vector<double>& schedule,
                                            const TauPolicy& policy,
                                            const FixedPointOptions& opts);

}  // namespace bi
