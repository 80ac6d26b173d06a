#pragma once

// Safeguarded first-order minimization of the discrete Born-Infeld energy
// over spacelike grid fields: Barzilai-Borwein step proposal, backtracking
// line search that also rejects any step taking a one-sided gradient within
// `safeguard_margin` of the light cone, Laplacian-preconditioned descent
// direction.

#include "bi/density.hpp"
#include "bi/energy.hpp"
#include "bi/grid.hpp"
#include "bi/solve_report.hpp"

namespace bi {

struct MinimizeOptions {
  double safeguard_margin = 1e-6;   // delta
  int max_iterations = 20000;
  // residual tolerance = tolerance_factor * ||rho||_2 (grid norm), floored
  double tolerance_factor = 1e-8;
  double absolute_tolerance_floor = 1e-14;
  int max_backtracks = 60;
  bool verbose = false;

  void validate() const;
};

double discrete_energy(const EnergyModel& model, const ScalarField& u);

/// Smooth spacelike field carrying the far-field boundary data; used as the
/// default starting point and as the boundary lift in the energy audits.
ScalarField newtonian_lift(const Grid& grid, double total_charge);

ScalarField energy_gradient(const EnergyModel& model, const ScalarField& u,
                            double min_margin = 1e-14);

/// Minimize I_rho over fields with the far-field Dirichlet boundary data.
/// `initial` (optional) must carry the same boundary values.
SolveReport minimize(const ChargeDensity& rho, const Grid& grid,
                     const MinimizeOptions& opts,
                     const ScalarField* initial = nullptr);

}  // namespace bi
