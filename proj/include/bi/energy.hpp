#pragma once

// Discrete Born-Infeld energy and its exact gradient on the grid.
//
// The energy averages the Lagrangian over the forward and backward one-sided
// gradients. Each half is adjoint-consistent on its own, so the interior
// residual returned by `residual` is the exact derivative of `energy` with
// respect to the h^3-weighted inner product; the symmetrization restores
// O(h^2) consistency of the scheme.

#include <limits>
#include <vector>

#include "bi/grid.hpp"

namespace bi {

class EnergyModel {
 public:
  EnergyModel(const Grid& grid, ScalarField rho_samples);

  const Grid& grid() const { return grid_; }
  const ScalarField& rho() const { return rho_; }

  /// I(u) = h^3 sum 1/2 [F(D+u) + F(D-u)] - h^3 sum rho u.
  /// Returns +infinity when some one-sided gradient leaves the unit ball.
  double energy(const ScalarField& u) const;

  /// Max of |D+u| and |D-u| over all nodes (squared norm under the sqrt).
  double max_one_sided_gradient(const ScalarField& u) const;

  /// Interior PDE residual r = -1/2 (D-. DF(D+u) + D+. DF(D-u)) - rho; zero on
  /// the boundary. Throws when the margin 1 - |Du| falls below `min_margin`,
  /// naming the worst node.
  void residual(const ScalarField& u, ScalarField& out,
                double min_margin = 1e-14) const;

  /// h^3-weighted L2 norm over interior nodes.
  double interior_l2(const ScalarField& f) const;

  static constexpr double infinite_energy() {
    return std::numeric_limits<double>::infinity();
  }

 private:
  void one_sided_gradients(const ScalarField& u) const;

  Grid grid_;
  ScalarField rho_;
  // scratch: forward/backward gradient components and fluxes
  mutable std::array<std::vector<double>, 3> gf_, gb_, ff_, fb_;
};

}  // namespace bi
