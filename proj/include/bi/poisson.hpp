#pragma once

// Exact inverse of the 7-point discrete Laplacian with zero Dirichlet data,
// via DST-I (FFTW RODFT00). Used as preconditioner by both grid solvers.

#include <vector>

#include "bi/grid.hpp"

namespace bi {

class PoissonSolver {
 public:
  explicit PoissonSolver(const Grid& grid);
  ~PoissonSolver();
  PoissonSolver(const PoissonSolver&) = delete;
  PoissonSolver& operator=(const PoissonSolver&) = delete;

  /// Solve -Lap_h w = r on interior nodes, w = 0 on the boundary.
  /// Boundary values of r are ignored.
  ScalarField solve(const ScalarField& r);

 private:
  Grid grid_;
  int interior_;  // m - 1
  std::vector<double> buf_;
  std::vector<double> eig_;  // 1D eigenvalues of -D-D+ with Dirichlet ends
  void* plan_ = nullptr;     // fftw_plan
};

}  // namespace bi
