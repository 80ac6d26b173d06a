#include "bi/poisson.hpp"

#include <cmath>
#include <fftw3.h>
#include <numbers>

namespace bi {

PoissonSolver::PoissonSolver(const Grid& grid)
    : grid_(grid), interior_(grid.cells - 1) {
  const std::size_t M = interior_;
  buf_.assign(M * M * M, 0.0);
  plan_ = fftw_plan_r2r_3d(interior_, interior_, interior_, buf_.data(), buf_.data(),
                           FFTW_RODFT00, FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE);
  const double h = grid.spacing();
  eig_.resize(M);
  for (std::size_t i = 0; i < M; ++i) {
    const double s = std::sin(std::numbers::pi * (i + 1) / (2.0 * grid.cells));
    eig_[i] = 4.0 / (h * h) * s * s;
  }
}

PoissonSolver::~PoissonSolver() {
  if (plan_) fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

ScalarField PoissonSolver::solve(const ScalarField& r) {
  const std::size_t M = interior_;
  for (int i = 1; i < grid_.cells; ++i)
    for (int j = 1; j < grid_.cells; ++j)
      for (int k = 1; k < grid_.cells; ++k)
        buf_[((i - 1) * M + (j - 1)) * M + (k - 1)] = r(i, j, k);
  fftw_execute(static_cast<fftw_plan>(plan_));
  const double norm = 1.0 / std::pow(2.0 * grid_.cells, 3);
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = 0; j < M; ++j)
      for (std::size_t k = 0; k < M; ++k)
        buf_[(i * M + j) * M + k] *= norm / (eig_[i] + eig_[j] + eig_[k]);
  fftw_execute(static_cast<fftw_plan>(plan_));
  ScalarField w(grid_);
  for (int i = 1; i < grid_.cells; ++i)
    for (int j = 1; j < grid_.cells; ++j)
      for (int k = 1; k < grid_.cells; ++k)
        w(i, j, k) = buf_[((i - 1) * M + (j - 1)) * M + (k - 1)];
  return w;
}

}  // namespace bi
