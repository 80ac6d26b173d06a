#include "bi/kernels.hpp"

#include <cmath>

namespace bi::kernels {

void flux3_scalar(const double* gx, const double* gy, const double* gz,
                  double* fx, double* fy, double* fz, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double s = gx[i] * gx[i] + gy[i] * gy[i] + gz[i] * gz[i];
    const double nu = 1.0 / std::sqrt(1.0 - s);
    fx[i] = nu * gx[i];
    fy[i] = nu * gy[i];
    fz[i] = nu * gz[i];
  }
}

void nu3_scalar(const double* gx, const double* gy, const double* gz,
                double* nu, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double s = gx[i] * gx[i] + gy[i] * gy[i] + gz[i] * gz[i];
    nu[i] = 1.0 / std::sqrt(1.0 - s);
  }
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

}  // namespace bi::kernels
