#include "bi/kernels.hpp"

#include <cmath>
#include <immintrin.h>

// Same operation sequence as the scalar kernels: mul/add for |g|^2, one
// sqrt, one div. No FMA, so lanes round exactly like the scalar path.

namespace bi::kernels {

void flux3_avx2(const double* gx, const double* gy, const double* gz,
                double* fx, double* fy, double* fz, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(gx + i);
    const __m256d vy = _mm256_loadu_pd(gy + i);
    const __m256d vz = _mm256_loadu_pd(gz + i);
    __m256d s = _mm256_mul_pd(vx, vx);
    s = _mm256_add_pd(s, _mm256_mul_pd(vy, vy));
    s = _mm256_add_pd(s, _mm256_mul_pd(vz, vz));
    const __m256d nu = _mm256_div_pd(one, _mm256_sqrt_pd(_mm256_sub_pd(one, s)));
    _mm256_storeu_pd(fx + i, _mm256_mul_pd(nu, vx));
    _mm256_storeu_pd(fy + i, _mm256_mul_pd(nu, vy));
    _mm256_storeu_pd(fz + i, _mm256_mul_pd(nu, vz));
  }
  for (; i < n; ++i) {
    const double s = gx[i] * gx[i] + gy[i] * gy[i] + gz[i] * gz[i];
    const double nu = 1.0 / std::sqrt(1.0 - s);
    fx[i] = nu * gx[i];
    fy[i] = nu * gy[i];
    fz[i] = nu * gz[i];
  }
}

void nu3_avx2(const double* gx, const double* gy, const double* gz,
              double* nu, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(gx + i);
    const __m256d vy = _mm256_loadu_pd(gy + i);
    const __m256d vz = _mm256_loadu_pd(gz + i);
    __m256d s = _mm256_mul_pd(vx, vx);
    s = _mm256_add_pd(s, _mm256_mul_pd(vy, vy));
    s = _mm256_add_pd(s, _mm256_mul_pd(vz, vz));
    _mm256_storeu_pd(nu + i, _mm256_div_pd(one, _mm256_sqrt_pd(_mm256_sub_pd(one, s))));
  }
  for (; i < n; ++i) {
    const double s = gx[i] * gx[i] + gy[i] * gy[i] + gz[i] * gz[i];
    nu[i] = 1.0 / std::sqrt(1.0 - s);
  }
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y + i);
    const __m256d vx = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, vx)));
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

}  // namespace bi::kernels
