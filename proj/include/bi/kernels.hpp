#pragma once

// Node-wise arithmetic kernels for the solver inner loops. Each kernel has a
// scalar reference implementation and an AVX2 variant selected at runtime;
// both are element-wise maps built from +,-,*,/ and sqrt only, so the two
// paths produce bit-identical output (verified by the equivalence tests).
//
// Callers guarantee |g|^2 < 1 at every element; the kernels do not check.

#include <cstddef>

namespace bi::kernels {

using Flux3Fn = void (*)(const double*, const double*, const double*,
                         double*, double*, double*, std::size_t);
using Nu3Fn = void (*)(const double*, const double*, const double*,
                       double*, std::size_t);
using AxpyFn = void (*)(double, const double*, double*, std::size_t);

// fx,fy,fz = g / sqrt(1 - |g|^2), the Born-Infeld flux DF(g).
extern Flux3Fn flux3;
// nu = 1 / sqrt(1 - |g|^2).
extern Nu3Fn nu3;
// y += a * x
extern AxpyFn axpy;

// Reference implementations, always available (used by the equivalence tests).
void flux3_scalar(const double* gx, const double* gy, const double* gz,
                  double* fx, double* fy, double* fz, std::size_t n);
void nu3_scalar(const double* gx, const double* gy, const double* gz,
                double* nu, std::size_t n);
void axpy_scalar(double a, const double* x, double* y, std::size_t n);

void flux3_avx2(const double* gx, const double* gy, const double* gz,
                double* fx, double* fy, double* fz, std::size_t n);
void nu3_avx2(const double* gx, const double* gy, const double* gz,
              double* nu, std::size_t n);
void axpy_avx2(double a, const double* x, double* y, std::size_t n);

// "avx2" or "scalar"; picked at startup from cpuid, overridable with the
// BI_KERNEL environment variable.
const char* active_backend();

}  // namespace bi::kernels
