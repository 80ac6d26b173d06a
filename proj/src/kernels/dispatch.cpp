#include "bi/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace bi::kernels {

namespace {

bool want_avx2() {
  if (const char* env = std::getenv("BI_KERNEL")) {
    if (std::strcmp(env, "scalar") == 0) return false;
    if (std::strcmp(env, "avx2") == 0) return true;
  }
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const bool use_avx2 = want_avx2();

}  // namespace

Flux3Fn flux3 = use_avx2 ? flux3_avx2 : flux3_scalar;
Nu3Fn nu3 = use_avx2 ? nu3_avx2 : nu3_scalar;
AxpyFn axpy = use_avx2 ? axpy_avx2 : axpy_scalar;

const char* active_backend() { return use_avx2 ? "avx2" : "scalar"; }

}  // namespace bi::kernels
