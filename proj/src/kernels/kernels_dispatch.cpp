#include <cstdlib>
#include <string>

#include "dofatlas/kernels.hpp"
#include "dofatlas/model.hpp"

namespace dofatlas::kernels {

#ifdef DOF_ATLAS_HAVE_AVX2
const RowKernels& avx2_kernels_impl();

const RowKernels* avx2_kernels() {
  static const RowKernels* k =
      __builtin_cpu_supports("avx2") ? &avx2_kernels_impl() : nullptr;
  return k;
}
#else
const RowKernels* avx2_kernels() { return nullptr; }
#endif

const RowKernels& active_kernels() {
  const char* env = std::getenv("DOF_ATLAS_SIMD");
  const std::string want = env != nullptr ? env : "";
  if (want == "scalar") return scalar_kernels();
  const RowKernels* avx2 = avx2_kernels();
  if (want == "avx2") {
    if (avx2 == nullptr)
      throw ValidationError("DOF_ATLAS_SIMD=avx2 requested but unavailable");
    return *avx2;
  }
  if (!want.empty() && want != "auto")
    throw ValidationError("DOF_ATLAS_SIMD must be scalar, avx2, or auto");
  return avx2 != nullptr ? *avx2 : scalar_kernels();
}

}  // namespace dofatlas::kernels
