#include "dofatlas/kernels.hpp"
#include "kernels_detail.hpp"

namespace dofatlas::kernels {

namespace {

void bc_sum_row_scalar(const BcSumRowArgs& a, double* out) {
  for (std::size_t i = 0; i < a.n; ++i) {
    const double a2 =
        a.a2_start + static_cast<double>(a.i0 + i) * a.a2_step;
    out[i] = detail::bc_sum_point(a, a2);
  }
}

void ic2_row_scalar(const Ic2RowArgs& a, double* out) {
  for (std::size_t i = 0; i < a.n; ++i) {
    const double a2p =
        a.a2p_start + static_cast<double>(a.i0 + i) * a.a2p_step;
    out[i] = detail::ic2_point(a, a2p);
  }
}

void mix_row_scalar(const MixRowArgs& a, double* out) {
  for (std::size_t i = 0; i < a.n; ++i) {
    const double idx = static_cast<double>(a.i0 + i);
    out[i] = detail::mix_point(a, idx);
  }
}

}  // namespace

const RowKernels& scalar_kernels() {
  static const RowKernels k{bc_sum_row_scalar, ic2_row_scalar, mix_row_scalar,
                            "scalar"};
  return k;
}

}  // namespace dofatlas::kernels
