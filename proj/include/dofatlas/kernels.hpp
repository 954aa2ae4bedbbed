#pragma once

#include <cstddef>

namespace dofatlas::kernels {

// Row kernels evaluate one grid row of an oracle objective into out[0..n).
// Grid coordinates are always reconstructed as start + (i0 + i) * step so
// every variant (and the scalar tail of a vector variant) performs the
// identical arithmetic; outputs must match the scalar kernel bit for bit.

// Single-transmitter sum DoF at fixed a1, sweeping a2.
struct BcSumRowArgs {
  double a1{0.0};
  double alpha1{0.0};
  double a2_start{0.0};
  double a2_step{0.0};
  std::size_t i0{0};
  double c1{0.0}, c2zf{0.0}, c2sub{0.0};  // stream counts
  double m1{0.0}, m2{0.0};
  std::size_t n{0};
};

// Narrow-pair objective at fixed a2, sweeping a2p. Infeasible points are
// -infinity. row_feasible carries the a2-only feasibility check.
struct Ic2RowArgs {
  double a2{0.0};
  double a2p_start{0.0};
  double a2p_step{0.0};
  std::size_t i0{0};
  double alpha1{0.0};
  double lambda{0.0};
  double n1p{0.0}, n2{0.0}, tau{0.0};
  double mu1{0.0}, mu2{0.0}, delta1{0.0}, delta2{0.0}, xi{0.0};
  double m1{0.0};
  bool wide{false};
  bool row_feasible{true};
  std::size_t n{0};
};

// Slot-fraction sweep: out[i] = max(l0, min(l1, l2)) with lk affine in i.
struct MixRowArgs {
  double base0{0.0}, step0{0.0};
  double base1{0.0}, step1{0.0};
  double base2{0.0}, step2{0.0};
  std::size_t i0{0};
  std::size_t n{0};
};

struct RowKernels {
  void (*bc_sum_row)(const BcSumRowArgs&, double* out);
  void (*ic2_row)(const Ic2RowArgs&, double* out);
  void (*mix_row)(const MixRowArgs&, double* out);
  const char* name;
};

const RowKernels& scalar_kernels();
const RowKernels* avx2_kernels();  // null when not compiled or not supported
// DOF_ATLAS_SIMD=scalar|avx2|auto overrides the automatic choice.
const RowKernels& active_kernels();

}  // namespace dofatlas::kernels
