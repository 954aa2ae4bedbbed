#pragma once

#include <limits>

#include "dofatlas/kernels.hpp"

// Reference per-point arithmetic shared by the scalar kernels and the tail
// loops of the vector kernels. The operation order here is the contract: a
// vector variant must mirror it lane for lane.

namespace dofatlas::kernels::detail {

inline double relu(double x) { return x > 0.0 ? x : 0.0; }

inline double bc_sum_point(const BcSumRowArgs& a, double a2) {
  const double t = relu(a2 - a.alpha1);
  const double dp1 = a.c1 * relu(a.a1 - t);
  const double dp2 = a.c2zf * a2 + a.c2sub * t;
  const double mx = a.a1 > t ? a.a1 : t;
  const double cap1 = (a.m1 - a.c1 * mx) - a.c2sub * t;
  const double cap2 = a.m2 - dp2;
  const double cap = cap1 < cap2 ? cap1 : cap2;
  // Same association as the stream-bundle sum: common part first.
  return relu(cap) + dp1 + dp2;
}

inline double ic2_point(const Ic2RowArgs& a, double a2p) {
  if (!a.row_feasible) return -std::numeric_limits<double>::infinity();
  const double t = relu(a.a2 - a.alpha1);
  const double u = a2p - a.alpha1;
  const double r1 = (a.n1p - a.xi * u) - (a.n1p - a.xi) * t;
  if (!(a.lambda <= r1 + 1e-12))
    return -std::numeric_limits<double>::infinity();
  const double alt = a.n1p - a.lambda + (a.delta2 - a.n1p + a.xi) * t +
                     a.mu2 * a.a2 + a.mu1 * a2p + (a.delta1 - a.xi) * u +
                     a.tau;
  if (!a.wide) return alt;
  const double head = a.n2 - a.lambda;
  return head < alt ? head : alt;
}

inline double mix_point(const MixRowArgs& a, double idx) {
  const double l0 = a.base0 + idx * a.step0;
  const double l1 = a.base1 + idx * a.step1;
  const double l2 = a.base2 + idx * a.step2;
  const double lo = l1 < l2 ? l1 : l2;
  return l0 > lo ? l0 : lo;
}

}  // namespace dofatlas::kernels::detail
