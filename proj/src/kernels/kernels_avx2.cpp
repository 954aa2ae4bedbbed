#include <immintrin.h>

#include <limits>

#include "dofatlas/kernels.hpp"
#include "kernels_detail.hpp"

// Vector lanes mirror the detail:: reference arithmetic operation for
// operation (no FMA, same min/max operand order), so outputs are bit
// identical to the scalar kernels.

namespace dofatlas::kernels {

namespace {

inline __m256d index_vec(std::size_t g) {
  return _mm256_set_pd(static_cast<double>(g + 3), static_cast<double>(g + 2),
                       static_cast<double>(g + 1), static_cast<double>(g));
}

void bc_sum_row_avx2(const BcSumRowArgs& a, double* out) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d step = _mm256_set1_pd(a.a2_step);
  const __m256d start = _mm256_set1_pd(a.a2_start);
  const __m256d alpha1 = _mm256_set1_pd(a.alpha1);
  const __m256d a1 = _mm256_set1_pd(a.a1);
  const __m256d c1 = _mm256_set1_pd(a.c1);
  const __m256d c2zf = _mm256_set1_pd(a.c2zf);
  const __m256d c2sub = _mm256_set1_pd(a.c2sub);
  const __m256d m1 = _mm256_set1_pd(a.m1);
  const __m256d m2 = _mm256_set1_pd(a.m2);
  std::size_t i = 0;
  for (; i + 4 <= a.n; i += 4) {
    const __m256d a2 =
        _mm256_add_pd(start, _mm256_mul_pd(index_vec(a.i0 + i), step));
    const __m256d t = _mm256_max_pd(_mm256_sub_pd(a2, alpha1), zero);
    const __m256d dp1 =
        _mm256_mul_pd(c1, _mm256_max_pd(_mm256_sub_pd(a1, t), zero));
    const __m256d dp2 =
        _mm256_add_pd(_mm256_mul_pd(c2zf, a2), _mm256_mul_pd(c2sub, t));
    const __m256d mx = _mm256_max_pd(a1, t);
    const __m256d cap1 = _mm256_sub_pd(
        _mm256_sub_pd(m1, _mm256_mul_pd(c1, mx)), _mm256_mul_pd(c2sub, t));
    const __m256d cap2 = _mm256_sub_pd(m2, dp2);
    const __m256d cap = _mm256_max_pd(_mm256_min_pd(cap1, cap2), zero);
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_add_pd(cap, dp1), dp2));
  }
  for (; i < a.n; ++i) {
    const double a2 =
        a.a2_start + static_cast<double>(a.i0 + i) * a.a2_step;
    out[i] = detail::bc_sum_point(a, a2);
  }
}

void ic2_row_avx2(const Ic2RowArgs& a, double* out) {
  const double neg_inf = -std::numeric_limits<double>::infinity();
  if (!a.row_feasible) {
    for (std::size_t i = 0; i < a.n; ++i) out[i] = neg_inf;
    return;
  }
  const double t_s = detail::relu(a.a2 - a.alpha1);
  const __m256d step = _mm256_set1_pd(a.a2p_step);
  const __m256d start = _mm256_set1_pd(a.a2p_start);
  const __m256d alpha1 = _mm256_set1_pd(a.alpha1);
  const __m256d t = _mm256_set1_pd(t_s);
  const __m256d n1p = _mm256_set1_pd(a.n1p);
  const __m256d xi = _mm256_set1_pd(a.xi);
  const __m256d lam = _mm256_set1_pd(a.lambda);
  const __m256d tol = _mm256_set1_pd(1e-12);
  const __m256d inf_v = _mm256_set1_pd(neg_inf);
  const __m256d head = _mm256_set1_pd(a.n2 - a.lambda);
  // alt = (n1p - lambda + (delta2 - n1p + xi) * t + mu2 * a2 + tau) fixed
  // part plus the a2p-dependent terms, kept in the scalar evaluation order.
  const __m256d base =
      _mm256_set1_pd(a.n1p - a.lambda + (a.delta2 - a.n1p + a.xi) * t_s +
                     a.mu2 * a.a2);
  const __m256d mu1 = _mm256_set1_pd(a.mu1);
  const __m256d d1mx = _mm256_set1_pd(a.delta1 - a.xi);
  const __m256d tau = _mm256_set1_pd(a.tau);
  std::size_t i = 0;
  for (; i + 4 <= a.n; i += 4) {
    const __m256d a2p =
        _mm256_add_pd(start, _mm256_mul_pd(index_vec(a.i0 + i), step));
    const __m256d u = _mm256_sub_pd(a2p, alpha1);
    const __m256d r1 =
        _mm256_sub_pd(_mm256_sub_pd(n1p, _mm256_mul_pd(xi, u)),
                      _mm256_mul_pd(_mm256_sub_pd(n1p, xi), t));
    const __m256d ok =
        _mm256_cmp_pd(lam, _mm256_add_pd(r1, tol), _CMP_LE_OQ);
    __m256d alt = _mm256_add_pd(
        _mm256_add_pd(_mm256_add_pd(base, _mm256_mul_pd(mu1, a2p)),
                      _mm256_mul_pd(d1mx, u)),
        tau);
    if (a.wide) alt = _mm256_min_pd(head, alt);
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(inf_v, alt, ok));
  }
  for (; i < a.n; ++i) {
    const double a2p =
        a.a2p_start + static_cast<double>(a.i0 + i) * a.a2p_step;
    out[i] = detail::ic2_point(a, a2p);
  }
}

void mix_row_avx2(const MixRowArgs& a, double* out) {
  const __m256d b0 = _mm256_set1_pd(a.base0);
  const __m256d s0 = _mm256_set1_pd(a.step0);
  const __m256d b1 = _mm256_set1_pd(a.base1);
  const __m256d s1 = _mm256_set1_pd(a.step1);
  const __m256d b2 = _mm256_set1_pd(a.base2);
  const __m256d s2 = _mm256_set1_pd(a.step2);
  std::size_t i = 0;
  for (; i + 4 <= a.n; i += 4) {
    const __m256d idx = index_vec(a.i0 + i);
    const __m256d l0 = _mm256_add_pd(b0, _mm256_mul_pd(idx, s0));
    const __m256d l1 = _mm256_add_pd(b1, _mm256_mul_pd(idx, s1));
    const __m256d l2 = _mm256_add_pd(b2, _mm256_mul_pd(idx, s2));
    _mm256_storeu_pd(out + i, _mm256_max_pd(l0, _mm256_min_pd(l1, l2)));
  }
  for (; i < a.n; ++i) {
    out[i] = detail::mix_point(a, static_cast<double>(a.i0 + i));
  }
}

}  // namespace

const RowKernels& avx2_kernels_impl() {
  static const RowKernels k{bc_sum_row_avx2, ic2_row_avx2, mix_row_avx2,
                            "avx2"};
  return k;
}

}  // namespace dofatlas::kernels
