#include "dofatlas/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dofatlas/kernels.hpp"
#include "dofatlas/util.hpp"

namespace dofatlas {

namespace {

constexpr double k_neg_inf = -std::numeric_limits<double>::infinity();

// Uniform points lo + i*step, plus the exact upper endpoint when the last
// uniform point falls measurably short of it.
struct Axis {
  double lo{0.0};
  double hi{0.0};
  double step{0.0};
  std::size_t count{0};
  bool extra{false};

  std::size_t total() const { return count + (extra ? 1 : 0); }
  double value(std::size_t i) const {
    return i < count ? lo + static_cast<double>(i) * step : hi;
  }
};

Axis make_axis(double lo, double hi, double step) {
  Axis ax;
  ax.lo = lo;
  ax.hi = hi;
  ax.step = step;
  if (hi <= lo) {
    ax.hi = lo;
    ax.count = 1;
    return ax;
  }
  const auto k =
      static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  ax.count = k + 1;
  ax.extra = hi - (lo + static_cast<double>(k) * step) > 1e-12;
  return ax;
}

void check_step(const GridSpec& grid) {
  if (!(grid.step > 0.0) || grid.step > 0.5)
    throw ValidationError("grid step must lie in (0, 0.5]");
}

// Ascending scan keeping the last maximizer, so ties resolve to the largest
// coordinate regardless of how rows were distributed over threads.
std::size_t scan_best(const std::vector<double>& vals, double* best) {
  double bv = k_neg_inf;
  std::size_t bj = 0;
  for (std::size_t j = 0; j < vals.size(); ++j) {
    if (vals[j] >= bv) {
      bv = vals[j];
      bj = j;
    }
  }
  *best = bv;
  return bj;
}

}  // namespace

GridMaxBc grid_max_sum_bc(const AntennaConfig& config,
                          const CsitQuality& alpha, const GridSpec& grid) {
  require_normalized(config, ChannelKind::bc, "grid_max_sum_bc");
  validate(alpha);
  check_step(grid);
  const int m = config.m();
  kernels::BcSumRowArgs base;
  base.alpha1 = alpha.alpha1;
  base.c1 = std::max(m - config.n2, 0);
  base.c2zf = std::max(m - config.n1, 0);
  base.c2sub = m2_bc(config) - base.c2zf;
  base.m1 = m1_bc(config);
  base.m2 = m2_bc(config);

  const Axis a1ax = make_axis(0.0, alpha.alpha2, grid.step);
  const Axis a2ax = make_axis(0.0, 1.0, grid.step);
  const auto& kk = kernels::active_kernels();

  struct RowBest {
    double sum{k_neg_inf};
    double a2{0.0};
  };
  std::vector<RowBest> rows(a1ax.total());
  parallel_for(a1ax.total(), [&](std::size_t r) {
    kernels::BcSumRowArgs args = base;
    args.a1 = a1ax.value(r);
    args.a2_start = a2ax.lo;
    args.a2_step = a2ax.step;
    args.i0 = 0;
    args.n = a2ax.count;
    std::vector<double> out(a2ax.total());
    kk.bc_sum_row(args, out.data());
    if (a2ax.extra) {
      kernels::BcSumRowArgs end = args;
      end.a2_start = a2ax.hi;
      end.a2_step = 0.0;
      end.n = 1;
      kk.bc_sum_row(end, out.data() + a2ax.count);
    }
    double bv = 0.0;
    const std::size_t bj = scan_best(out, &bv);
    rows[r] = {bv, a2ax.value(bj)};
  });

  GridMaxBc res;
  double bv = k_neg_inf;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].sum >= bv) {
      bv = rows[r].sum;
      res.a1 = a1ax.value(r);
      res.a2 = rows[r].a2;
    }
  }
  res.sum = bv;
  return res;
}

GridMaxSt grid_max_st_bc(const AntennaConfig& config, const CsitQuality& alpha,
                         const GridSpec& grid) {
  require_normalized(config, ChannelKind::bc, "grid_max_st_bc");
  validate(alpha);
  check_step(grid);
  if (config.m() < config.n2)
    throw ValidationError(
        "slot mixing needs at least as many transmit as receive antennas");
  // Slot endpoints of the mixture; every rho in between is affine in them.
  const DofTuple full = bc_dof_tuple(config, alpha, alpha.alpha2, 1.0);
  const DofTuple matched =
      bc_dof_tuple(config, alpha, alpha.alpha2, alpha.alpha1);
  const double dp_f = full.dp1 + full.dp2;
  const double dp_m = matched.dp1 + matched.dp2;
  const Axis rho_ax = make_axis(0.0, 1.0, grid.step);

  kernels::MixRowArgs args;
  args.base0 = dp_m;
  args.step0 = (dp_f - dp_m) * grid.step;
  args.base1 = dp_m + matched.cap_rx1;
  args.step1 = ((dp_f + full.cap_rx1) - (dp_m + matched.cap_rx1)) * grid.step;
  args.base2 = dp_m + matched.cap_rx2;
  args.step2 = ((dp_f + full.cap_rx2) - (dp_m + matched.cap_rx2)) * grid.step;
  args.i0 = 0;
  args.n = rho_ax.count;

  const auto& kk = kernels::active_kernels();
  std::vector<double> out(rho_ax.total());
  kk.mix_row(args, out.data());
  if (rho_ax.extra) {
    // rho = 1 exactly is the full-power slot alone.
    out[rho_ax.count] =
        std::max(dp_f, std::min(dp_f + full.cap_rx1, dp_f + full.cap_rx2));
  }
  GridMaxSt res;
  const std::size_t bj = scan_best(out, &res.sum);
  res.rho = rho_ax.value(bj);
  return res;
}

GridMaxIc2 grid_max_d2_ic2(const AntennaConfig& config,
                           const CsitQuality& alpha, double lambda,
                           const GridSpec& grid) {
  const Ic2Program prog = ic2_program(config, alpha);
  validate(alpha);
  check_step(grid);
  const double n1p = prog.dims.n1p;
  if (lambda < -1e-9 || lambda > n1p + 1e-9)
    throw ValidationError("lambda outside [0, N1']");
  lambda = std::clamp(lambda, 0.0, n1p);

  kernels::Ic2RowArgs base;
  base.alpha1 = prog.alpha1;
  base.lambda = lambda;
  base.n1p = n1p;
  base.n2 = prog.n2;
  base.tau = prog.dims.tau;
  base.mu1 = prog.dims.mu1;
  base.mu2 = prog.dims.mu2;
  base.delta1 = prog.dims.delta1;
  base.delta2 = prog.dims.delta2;
  base.xi = prog.dims.xi;
  base.m1 = prog.m1;
  base.wide = prog.wide;

  const Axis a2ax = make_axis(0.0, 1.0, grid.step);
  const Axis a2pax = make_axis(prog.alpha1, 1.0, grid.step);
  const auto& kk = kernels::active_kernels();

  struct RowBest {
    double d2{k_neg_inf};
    double a2p{0.0};
  };
  std::vector<RowBest> rows(a2ax.total());
  parallel_for(a2ax.total(), [&](std::size_t r) {
    const double a2 = a2ax.value(r);
    kernels::Ic2RowArgs args = base;
    args.a2 = a2;
    const double t = std::max(a2 - prog.alpha1, 0.0);
    args.row_feasible =
        !prog.wide ||
        lambda <= prog.m1 - prog.dims.mu2 * a2 - prog.dims.delta2 * t + 1e-12;
    // Enforce a2 <= a2p by starting the sweep at the first level >= a2.
    std::size_t j0 = 0;
    if (a2 > a2pax.lo) {
      j0 = static_cast<std::size_t>(
          std::ceil((a2 - 1e-12 - a2pax.lo) / a2pax.step));
      j0 = std::min(j0, a2pax.count);
    }
    std::vector<double> out;
    out.reserve(a2pax.count - j0 + 1);
    std::vector<double> uniform(a2pax.count - j0);
    if (!uniform.empty()) {
      args.a2p_start = a2pax.lo;
      args.a2p_step = a2pax.step;
      args.i0 = j0;
      args.n = uniform.size();
      kk.ic2_row(args, uniform.data());
      out.insert(out.end(), uniform.begin(), uniform.end());
    }
    if (a2pax.extra) {
      kernels::Ic2RowArgs end = args;
      end.a2p_start = a2pax.hi;
      end.a2p_step = 0.0;
      end.i0 = 0;
      end.n = 1;
      double v = 0.0;
      kk.ic2_row(end, &v);
      out.push_back(v);
    }
    if (out.empty()) {
      rows[r] = {k_neg_inf, 0.0};
      return;
    }
    double bv = 0.0;
    const std::size_t bj = scan_best(out, &bv);
    const std::size_t uniform_n = uniform.size();
    rows[r] = {bv, bj < uniform_n ? a2pax.value(j0 + bj) : a2pax.hi};
  });

  GridMaxIc2 res;
  double bv = k_neg_inf;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].d2 >= bv) {
      bv = rows[r].d2;
      res.a2 = a2ax.value(r);
      res.a2p = rows[r].a2p;
    }
  }
  res.d2 = bv;
  res.feasible = bv > k_neg_inf;
  return res;
}

}  // namespace dofatlas
