#include "dofatlas/alloc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dofatlas {
namespace {

constexpr double k_range_tol = 1e-12;
constexpr double k_inf = std::numeric_limits<double>::infinity();

double pos(double v) { return v > 0.0 ? v : 0.0; }

void require_exponent(double v, double lo, double hi, const char* name) {
  if (v < lo - k_range_tol || v > hi + k_range_tol)
    throw ValidationError(std::string(name) + " out of range");
}

// Stream counts of the single-transmitter scheme (and of the wide-pair IC
// transmitter with n2 <-> n1 roles fixed by the caller).
struct BcCounts {
  int c1;     // receiver 1 zero-forced streams
  int c2zf;   // receiver 2 zero-forced streams
  int c2sub;  // receiver 2 estimated-range streams (== m1 - c1)
  int m1, m2, x;
};

BcCounts bc_counts(const AntennaConfig& c) {
  BcCounts k;
  k.m1 = m1_bc(c);
  k.m2 = m2_bc(c);
  k.x = x_bc(c);
  k.c1 = std::max(c.m() - c.n2, 0);
  k.c2zf = std::max(c.m() - c.n1, 0);
  k.c2sub = k.m2 - k.c2zf;
  return k;
}

}  // namespace

DofTuple bc_dof_tuple(const AntennaConfig& c, const CsitQuality& alpha,
                      double a1, double a2) {
  require_normalized(c, ChannelKind::bc, "bc_dof_tuple");
  validate(alpha);
  require_exponent(a1, 0.0, alpha.alpha2, "A1");
  require_exponent(a2, 0.0, 1.0, "A2");
  const BcCounts k = bc_counts(c);
  const double t = pos(a2 - alpha.alpha1);
  DofTuple d;
  d.dp1 = k.c1 * pos(a1 - t);
  d.dp2 = k.c2zf * a2 + k.c2sub * t;
  d.cap_rx1 = k.m1 - k.c1 * std::max(a1, t) - k.c2sub * t;
  d.cap_rx2 = k.m2 - d.dp2;
  const double cap = std::min(d.cap_rx1, d.cap_rx2);
  d.dc = pos(cap);
  d.clipped = cap < 0.0;
  return d;
}

PowerPolicy bc_optimal_exponents(const AntennaConfig& c,
                                 const CsitQuality& alpha) {
  require_normalized(c, ChannelKind::bc, "bc_optimal_exponents");
  validate(alpha);
  PowerPolicy p;
  p.a1 = alpha.alpha2;
  p.rho = 1.0;
  const int m = c.m(), n1 = c.n1, n2 = c.n2;
  if (m <= n2) {
    // No zero-forced streams toward receiver 1 exist; full power on
    // receiver 2's streams maximizes the sum.
    p.a2 = 1.0;
    p.a2p = 1.0;
    return p;
  }
  double a2 = (n2 - n1 + (m - n2) * alpha.alpha2) / (m - n1);
  if (n2 > n1)
    a2 = std::max(a2, 1.0 - (m - n2) * alpha.alpha1 / (n2 - n1));
  if (a2 < 0.0 || a2 > 1.0) {
    a2 = std::clamp(a2, 0.0, 1.0);
    p.clipped = true;
  }
  p.a2 = a2;
  p.a2p = std::max(a2, alpha.alpha1);
  return p;
}

double bc_st_fraction(const AntennaConfig& c, const CsitQuality& alpha) {
  require_normalized(c, ChannelKind::bc, "bc_st_fraction");
  validate(alpha);
  if (c.m() < c.n2)
    throw ValidationError(
        "bc_st_fraction: slot mixing needs M >= N2");
  if (phi_bc(c, alpha) < -k_range_tol)
    throw ValidationError(
        "bc_st_fraction: no quality shortfall to mix away (phi < 0)");
  const int m = c.m(), n1 = c.n1, n2 = c.n2;
  const double a1 = alpha.alpha1, a2 = alpha.alpha2;
  const double num = (m - n1) * (1.0 - a1) - (m - n2) * (1.0 - a2);
  const double den =
      (n2 - n1) * (1.0 - a1) + (m - n2) * (a2 - pos(a1 + a2 - 1.0));
  if (den <= 0.0) return 0.0;  // only at phi == 0 degeneracies
  return std::clamp(num / den, 0.0, 1.0);
}

DofTuple bc_st_dof_tuple_at(const AntennaConfig& c, const CsitQuality& alpha,
                            double rho) {
  require_normalized(c, ChannelKind::bc, "bc_st_dof_tuple");
  validate(alpha);
  if (c.m() < c.n2)
    throw ValidationError("bc_st_dof_tuple: slot mixing needs M >= N2");
  require_exponent(rho, 0.0, 1.0, "rho");
  const DofTuple full = bc_dof_tuple(c, alpha, alpha.alpha2, 1.0);
  const DofTuple matched =
      bc_dof_tuple(c, alpha, alpha.alpha2, alpha.alpha1);
  DofTuple d;
  d.dp1 = rho * full.dp1 + (1.0 - rho) * matched.dp1;
  d.dp2 = rho * full.dp2 + (1.0 - rho) * matched.dp2;
  d.cap_rx1 = rho * full.cap_rx1 + (1.0 - rho) * matched.cap_rx1;
  d.cap_rx2 = rho * full.cap_rx2 + (1.0 - rho) * matched.cap_rx2;
  const double cap = std::min(d.cap_rx1, d.cap_rx2);
  d.dc = pos(cap);
  d.clipped = cap < 0.0;
  return d;
}

DofTuple bc_st_dof_tuple(const AntennaConfig& c, const CsitQuality& alpha) {
  return bc_st_dof_tuple_at(c, alpha, bc_st_fraction(c, alpha));
}

Ic1Dof ic1_dof_tuple(const AntennaConfig& c, const CsitQuality& alpha,
                     double a1, double a2) {
  require_normalized(c, ChannelKind::ic, "ic1_dof_tuple");
  validate(alpha);
  if (c.m1 < c.n2)
    throw ValidationError("ic1_dof_tuple: needs the wide pair (M1 >= N2)");
  require_exponent(a1, 0.0, alpha.alpha2, "A1");
  require_exponent(a2, 0.0, 1.0, "A2");
  const int n1 = c.n1, n2 = c.n2;
  const int n2p = std::min(c.m2, n2);
  const int c1 = c.m1 - n2;
  const int c2zf = c.m2 - n1;
  const int c2sub = n1 + n2p - c.m2;
  const double t = pos(a2 - alpha.alpha1);
  Ic1Dof d;
  d.dp1 = c1 * pos(a1 - t);
  d.dp2 = c2zf * a2 + c2sub * t;
  d.r1_cap = n1 - c1 * std::max(a1, t) - (n1 + n2 - c.m1) * t;
  d.r2_c1_cap = n2 - d.dp2;
  d.r2_c2_cap = n2p - d.dp2;
  d.r2_sum_cap = n2 - d.dp2;
  auto split = [&](double cap) {
    DofTuple s;
    s.dp1 = d.dp1;
    s.dp2 = d.dp2;
    s.cap_rx1 = d.r1_cap;
    s.cap_rx2 = cap;
    const double v = std::min(d.r1_cap, cap);
    s.clipped = v < 0.0;
    return std::pair<DofTuple, double>(s, pos(v));
  };
  auto [s1, v1] = split(d.r2_c1_cap);
  s1.dc1 = v1;
  d.split_c1 = s1;
  auto [s2, v2] = split(d.r2_c2_cap);
  s2.dc2 = v2;
  d.split_c2 = s2;
  return d;
}

double ic1_st_fraction(const AntennaConfig& c, const CsitQuality& alpha) {
  require_normalized(c, ChannelKind::ic, "ic1_st_fraction");
  validate(alpha);
  if (c.m1 < c.n2 || c.m2 < c.n2)
    throw ValidationError(
        "ic1_st_fraction: slot mixing needs M1 >= N2 and M2 >= N2");
  if (phi_ic(c, alpha) < -k_range_tol)
    throw ValidationError(
        "ic1_st_fraction: no quality shortfall to mix away (phi < 0)");
  const int m1 = c.m1, m2 = c.m2, n1 = c.n1, n2 = c.n2;
  const double a1 = alpha.alpha1, a2 = alpha.alpha2;
  if ((m1 - m2) * a1 > (1.0 - a2) * (m1 - n2) + k_range_tol)
    throw ValidationError(
        "ic1_st_fraction: the first transmitter's array is too large for "
        "slot mixing at this quality pair");
  const double num =
      (m2 - n1) * (1.0 - a1) - (m1 - n2) * (1.0 - a2) + (m1 - m2);
  const double den =
      (n2 - n1) * (1.0 - a1) + (m1 - n2) * (a2 - pos(a1 + a2 - 1.0));
  if (den <= 0.0) return 0.0;
  return std::clamp(num / den, 0.0, 1.0);
}

DofTuple ic1_st_dof_tuple(const AntennaConfig& c, const CsitQuality& alpha) {
  const double rho = ic1_st_fraction(c, alpha);
  const Ic1Dof full = ic1_dof_tuple(c, alpha, alpha.alpha2, 1.0);
  const Ic1Dof matched =
      ic1_dof_tuple(c, alpha, alpha.alpha2, alpha.alpha1);
  DofTuple d;
  d.dp1 = rho * full.dp1 + (1.0 - rho) * matched.dp1;
  d.dp2 = rho * full.dp2 + (1.0 - rho) * matched.dp2;
  d.cap_rx1 = rho * full.r1_cap + (1.0 - rho) * matched.r1_cap;
  d.cap_rx2 = rho * full.r2_sum_cap + (1.0 - rho) * matched.r2_sum_cap;
  const double cap = std::min(d.cap_rx1, d.cap_rx2);
  d.dc = pos(cap);  // aggregate of both common parts
  d.clipped = cap < 0.0;
  return d;
}

PowerPolicy ic1_default_policy(const CsitQuality& alpha) {
  validate(alpha);
  PowerPolicy p;
  p.a1 = std::min(alpha.alpha2, 1.0 - alpha.alpha1);
  p.a2 = 1.0;
  p.a2p = 1.0;
  return p;
}

Ic2Program ic2_program(const AntennaConfig& c, const CsitQuality& alpha) {
  require_normalized(c, ChannelKind::ic, "ic2_program");
  validate(alpha);
  if (c.m1 > c.n2)
    throw ValidationError("ic2_program: needs the narrow pair (M1 <= N2)");
  Ic2Program p;
  p.dims = derived_dims(c);
  p.m1 = c.m1;
  p.n2 = c.n2;
  p.wide = c.m2 > c.n2;
  p.alpha1 = alpha.alpha1;
  return p;
}

bool ic2_lambda_ok(const Ic2Program& p, double a2, double a2p,
                   double lambda) {
  const DerivedDims& d = p.dims;
  const double t = pos(a2 - p.alpha1);
  const double u = a2p - p.alpha1;
  const double r1 = d.n1p - d.xi * u - (d.n1p - d.xi) * t;
  if (lambda > r1 + k_range_tol) return false;
  if (p.wide) {
    const double r2 = p.m1 - d.mu2 * a2 - d.delta2 * t;
    if (lambda > r2 + k_range_tol) return false;
  }
  return true;
}

double ic2_objective(const Ic2Program& p, double a2, double a2p,
                     double lambda) {
  const DerivedDims& d = p.dims;
  const double t = pos(a2 - p.alpha1);
  const double u = a2p - p.alpha1;
  const double alt = d.n1p - lambda + (d.delta2 - d.n1p + d.xi) * t +
                     d.mu2 * a2 + d.mu1 * a2p + (d.delta1 - d.xi) * u +
                     d.tau;
  if (!p.wide) return alt;
  return std::min(static_cast<double>(p.n2) - lambda, alt);
}

Ic2Caps ic2_dof_caps(const AntennaConfig& c, const CsitQuality& alpha,
                     double a2, double a2p) {
  require_normalized(c, ChannelKind::ic, "ic2_dof_caps");
  validate(alpha);
  if (c.m1 > c.n2)
    throw ValidationError("ic2_dof_caps: needs the narrow pair (M1 <= N2)");
  require_exponent(a2p, alpha.alpha1, 1.0, "A2'");
  require_exponent(a2, 0.0, a2p, "A2");
  const DerivedDims d = derived_dims(c);
  const double t = pos(a2 - alpha.alpha1);
  const double u = a2p - alpha.alpha1;
  Ic2Caps caps;
  caps.r1_cap = d.n1p - d.xi * u - (d.n1p - d.xi) * t;
  caps.r2_c1_cap = c.m1 - d.mu2 * a2 - d.delta2 * t;
  caps.dp2 = d.mu2 * a2 + d.delta2 * t + d.mu1 * a2p + d.delta1 * u + d.tau;
  caps.r2_c2_cap = d.n2p - caps.dp2;
  caps.r2_sum_cap = c.n2 - caps.dp2;
  return caps;
}

std::string to_string(Ic2Branch branch) {
  switch (branch) {
    case Ic2Branch::A: return "A";
    case Ic2Branch::B: return "B";
    case Ic2Branch::C: return "C";
    case Ic2Branch::D: return "D";
    case Ic2Branch::E: return "E";
    case Ic2Branch::F: return "F";
  }
  return "?";
}

namespace {

struct Ic2Breaks {
  double t1, t2, t3, t4, t5;
};

Ic2Breaks ic2_breaks(const DerivedDims& d, int m1, double a1) {
  Ic2Breaks b;
  b.t1 = d.delta2 * a1;
  b.t2 = m1 - d.n1p + d.xi > 0
             ? (d.mu2 * d.n1p + d.delta2 * d.xi) * a1 / (m1 - d.n1p + d.xi)
             : k_inf;
  b.t3 = m1 > d.n1p ? d.n1p * d.mu2 * a1 / (m1 - d.n1p) : k_inf;
  b.t4 = m1 - d.mu2 * a1;
  b.t5 = d.n1p - d.xi * (1.0 - a1);
  return b;
}

}  // namespace

Ic2Solution ic2_optimal(const AntennaConfig& c, const CsitQuality& alpha,
                        double lambda) {
  const Ic2Program p = ic2_program(c, alpha);
  const DerivedDims& d = p.dims;
  if (lambda < -k_range_tol || lambda > d.n1p + k_range_tol)
    throw ValidationError("ic2_optimal: lambda must lie in [0, N1']");
  lambda = std::clamp(lambda, 0.0, static_cast<double>(d.n1p));
  const double a1 = alpha.alpha1;
  Ic2Solution s;
  s.policy.a1 = 0.0;
  s.policy.rho = 1.0;
  double a2 = 1.0, a2p = 1.0;
  if (!p.wide) {
    if (lambda <= d.n1p * a1 + k_range_tol) {
      s.branch = Ic2Branch::F;
    } else {
      s.branch = Ic2Branch::C;
      a2 = a2p = (d.n1p - lambda + d.n1p * a1) / d.n1p;
    }
  } else {
    const Ic2Breaks b = ic2_breaks(d, p.m1, a1);
    const auto inside = [lambda](double lo, double hi) {
      return lambda >= lo - k_range_tol && lambda <= hi + k_range_tol;
    };
    if (inside(0.0, b.t1)) {
      s.branch = Ic2Branch::F;
    } else if (inside(b.t1, std::min(b.t2, b.t4))) {
      s.branch = Ic2Branch::E;
      a2 = (p.m1 - lambda + d.delta2 * a1) / p.m1;
    } else if (d.xi > 0 && inside(b.t2, std::min(b.t3, b.t4))) {
      s.branch = Ic2Branch::D;
      a2 = (p.m1 - lambda + d.delta2 * a1) / p.m1;
      a2p = 1.0 - lambda * (p.m1 - d.n1p + d.xi) / (p.m1 * d.xi) +
            a1 * (d.mu2 * d.n1p + d.delta2 * d.xi) / (p.m1 * d.xi);
    } else if (inside(b.t3, b.t4)) {
      s.branch = Ic2Branch::C;
      a2 = a2p = (d.n1p - lambda + d.n1p * a1) / d.n1p;
    } else if (inside(b.t4, b.t5)) {
      s.branch = Ic2Branch::B;
      a2 = (p.m1 - lambda) / d.mu2;
    } else if (d.xi > 0 &&
               inside(std::max(b.t4, b.t5), static_cast<double>(d.n1p))) {
      s.branch = Ic2Branch::A;
      a2 = (p.m1 - lambda) / d.mu2;
      a2p = a1 + (d.n1p - lambda) / d.xi;
    } else {
      throw std::logic_error("ic2_optimal: breakpoint scan found no branch");
    }
  }
  s.policy.a2 = a2;
  s.policy.a2p = a2p;
  s.d2 = ic2_objective(p, a2, a2p, lambda);
  return s;
}

bool ic2_branch_valid(const AntennaConfig& c, const CsitQuality& alpha,
                      Ic2Branch branch) {
  const Ic2Program p = ic2_program(c, alpha);
  const DerivedDims& d = p.dims;
  const double a1 = alpha.alpha1;
  if (!p.wide) {
    if (branch == Ic2Branch::F) return true;
    if (branch == Ic2Branch::C) return a1 < 1.0 - k_range_tol;
    return false;
  }
  const Ic2Breaks b = ic2_breaks(d, p.m1, a1);
  const double n1p = d.n1p;
  switch (branch) {
    case Ic2Branch::F:
      return true;
    case Ic2Branch::E:
      return std::min({b.t2, b.t4, n1p}) > b.t1 + k_range_tol;
    case Ic2Branch::D:
      return d.xi > 0 && std::min({b.t3, b.t4, n1p}) > b.t2 + k_range_tol;
    case Ic2Branch::C:
      return std::min(b.t4, n1p) > b.t3 + k_range_tol;
    case Ic2Branch::B:
      return std::min(b.t5, n1p) > b.t4 + k_range_tol;
    case Ic2Branch::A:
      return d.xi > 0 && n1p > std::max(b.t4, b.t5) + k_range_tol;
  }
  return false;
}

LinearConstraint ic2_constraint_line(const AntennaConfig& c,
                                     const CsitQuality& alpha,
                                     Ic2Branch branch) {
  if (!ic2_branch_valid(c, alpha, branch))
    throw ValidationError(
        "ic2_constraint_line: branch never occurs for this config/alpha");
  const bool narrow_sum = c.n2 >= c.m1 + c.n1;
  ConstraintLabel label = ConstraintLabel::L1;
  switch (branch) {
    case Ic2Branch::B:
    case Ic2Branch::E:
    case Ic2Branch::F:
      label = ConstraintLabel::L1;
      break;
    case Ic2Branch::C:
      label = ConstraintLabel::L2;
      break;
    case Ic2Branch::D:
      label = narrow_sum ? ConstraintLabel::L3 : ConstraintLabel::L4;
      break;
    case Ic2Branch::A:
      label = narrow_sum ? ConstraintLabel::L3 : ConstraintLabel::L5;
      break;
  }
  const DofRegion region = ic_region(c, alpha);
  for (const auto& row : region.constraints)
    if (row.label == label) return row;
  throw std::logic_error("ic2_constraint_line: label missing from region");
}

}  // namespace dofatlas
