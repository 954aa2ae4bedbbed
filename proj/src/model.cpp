#include "dofatlas/model.hpp"

#include <algorithm>

namespace dofatlas {
namespace {

void require_counts(const AntennaConfig& c) {
  const bool ok = c.kind == ChannelKind::bc
                      ? (c.m1 >= 1 && c.n1 >= 1 && c.n2 >= 1)
                      : (c.m1 >= 1 && c.m2 >= 1 && c.n1 >= 1 && c.n2 >= 1);
  if (!ok) throw ValidationError("antenna counts must be positive integers");
}

}  // namespace

int AntennaConfig::m() const { return m1; }

AntennaConfig bc_config(int m, int n1, int n2) {
  AntennaConfig c;
  c.kind = ChannelKind::bc;
  c.m1 = m;
  c.m2 = 0;
  c.n1 = n1;
  c.n2 = n2;
  require_counts(c);
  return c;
}

AntennaConfig ic_config(int m1, int m2, int n1, int n2) {
  AntennaConfig c;
  c.kind = ChannelKind::ic;
  c.m1 = m1;
  c.m2 = m2;
  c.n1 = n1;
  c.n2 = n2;
  require_counts(c);
  return c;
}

void validate(const CsitQuality& alpha) {
  const bool ok = alpha.alpha1 >= 0.0 && alpha.alpha1 <= 1.0 &&
                  alpha.alpha2 >= 0.0 && alpha.alpha2 <= 1.0;
  if (!ok) throw ValidationError("quality exponents must lie in [0,1]");
}

AntennaConfig normalize(const AntennaConfig& config) {
  require_counts(config);
  AntennaConfig c = config;
  if (c.n1 > c.n2) {
    std::swap(c.n1, c.n2);
    if (c.kind == ChannelKind::ic) std::swap(c.m1, c.m2);
    c.swapped = !c.swapped;
  }
  if (c.kind == ChannelKind::bc) {
    c.m1 = std::min(c.m1, c.n1 + c.n2);
  } else {
    // Extra transmit antennas beyond the total receive dimension and extra
    // receive antennas beyond the total transmit dimension carry no signal
    // dimensions; clamp until stable. Clamping never reorders n1 <= n2.
    for (;;) {
      const int m1 = std::min(c.m1, c.n1 + c.n2);
      const int m2 = std::min(c.m2, c.n1 + c.n2);
      const int n1 = std::min(c.n1, c.m1 + c.m2);
      const int n2 = std::min(c.n2, c.m1 + c.m2);
      if (m1 == c.m1 && m2 == c.m2 && n1 == c.n1 && n2 == c.n2) break;
      c.m1 = m1;
      c.m2 = m2;
      c.n1 = n1;
      c.n2 = n2;
    }
    if (c.m2 < c.n1)
      throw ValidationError(
          "unsupported interference configuration: the transmitter paired "
          "with the larger receiver must have at least as many antennas as "
          "the smaller receiver (M2 >= N1 after normalization)");
  }
  c.normalized = true;
  return c;
}

void require_normalized(const AntennaConfig& c, ChannelKind kind,
                        const char* op) {
  if (c.kind != kind)
    throw ValidationError(std::string(op) + ": wrong channel kind");
  if (!c.normalized)
    throw ValidationError(std::string(op) + ": config must be normalized");
}

int x_bc(const AntennaConfig& c) { return std::min(c.m(), c.n1 + c.n2); }
int m1_bc(const AntennaConfig& c) { return std::min(c.m(), c.n1); }
int m2_bc(const AntennaConfig& c) { return std::min(c.m(), c.n2); }
int x1_ic(const AntennaConfig& c) { return std::min(c.m1, c.n1 + c.n2); }
int x2_ic(const AntennaConfig& c) { return std::min(c.m2, c.n1 + c.n2); }

double phi_bc(const AntennaConfig& c, const CsitQuality& alpha) {
  require_normalized(c, ChannelKind::bc, "phi_bc");
  validate(alpha);
  const int x = x_bc(c), m1 = m1_bc(c), m2 = m2_bc(c);
  return (m2 - m1) + (x - m2) * alpha.alpha2 - (x - m1) * alpha.alpha1;
}

double phi_ic(const AntennaConfig& c, const CsitQuality& alpha) {
  require_normalized(c, ChannelKind::ic, "phi_ic");
  validate(alpha);
  const int x1 = x1_ic(c), x2 = x2_ic(c);
  return (c.n2 - c.n1) + (x1 - c.n2) * alpha.alpha2 -
         (x2 - c.n1) * alpha.alpha1;
}

double alpha0_bc(const AntennaConfig& c, const CsitQuality& alpha) {
  const double phi = phi_bc(c, alpha);
  const double a1 = alpha.alpha1, a2 = alpha.alpha2;
  const int x = x_bc(c), m1 = m1_bc(c), m2 = m2_bc(c);
  if (phi <= 0.0) return a2;
  // phi > 0 forces x > m1, so the division below is safe.
  if (a1 >= 1.0 - a2) return a2 - phi / (x - m1);
  // Here a1 < 1 - a2 <= 1, and phi > 0 rules out m1 = m2 with x = m2, so the
  // denominator is strictly positive.
  return a1 * a2 * (x - m2) / ((m2 - m1) * (1.0 - a1) + (x - m2) * a2);
}

double alpha0_ic(const AntennaConfig& c, const CsitQuality& alpha) {
  require_normalized(c, ChannelKind::ic, "alpha0_ic");
  validate(alpha);
  const double a1 = alpha.alpha1, a2 = alpha.alpha2;
  const int x1 = x1_ic(c), x2 = x2_ic(c), n1 = c.n1, n2 = c.n2;
  if (c.m2 <= n2) return 0.0;
  const double phi = phi_ic(c, alpha);
  if (phi <= 0.0) return a2;
  if (x1 > n2 && (x1 - x2) * a1 >= (1.0 - a2) * (x1 - n2))
    return (x2 - n2) * a1 / (x1 - n2);
  // phi > 0 with m2 > n2 forces x1 > n1.
  if (a1 >= 1.0 - a2) return a2 - phi / (x1 - n1);
  // phi > 0 rules out n1 = n2 with x1 = n2.
  return a1 * a2 * (x2 - n2) / ((n2 - n1) * (1.0 - a1) + (x1 - n2) * a2);
}

DerivedDims derived_dims(const AntennaConfig& c) {
  require_normalized(c, ChannelKind::ic, "derived_dims");
  if (c.m1 > c.n2)
    throw ValidationError(
        "derived_dims: stream split is defined only for M1 <= N2");
  DerivedDims d;
  d.n1p = std::min(c.m1, c.n1);
  d.n2p = std::min(c.m2, c.n2);
  d.n1pp = std::max(c.m1, c.n1);
  d.tau = c.n1 - d.n1p;
  d.mu1 = std::min(c.n2 - c.m1 - d.tau, c.m2 - c.n1);
  d.mu2 = std::min(d.n2p - d.tau, c.m2 - c.n1) - d.mu1;
  d.delta1 = c.n2 - c.m1 - d.tau - d.mu1;
  d.delta2 = d.n2p - c.n2 + c.m1 - d.mu2;
  d.xi = std::min(d.n1p, d.mu1 + d.delta1);
  return d;
}

int mu2_region(const AntennaConfig& c) {
  require_normalized(c, ChannelKind::ic, "mu2_region");
  const DerivedDims d = derived_dims(c);
  return std::min(c.m1, x2_ic(c) - c.n2 + c.m1 - d.n1p);
}

std::string to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::bc_phi_nonpos: return "BC_PhiNonPos";
    case RegimeTag::bc_phi_pos: return "BC_PhiPos";
    case RegimeTag::ic_i1: return "IC_I1";
    case RegimeTag::ic_i2_phi_nonpos: return "IC_I2_PhiNonPos";
    case RegimeTag::ic_i2_phi_pos: return "IC_I2_PhiPos";
    case RegimeTag::ic_ii1: return "IC_II1";
    case RegimeTag::ic_ii2a_low: return "IC_II2a_low";
    case RegimeTag::ic_ii2a_high: return "IC_II2a_high";
    case RegimeTag::ic_ii2b_low: return "IC_II2b_low";
    case RegimeTag::ic_ii2b_mid: return "IC_II2b_mid";
    case RegimeTag::ic_ii2b_high: return "IC_II2b_high";
  }
  return "?";
}

Regime classify(const AntennaConfig& c, const CsitQuality& alpha) {
  validate(alpha);
  Regime r;
  if (c.kind == ChannelKind::bc) {
    require_normalized(c, ChannelKind::bc, "classify");
    r.tag = phi_bc(c, alpha) <= 0.0 ? RegimeTag::bc_phi_nonpos
                                    : RegimeTag::bc_phi_pos;
    return r;
  }
  require_normalized(c, ChannelKind::ic, "classify");
  if (c.m1 >= c.n2) {
    if (c.m2 <= c.n2)
      r.tag = RegimeTag::ic_i1;
    else
      r.tag = phi_ic(c, alpha) <= 0.0 ? RegimeTag::ic_i2_phi_nonpos
                                      : RegimeTag::ic_i2_phi_pos;
    return r;
  }
  if (c.m2 <= c.n2) {
    r.tag = RegimeTag::ic_ii1;
    return r;
  }
  const DerivedDims d = derived_dims(c);
  const bool narrow = c.m1 + c.n1 < c.n2;  // ties go to the wide family
  r.thr_low = c.m1 > c.n1 ? static_cast<double>(c.m1 - d.n1p) / d.mu2 : 0.0;
  r.thr_high = static_cast<double>(c.n2 - c.n1) / (d.mu2 + c.n2 - d.n1pp);
  if (narrow) {
    r.tag = (c.m1 > c.n1 && alpha.alpha1 <= r.thr_low)
                ? RegimeTag::ic_ii2a_low
                : RegimeTag::ic_ii2a_high;
  } else if (c.m1 > c.n1 && alpha.alpha1 <= r.thr_low) {
    r.tag = RegimeTag::ic_ii2b_low;
  } else {
    r.tag = alpha.alpha1 <= r.thr_high ? RegimeTag::ic_ii2b_mid
                                       : RegimeTag::ic_ii2b_high;
  }
  return r;
}

}  // namespace dofatlas
