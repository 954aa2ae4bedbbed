#include "dofatlas/region.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "dofatlas/util.hpp"

namespace dofatlas {
namespace {

// Intersections with |det| below this (relative to row norms) are parallel.
constexpr double k_det_tol = 1e-12;
// Corner feasibility / tightness tolerance.
constexpr double k_point_tol = 1e-9;
// Area change below this does not count as enlarging the region.
constexpr double k_area_tol = 1e-12;

struct Row {
  double a, b, r;
};

Row le_form(const LinearConstraint& c) {
  if (c.label == ConstraintLabel::Axis1) return {-1.0, 0.0, 0.0};
  if (c.label == ConstraintLabel::Axis2) return {0.0, -1.0, 0.0};
  return {c.c1, c.c2, c.rhs};
}

struct Pt {
  double x, y;
};

double cross(const Pt& o, const Pt& a, const Pt& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Corner candidates: every pairwise intersection that satisfies all rows.
std::vector<Pt> feasible_intersections(const std::vector<Row>& rows) {
  std::vector<Pt> pts;
  const auto feasible = [&rows](double x, double y) {
    for (const Row& k : rows)
      if (k.a * x + k.b * y > k.r + k_point_tol) return false;
    return true;
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const Row& p = rows[i];
      const Row& q = rows[j];
      const double det = p.a * q.b - q.a * p.b;
      const double scale =
          std::max(1.0, std::hypot(p.a, p.b) * std::hypot(q.a, q.b));
      if (std::fabs(det) <= k_det_tol * scale) continue;
      const double x = (p.r * q.b - q.r * p.b) / det;
      const double y = (p.a * q.r - q.a * p.r) / det;
      if (!feasible(x, y)) continue;
      bool dup = false;
      for (const Pt& s : pts)
        if (std::fabs(s.x - x) <= k_point_tol &&
            std::fabs(s.y - y) <= k_point_tol) {
          dup = true;
          break;
        }
      if (!dup) pts.push_back({x, y});
    }
  }
  return pts;
}

// Andrew monotone chain; keeps strict corners only, so candidate points in
// the interior or mid-edge (crossings of slack constraint lines) drop out.
std::vector<Pt> convex_hull(std::vector<Pt> pts) {
  if (pts.size() <= 2) return pts;
  std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  const auto turn_tol = [](const Pt& o, const Pt& a, const Pt& b) {
    return k_point_tol *
           std::max(1.0, std::hypot(a.x - o.x, a.y - o.y) *
                             std::hypot(b.x - a.x, b.y - a.y));
  };
  std::vector<Pt> h(2 * pts.size());
  std::size_t k = 0;
  for (const Pt& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= turn_tol(h[k - 2], h[k - 1], p))
      --k;
    h[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
    while (k >= lower &&
           cross(h[k - 2], h[k - 1], *it) <= turn_tol(h[k - 2], h[k - 1], *it))
      --k;
    h[k++] = *it;
  }
  h.resize(k - 1);  // counter-clockwise, first point repeated at the end
  return h;
}

std::vector<Pt> hull_of(const std::vector<LinearConstraint>& constraints) {
  std::vector<Row> rows;
  rows.reserve(constraints.size());
  bool caps_d1 = false, caps_d2 = false;
  for (const auto& c : constraints) {
    const Row r = le_form(c);
    rows.push_back(r);
    if (r.a > 0.0 && r.b >= 0.0) caps_d1 = true;
    if (r.b > 0.0 && r.a >= 0.0) caps_d2 = true;
  }
  if (!caps_d1 || !caps_d2)
    throw ValidationError("corner_points: unbounded constraint set");
  return convex_hull(feasible_intersections(rows));
}

double polygon_area(const std::vector<Pt>& hull) {
  double twice = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Pt& p = hull[i];
    const Pt& q = hull[(i + 1) % hull.size()];
    twice += p.x * q.y - q.x * p.y;
  }
  return 0.5 * std::fabs(twice);
}

void finalize(DofRegion& region) {
  region.vertices = corner_points(region.constraints);
  const double base = region_area(region.constraints);
  for (std::size_t i = 0; i < region.constraints.size(); ++i) {
    LinearConstraint& c = region.constraints[i];
    if (c.label == ConstraintLabel::Axis1 ||
        c.label == ConstraintLabel::Axis2) {
      c.active = true;
      continue;
    }
    std::vector<LinearConstraint> rest;
    rest.reserve(region.constraints.size() - 1);
    for (std::size_t j = 0; j < region.constraints.size(); ++j)
      if (j != i) rest.push_back(region.constraints[j]);
    c.active = region_area(rest) > base + k_area_tol;
  }
}

void push_axes(std::vector<LinearConstraint>& cs) {
  cs.push_back({ConstraintLabel::Axis1, 1.0, 0.0, 0.0, true});
  cs.push_back({ConstraintLabel::Axis2, 0.0, 1.0, 0.0, true});
}

LinearConstraint make(ConstraintLabel label, double c1, double c2,
                      double rhs) {
  return {label, c1, c2, rhs, true};
}

}  // namespace

std::string to_string(ConstraintLabel label) {
  switch (label) {
    case ConstraintLabel::L0: return "L0";
    case ConstraintLabel::L0p: return "L0p";
    case ConstraintLabel::L1: return "L1";
    case ConstraintLabel::L2: return "L2";
    case ConstraintLabel::L3: return "L3";
    case ConstraintLabel::L4: return "L4";
    case ConstraintLabel::L5: return "L5";
    case ConstraintLabel::Axis1: return "Axis1";
    case ConstraintLabel::Axis2: return "Axis2";
  }
  return "?";
}

std::vector<Vertex> corner_points(
    const std::vector<LinearConstraint>& constraints) {
  const std::vector<Pt> hull = hull_of(constraints);
  // Start the walk at the origin corner.
  std::size_t start = 0;
  double best = 1e300;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const double d = std::hypot(hull[i].x, hull[i].y);
    if (d < best) {
      best = d;
      start = i;
    }
  }
  std::vector<Vertex> out;
  out.reserve(hull.size());
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Pt& p = hull[(start + i) % hull.size()];
    Vertex v;
    v.d1 = p.x + 0.0;  // drops the sign of -0 from intersection arithmetic
    v.d2 = p.y + 0.0;
    for (const auto& c : constraints) {
      const Row r = le_form(c);
      if (std::fabs(r.a * p.x + r.b * p.y - r.r) <= k_point_tol)
        v.labels.push_back(c.label);
    }
    out.push_back(std::move(v));
  }
  return out;
}

double region_area(const std::vector<LinearConstraint>& constraints) {
  return polygon_area(hull_of(constraints));
}

DofRegion bc_region(const AntennaConfig& c, const CsitQuality& alpha) {
  require_normalized(c, ChannelKind::bc, "bc_region");
  validate(alpha);
  const int x = x_bc(c), m1 = m1_bc(c), m2 = m2_bc(c);
  const double a0 = alpha0_bc(c, alpha);
  DofRegion region;
  region.provenance = RegionProvenance::achievable_bc;
  auto& cs = region.constraints;
  cs.push_back(make(ConstraintLabel::L0, 1.0, 0.0, m1));
  cs.push_back(make(ConstraintLabel::L0p, 0.0, 1.0, m2));
  cs.push_back(make(ConstraintLabel::L1, 1.0, 1.0, m2 + (x - m2) * a0));
  cs.push_back(make(ConstraintLabel::L2, 1.0 / m1, 1.0 / m2,
                    1.0 + (x - m1) * alpha.alpha1 / m2));
  push_axes(cs);
  finalize(region);
  return region;
}

DofRegion ic_region(const AntennaConfig& c, const CsitQuality& alpha) {
  require_normalized(c, ChannelKind::ic, "ic_region");
  validate(alpha);
  const double a1 = alpha.alpha1;
  DofRegion region;
  region.provenance = RegionProvenance::achievable_ic;
  auto& cs = region.constraints;
  if (c.m1 >= c.n2) {
    const int x1 = x1_ic(c), x2 = x2_ic(c);
    const int n2p = std::min(c.m2, c.n2);
    const double a0 = alpha0_ic(c, alpha);
    cs.push_back(make(ConstraintLabel::L0, 1.0, 0.0, c.n1));
    cs.push_back(make(ConstraintLabel::L0p, 0.0, 1.0, n2p));
    cs.push_back(make(ConstraintLabel::L1, 1.0, 1.0, n2p + (x1 - c.n2) * a0));
    cs.push_back(make(ConstraintLabel::L2, 1.0 / c.n1, 1.0 / n2p,
                      1.0 + (x2 - c.n1) * a1 / n2p));
  } else {
    const DerivedDims d = derived_dims(c);
    const int x2 = x2_ic(c);
    cs.push_back(make(ConstraintLabel::L0, 1.0, 0.0, d.n1p));
    cs.push_back(make(ConstraintLabel::L0p, 0.0, 1.0, d.n2p));
    cs.push_back(make(ConstraintLabel::L1, 1.0, 1.0, d.n2p));
    {
      const double den = d.n2p - c.n1 + d.n1p;
      cs.push_back(make(ConstraintLabel::L2, 1.0 / d.n1p, 1.0 / den,
                        (d.n2p + (x2 - c.n1) * a1) / den));
    }
    if (c.m2 >= c.n2) {
      // Both families are emitted at the shared boundary N1 + M1 = N2,
      // where their lines coincide.
      if (c.m1 + c.n1 <= c.n2) {
        const double den = c.n2 - d.n1pp + d.n1p;
        cs.push_back(make(ConstraintLabel::L3, 1.0 / d.n1p, 1.0 / den,
                          (c.n2 + (c.n2 - d.n1pp) * a1) / den));
      }
      if (c.m1 + c.n1 >= c.n2) {
        const double den = c.n2 - c.n1 + c.m1;
        const double mu2r = mu2_region(c);
        cs.push_back(make(
            ConstraintLabel::L4, 1.0 / c.m1, 1.0 / den,
            c.n2 / den +
                ((c.n2 - d.n1pp) / den +
                 mu2r * (c.m1 + c.n1 - c.n2) / (c.m1 * den)) *
                    a1));
        cs.push_back(make(ConstraintLabel::L5, 1.0, 0.5,
                          (c.m1 + c.n1 + (c.n2 - d.n1pp) * a1) / 2.0));
      }
    }
  }
  push_axes(cs);
  finalize(region);
  return region;
}

DofRegion outer_region(const AntennaConfig& c, const CsitQuality& alpha) {
  validate(alpha);
  int m = 0;
  if (c.kind == ChannelKind::bc) {
    require_normalized(c, ChannelKind::bc, "outer_region");
    m = c.m();
  } else {
    require_normalized(c, ChannelKind::ic, "outer_region");
    // Full transmitter cooperation turns the pair into one array.
    m = c.m1 + c.m2;
  }
  const int x = std::min(m, c.n1 + c.n2);
  const int m1 = std::min(m, c.n1), m2 = std::min(m, c.n2);
  DofRegion region;
  region.provenance = RegionProvenance::outer;
  auto& cs = region.constraints;
  cs.push_back(make(ConstraintLabel::L0, 1.0, 0.0, m1));
  cs.push_back(make(ConstraintLabel::L0p, 0.0, 1.0, m2));
  cs.push_back(
      make(ConstraintLabel::L1, 1.0, 1.0, m2 + (x - m2) * alpha.alpha2));
  cs.push_back(make(ConstraintLabel::L2, 1.0 / m1, 1.0 / m2,
                    1.0 + (x - m1) * alpha.alpha1 / m2));
  push_axes(cs);
  finalize(region);
  return region;
}

RegionVerdict verdict(const AntennaConfig& c, const CsitQuality& alpha) {
  validate(alpha);
  RegionVerdict v;
  if (c.kind == ChannelKind::bc) {
    require_normalized(c, ChannelKind::bc, "verdict");
    if (phi_bc(c, alpha) <= 0.0) {
      v.optimal = "Yes";
      v.rationale =
          "the weaker receiver's quality already supports the best sum line; "
          "the achievable and upper-bound sum constraints coincide";
    } else if (c.m() <= c.n2) {
      v.optimal = "Yes";
      v.rationale =
          "the transmit array is no larger than the stronger receiver, so "
          "the sum is pinned at the transmit dimension";
    } else {
      v.optimal = "No/Unknown";
      v.rationale =
          "a quality shortfall remains at the weaker receiver and the known "
          "upper bound does not meet the achievable sum line";
    }
    return v;
  }
  require_normalized(c, ChannelKind::ic, "verdict");
  const Regime r = classify(c, alpha);
  switch (r.tag) {
    case RegimeTag::ic_i1:
      v.optimal = "Yes";
      v.rationale =
          "both arrays dominate their cross links; the region matches the "
          "known optimum, which does not improve with transmit-side quality";
      break;
    case RegimeTag::ic_i2_phi_nonpos:
      v.optimal = "Yes";
      v.rationale =
          "the weaker receiver's quality already supports the best sum line "
          "for this shape";
      break;
    case RegimeTag::ic_ii1:
      if (c.n1 <= c.m1) {
        v.optimal = "Yes";
        v.rationale =
            "with N1 <= M1 <= N2 the region matches the known optimum, "
            "which does not improve with transmit-side quality";
      } else {
        v.optimal = "No/Unknown";
        v.rationale = "no matching upper bound is known when M1 < N1";
      }
      break;
    default:
      v.optimal = "No/Unknown";
      v.rationale =
          "no matching upper bound is known in this quality range";
      break;
  }
  return v;
}

DofRegion reference_no_csit(const AntennaConfig& c) {
  DofRegion region;
  region.provenance = RegionProvenance::reference;
  auto& cs = region.constraints;
  if (c.kind == ChannelKind::bc) {
    require_normalized(c, ChannelKind::bc, "reference_no_csit");
    const int m1 = m1_bc(c), m2 = m2_bc(c);
    cs.push_back(make(ConstraintLabel::L0, 1.0, 0.0, m1));
    cs.push_back(make(ConstraintLabel::L0p, 0.0, 1.0, m2));
    cs.push_back(make(ConstraintLabel::L2, 1.0 / m1, 1.0 / m2, 1.0));
  } else {
    require_normalized(c, ChannelKind::ic, "reference_no_csit");
    const int n2p = std::min(c.m2, c.n2);
    if (c.m1 >= c.n2) {
      cs.push_back(make(ConstraintLabel::L0, 1.0, 0.0, c.n1));
      cs.push_back(make(ConstraintLabel::L0p, 0.0, 1.0, n2p));
      cs.push_back(make(ConstraintLabel::L2, 1.0 / c.n1, 1.0 / n2p, 1.0));
    } else {
      const DerivedDims d = derived_dims(c);
      const double den = d.n2p - c.n1 + d.n1p;
      cs.push_back(make(ConstraintLabel::L0, 1.0, 0.0, d.n1p));
      cs.push_back(make(ConstraintLabel::L0p, 0.0, 1.0, d.n2p));
      cs.push_back(
          make(ConstraintLabel::L2, 1.0 / d.n1p, 1.0 / den, d.n2p / den));
    }
  }
  push_axes(cs);
  finalize(region);
  return region;
}

DofRegion reference_perfect_csit_bc(const AntennaConfig& c) {
  require_normalized(c, ChannelKind::bc, "reference_perfect_csit_bc");
  DofRegion region;
  region.provenance = RegionProvenance::reference;
  auto& cs = region.constraints;
  cs.push_back(make(ConstraintLabel::L0, 1.0, 0.0, m1_bc(c)));
  cs.push_back(make(ConstraintLabel::L0p, 0.0, 1.0, m2_bc(c)));
  cs.push_back(make(ConstraintLabel::L1, 1.0, 1.0, x_bc(c)));
  push_axes(cs);
  finalize(region);
  return region;
}

bool region_contained(const DofRegion& inner, const DofRegion& outer,
                      double tol) {
  for (const Vertex& v : inner.vertices) {
    for (const auto& c : outer.constraints) {
      const Row r = le_form(c);
      if (r.a * v.d1 + r.b * v.d2 > r.r + tol) return false;
    }
  }
  return true;
}

std::string region_to_json(const DofRegion& region) {
  std::ostringstream os;
  os << "{\"constraints\":[";
  for (std::size_t i = 0; i < region.constraints.size(); ++i) {
    const auto& c = region.constraints[i];
    if (i) os << ",";
    os << "{\"label\":\"" << to_string(c.label) << "\",\"c1\":"
       << format_g12(c.c1) << ",\"c2\":" << format_g12(c.c2)
       << ",\"rhs\":" << format_g12(c.rhs) << ",\"active\":"
       << (c.active ? "true" : "false") << "}";
  }
  os << "],\"vertices\":[";
  for (std::size_t i = 0; i < region.vertices.size(); ++i) {
    const auto& v = region.vertices[i];
    if (i) os << ",";
    os << "{\"d1\":" << format_g12(v.d1) << ",\"d2\":" << format_g12(v.d2)
       << ",\"labels\":[";
    for (std::size_t j = 0; j < v.labels.size(); ++j) {
      if (j) os << ",";
      os << "\"" << to_string(v.labels[j]) << "\"";
    }
    os << "]}";
  }
  os << "]}";
  return os.str();
}

std::string region_to_csv(const std::string& name, const DofRegion& region) {
  std::ostringstream os;
  for (const auto& v : region.vertices) {
    os << name << "," << format_g12(v.d1) << "," << format_g12(v.d2) << ",";
    for (std::size_t j = 0; j < v.labels.size(); ++j) {
      if (j) os << ";";
      os << to_string(v.labels[j]);
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace dofatlas
