#pragma once

#include <string>
#include <vector>

#include "dofatlas/model.hpp"

namespace dofatlas {

enum class ConstraintLabel { L0, L0p, L1, L2, L3, L4, L5, Axis1, Axis2 };

std::string to_string(ConstraintLabel label);

// One closed half-plane. Non-axis rows mean c1*d1 + c2*d2 <= rhs; the axis
// labels mean d1 >= 0 / d2 >= 0 and keep c1/c2/rhs at their defaults.
struct LinearConstraint {
  ConstraintLabel label{ConstraintLabel::L0};
  double c1{1.0};
  double c2{0.0};
  double rhs{0.0};
  // A constraint is active when removing it strictly enlarges the region.
  bool active{true};
};

struct Vertex {
  double d1{0.0};
  double d2{0.0};
  std::vector<ConstraintLabel> labels;  // constraints tight at this corner
};

enum class RegionProvenance { achievable_bc, achievable_ic, outer, reference };

struct DofRegion {
  std::vector<LinearConstraint> constraints;
  std::vector<Vertex> vertices;  // counter-clockwise, starting at (0,0)
  RegionProvenance provenance{RegionProvenance::achievable_bc};
};

struct RegionVerdict {
  std::string optimal;  // "Yes" or "No/Unknown"
  std::string rationale;
};

// Corner enumeration for a set of half-planes that always includes both axis
// rows and per-coordinate caps, hence a bounded polytope.
std::vector<Vertex> corner_points(
    const std::vector<LinearConstraint>& constraints);

double region_area(const std::vector<LinearConstraint>& constraints);

DofRegion bc_region(const AntennaConfig& config, const CsitQuality& alpha);
DofRegion ic_region(const AntennaConfig& config, const CsitQuality& alpha);
DofRegion outer_region(const AntennaConfig& config, const CsitQuality& alpha);

RegionVerdict verdict(const AntennaConfig& config, const CsitQuality& alpha);

// Independent references used by the endpoint tests.
DofRegion reference_no_csit(const AntennaConfig& config);
DofRegion reference_perfect_csit_bc(const AntennaConfig& config);

// All vertices of `inner` satisfy every constraint of `outer` with slack no
// worse than -tol.
bool region_contained(const DofRegion& inner, const DofRegion& outer,
                      double tol);

std::string region_to_json(const DofRegion& region);
std::string region_to_csv(const std::string& name, const DofRegion& region);

}  // namespace dofatlas
