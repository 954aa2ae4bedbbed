#pragma once

#include "dofatlas/alloc.hpp"
#include "dofatlas/model.hpp"

namespace dofatlas {

// Brute-force grid maximizers. These scan the raw power-exponent surfaces
// with no knowledge of the closed-form optima; the tests certify closed
// forms against them. Scans are deterministic: fixed axis order, ties keep
// the later (larger-coordinate) point, results independent of thread count.
struct GridSpec {
  double step{1.0 / 400.0};
};

struct GridMaxBc {
  double a1{0.0};
  double a2{0.0};
  double sum{0.0};
};

GridMaxBc grid_max_sum_bc(const AntennaConfig& config,
                          const CsitQuality& alpha, const GridSpec& grid = {});

struct GridMaxSt {
  double rho{0.0};
  double sum{0.0};
};

GridMaxSt grid_max_st_bc(const AntennaConfig& config, const CsitQuality& alpha,
                         const GridSpec& grid = {});

struct GridMaxIc2 {
  double a2{0.0};
  double a2p{0.0};
  double d2{0.0};
  bool feasible{false};
};

GridMaxIc2 grid_max_d2_ic2(const AntennaConfig& config,
                           const CsitQuality& alpha, double lambda,
                           const GridSpec& grid = {});

}  // namespace dofatlas
