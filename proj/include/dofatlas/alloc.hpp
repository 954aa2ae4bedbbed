#pragma once

#include <string>

#include "dofatlas/model.hpp"
#include "dofatlas/region.hpp"

namespace dofatlas {

// Power exponents of a transmission policy. a1 scales receiver 1's
// zero-forced private streams, a2 (and a2p where two levels exist) scales
// receiver 2's. rho is the slot fraction of the (a2, 1) slot type when slot
// mixing applies; rho = 1 means that slot type only.
struct PowerPolicy {
  double a1{0.0};
  double a2{0.0};
  double a2p{1.0};
  double rho{1.0};
  bool clipped{false};
};

// Stream DoF bundle. BC fills dc (single common part) plus the raw common
// caps of both receivers; IC split tuples fill dc1/dc2. Raw caps may be
// negative; dc values are clipped at 0 and `clipped` records it.
struct DofTuple {
  double dc{0.0};
  double dc1{0.0};
  double dc2{0.0};
  double dp1{0.0};
  double dp2{0.0};
  double cap_rx1{0.0};
  double cap_rx2{0.0};
  bool clipped{false};

  double sum() const { return dc + dc1 + dc2 + dp1 + dp2; }
};

DofTuple bc_dof_tuple(const AntennaConfig& config, const CsitQuality& alpha,
                      double a1, double a2);
PowerPolicy bc_optimal_exponents(const AntennaConfig& config,
                                 const CsitQuality& alpha);
double bc_st_fraction(const AntennaConfig& config, const CsitQuality& alpha);
DofTuple bc_st_dof_tuple(const AntennaConfig& config,
                         const CsitQuality& alpha);
// Slot mixture at an explicit fraction; used by the oracle and the sweeps.
DofTuple bc_st_dof_tuple_at(const AntennaConfig& config,
                            const CsitQuality& alpha, double rho);

// Receiver caps for the wide-pair transmitter (M1 >= N2). All caps are raw
// (unclipped); split tuples clip their common part at 0.
struct Ic1Dof {
  double dp1{0.0};
  double dp2{0.0};
  double r1_cap{0.0};      // receiver 1: cap on each common part and the sum
  double r2_c1_cap{0.0};
  double r2_c2_cap{0.0};
  double r2_sum_cap{0.0};
  DofTuple split_c1;       // only the first common part transmitted
  DofTuple split_c2;       // only the second common part transmitted
};

Ic1Dof ic1_dof_tuple(const AntennaConfig& config, const CsitQuality& alpha,
                     double a1, double a2);
double ic1_st_fraction(const AntennaConfig& config, const CsitQuality& alpha);
DofTuple ic1_st_dof_tuple(const AntennaConfig& config,
                          const CsitQuality& alpha);
PowerPolicy ic1_default_policy(const CsitQuality& alpha);

struct Ic2Caps {
  double r1_cap{0.0};
  double r2_c1_cap{0.0};
  double r2_c2_cap{0.0};
  double r2_sum_cap{0.0};
  double dp2{0.0};
};

Ic2Caps ic2_dof_caps(const AntennaConfig& config, const CsitQuality& alpha,
                     double a2, double a2p);

enum class Ic2Branch { A, B, C, D, E, F };

std::string to_string(Ic2Branch branch);

struct Ic2Solution {
  PowerPolicy policy;
  double d2{0.0};
  Ic2Branch branch{Ic2Branch::F};
};

Ic2Solution ic2_optimal(const AntennaConfig& config, const CsitQuality& alpha,
                        double lambda);
bool ic2_branch_valid(const AntennaConfig& config, const CsitQuality& alpha,
                      Ic2Branch branch);
LinearConstraint ic2_constraint_line(const AntennaConfig& config,
                                     const CsitQuality& alpha,
                                     Ic2Branch branch);

// The maximization program behind ic2_optimal, exposed so the grid oracle
// and the kernels evaluate the identical objective.
struct Ic2Program {
  DerivedDims dims;
  int m1{0};
  int n2{0};
  bool wide{false};  // M2 > N2: min-form objective, two lambda constraints
  double alpha1{0.0};
};

Ic2Program ic2_program(const AntennaConfig& config, const CsitQuality& alpha);
bool ic2_lambda_ok(const Ic2Program& prog, double a2, double a2p,
                   double lambda);
double ic2_objective(const Ic2Program& prog, double a2, double a2p,
                     double lambda);

}  // namespace dofatlas
