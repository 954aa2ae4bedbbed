#pragma once

#include <stdexcept>
#include <string>

namespace dofatlas {

// Raised on any user-facing precondition violation (bad antenna counts,
// quality exponents out of range, an operation called outside its regime).
// The CLI maps it to exit code 2.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ChannelKind { bc, ic };

// Antenna counts for a two-receiver channel. The broadcast channel has a
// single transmitter with m() antennas; the interference channel has one
// transmitter per receiver (m1, m2). Normalization relabels the users so
// receiver 1 is the one with fewer antennas and clamps transmit arrays that
// exceed the total receive dimension; `swapped` records the relabeling so
// callers can report results in their original order.
struct AntennaConfig {
  ChannelKind kind{ChannelKind::bc};
  int m1{1};
  int m2{0};  // IC only; 0 for BC
  int n1{1};
  int n2{1};
  bool normalized{false};
  bool swapped{false};

  int m() const;  // BC transmit antennas
};

AntennaConfig bc_config(int m, int n1, int n2);
AntennaConfig ic_config(int m1, int m2, int n1, int n2);

// Channel-estimate quality exponents: the error of receiver k's estimated
// channel decays as P^(-alpha_k). Values outside [0,1] are rejected.
struct CsitQuality {
  double alpha1{0.0};
  double alpha2{0.0};
};

void validate(const CsitQuality& alpha);

AntennaConfig normalize(const AntennaConfig& config);
void require_normalized(const AntennaConfig& config, ChannelKind kind,
                        const char* op);

// Clamped dimension shorthands; valid on normalized configs.
int x_bc(const AntennaConfig& c);   // min{M, N1+N2}
int m1_bc(const AntennaConfig& c);  // min{M, N1}
int m2_bc(const AntennaConfig& c);  // min{M, N2}
int x1_ic(const AntennaConfig& c);  // min{M1, N1+N2}
int x2_ic(const AntennaConfig& c);  // min{M2, N1+N2}

// Sign decides whether the weaker receiver's quality already supports the
// best sum line (<= 0) or a quality shortfall remains (> 0).
double phi_bc(const AntennaConfig& c, const CsitQuality& alpha);
double phi_ic(const AntennaConfig& c, const CsitQuality& alpha);

// Effective quality exponent entering the sum constraint of the achievable
// region. Piecewise in alpha; continuous across branch boundaries.
double alpha0_bc(const AntennaConfig& c, const CsitQuality& alpha);
double alpha0_ic(const AntennaConfig& c, const CsitQuality& alpha);

// Stream-class sizes of the second transmitter's signal when its array is
// smaller than the paired receive array (M1 < N2, plus the M1 = N2 edge).
struct DerivedDims {
  int n1p{0};     // min{M1, N1}
  int n2p{0};     // min{M2, N2}
  int n1pp{0};    // max{M1, N1}
  int tau{0};     // full-power streams riding under receiver 1's self signal
  int mu1{0};     // zero-forced streams at exponent A2'
  int mu2{0};     // zero-forced streams at exponent A2
  int delta1{0};  // estimated-range streams at exponent A2' - alpha1
  int delta2{0};  // estimated-range streams at exponent (A2 - alpha1)+
  int xi{0};      // min{N1', mu1 + delta1}
};

DerivedDims derived_dims(const AntennaConfig& config);

// mu2 in the closed form used by the region statement: min{M1, X2-N2+M1-N1'}.
// Coincides with DerivedDims::mu2 whenever M2 >= N2.
int mu2_region(const AntennaConfig& config);

enum class RegimeTag {
  bc_phi_nonpos,
  bc_phi_pos,
  ic_i1,
  ic_i2_phi_nonpos,
  ic_i2_phi_pos,
  ic_ii1,
  ic_ii2a_low,
  ic_ii2a_high,
  ic_ii2b_low,
  ic_ii2b_mid,
  ic_ii2b_high,
};

std::string to_string(RegimeTag tag);

struct Regime {
  RegimeTag tag{RegimeTag::bc_phi_nonpos};
  // alpha1 breakpoints delimiting the quality sub-ranges (0 when unused).
  double thr_low{0.0};   // (M1 - N1') / mu2
  double thr_high{0.0};  // (N2 - N1) / (mu2 + N2 - N1'')
};

Regime classify(const AntennaConfig& config, const CsitQuality& alpha);

}  // namespace dofatlas
