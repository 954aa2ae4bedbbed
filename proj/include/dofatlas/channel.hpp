#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dofatlas/model.hpp"
#include "dofatlas/util.hpp"

namespace dofatlas {

// One channel realization. Blocks are (transmit antennas) x (receive
// antennas): hk is M x Nk for the single transmitter, h_kj is Mj x Nk for
// the pair (transmitter j into receiver k). Entries are i.i.d. standard
// complex Gaussian, drawn in a fixed block and column order from one stream,
// so a (config, seed) pair pins every entry.
struct ChannelSet {
  AntennaConfig config;
  Eigen::MatrixXcd h1, h2;
  Eigen::MatrixXcd h11, h12, h21, h22;
};

ChannelSet draw_channels(const AntennaConfig& config, std::uint64_t seed);

// Estimates of the blocks above. Receiver k's blocks carry an additive error
// with per-entry variance P^(-alpha_k); needs P > 1 so the error actually
// shrinks with P.
struct CsitSet {
  double p{1.0};
  CsitQuality alpha;
  Eigen::MatrixXcd h1, h2;
  Eigen::MatrixXcd h11, h12, h21, h22;
};

CsitSet make_csit(const ChannelSet& channels, const CsitQuality& alpha,
                  double p, std::uint64_t seed);

// Orthonormal transmit directions annihilated by the estimate (columns v
// with estimate^H v = 0). Throws when fewer than `streams` such directions
// exist at tolerance 1e-9 relative to the largest singular value.
Eigen::MatrixXcd zf_precoder(const Eigen::MatrixXcd& estimate, int streams);

// Orthonormal basis of the leading estimated transmit directions.
Eigen::MatrixXcd range_basis(const Eigen::MatrixXcd& estimate, int streams);

// Invertible receive-side row transform exposing the structured zeros the
// narrow-pair analysis works in. For receiver 1 pass (h11, h12): t * own^H
// has N1 - min(M1, N1) leading zero rows. For receiver 2 pass (h22, h21):
// t * own^H has N2 - min(M2, N2) leading zero rows and t * cross^H has
// N2 - min(M1, N2) trailing zero rows.
struct RowTransform {
  Eigen::MatrixXcd t;
  Eigen::MatrixXcd own;    // t * own_channel^H
  Eigen::MatrixXcd cross;  // t * cross_channel^H
};

RowTransform row_transform(const Eigen::MatrixXcd& own_channel,
                           const Eigen::MatrixXcd& cross_channel,
                           int receiver_index);

// Monte-Carlo check that a null steering vector built from an estimate of
// quality alpha leaks residual power P^(-alpha): sweeps P, fits the log-log
// slope (expected near -alpha).
struct ResidualSweep {
  std::vector<double> p_db;
  std::vector<double> mean_power;
  LineFit fit;
};

ResidualSweep residual_slope(double alpha, const std::vector<double>& p_db,
                             int trials, std::uint64_t seed);

// One-line JSON shape header followed by the column-major little-endian
// complex128 payload.
void dump_matrix(std::ostream& os, const Eigen::MatrixXcd& m);

}  // namespace dofatlas
