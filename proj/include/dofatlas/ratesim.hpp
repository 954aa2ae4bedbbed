#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dofatlas/alloc.hpp"
#include "dofatlas/channel.hpp"
#include "dofatlas/model.hpp"
#include "dofatlas/util.hpp"

namespace dofatlas {

// One power class of the transmit signal: `count` orthonormal columns in v,
// each carrying an independent stream at power scale * P^exponent. Common
// classes are isotropic and decodable by both receivers; rx marks the
// intended receiver of a private class (0 for common). A class whose nominal
// exponent came out negative is switched off (active = false) rather than
// clamped to noise level.
struct StreamClass {
  std::string id;
  int tx{1};
  int rx{0};
  bool common{false};
  double exponent{0.0};
  bool active{true};
  Eigen::MatrixXcd v;
};

struct PrecoderBundle {
  std::vector<StreamClass> classes;
  double p{1.0};
  double scale1{0.0};  // per-transmitter normalizers making the budgets P
  double scale2{0.0};
};

PrecoderBundle make_precoders(const AntennaConfig& config, const CsitSet& csit,
                              const PowerPolicy& policy);

// Marks a class inactive (its power is not reassigned, so the remaining
// exponents keep their meaning). Unknown ids are ignored.
void silence_class(PrecoderBundle& bundle, const std::string& id);

// Receive covariances at one receiver, all N_k x N_k. q_eta includes the
// identity noise floor.
struct CovarianceStack {
  Eigen::MatrixXcd q_ck;   // own common part
  Eigen::MatrixXcd q_cj;   // other common part (zero when silent or BC)
  Eigen::MatrixXcd q_k;    // own private streams
  Eigen::MatrixXcd q_eta;  // cross private streams + noise
};

CovarianceStack build_covariances(const ChannelSet& channels,
                                  const PrecoderBundle& bundle, int receiver);

// Achievable rates (bits per channel use) with the common parts decoded
// first: r_ck / r_cj are the single-message caps, r_sum their joint cap,
// r_pk the private rate after stripping.
struct RatePoint {
  double r_ck{0.0};
  double r_cj{0.0};
  double r_sum{0.0};
  double r_pk{0.0};
};

RatePoint rate_point(const CovarianceStack& stack);

struct RateRow {
  double p_db{0.0};
  std::string message_id;
  double mean_rate{0.0};
  double std_err{0.0};
};

struct SweepResult {
  std::vector<RateRow> rows;
  std::map<std::string, LineFit> slopes;  // mean rate vs log2(P)
};

// Which common parts a pair sweep transmits; exactly one for the
// interference pair, ignored for the single transmitter.
struct SweepOptions {
  bool common1{true};
  bool common2{false};
  std::string prefix;  // prepended to message ids, e.g. "pair1."
};

SweepResult sweep_and_fit(const AntennaConfig& config,
                          const CsitQuality& alpha, const PowerPolicy& policy,
                          const std::vector<double>& snr_db, int trials,
                          std::uint64_t seed, const SweepOptions& options = {});

// Slot-mixed sweep: fraction rho of slots use the full-power policy
// (a1 = alpha2, a2 = 1), the rest the matched policy (a1 = alpha2,
// a2 = alpha1); the same channel draw serves both slot types.
SweepResult st_sweep(const AntennaConfig& config, const CsitQuality& alpha,
                     double rho, const std::vector<double>& snr_db, int trials,
                     std::uint64_t seed);

std::string rate_csv(const std::vector<RateRow>& rows);

}  // namespace dofatlas
