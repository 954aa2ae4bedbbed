#include <cmath>
#include <sstream>

#include "doctest.h"
#include "dofatlas/channel.hpp"
#include "json.hpp"

using namespace dofatlas;

namespace {

AntennaConfig bc423() { return normalize(bc_config(4, 2, 3)); }

AntennaConfig ic2534() { return normalize(ic_config(2, 5, 3, 4)); }

double max_abs(const Eigen::MatrixXcd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("channel draws are shaped and reproducible") {
  const AntennaConfig c = bc423();
  const ChannelSet a = draw_channels(c, 99);
  CHECK(a.h1.rows() == 4);
  CHECK(a.h1.cols() == 2);
  CHECK(a.h2.rows() == 4);
  CHECK(a.h2.cols() == 3);
  const ChannelSet b = draw_channels(c, 99);
  CHECK(a.h1 == b.h1);
  CHECK(a.h2 == b.h2);
  CHECK(draw_channels(c, 100).h1 != a.h1);

  const ChannelSet p = draw_channels(ic2534(), 7);
  CHECK(p.h11.rows() == 2);
  CHECK(p.h11.cols() == 3);
  CHECK(p.h12.rows() == 5);
  CHECK(p.h12.cols() == 3);
  CHECK(p.h21.rows() == 2);
  CHECK(p.h21.cols() == 4);
  CHECK(p.h22.rows() == 5);
  CHECK(p.h22.cols() == 4);
}

TEST_CASE("estimate error shrinks as a power of P") {
  const AntennaConfig c = bc423();
  const ChannelSet ch = draw_channels(c, 5);
  const double p = 1e4;
  const CsitQuality alpha{0.8, 0.4};
  // Average the squared error over draws; per entry it should sit near
  // P^(-alpha_k) for receiver k's blocks.
  double e1 = 0.0, e2 = 0.0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    const CsitSet cs = make_csit(ch, alpha, p, 1000 + r);
    e1 += (cs.h1 - ch.h1).squaredNorm() / ch.h1.size();
    e2 += (cs.h2 - ch.h2).squaredNorm() / ch.h2.size();
  }
  e1 /= reps;
  e2 /= reps;
  CHECK(e1 > 0.5 * std::pow(p, -0.8));
  CHECK(e1 < 2.0 * std::pow(p, -0.8));
  CHECK(e2 > 0.5 * std::pow(p, -0.4));
  CHECK(e2 < 2.0 * std::pow(p, -0.4));

  CHECK(make_csit(ch, alpha, p, 3).h1 == make_csit(ch, alpha, p, 3).h1);
  CHECK_THROWS_AS(make_csit(ch, alpha, 1.0, 3), ValidationError);
}

TEST_CASE("null steering annihilates the estimate") {
  const ChannelSet ch = draw_channels(bc423(), 11);
  const CsitSet cs = make_csit(ch, {0.6, 0.6}, 100.0, 12);
  const Eigen::MatrixXcd w = zf_precoder(cs.h2, 1);  // 4x3 estimate, 1 dir
  CHECK(w.rows() == 4);
  CHECK(w.cols() == 1);
  CHECK(std::abs(w.col(0).norm() - 1.0) < 1e-12);
  CHECK(max_abs(cs.h2.adjoint() * w) < 1e-9);
  // The true channel is not annihilated, only the estimate.
  CHECK(max_abs(ch.h2.adjoint() * w) > 1e-6);
  // A 4x2 estimate leaves two null directions; three do not exist.
  const Eigen::MatrixXcd w2 = zf_precoder(cs.h1, 2);
  CHECK(w2.cols() == 2);
  CHECK(max_abs((w2.adjoint() * w2 - Eigen::MatrixXcd::Identity(2, 2))) <
        1e-12);
  CHECK_THROWS_AS(zf_precoder(cs.h1, 3), ValidationError);
}

TEST_CASE("range basis spans estimated directions") {
  const ChannelSet ch = draw_channels(bc423(), 13);
  const Eigen::MatrixXcd b = range_basis(ch.h2, 2);
  CHECK(b.rows() == 4);
  CHECK(b.cols() == 2);
  CHECK(max_abs(b.adjoint() * b - Eigen::MatrixXcd::Identity(2, 2)) < 1e-12);
  // Columns stay inside the column space of the estimate.
  const Eigen::MatrixXcd proj =
      ch.h2 * (ch.h2.adjoint() * ch.h2).inverse() * ch.h2.adjoint();
  CHECK(max_abs(proj * b - b) < 1e-9);
}

TEST_CASE("receive transform exposes the structured zeros") {
  const ChannelSet ch = draw_channels(ic2534(), 21);
  // Receiver 1: own h11 is 2x3, one direction of the three-antenna receiver
  // misses the two-antenna transmitter.
  const RowTransform r1 = row_transform(ch.h11, ch.h12, 1);
  CHECK(r1.t.rows() == 3);
  CHECK(r1.own.rows() == 3);
  CHECK(r1.own.cols() == 2);
  CHECK(max_abs(r1.own.topRows(1)) < 1e-9);
  CHECK(max_abs(r1.own.bottomRows(2)) > 1e-6);
  // Receiver 2: own h22 is 5x4 (no zero rows forced), cross h21 is 2x4 so
  // the bottom two rows can be steered clear of the cross channel.
  const RowTransform r2 = row_transform(ch.h22, ch.h21, 2);
  CHECK(r2.cross.rows() == 4);
  CHECK(max_abs(r2.cross.bottomRows(2)) < 1e-9);
  CHECK(max_abs(r2.own) > 1e-6);
  // The transform must be invertible to preserve mutual information.
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(r2.t);
  CHECK(lu.isInvertible());
}

TEST_CASE("residual leakage follows the quality exponent") {
  const std::vector<double> p_db = {30, 35, 40, 45, 50, 55, 60};
  const ResidualSweep s = residual_slope(0.5, p_db, 150, 77);
  REQUIRE(s.p_db.size() == p_db.size());
  REQUIRE(s.mean_power.size() == p_db.size());
  CHECK(std::abs(s.fit.slope + 0.5) < 0.05);
  const ResidualSweep z = residual_slope(0.0, p_db, 150, 78);
  CHECK(std::abs(z.fit.slope) < 0.05);
}

TEST_CASE("matrix dump format") {
  const ChannelSet ch = draw_channels(bc423(), 31);
  std::ostringstream os;
  dump_matrix(os, ch.h1);
  const std::string blob = os.str();
  const std::size_t nl = blob.find('\n');
  REQUIRE(nl != std::string::npos);
  const auto header = nlohmann::json::parse(blob.substr(0, nl));
  CHECK(header["rows"] == 4);
  CHECK(header["cols"] == 2);
  CHECK(header["layout"] == "col-major");
  CHECK(blob.size() - nl - 1 == 16u * 4u * 2u);
  // Round-trip the payload.
  const double* d = reinterpret_cast<const double*>(blob.data() + nl + 1);
  Eigen::MatrixXcd back(4, 2);
  for (int col = 0, k = 0; col < 2; ++col)
    for (int row = 0; row < 4; ++row, k += 2)
      back(row, col) = std::complex<double>(d[k], d[k + 1]);
  CHECK(back == ch.h1);
}
