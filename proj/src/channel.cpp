#include "dofatlas/channel.hpp"

#include <bit>
#include <cmath>
#include <ostream>

#include "dofatlas/util.hpp"

namespace dofatlas {

namespace {

void fill_cn(Eigen::MatrixXcd& m, SplitMix64& rng, double scale) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = scale * rng.next_cn01();
}

Eigen::MatrixXcd null_basis(const Eigen::MatrixXcd& mat, int want,
                            const char* op) {
  // Right null space: trailing right singular vectors of mat.
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      mat, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = sv.size() > 0 ? 1e-9 * sv(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  const int dim = static_cast<int>(mat.cols()) - rank;
  if (want > dim)
    throw ValidationError(std::string(op) + ": null space has only " +
                          std::to_string(dim) + " dimensions, need " +
                          std::to_string(want));
  return svd.matrixV().rightCols(dim).leftCols(want);
}

}  // namespace

ChannelSet draw_channels(const AntennaConfig& config, std::uint64_t seed) {
  ChannelSet ch;
  ch.config = config;
  SplitMix64 rng(mix64(seed));
  if (config.kind == ChannelKind::bc) {
    ch.h1.resize(config.m(), config.n1);
    ch.h2.resize(config.m(), config.n2);
    fill_cn(ch.h1, rng, 1.0);
    fill_cn(ch.h2, rng, 1.0);
  } else {
    ch.h11.resize(config.m1, config.n1);
    ch.h12.resize(config.m2, config.n1);
    ch.h21.resize(config.m1, config.n2);
    ch.h22.resize(config.m2, config.n2);
    fill_cn(ch.h11, rng, 1.0);
    fill_cn(ch.h12, rng, 1.0);
    fill_cn(ch.h21, rng, 1.0);
    fill_cn(ch.h22, rng, 1.0);
  }
  return ch;
}

CsitSet make_csit(const ChannelSet& channels, const CsitQuality& alpha,
                  double p, std::uint64_t seed) {
  validate(alpha);
  if (!(p > 1.0))
    throw ValidationError("estimates need P > 1 so the error power decays");
  CsitSet cs;
  cs.p = p;
  cs.alpha = alpha;
  const double s1 = std::sqrt(std::pow(p, -alpha.alpha1));
  const double s2 = std::sqrt(std::pow(p, -alpha.alpha2));
  SplitMix64 rng(mix64(hash_combine(seed, 0xE5u)));
  auto estimate = [&](const Eigen::MatrixXcd& h, double scale) {
    Eigen::MatrixXcd e(h.rows(), h.cols());
    fill_cn(e, rng, scale);
    return Eigen::MatrixXcd(h - e);
  };
  if (channels.config.kind == ChannelKind::bc) {
    cs.h1 = estimate(channels.h1, s1);
    cs.h2 = estimate(channels.h2, s2);
  } else {
    cs.h11 = estimate(channels.h11, s1);
    cs.h12 = estimate(channels.h12, s1);
    cs.h21 = estimate(channels.h21, s2);
    cs.h22 = estimate(channels.h22, s2);
  }
  return cs;
}

Eigen::MatrixXcd zf_precoder(const Eigen::MatrixXcd& estimate, int streams) {
  if (streams < 0) throw ValidationError("stream count must be nonnegative");
  if (streams == 0) return Eigen::MatrixXcd(estimate.rows(), 0);
  // estimate^H v = 0 <=> v orthogonal to the column space of estimate, i.e.
  // a trailing left singular vector.
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      estimate, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = sv.size() > 0 ? 1e-9 * sv(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  const int dim = static_cast<int>(estimate.rows()) - rank;
  if (streams > dim)
    throw ValidationError("zf_precoder: null space has only " +
                          std::to_string(dim) + " dimensions, need " +
                          std::to_string(streams));
  return svd.matrixU().middleCols(rank, streams);
}

Eigen::MatrixXcd range_basis(const Eigen::MatrixXcd& estimate, int streams) {
  if (streams < 0) throw ValidationError("stream count must be nonnegative");
  if (streams == 0) return Eigen::MatrixXcd(estimate.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      estimate, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = sv.size() > 0 ? 1e-9 * sv(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  if (streams > rank)
    throw ValidationError("range_basis: estimated range has rank " +
                          std::to_string(rank) + ", need " +
                          std::to_string(streams));
  return svd.matrixU().leftCols(streams);
}

RowTransform row_transform(const Eigen::MatrixXcd& own_channel,
                           const Eigen::MatrixXcd& cross_channel,
                           int receiver_index) {
  if (receiver_index != 1 && receiver_index != 2)
    throw ValidationError("receiver_index must be 1 or 2");
  const auto n = own_channel.cols();
  if (cross_channel.cols() != n)
    throw ValidationError("channel blocks disagree on the receive dimension");
  const int top_n = static_cast<int>(n - std::min(own_channel.rows(), n));
  const int bot_n =
      receiver_index == 2
          ? static_cast<int>(n - std::min(cross_channel.rows(), n))
          : 0;
  const Eigen::MatrixXcd top = null_basis(own_channel, top_n, "row_transform");
  const Eigen::MatrixXcd bot =
      bot_n > 0 ? null_basis(cross_channel, bot_n, "row_transform")
                : Eigen::MatrixXcd(n, 0);
  const int fixed_n = top_n + bot_n;
  const auto mid_n = n - fixed_n;
  Eigen::MatrixXcd comp;
  if (fixed_n == 0) {
    comp = Eigen::MatrixXcd::Identity(n, n);
  } else {
    Eigen::MatrixXcd fixed(n, fixed_n);
    if (top_n > 0) fixed.leftCols(top_n) = top;
    if (bot_n > 0) fixed.rightCols(bot_n) = bot;
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(fixed);
    comp = Eigen::MatrixXcd(qr.householderQ()).rightCols(mid_n);
  }
  RowTransform rt;
  rt.t.resize(n, n);
  rt.t.topRows(top_n) = top.adjoint();
  rt.t.middleRows(top_n, mid_n) = comp.adjoint();
  rt.t.bottomRows(bot_n) = bot.adjoint();
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(rt.t);
  if (lu.rank() < n)
    throw ValidationError("row_transform: degenerate channel realization");
  rt.own = rt.t * own_channel.adjoint();
  rt.cross = rt.t * cross_channel.adjoint();
  return rt;
}

ResidualSweep residual_slope(double alpha, const std::vector<double>& p_db,
                             int trials, std::uint64_t seed) {
  if (alpha < 0.0 || alpha > 1.0)
    throw ValidationError("quality exponent must lie in [0, 1]");
  if (trials < 1) throw ValidationError("need at least one trial");
  if (p_db.size() < 2)
    throw ValidationError("need at least two power points for a slope");
  constexpr int m = 4, n = 3;
  const std::size_t np = p_db.size();
  std::vector<double> power(np * static_cast<std::size_t>(trials), 0.0);
  parallel_for(power.size(), [&](std::size_t idx) {
    const std::size_t pi = idx / static_cast<std::size_t>(trials);
    const std::size_t tr = idx % static_cast<std::size_t>(trials);
    const double p = std::pow(10.0, p_db[pi] / 10.0);
    SplitMix64 rng(hash3(seed, pi, tr));
    Eigen::MatrixXcd h(m, n), e(m, n);
    fill_cn(h, rng, 1.0);
    fill_cn(e, rng, std::sqrt(std::pow(p, -alpha)));
    const Eigen::MatrixXcd est = h - e;
    const Eigen::MatrixXcd w = zf_precoder(est, 1);
    power[idx] = (h.adjoint() * w).squaredNorm();
  });
  ResidualSweep rs;
  rs.p_db = p_db;
  rs.mean_power.resize(np, 0.0);
  std::vector<double> x(np), y(np);
  for (std::size_t pi = 0; pi < np; ++pi) {
    double acc = 0.0;
    for (int tr = 0; tr < trials; ++tr)
      acc += power[pi * static_cast<std::size_t>(trials) +
                   static_cast<std::size_t>(tr)];
    rs.mean_power[pi] = acc / trials;
    const double p = std::pow(10.0, p_db[pi] / 10.0);
    x[pi] = std::log2(p);
    y[pi] = std::log2(rs.mean_power[pi]);
  }
  rs.fit = fit_line(x.data(), y.data(), np);
  return rs;
}

void dump_matrix(std::ostream& os, const Eigen::MatrixXcd& m) {
  static_assert(std::endian::native == std::endian::little,
                "payload format assumes a little-endian host");
  os << "{\"rows\":" << m.rows() << ",\"cols\":" << m.cols()
     << ",\"layout\":\"col-major\",\"scalar\":\"complex128-le\"}\n";
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double re = m(i, j).real();
      const double im = m(i, j).imag();
      os.write(reinterpret_cast<const char*>(&re), sizeof(re));
      os.write(reinterpret_cast<const char*>(&im), sizeof(im));
    }
  }
}

}  // namespace dofatlas
