#include "dofatlas/ratesim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dofatlas {

namespace {

constexpr double k_off_tol = 1e-12;

double pos(double x) { return x > 0.0 ? x : 0.0; }

void require_exponent(double v, double lo, double hi, const char* name) {
  if (v < lo - k_off_tol || v > hi + k_off_tol)
    throw ValidationError(std::string(name) + " outside its valid range");
}

StreamClass common_class(const char* id, int tx, int antennas) {
  StreamClass c;
  c.id = id;
  c.tx = tx;
  c.rx = 0;
  c.common = true;
  c.exponent = 1.0;
  c.v = Eigen::MatrixXcd::Identity(antennas, antennas);
  return c;
}

StreamClass private_class(const std::string& id, int tx, int rx,
                          double exponent, Eigen::MatrixXcd v) {
  StreamClass c;
  c.id = id;
  c.tx = tx;
  c.rx = rx;
  c.exponent = pos(exponent);
  c.active = exponent >= -k_off_tol;
  c.v = std::move(v);
  return c;
}

void add_bc_classes(PrecoderBundle& b, const AntennaConfig& cfg,
                    const CsitSet& csit, const PowerPolicy& policy) {
  const int m = cfg.m();
  const int c1 = std::max(m - cfg.n2, 0);
  const int c2zf = std::max(m - cfg.n1, 0);
  const int c2sub = std::min(m, cfg.n2) - c2zf;
  require_exponent(policy.a1, 0.0, csit.alpha.alpha2, "A1");
  require_exponent(policy.a2, 0.0, 1.0, "A2");
  b.classes.push_back(common_class("c", 1, m));
  if (c1 > 0)
    b.classes.push_back(
        private_class("u1", 1, 1, policy.a1, zf_precoder(csit.h2, c1)));
  if (c2zf > 0)
    b.classes.push_back(
        private_class("u2zf", 1, 2, policy.a2, zf_precoder(csit.h1, c2zf)));
  if (c2sub > 0)
    b.classes.push_back(private_class("u2sub", 1, 2,
                                      policy.a2 - csit.alpha.alpha1,
                                      range_basis(csit.h2, c2sub)));
}

void add_ic1_classes(PrecoderBundle& b, const AntennaConfig& cfg,
                     const CsitSet& csit, const PowerPolicy& policy) {
  const int n2p = std::min(cfg.m2, cfg.n2);
  const int c1 = cfg.m1 - cfg.n2;
  const int c2zf = cfg.m2 - cfg.n1;
  const int c2sub = cfg.n1 + n2p - cfg.m2;
  require_exponent(policy.a1, 0.0, csit.alpha.alpha2, "A1");
  require_exponent(policy.a2, 0.0, 1.0, "A2");
  b.classes.push_back(common_class("c1", 1, cfg.m1));
  b.classes.push_back(common_class("c2", 2, cfg.m2));
  if (c1 > 0)
    b.classes.push_back(
        private_class("u1", 1, 1, policy.a1, zf_precoder(csit.h21, c1)));
  if (c2zf > 0)
    b.classes.push_back(
        private_class("u2zf", 2, 2, policy.a2, zf_precoder(csit.h12, c2zf)));
  if (c2sub > 0)
    b.classes.push_back(private_class("u2sub", 2, 2,
                                      policy.a2 - csit.alpha.alpha1,
                                      range_basis(csit.h22, c2sub)));
}

void add_ic2_classes(PrecoderBundle& b, const AntennaConfig& cfg,
                     const CsitSet& csit, const PowerPolicy& policy) {
  const DerivedDims d = derived_dims(cfg);
  const double a1 = csit.alpha.alpha1;
  require_exponent(policy.a2p, a1, 1.0, "A2'");
  require_exponent(policy.a2, 0.0, policy.a2p, "A2");
  b.classes.push_back(common_class("c1", 1, cfg.m1));
  b.classes.push_back(common_class("c2", 2, cfg.m2));
  const int zf_n = d.mu1 + d.mu2;
  if (zf_n > 0) {
    const Eigen::MatrixXcd zf = zf_precoder(csit.h12, zf_n);
    if (d.mu1 > 0)
      b.classes.push_back(
          private_class("u2_mu1", 2, 2, policy.a2p, zf.leftCols(d.mu1)));
    if (d.mu2 > 0)
      b.classes.push_back(
          private_class("u2_mu2", 2, 2, policy.a2, zf.rightCols(d.mu2)));
  }
  const int range_n = d.tau + d.delta1 + d.delta2;
  if (range_n > 0) {
    const Eigen::MatrixXcd rb = range_basis(csit.h22, range_n);
    if (d.tau > 0)
      b.classes.push_back(
          private_class("u2_tau", 2, 2, 1.0, rb.leftCols(d.tau)));
    if (d.delta1 > 0)
      b.classes.push_back(private_class("u2_d1", 2, 2, policy.a2p - a1,
                                        rb.middleCols(d.tau, d.delta1)));
    if (d.delta2 > 0)
      b.classes.push_back(private_class(
          "u2_d2", 2, 2, policy.a2 - a1,
          rb.middleCols(d.tau + d.delta1, d.delta2)));
  }
}

}  // namespace

PrecoderBundle make_precoders(const AntennaConfig& config, const CsitSet& csit,
                              const PowerPolicy& policy) {
  PrecoderBundle b;
  b.p = csit.p;
  if (config.kind == ChannelKind::bc) {
    require_normalized(config, ChannelKind::bc, "make_precoders");
    add_bc_classes(b, config, csit, policy);
  } else {
    require_normalized(config, ChannelKind::ic, "make_precoders");
    if (config.m1 >= config.n2)
      add_ic1_classes(b, config, csit, policy);
    else
      add_ic2_classes(b, config, csit, policy);
  }
  double raw1 = 0.0, raw2 = 0.0;
  for (const auto& cl : b.classes) {
    if (!cl.active) continue;
    const double w =
        static_cast<double>(cl.v.cols()) * std::pow(b.p, cl.exponent);
    (cl.tx == 1 ? raw1 : raw2) += w;
  }
  b.scale1 = raw1 > 0.0 ? b.p / raw1 : 0.0;
  b.scale2 = raw2 > 0.0 ? b.p / raw2 : 0.0;
  return b;
}

void silence_class(PrecoderBundle& bundle, const std::string& id) {
  for (auto& cl : bundle.classes)
    if (cl.id == id) cl.active = false;
}

CovarianceStack build_covariances(const ChannelSet& channels,
                                  const PrecoderBundle& bundle, int receiver) {
  if (receiver != 1 && receiver != 2)
    throw ValidationError("receiver must be 1 or 2");
  const bool bc = channels.config.kind == ChannelKind::bc;
  const int nk = receiver == 1 ? channels.config.n1 : channels.config.n2;
  auto channel_from = [&](int tx) -> const Eigen::MatrixXcd& {
    if (bc) return receiver == 1 ? channels.h1 : channels.h2;
    if (receiver == 1) return tx == 1 ? channels.h11 : channels.h12;
    return tx == 1 ? channels.h21 : channels.h22;
  };
  CovarianceStack st;
  st.q_ck = Eigen::MatrixXcd::Zero(nk, nk);
  st.q_cj = Eigen::MatrixXcd::Zero(nk, nk);
  st.q_k = Eigen::MatrixXcd::Zero(nk, nk);
  st.q_eta = Eigen::MatrixXcd::Identity(nk, nk);
  for (const auto& cl : bundle.classes) {
    if (!cl.active || cl.v.cols() == 0) continue;
    const Eigen::MatrixXcd& h = channel_from(cl.tx);
    const double scale = cl.tx == 1 ? bundle.scale1 : bundle.scale2;
    const double w = scale * std::pow(bundle.p, cl.exponent);
    const Eigen::MatrixXcd hv = h.adjoint() * cl.v;
    const Eigen::MatrixXcd cov = w * (hv * hv.adjoint());
    if (cl.common) {
      const bool own = bc || cl.tx == receiver;
      (own ? st.q_ck : st.q_cj) += cov;
    } else if (cl.rx == receiver) {
      st.q_k += cov;
    } else {
      st.q_eta += cov;
    }
  }
  return st;
}

namespace {

double log2_det(const Eigen::MatrixXcd& q) {
  const Eigen::MatrixXcd sym = 0.5 * (q + q.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sym);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    acc += std::log2(std::max(es.eigenvalues()(i), 1e-12));
  return acc;
}

}  // namespace

RatePoint rate_point(const CovarianceStack& stack) {
  const double base = log2_det(stack.q_k + stack.q_eta);
  RatePoint r;
  r.r_ck = pos(log2_det(stack.q_ck + stack.q_k + stack.q_eta) - base);
  r.r_cj = pos(log2_det(stack.q_cj + stack.q_k + stack.q_eta) - base);
  r.r_sum = pos(
      log2_det(stack.q_ck + stack.q_cj + stack.q_k + stack.q_eta) - base);
  r.r_pk = pos(base - log2_det(stack.q_eta));
  return r;
}

namespace {

struct TrialValues {
  std::vector<double> v;  // one per message id
};

SweepResult reduce_rows(const std::vector<std::string>& ids,
                        const std::vector<double>& snr_db, int trials,
                        const std::vector<TrialValues>& cells) {
  const std::size_t np = snr_db.size();
  const std::size_t nm = ids.size();
  SweepResult res;
  std::vector<double> x(np);
  for (std::size_t pi = 0; pi < np; ++pi)
    x[pi] = std::log2(std::pow(10.0, snr_db[pi] / 10.0));
  std::vector<std::vector<double>> means(nm, std::vector<double>(np, 0.0));
  for (std::size_t pi = 0; pi < np; ++pi) {
    for (std::size_t mi = 0; mi < nm; ++mi) {
      double acc = 0.0;
      for (int tr = 0; tr < trials; ++tr)
        acc += cells[pi * trials + tr].v[mi];
      const double mean = acc / trials;
      double var = 0.0;
      for (int tr = 0; tr < trials; ++tr) {
        const double d = cells[pi * trials + tr].v[mi] - mean;
        var += d * d;
      }
      const double se =
          trials > 1 ? std::sqrt(var / (trials - 1)) / std::sqrt(trials) : 0.0;
      RateRow row;
      row.p_db = snr_db[pi];
      row.message_id = ids[mi];
      row.mean_rate = mean;
      row.std_err = se;
      res.rows.push_back(row);
      means[mi][pi] = mean;
    }
  }
  for (std::size_t mi = 0; mi < nm; ++mi)
    res.slopes[ids[mi]] = fit_line(x.data(), means[mi].data(), np);
  return res;
}

void check_sweep_args(const std::vector<double>& snr_db, int trials) {
  if (snr_db.size() < 2)
    throw ValidationError("need at least two power points for slopes");
  for (std::size_t i = 0; i + 1 < snr_db.size(); ++i)
    if (!(snr_db[i] < snr_db[i + 1]))
      throw ValidationError("power points must be strictly increasing");
  if (!(snr_db.front() > 0.0))
    throw ValidationError("power points must exceed 0 dB");
  if (trials < 1) throw ValidationError("need at least one trial");
}

}  // namespace

SweepResult sweep_and_fit(const AntennaConfig& config,
                          const CsitQuality& alpha, const PowerPolicy& policy,
                          const std::vector<double>& snr_db, int trials,
                          std::uint64_t seed, const SweepOptions& options) {
  validate(alpha);
  check_sweep_args(snr_db, trials);
  const bool bc = config.kind == ChannelKind::bc;
  if (!bc && options.common1 == options.common2)
    throw ValidationError("pair sweeps transmit exactly one common part");
  std::vector<std::string> ids;
  if (bc)
    ids = {"dc", "dp1", "dp2", "sum"};
  else if (options.common1)
    ids = {options.prefix + "dc1", options.prefix + "dp1",
           options.prefix + "dp2", options.prefix + "sum"};
  else
    ids = {options.prefix + "dc2", options.prefix + "dp1",
           options.prefix + "dp2", options.prefix + "sum"};

  const std::size_t np = snr_db.size();
  std::vector<TrialValues> cells(np * static_cast<std::size_t>(trials));
  parallel_for(cells.size(), [&](std::size_t idx) {
    const std::size_t pi = idx / static_cast<std::size_t>(trials);
    const std::size_t tr = idx % static_cast<std::size_t>(trials);
    const double p = std::pow(10.0, snr_db[pi] / 10.0);
    const std::uint64_t base = hash3(seed, pi, tr);
    const ChannelSet ch = draw_channels(config, hash_combine(base, 1));
    const CsitSet cs = make_csit(ch, alpha, p, hash_combine(base, 2));
    PrecoderBundle bundle = make_precoders(config, cs, policy);
    if (!bc) {
      if (!options.common1) silence_class(bundle, "c1");
      if (!options.common2) silence_class(bundle, "c2");
    }
    const RatePoint r1 = rate_point(build_covariances(ch, bundle, 1));
    const RatePoint r2 = rate_point(build_covariances(ch, bundle, 2));
    TrialValues tv;
    if (bc) {
      const double dc = std::min(r1.r_ck, r2.r_ck);
      tv.v = {dc, r1.r_pk, r2.r_pk, dc + r1.r_pk + r2.r_pk};
    } else if (options.common1) {
      const double dc1 = std::min(r1.r_ck, r2.r_cj);
      tv.v = {dc1, r1.r_pk, r2.r_pk, dc1 + r1.r_pk + r2.r_pk};
    } else {
      const double dc2 = std::min(r1.r_cj, r2.r_ck);
      tv.v = {dc2, r1.r_pk, r2.r_pk, dc2 + r1.r_pk + r2.r_pk};
    }
    cells[idx] = std::move(tv);
  });
  return reduce_rows(ids, snr_db, trials, cells);
}

SweepResult st_sweep(const AntennaConfig& config, const CsitQuality& alpha,
                     double rho, const std::vector<double>& snr_db, int trials,
                     std::uint64_t seed) {
  require_normalized(config, ChannelKind::bc, "st_sweep");
  validate(alpha);
  check_sweep_args(snr_db, trials);
  if (config.m() < config.n2)
    throw ValidationError(
        "slot mixing needs at least as many transmit as receive antennas");
  if (rho < -k_off_tol || rho > 1.0 + k_off_tol)
    throw ValidationError("slot fraction outside [0, 1]");
  rho = snap_rational(std::clamp(rho, 0.0, 1.0), 100);
  const PowerPolicy full{alpha.alpha2, 1.0, 1.0, 1.0, false};
  const PowerPolicy matched{alpha.alpha2, alpha.alpha1, 1.0, 1.0, false};
  const std::vector<std::string> ids = {"dc", "dp1", "dp2", "sum"};
  const std::size_t np = snr_db.size();
  std::vector<TrialValues> cells(np * static_cast<std::size_t>(trials));
  parallel_for(cells.size(), [&](std::size_t idx) {
    const std::size_t pi = idx / static_cast<std::size_t>(trials);
    const std::size_t tr = idx % static_cast<std::size_t>(trials);
    const double p = std::pow(10.0, snr_db[pi] / 10.0);
    const std::uint64_t base = hash3(seed, pi, tr);
    const ChannelSet ch = draw_channels(config, hash_combine(base, 1));
    const CsitSet cs = make_csit(ch, alpha, p, hash_combine(base, 2));
    const PrecoderBundle bf = make_precoders(config, cs, full);
    const PrecoderBundle bm = make_precoders(config, cs, matched);
    const RatePoint f1 = rate_point(build_covariances(ch, bf, 1));
    const RatePoint f2 = rate_point(build_covariances(ch, bf, 2));
    const RatePoint m1 = rate_point(build_covariances(ch, bm, 1));
    const RatePoint m2 = rate_point(build_covariances(ch, bm, 2));
    const double cap1 = rho * f1.r_ck + (1.0 - rho) * m1.r_ck;
    const double cap2 = rho * f2.r_ck + (1.0 - rho) * m2.r_ck;
    const double dc = std::min(cap1, cap2);
    const double dp1 = rho * f1.r_pk + (1.0 - rho) * m1.r_pk;
    const double dp2 = rho * f2.r_pk + (1.0 - rho) * m2.r_pk;
    TrialValues tv;
    tv.v = {dc, dp1, dp2, dc + dp1 + dp2};
    cells[idx] = std::move(tv);
  });
  return reduce_rows(ids, snr_db, trials, cells);
}

std::string rate_csv(const std::vector<RateRow>& rows) {
  std::ostringstream os;
  os << "P_db,message_id,mean_rate_bits,stderr\n";
  for (const auto& r : rows) {
    os << format_g12(r.p_db) << ',' << r.message_id << ','
       << format_g12(r.mean_rate) << ',' << format_g12(r.std_err) << '\n';
  }
  return os.str();
}

}  // namespace dofatlas
