#include "dofatlas/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dofatlas/alloc.hpp"
#include "dofatlas/model.hpp"
#include "dofatlas/oracle.hpp"
#include "dofatlas/ratesim.hpp"
#include "dofatlas/region.hpp"
#include "json.hpp"

namespace dofatlas::cli {

namespace {

using nlohmann::json;

struct Options {
  std::string channel;
  std::vector<int> antennas;
  std::vector<double> alpha;
  double grid_step{1.0 / 400.0};
  std::string snr{"30:60:5"};
  int trials{200};
  std::uint64_t seed{12345};
  std::string out;
  double lambda{0.0};
  bool has_lambda{false};
  double rho{0.0};
  bool has_rho{false};
};

void add_common(CLI::App* sub, Options& o, bool needs_channel) {
  auto* ch = sub->add_option("--channel", o.channel,
                             "channel kind: bc (one transmitter) or ic (pair)")
                 ->check(CLI::IsMember({"bc", "ic"}));
  if (needs_channel) ch->required();
  sub->add_option("--antennas", o.antennas,
                  "antenna counts M,N1,N2 (bc) or M1,M2,N1,N2 (ic)")
      ->delimiter(',');
  sub->add_option("--alpha", o.alpha,
                  "estimate quality exponents alpha1,alpha2 in [0,1]")
      ->delimiter(',');
  sub->add_option("--seed", o.seed, "base seed for all random streams");
  sub->add_option("--out", o.out, "write the full report to this path");
}

AntennaConfig build_config(const Options& o) {
  if (o.channel == "bc") {
    if (o.antennas.size() != 3)
      throw ValidationError("bc needs --antennas M,N1,N2");
    return normalize(bc_config(o.antennas[0], o.antennas[1], o.antennas[2]));
  }
  if (o.channel == "ic") {
    if (o.antennas.size() != 4)
      throw ValidationError("ic needs --antennas M1,M2,N1,N2");
    return normalize(ic_config(o.antennas[0], o.antennas[1], o.antennas[2],
                               o.antennas[3]));
  }
  throw ValidationError("--channel must be bc or ic");
}

CsitQuality build_alpha(const Options& o) {
  if (o.alpha.size() != 2)
    throw ValidationError("--alpha needs two values alpha1,alpha2");
  CsitQuality a{o.alpha[0], o.alpha[1]};
  validate(a);
  return a;
}

std::vector<double> parse_snr(const std::string& text) {
  double lo = 0.0, hi = 0.0, step = 0.0;
  char c1 = 0, c2 = 0;
  std::istringstream is(text);
  if (!(is >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' ||
      !(step > 0.0) || hi < lo)
    throw ValidationError("--snr-db must be lo:hi:step with step > 0");
  std::vector<double> points;
  for (double v = lo; v <= hi + 1e-9; v += step) points.push_back(v);
  return points;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open " + path + " for writing");
  os << text;
  if (!os) throw ValidationError("failed writing " + path);
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty())
    std::cout << text;
  else
    write_text(o.out, text);
}

json config_json(const Options& o, const AntennaConfig& c,
                 const CsitQuality& a) {
  json j;
  j["channel"] = o.channel;
  j["antennas"] = o.antennas;
  if (c.kind == ChannelKind::bc)
    j["normalized"] = {c.m(), c.n1, c.n2};
  else
    j["normalized"] = {c.m1, c.m2, c.n1, c.n2};
  j["swapped"] = c.swapped;
  j["alpha"] = {a.alpha1, a.alpha2};
  j["regime"] = to_string(classify(c, a).tag);
  return j;
}

int do_region(const Options& o) {
  const AntennaConfig c = build_config(o);
  const CsitQuality a = build_alpha(o);
  const DofRegion ach =
      c.kind == ChannelKind::bc ? bc_region(c, a) : ic_region(c, a);
  const DofRegion outer = outer_region(c, a);
  const RegionVerdict vd = verdict(c, a);
  const bool csv = o.out.size() > 4 &&
                   o.out.compare(o.out.size() - 4, 4, ".csv") == 0;
  std::cout << "regime: " << to_string(classify(c, a).tag) << '\n';
  std::cout << "achievable corners:";
  for (const auto& v : ach.vertices)
    std::cout << " (" << format_g12(v.d1) << ", " << format_g12(v.d2) << ")";
  std::cout << '\n';
  std::cout << "verdict: " << vd.optimal << " (" << vd.rationale << ")\n";
  if (csv) {
    emit(o, region_to_csv("achievable", ach) + region_to_csv("outer", outer));
    return 0;
  }
  json j = config_json(o, c, a);
  j["achievable"] = json::parse(region_to_json(ach));
  j["outer"] = json::parse(region_to_json(outer));
  j["verdict"] = {{"optimal", vd.optimal}, {"rationale", vd.rationale}};
  emit(o, j.dump(2) + "\n");
  return 0;
}

json tuple_json(const DofTuple& t) {
  json j;
  j["dc"] = t.dc;
  j["dc1"] = t.dc1;
  j["dc2"] = t.dc2;
  j["dp1"] = t.dp1;
  j["dp2"] = t.dp2;
  j["sum"] = t.sum();
  j["cap_rx1"] = t.cap_rx1;
  j["cap_rx2"] = t.cap_rx2;
  j["clipped"] = t.clipped;
  return j;
}

json policy_json(const PowerPolicy& p) {
  return json{{"a1", p.a1}, {"a2", p.a2}, {"a2p", p.a2p}, {"rho", p.rho},
              {"clipped", p.clipped}};
}

int do_alloc(const Options& o) {
  const AntennaConfig c = build_config(o);
  const CsitQuality a = build_alpha(o);
  json j = config_json(o, c, a);
  if (c.kind == ChannelKind::bc) {
    const PowerPolicy policy = bc_optimal_exponents(c, a);
    const DofTuple t = bc_dof_tuple(c, a, policy.a1, policy.a2);
    j["policy"] = policy_json(policy);
    j["tuple"] = tuple_json(t);
    j["phi"] = phi_bc(c, a);
    if (c.m() >= c.n2 && phi_bc(c, a) > 1e-12) {
      const double rho = bc_st_fraction(c, a);
      j["slot_fraction"] = rho;
      j["slot_tuple"] = tuple_json(bc_st_dof_tuple(c, a));
    }
    std::cout << "policy: A1=" << format_g12(policy.a1)
              << " A2=" << format_g12(policy.a2) << '\n';
    std::cout << "streams: dc=" << format_g12(t.dc)
              << " dp1=" << format_g12(t.dp1) << " dp2=" << format_g12(t.dp2)
              << " sum=" << format_g12(t.sum()) << '\n';
  } else if (c.m1 >= c.n2) {
    const PowerPolicy policy = ic1_default_policy(a);
    const Ic1Dof d = ic1_dof_tuple(c, a, policy.a1, policy.a2);
    j["policy"] = policy_json(policy);
    j["phi"] = phi_ic(c, a);
    j["split_c1"] = tuple_json(d.split_c1);
    j["split_c2"] = tuple_json(d.split_c2);
    try {
      const double rho = ic1_st_fraction(c, a);
      j["slot_fraction"] = rho;
      j["slot_tuple"] = tuple_json(ic1_st_dof_tuple(c, a));
    } catch (const ValidationError&) {
      // slot mixing does not apply in this regime
    }
    std::cout << "split c1: dc1=" << format_g12(d.split_c1.dc1)
              << " dp1=" << format_g12(d.split_c1.dp1)
              << " dp2=" << format_g12(d.split_c1.dp2) << '\n';
    std::cout << "split c2: dc2=" << format_g12(d.split_c2.dc2)
              << " dp1=" << format_g12(d.split_c2.dp1)
              << " dp2=" << format_g12(d.split_c2.dp2) << '\n';
  } else {
    if (!o.has_lambda)
      throw ValidationError(
          "the narrow pair needs --lambda (receiver 1 target in [0, N1'])");
    const Ic2Solution sol = ic2_optimal(c, a, o.lambda);
    const Ic2Caps caps = ic2_dof_caps(c, a, sol.policy.a2, sol.policy.a2p);
    const LinearConstraint line = ic2_constraint_line(c, a, sol.branch);
    j["lambda"] = o.lambda;
    j["policy"] = policy_json(sol.policy);
    j["d2"] = sol.d2;
    j["branch"] = to_string(sol.branch);
    j["caps"] = {{"r1_cap", caps.r1_cap},
                 {"r2_c1_cap", caps.r2_c1_cap},
                 {"r2_c2_cap", caps.r2_c2_cap},
                 {"r2_sum_cap", caps.r2_sum_cap},
                 {"dp2", caps.dp2}};
    j["active_line"] = {{"label", to_string(line.label)},
                        {"c1", line.c1},
                        {"c2", line.c2},
                        {"rhs", line.rhs}};
    std::cout << "branch " << to_string(sol.branch)
              << ": A2=" << format_g12(sol.policy.a2)
              << " A2'=" << format_g12(sol.policy.a2p)
              << " d2=" << format_g12(sol.d2) << '\n';
  }
  emit(o, j.dump(2) + "\n");
  return 0;
}

int do_verify(const Options& o) {
  const AntennaConfig c = build_config(o);
  const CsitQuality a = build_alpha(o);
  GridSpec grid{o.grid_step};
  bool ok = true;
  json j = config_json(o, c, a);
  if (c.kind == ChannelKind::bc) {
    const double bound = 4.0 * (c.n1 + c.n2) * o.grid_step + 1e-9;
    const PowerPolicy policy = bc_optimal_exponents(c, a);
    const double closed = bc_dof_tuple(c, a, policy.a1, policy.a2).sum();
    const GridMaxBc g = grid_max_sum_bc(c, a, grid);
    const double dev = closed - g.sum;
    ok = ok && dev <= bound && g.sum <= closed + 1e-9;
    j["sum"] = {{"closed", closed}, {"grid", g.sum}, {"tolerance", bound}};
    std::cout << "sum: closed " << format_g12(closed) << " grid "
              << format_g12(g.sum) << " (tolerance " << format_g12(bound)
              << ")\n";
    if (c.m() >= c.n2 && phi_bc(c, a) > 1e-12) {
      const double closed_st = bc_st_dof_tuple(c, a).sum();
      const GridMaxSt gs = grid_max_st_bc(c, a, grid);
      const double dev_st = closed_st - gs.sum;
      ok = ok && dev_st <= bound && gs.sum <= closed_st + 1e-9;
      j["slot_sum"] = {{"closed", closed_st},
                       {"grid", gs.sum},
                       {"tolerance", bound}};
      std::cout << "slot sum: closed " << format_g12(closed_st) << " grid "
                << format_g12(gs.sum) << '\n';
    }
  } else if (c.m1 < c.n2) {
    const double n1p = std::min(c.m1, c.n1);
    const double bound = 4.0 * (c.n1 + c.n2) * o.grid_step + 1e-9;
    std::map<std::string, int> branches;
    double worst = 0.0;
    for (int i = 0; i <= 10; ++i) {
      const double lambda = n1p * i / 10.0;
      const Ic2Solution sol = ic2_optimal(c, a, lambda);
      const GridMaxIc2 g = grid_max_d2_ic2(c, a, lambda, grid);
      const double dev = sol.d2 - g.d2;
      worst = std::max(worst, std::abs(dev));
      ok = ok && dev <= bound && g.d2 <= sol.d2 + 1e-9;
      ++branches[to_string(sol.branch)];
    }
    j["lambda_points"] = 11;
    j["max_deviation"] = worst;
    j["tolerance"] = bound;
    j["branches"] = branches;
    std::cout << "d2(lambda): max deviation " << format_g12(worst)
              << " over 11 points (tolerance " << format_g12(bound) << ")\n";
    std::cout << "branches:";
    for (const auto& [name, count] : branches)
      std::cout << ' ' << name << 'x' << count;
    std::cout << '\n';
  } else {
    throw ValidationError(
        "verify covers the single transmitter and the narrow pair");
  }
  j["ok"] = ok;
  emit(o, j.dump(2) + "\n");
  std::cout << (ok ? "verified: closed forms match the grid oracle\n"
                   : "verification FAILED\n");
  return ok ? 0 : 3;
}

int do_simulate(const Options& o) {
  const AntennaConfig c = build_config(o);
  const CsitQuality a = build_alpha(o);
  const std::vector<double> snr = parse_snr(o.snr);
  SweepResult res;
  if (c.kind == ChannelKind::bc) {
    if (o.has_rho) {
      res = st_sweep(c, a, o.rho, snr, o.trials, o.seed);
    } else {
      const PowerPolicy policy = bc_optimal_exponents(c, a);
      res = sweep_and_fit(c, a, policy, snr, o.trials, o.seed);
    }
  } else {
    PowerPolicy policy;
    if (c.m1 >= c.n2) {
      policy = ic1_default_policy(a);
    } else {
      const double n1p = std::min(c.m1, c.n1);
      const double lambda = o.has_lambda ? o.lambda : 0.5 * n1p;
      policy = ic2_optimal(c, a, lambda).policy;
    }
    SweepOptions p1{true, false, "pair1."};
    SweepOptions p2{false, true, "pair2."};
    res = sweep_and_fit(c, a, policy, snr, o.trials, o.seed, p1);
    SweepResult r2 = sweep_and_fit(c, a, policy, snr, o.trials, o.seed, p2);
    res.rows.insert(res.rows.end(), r2.rows.begin(), r2.rows.end());
    res.slopes.insert(r2.slopes.begin(), r2.slopes.end());
  }
  for (const auto& [id, fit] : res.slopes)
    std::cout << "slope " << id << " = " << format_g12(fit.slope) << '\n';
  emit(o, rate_csv(res.rows));
  return 0;
}

int do_residual(const Options& o) {
  if (o.alpha.empty())
    throw ValidationError("--alpha needs at least one value");
  const double alpha = o.alpha.front();
  const std::vector<double> snr = parse_snr(o.snr);
  const ResidualSweep rs = residual_slope(alpha, snr, o.trials, o.seed);
  std::vector<RateRow> rows;
  for (std::size_t i = 0; i < rs.p_db.size(); ++i) {
    RateRow r;
    r.p_db = rs.p_db[i];
    r.message_id = "residual_pow";
    r.mean_rate = rs.mean_power[i];
    rows.push_back(r);
  }
  std::cout << "residual slope " << format_g12(rs.fit.slope) << " (expected "
            << format_g12(-alpha) << ")\n";
  emit(o, rate_csv(rows));
  return 0;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{
      "degrees-of-freedom atlas for two-user channels with imperfect "
      "transmitter-side estimates"};
  app.require_subcommand(1);
  Options o;

  auto* region = app.add_subcommand(
      "region", "achievable and outer degrees-of-freedom regions");
  add_common(region, o, true);

  auto* alloc = app.add_subcommand(
      "alloc", "closed-form power exponents and stream splits");
  add_common(alloc, o, true);
  alloc->add_option("--lambda", o.lambda,
                    "receiver 1 common target (narrow pair)");

  auto* verify = app.add_subcommand(
      "verify", "closed forms against the brute-force grid oracle");
  add_common(verify, o, true);
  verify->add_option("--grid-step", o.grid_step, "oracle grid step")
      ->check(CLI::PositiveNumber);

  auto* simulate = app.add_subcommand(
      "simulate", "Monte-Carlo rate sweep and slope fits");
  add_common(simulate, o, true);
  simulate->add_option("--snr-db", o.snr, "power sweep lo:hi:step in dB");
  simulate->add_option("--trials", o.trials, "channel draws per power point")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--lambda", o.lambda,
                       "receiver 1 common target (narrow pair)");
  simulate->add_option("--rho", o.rho, "slot fraction for a mixed bc sweep");

  auto* residual = app.add_subcommand(
      "sweep-residual", "leakage power through an estimate-based null");
  add_common(residual, o, false);
  residual->add_option("--snr-db", o.snr, "power sweep lo:hi:step in dB");
  residual->add_option("--trials", o.trials, "draws per power point")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ExtrasError& e) {
    app.exit(e);
    return 64;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  o.has_lambda = alloc->count("--lambda") > 0 || simulate->count("--lambda") > 0;
  o.has_rho = simulate->count("--rho") > 0;

  try {
    if (*region) return do_region(o);
    if (*alloc) return do_alloc(o);
    if (*verify) return do_verify(o);
    if (*simulate) return do_simulate(o);
    if (*residual) return do_residual(o);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace dofatlas::cli
