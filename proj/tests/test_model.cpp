#include <cmath>

#include "doctest.h"
#include "dofatlas/model.hpp"

using namespace dofatlas;

namespace {

AntennaConfig bc(int m, int n1, int n2) {
  return normalize(bc_config(m, n1, n2));
}

AntennaConfig ic(int m1, int m2, int n1, int n2) {
  return normalize(ic_config(m1, m2, n1, n2));
}

}  // namespace

TEST_CASE("antenna validation") {
  CHECK_THROWS_AS(bc_config(0, 2, 3), ValidationError);
  CHECK_THROWS_AS(bc_config(4, -1, 3), ValidationError);
  CHECK_THROWS_AS(ic_config(4, 3, 0, 3), ValidationError);
  CHECK_THROWS_AS(validate(CsitQuality{-0.1, 0.5}), ValidationError);
  CHECK_THROWS_AS(validate(CsitQuality{0.5, 1.1}), ValidationError);
  CHECK_NOTHROW(validate(CsitQuality{0.0, 1.0}));
}

TEST_CASE("normalization clamps and relabels") {
  const AntennaConfig a = bc(6, 2, 3);
  CHECK(a.m() == 5);
  CHECK(a.n1 == 2);
  CHECK_FALSE(a.swapped);

  const AntennaConfig b = bc(4, 3, 2);
  CHECK(b.n1 == 2);
  CHECK(b.n2 == 3);
  CHECK(b.swapped);

  const AntennaConfig c = ic(4, 3, 2, 3);
  CHECK(c.m1 == 4);
  CHECK(c.m2 == 3);
  CHECK(c.n1 == 2);
  CHECK(c.n2 == 3);
  CHECK_FALSE(c.swapped);

  // Receiver relabeling moves the whole transmit/receive pair.
  const AntennaConfig d = ic(3, 4, 3, 2);
  CHECK(d.m1 == 4);
  CHECK(d.m2 == 3);
  CHECK(d.n1 == 2);
  CHECK(d.n2 == 3);
  CHECK(d.swapped);

  const AntennaConfig e = ic(9, 9, 2, 3);
  CHECK(e.m1 == 5);
  CHECK(e.m2 == 5);

  CHECK_THROWS_AS(ic(1, 1, 3, 3), ValidationError);
}

TEST_CASE("quality shortfall") {
  const AntennaConfig c = bc(4, 2, 3);
  CHECK(phi_bc(c, {0.9, 0.6}) == doctest::Approx(-0.2).epsilon(1e-12));
  CHECK(phi_bc(c, {0.3, 0.2}) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(phi_ic(ic(4, 4, 2, 3), {0.3, 0.2}) ==
        doctest::Approx(0.6).epsilon(1e-12));
  CHECK(phi_ic(ic(5, 5, 2, 3), {0.5, 0.5}) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("effective sum-line exponent, single transmitter") {
  const AntennaConfig c = bc(4, 2, 3);
  CHECK(alpha0_bc(c, {0.9, 0.6}) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(alpha0_bc(c, {0.7, 0.6}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(alpha0_bc(c, {0.3, 0.2}) ==
        doctest::Approx(0.06 / 0.9).epsilon(1e-12));
}

TEST_CASE("effective sum-line exponent, pair") {
  CHECK(alpha0_ic(ic(4, 3, 2, 3), {0.7, 0.4}) == 0.0);
  CHECK(alpha0_ic(ic(4, 4, 2, 3), {1.0, 1.0}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(alpha0_ic(ic(4, 4, 2, 3), {0.3, 0.2}) ==
        doctest::Approx(0.06 / 0.9).epsilon(1e-12));
}

TEST_CASE("stream-class sizes") {
  const DerivedDims a = derived_dims(ic(2, 4, 1, 3));
  CHECK(a.n1p == 1);
  CHECK(a.n2p == 3);
  CHECK(a.n1pp == 2);
  CHECK(a.tau == 0);
  CHECK(a.mu1 == 1);
  CHECK(a.mu2 == 2);
  CHECK(a.delta1 == 0);
  CHECK(a.delta2 == 0);
  CHECK(a.xi == 1);

  const DerivedDims b = derived_dims(ic(3, 3, 2, 4));
  CHECK(b.tau == 0);
  CHECK(b.mu1 == 1);
  CHECK(b.mu2 == 0);
  CHECK(b.delta1 == 0);
  CHECK(b.delta2 == 2);
  CHECK(b.xi == 1);

  const DerivedDims c = derived_dims(ic(2, 5, 1, 4));
  CHECK(c.tau == 0);
  CHECK(c.mu1 == 2);
  CHECK(c.mu2 == 2);
  CHECK(c.delta1 == 0);
  CHECK(c.delta2 == 0);
  CHECK(c.xi == 1);

  const DerivedDims d = derived_dims(ic(2, 5, 3, 4));
  CHECK(d.n1p == 2);
  CHECK(d.tau == 1);
  CHECK(d.mu1 == 1);
  CHECK(d.mu2 == 1);
  CHECK(d.delta1 == 0);
  CHECK(d.delta2 == 1);
  CHECK(d.xi == 1);

  CHECK(mu2_region(ic(2, 4, 1, 3)) == 2);
}

TEST_CASE("stream classes cover the second receiver's signal space") {
  for (int m1 = 1; m1 <= 6; ++m1)
    for (int m2 = 1; m2 <= 6; ++m2)
      for (int n1 = 1; n1 <= 6; ++n1)
        for (int n2 = n1; n2 <= 6; ++n2) {
          AntennaConfig c;
          try {
            c = normalize(ic_config(m1, m2, n1, n2));
          } catch (const ValidationError&) {
            continue;
          }
          if (c.m1 > c.n2) continue;
          const DerivedDims d = derived_dims(c);
          const int n2p = std::min(c.m2, c.n2);
          CHECK(d.tau + d.mu1 + d.mu2 + d.delta1 + d.delta2 == n2p);
          CHECK(d.tau >= 0);
          CHECK(d.mu1 >= 0);
          CHECK(d.mu2 >= 0);
          CHECK(d.delta1 >= 0);
          CHECK(d.delta2 >= 0);
          CHECK(d.xi >= 0);
          CHECK(d.xi <= d.n1p);
        }
}

TEST_CASE("regime classification") {
  CHECK(classify(bc(4, 2, 3), {0.9, 0.6}).tag == RegimeTag::bc_phi_nonpos);
  CHECK(classify(bc(4, 2, 3), {0.3, 0.2}).tag == RegimeTag::bc_phi_pos);
  CHECK(classify(ic(4, 3, 2, 3), {0.5, 0.5}).tag == RegimeTag::ic_i1);
  CHECK(classify(ic(4, 4, 2, 3), {0.9, 0.6}).tag ==
        RegimeTag::ic_i2_phi_nonpos);
  CHECK(classify(ic(4, 4, 2, 3), {0.3, 0.2}).tag == RegimeTag::ic_i2_phi_pos);
  CHECK(classify(ic(3, 3, 2, 4), {0.5, 0.5}).tag == RegimeTag::ic_ii1);

  const Regime r = classify(ic(2, 4, 1, 3), {0.4, 0.4});
  CHECK(r.tag == RegimeTag::ic_ii2b_low);
  CHECK(r.thr_low == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.thr_high == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(classify(ic(2, 4, 1, 3), {0.6, 0.4}).tag == RegimeTag::ic_ii2b_mid);
  CHECK(classify(ic(2, 4, 1, 3), {0.8, 0.4}).tag == RegimeTag::ic_ii2b_high);
  CHECK(classify(ic(2, 5, 1, 4), {0.8, 0.4}).tag == RegimeTag::ic_ii2a_high);
  CHECK(to_string(RegimeTag::ic_ii2a_high) == "IC_II2a_high");
  CHECK(to_string(RegimeTag::bc_phi_nonpos) == "BC_PhiNonPos");
}
