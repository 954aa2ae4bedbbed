#include <cstdlib>
#include <string>

#include "doctest.h"
#include "dofatlas/kernels.hpp"
#include "dofatlas/oracle.hpp"

using namespace dofatlas;
using doctest::Approx;

namespace {

AntennaConfig bc423() { return normalize(bc_config(4, 2, 3)); }

AntennaConfig ic(int m1, int m2, int n1, int n2) {
  return normalize(ic_config(m1, m2, n1, n2));
}

struct EnvGuard {
  std::string key;
  std::string old;
  bool had;
  EnvGuard(const char* k, const char* value) : key(k) {
    const char* p = std::getenv(k);
    had = p != nullptr;
    if (had) old = p;
    setenv(k, value, 1);
  }
  ~EnvGuard() {
    if (had)
      setenv(key.c_str(), old.c_str(), 1);
    else
      unsetenv(key.c_str());
  }
};

}  // namespace

TEST_CASE("grid certifies the single-transmitter closed forms") {
  const AntennaConfig c = bc423();
  const CsitQuality alphas[] = {{0.9, 0.6}, {0.6, 0.5}, {0.45, 0.3},
                                {0.1, 0.2}};
  const double closed[] = {3.6, 3.35, 3.1, 3.0};
  for (int i = 0; i < 4; ++i) {
    const GridMaxBc g = grid_max_sum_bc(c, alphas[i]);
    CHECK(g.sum <= closed[i] + 1e-9);
    CHECK(g.sum >= closed[i] - 0.02);
  }
}

TEST_CASE("grid certifies the slot-mixing closed forms") {
  const AntennaConfig c = bc423();
  const CsitQuality alphas[] = {{0.9, 0.6}, {0.6, 0.5}, {0.45, 0.3},
                                {0.1, 0.2}};
  const double closed[] = {3.6, 3.35, 3.0 + 0.135 / 0.85, 3.0 + 0.02 / 1.1};
  const double rho_star[] = {0.0, 0.375, 0.4 / 0.85, 1.0 / 1.1};
  for (int i = 0; i < 4; ++i) {
    const GridMaxSt g = grid_max_st_bc(c, alphas[i]);
    CHECK(g.sum <= closed[i] + 1e-9);
    CHECK(g.sum >= closed[i] - 0.02);
    CHECK(std::abs(g.rho - rho_star[i]) <= 1.0 / 400.0 + 1e-9);
  }
}

TEST_CASE("grid certifies the narrow-pair optimizer") {
  struct Case {
    AntennaConfig c;
    CsitQuality a;
    double lambda;
  };
  const Case cases[] = {
      {ic(2, 4, 1, 3), {0.4, 0.4}, 0.6},  {ic(2, 4, 1, 3), {0.4, 0.4}, 0.9},
      {ic(3, 3, 2, 4), {0.5, 0.5}, 0.5},  {ic(2, 5, 1, 4), {0.8, 0.8}, 0.9},
      {ic(2, 5, 3, 4), {0.3, 0.3}, 1.2},  {ic(2, 5, 3, 4), {0.8, 0.8}, 1.5},
  };
  for (const auto& k : cases) {
    const Ic2Solution s = ic2_optimal(k.c, k.a, k.lambda);
    const GridMaxIc2 g = grid_max_d2_ic2(k.c, k.a, k.lambda);
    CHECK(g.feasible);
    CHECK(g.d2 <= s.d2 + 1e-9);
    CHECK(g.d2 >= s.d2 - 0.02);
  }
  CHECK_THROWS_AS(grid_max_d2_ic2(ic(2, 4, 1, 3), {0.4, 0.4}, 1.5),
                  ValidationError);
}

TEST_CASE("grid spec validation") {
  const AntennaConfig c = bc423();
  CHECK_THROWS_AS(grid_max_sum_bc(c, {0.5, 0.5}, GridSpec{0.0}),
                  ValidationError);
  CHECK_THROWS_AS(grid_max_sum_bc(c, {0.5, 0.5}, GridSpec{0.7}),
                  ValidationError);
}

TEST_CASE("scans are variant independent") {
  if (kernels::avx2_kernels() == nullptr) return;
  const AntennaConfig c = bc423();
  const AntennaConfig c2 = ic(2, 5, 3, 4);
  GridMaxBc a, b;
  GridMaxSt sa, sb;
  GridMaxIc2 ia, ib;
  {
    EnvGuard env("DOF_ATLAS_SIMD", "scalar");
    a = grid_max_sum_bc(c, {0.45, 0.3});
    sa = grid_max_st_bc(c, {0.45, 0.3});
    ia = grid_max_d2_ic2(c2, {0.3, 0.3}, 1.2);
  }
  {
    EnvGuard env("DOF_ATLAS_SIMD", "avx2");
    b = grid_max_sum_bc(c, {0.45, 0.3});
    sb = grid_max_st_bc(c, {0.45, 0.3});
    ib = grid_max_d2_ic2(c2, {0.3, 0.3}, 1.2);
  }
  CHECK(a.sum == b.sum);
  CHECK(a.a1 == b.a1);
  CHECK(a.a2 == b.a2);
  CHECK(sa.sum == sb.sum);
  CHECK(sa.rho == sb.rho);
  CHECK(ia.d2 == ib.d2);
  CHECK(ia.a2 == ib.a2);
  CHECK(ia.a2p == ib.a2p);
}

TEST_CASE("scans are thread-count independent") {
  const AntennaConfig c = bc423();
  const AntennaConfig c2 = ic(2, 4, 1, 3);
  GridMaxBc a, b;
  GridMaxIc2 ia, ib;
  {
    EnvGuard env("DOF_ATLAS_THREADS", "1");
    a = grid_max_sum_bc(c, {0.6, 0.5});
    ia = grid_max_d2_ic2(c2, {0.4, 0.4}, 0.6);
  }
  {
    EnvGuard env("DOF_ATLAS_THREADS", "3");
    b = grid_max_sum_bc(c, {0.6, 0.5});
    ib = grid_max_d2_ic2(c2, {0.4, 0.4}, 0.6);
  }
  CHECK(a.sum == b.sum);
  CHECK(a.a1 == b.a1);
  CHECK(a.a2 == b.a2);
  CHECK(ia.d2 == ib.d2);
  CHECK(ia.a2 == ib.a2);
  CHECK(ia.a2p == ib.a2p);
}
