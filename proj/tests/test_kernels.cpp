#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "dofatlas/alloc.hpp"
#include "dofatlas/kernels.hpp"

using namespace dofatlas;

namespace {

struct EnvGuard {
  std::string key;
  std::string old;
  bool had;
  EnvGuard(const char* k, const char* value) : key(k) {
    const char* p = std::getenv(k);
    had = p != nullptr;
    if (had) old = p;
    if (value)
      setenv(k, value, 1);
    else
      unsetenv(k);
  }
  ~EnvGuard() {
    if (had)
      setenv(key.c_str(), old.c_str(), 1);
    else
      unsetenv(key.c_str());
  }
};

kernels::BcSumRowArgs bc_args() {
  kernels::BcSumRowArgs a;
  a.a1 = 0.55;
  a.alpha1 = 0.7;
  a.a2_start = 0.0;
  a.a2_step = 1.0 / 400.0;
  a.i0 = 0;
  a.c1 = 1.0;
  a.c2zf = 2.0;
  a.c2sub = 1.0;
  a.m1 = 2.0;
  a.m2 = 3.0;
  a.n = 401;
  return a;
}

kernels::Ic2RowArgs ic2_args(const Ic2Program& prog, double a2,
                             double lambda) {
  kernels::Ic2RowArgs a;
  a.a2 = a2;
  a.a2p_start = prog.alpha1;
  a.a2p_step = 1.0 / 400.0;
  a.i0 = 0;
  a.alpha1 = prog.alpha1;
  a.lambda = lambda;
  a.n1p = prog.dims.n1p;
  a.n2 = prog.n2;
  a.tau = prog.dims.tau;
  a.mu1 = prog.dims.mu1;
  a.mu2 = prog.dims.mu2;
  a.delta1 = prog.dims.delta1;
  a.delta2 = prog.dims.delta2;
  a.xi = prog.dims.xi;
  a.m1 = prog.m1;
  a.wide = prog.wide;
  const double t = std::max(a2 - prog.alpha1, 0.0);
  a.row_feasible =
      !prog.wide ||
      lambda <= prog.m1 - prog.dims.mu2 * a2 - prog.dims.delta2 * t + 1e-12;
  a.n = 281;
  return a;
}

}  // namespace

TEST_CASE("scalar row kernel equals the stream-bundle sum") {
  const AntennaConfig c = normalize(bc_config(4, 2, 3));
  const CsitQuality alpha{0.7, 0.6};
  const kernels::BcSumRowArgs a = bc_args();
  std::vector<double> out(a.n);
  kernels::scalar_kernels().bc_sum_row(a, out.data());
  for (std::size_t i = 0; i < a.n; ++i) {
    const double a2 = a.a2_start + static_cast<double>(a.i0 + i) * a.a2_step;
    CHECK(out[i] == bc_dof_tuple(c, alpha, a.a1, a2).sum());
  }
}

TEST_CASE("scalar row kernel equals the narrow-pair objective") {
  const AntennaConfig cfgs[] = {normalize(ic_config(2, 5, 3, 4)),
                                normalize(ic_config(3, 3, 2, 4))};
  for (const auto& c : cfgs) {
    const Ic2Program prog = ic2_program(c, {0.3, 0.3});
    const double lambda = 0.6 * prog.dims.n1p;
    for (double a2 : {0.0, 0.25, 0.61}) {
      const kernels::Ic2RowArgs a = ic2_args(prog, a2, lambda);
      std::vector<double> out(a.n);
      kernels::scalar_kernels().ic2_row(a, out.data());
      for (std::size_t i = 0; i < a.n; ++i) {
        const double a2p =
            a.a2p_start + static_cast<double>(a.i0 + i) * a.a2p_step;
        if (!a.row_feasible || !ic2_lambda_ok(prog, a2, a2p, lambda)) {
          CHECK(std::isinf(out[i]));
          CHECK(out[i] < 0.0);
        } else {
          CHECK(out[i] == ic2_objective(prog, a2, a2p, lambda));
        }
      }
    }
  }
}

TEST_CASE("scalar mix kernel follows the three-line envelope") {
  kernels::MixRowArgs a;
  a.base0 = 1.0;
  a.step0 = -0.004;
  a.base1 = 0.2;
  a.step1 = 0.01;
  a.base2 = 2.0;
  a.step2 = -0.006;
  a.i0 = 5;
  a.n = 123;
  std::vector<double> out(a.n);
  kernels::scalar_kernels().mix_row(a, out.data());
  for (std::size_t i = 0; i < a.n; ++i) {
    const double idx = static_cast<double>(a.i0 + i);
    const double l0 = a.base0 + idx * a.step0;
    const double l1 = a.base1 + idx * a.step1;
    const double l2 = a.base2 + idx * a.step2;
    CHECK(out[i] == std::max(l0, std::min(l1, l2)));
  }
}

TEST_CASE("vector kernels are bit identical to scalar") {
  const kernels::RowKernels* v = kernels::avx2_kernels();
  if (v == nullptr) return;  // not compiled in or not supported by the CPU

  {
    kernels::BcSumRowArgs a = bc_args();
    a.i0 = 3;
    a.n = 257;
    std::vector<double> s(a.n), w(a.n);
    kernels::scalar_kernels().bc_sum_row(a, s.data());
    v->bc_sum_row(a, w.data());
    CHECK(std::memcmp(s.data(), w.data(), a.n * sizeof(double)) == 0);
  }
  {
    const AntennaConfig c = normalize(ic_config(2, 5, 3, 4));
    const Ic2Program prog = ic2_program(c, {0.3, 0.3});
    for (double a2 : {0.0, 0.4, 0.9}) {
      kernels::Ic2RowArgs a = ic2_args(prog, a2, 1.2);
      a.i0 = 2;
      a.n = 257;
      std::vector<double> s(a.n), w(a.n);
      kernels::scalar_kernels().ic2_row(a, s.data());
      v->ic2_row(a, w.data());
      CHECK(std::memcmp(s.data(), w.data(), a.n * sizeof(double)) == 0);
    }
  }
  {
    kernels::MixRowArgs a;
    a.base0 = 0.5;
    a.step0 = 0.003;
    a.base1 = 1.4;
    a.step1 = -0.002;
    a.base2 = 1.1;
    a.step2 = 0.001;
    a.i0 = 7;
    a.n = 257;
    std::vector<double> s(a.n), w(a.n);
    kernels::scalar_kernels().mix_row(a, s.data());
    v->mix_row(a, w.data());
    CHECK(std::memcmp(s.data(), w.data(), a.n * sizeof(double)) == 0);
  }
}

TEST_CASE("kernel selection honors the environment override") {
  {
    EnvGuard env("DOF_ATLAS_SIMD", "scalar");
    CHECK(std::string(kernels::active_kernels().name) == "scalar");
  }
  {
    EnvGuard env("DOF_ATLAS_SIMD", "avx2");
    if (kernels::avx2_kernels() != nullptr)
      CHECK(std::string(kernels::active_kernels().name) == "avx2");
    else
      CHECK_THROWS_AS(kernels::active_kernels(), ValidationError);
  }
  {
    EnvGuard env("DOF_ATLAS_SIMD", "mmx");
    CHECK_THROWS_AS(kernels::active_kernels(), ValidationError);
  }
  {
    EnvGuard env("DOF_ATLAS_SIMD", nullptr);
    const std::string name = kernels::active_kernels().name;
    if (kernels::avx2_kernels() != nullptr)
      CHECK(name == "avx2");
    else
      CHECK(name == "scalar");
  }
}
