#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

namespace dofatlas {

// Deterministic 64-bit finalizer (splitmix64 increment + scramble).
std::uint64_t mix64(std::uint64_t z);

// Order-sensitive combination of a seed and a stream key. Every RNG stream in
// the project is derived from (seed, keys...) so results never depend on the
// thread schedule.
std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t key);
std::uint64_t hash3(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

// Small deterministic PRNG (splitmix64). Chosen over <random> engines because
// its output sequence is pinned by the algorithm, not by the standard library
// implementation.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  // Uniform in (0, 1]; never 0, so log() is safe.
  double next_unit();
  // Standard complex Gaussian: real and imaginary parts N(0, 1/2).
  std::complex<double> next_cn01();

 private:
  std::uint64_t state_;
};

// Worker count: DOF_ATLAS_THREADS when set to a positive integer, else the
// hardware concurrency, else 1.
int thread_count();

// Runs fn(i) for every i in [0, n). fn must only write state owned by its
// index; chunk boundaries depend on the worker count, results must not.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Locale-independent formatting with 12 significant digits.
std::string format_g12(double value);

// Least-squares line fit y = slope*x + intercept; rms is the residual RMS.
struct LineFit {
  double slope{0.0};
  double intercept{0.0};
  double rms{0.0};
};

LineFit fit_line(const double* x, const double* y, std::size_t n);

// Nearest rational p/q with q <= max_den; used to snap slot fractions.
double snap_rational(double value, int max_den);

}  // namespace dofatlas
