#include "dofatlas/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <thread>
#include <vector>

namespace dofatlas {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t key) {
  return mix64(seed ^ (key + 0x9e3779b97f4a7c15ULL + (seed << 12) + (seed >> 4)));
}

std::uint64_t hash3(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return hash_combine(hash_combine(seed, a), b);
}

std::uint64_t SplitMix64::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::next_unit() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

std::complex<double> SplitMix64::next_cn01() {
  // Box-Muller; per-part variance 1/2 so E|z|^2 = 1.
  const double u1 = next_unit();
  const double u2 = next_unit();
  const double r = std::sqrt(-std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(phi), r * std::sin(phi)};
}

int thread_count() {
  if (const char* env = std::getenv("DOF_ATLAS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t workers =
      std::min(static_cast<std::size_t>(thread_count()), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * n / workers;
    const std::size_t hi = (w + 1) * n / workers;
    pool.emplace_back([&fn, &errors, lo, hi, w] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string format_g12(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

LineFit fit_line(const double* x, const double* y, std::size_t n) {
  LineFit fit;
  if (n == 0) return fit;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double dn = static_cast<double>(n);
  const double det = dn * sxx - sx * sx;
  if (det != 0.0) {
    fit.slope = (dn * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / dn;
  } else {
    fit.intercept = sy / dn;
  }
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / dn);
  return fit;
}

double snap_rational(double value, int max_den) {
  double best = value;
  double best_err = 1e300;
  for (int q = 1; q <= max_den; ++q) {
    const double p = std::round(value * q);
    const double cand = p / q;
    const double err = std::fabs(cand - value);
    if (err < best_err - 1e-15) {
      best_err = err;
      best = cand;
    }
  }
  return best;
}

}  // namespace dofatlas
