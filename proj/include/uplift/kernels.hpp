// Data-parallel arithmetic kernels used by the numeric core.
//
// Every kernel has a scalar reference implementation and, on x86-64 builds,
// an AVX2+FMA variant selected once at runtime. The scalar path is the
// semantic reference; the vector variants are equivalence-tested against it.
// `sum` and `dot` use Neumaier-compensated accumulation in both backends so
// that long reductions (group weights over 10^6 records) stay accurate enough
// for the ratio invariants downstream.
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace uplift::kernels {

// Compensated (Neumaier) accumulator for scalar call sites.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

struct Backend {
  const char* name;
  // sum(x)
  double (*sum)(const double*, std::size_t);
  // sum(a[i]*b[i])
  double (*dot)(const double*, const double*, std::size_t);
  // sum(a[i]*b[i]*c[i])
  double (*dot3)(const double*, const double*, const double*, std::size_t);
  // y[i] += a*x[i]
  void (*axpy)(double, const double*, double*, std::size_t);
  // out[i] = 1/(1+exp(-z[i]))
  void (*sigmoid)(const double*, double*, std::size_t);
  // out[i] = w[i]*(a[i]-b[i])
  void (*weighted_diff)(const double*, const double*, const double*, double*,
                        std::size_t);
};

// Active backend. Defaults to the fastest ISA the CPU supports; the
// UPLIFT_KERNELS environment variable ("scalar" or "avx2") overrides.
const Backend& active();

// Force a backend by name; returns false if unavailable on this build/CPU.
bool set_backend(std::string_view name);

std::vector<std::string> available_backends();

inline double sum(std::span<const double> x) {
  return active().sum(x.data(), x.size());
}
inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}
inline double dot3(std::span<const double> a, std::span<const double> b,
                   std::span<const double> c) {
  return active().dot3(a.data(), b.data(), c.data(), a.size());
}
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}
inline void sigmoid(std::span<const double> z, std::span<double> out) {
  active().sigmoid(z.data(), out.data(), z.size());
}
inline void weighted_diff(std::span<const double> w, std::span<const double> a,
                          std::span<const double> b, std::span<double> out) {
  active().weighted_diff(w.data(), a.data(), b.data(), out.data(), w.size());
}

}  // namespace uplift::kernels
