#include "uplift/kernels.hpp"

#include <cstdlib>
#include <mutex>

namespace uplift::kernels {

#if defined(UPLIFT_AVX2_BUILD)
extern const Backend kAvx2Backend;  // defined in kernels_avx2.cpp
#endif

namespace {

double scalar_sum(const double* x, std::size_t n) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) acc.add(x[i]);
  return acc.value();
}

double scalar_dot(const double* a, const double* b, std::size_t n) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) acc.add(a[i] * b[i]);
  return acc.value();
}

double scalar_dot3(const double* a, const double* b, const double* c,
                   std::size_t n) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) acc.add(a[i] * b[i] * c[i]);
  return acc.value();
}

void scalar_axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scalar_sigmoid(const double* z, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    // exp of a non-positive argument only; no overflow for any input.
    const double e = std::exp(-std::abs(z[i]));
    const double numer = z[i] >= 0.0 ? 1.0 : e;
    out[i] = numer / (1.0 + e);
  }
}

void scalar_weighted_diff(const double* w, const double* a, const double* b,
                          double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = w[i] * (a[i] - b[i]);
}

constexpr Backend kScalarBackend = {
    "scalar",    scalar_sum,     scalar_dot,           scalar_dot3,
    scalar_axpy, scalar_sigmoid, scalar_weighted_diff,
};

const Backend* g_active = nullptr;
std::once_flag g_init_flag;

bool avx2_usable() {
#if defined(UPLIFT_AVX2_BUILD)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

void init_backend() {
  const Backend* chosen = &kScalarBackend;
#if defined(UPLIFT_AVX2_BUILD)
  if (avx2_usable()) chosen = &kAvx2Backend;
#endif
  if (const char* env = std::getenv("UPLIFT_KERNELS")) {
    const std::string_view want(env);
    if (want == "scalar") chosen = &kScalarBackend;
#if defined(UPLIFT_AVX2_BUILD)
    if (want == "avx2" && avx2_usable()) chosen = &kAvx2Backend;
#endif
  }
  g_active = chosen;
}

}  // namespace

const Backend& active() {
  std::call_once(g_init_flag, init_backend);
  return *g_active;
}

bool set_backend(std::string_view name) {
  std::call_once(g_init_flag, init_backend);
  if (name == "scalar") {
    g_active = &kScalarBackend;
    return true;
  }
#if defined(UPLIFT_AVX2_BUILD)
  if (name == "avx2" && avx2_usable()) {
    g_active = &kAvx2Backend;
    return true;
  }
#endif
  return false;
}

std::vector<std::string> available_backends() {
  std::vector<std::string> out{"scalar"};
  if (avx2_usable()) out.push_back("avx2");
  return out;
}

}  // namespace uplift::kernels
