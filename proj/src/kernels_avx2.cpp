// AVX2+FMA kernel variants. Compiled only on x86-64; selected at runtime by
// the dispatcher in kernels.cpp when the CPU reports avx2 and fma.
//
// Reductions keep a Neumaier compensation term per lane so their accuracy
// matches the scalar reference even though the summation order differs.
// Products are formed with plain mul (not fma) so per-element rounding is
// identical to the scalar path.
#include "uplift/kernels.hpp"

#if defined(UPLIFT_AVX2_BUILD)

#include <immintrin.h>

#include <cstdint>

namespace uplift::kernels {

namespace {

const __m256d kAbsMask =
    _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

struct VecNeumaier {
  __m256d sum = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();

  inline void add(__m256d x) {
    const __m256d t = _mm256_add_pd(sum, x);
    const __m256d abs_sum = _mm256_and_pd(sum, kAbsMask);
    const __m256d abs_x = _mm256_and_pd(x, kAbsMask);
    const __m256d big_sum = _mm256_cmp_pd(abs_sum, abs_x, _CMP_GE_OQ);
    const __m256d e1 = _mm256_add_pd(_mm256_sub_pd(sum, t), x);
    const __m256d e2 = _mm256_add_pd(_mm256_sub_pd(x, t), sum);
    comp = _mm256_add_pd(comp, _mm256_blendv_pd(e2, e1, big_sum));
    sum = t;
  }

  // Fold the four lanes (and their compensation terms) into a scalar
  // compensated accumulator, so the tail elements can join the same sum.
  inline void drain(CompensatedSum& acc) const {
    alignas(32) double s[4], c[4];
    _mm256_store_pd(s, sum);
    _mm256_store_pd(c, comp);
    for (int i = 0; i < 4; ++i) acc.add(s[i]);
    for (int i = 0; i < 4; ++i) acc.add(c[i]);
  }
};

double avx2_sum(const double* x, std::size_t n) {
  VecNeumaier v;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) v.add(_mm256_loadu_pd(x + i));
  CompensatedSum acc;
  v.drain(acc);
  for (; i < n; ++i) acc.add(x[i]);
  return acc.value();
}

double avx2_dot(const double* a, const double* b, std::size_t n) {
  VecNeumaier v;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    v.add(_mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  CompensatedSum acc;
  v.drain(acc);
  for (; i < n; ++i) acc.add(a[i] * b[i]);
  return acc.value();
}

double avx2_dot3(const double* a, const double* b, const double* c,
                 std::size_t n) {
  VecNeumaier v;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ab =
        _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    v.add(_mm256_mul_pd(ab, _mm256_loadu_pd(c + i)));
  }
  CompensatedSum acc;
  v.drain(acc);
  for (; i < n; ++i) acc.add(a[i] * b[i] * c[i]);
  return acc.value();
}

void avx2_axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

// exp for arguments in [-746, 0]: Cephes-style rational approximation after
// reduction by ln(2). Good to ~1 ulp over that range, which is all the
// sigmoid below needs.
inline __m256d exp_nonpos_pd(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
  const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d lo = _mm256_set1_pd(-708.0);

  x = _mm256_max_pd(x, lo);

  __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  // r = x - n*ln2, split into two parts for accuracy.
  __m256d r = _mm256_fnmadd_pd(n, c1, x);
  r = _mm256_fnmadd_pd(n, c2, r);
  const __m256d rr = _mm256_mul_pd(r, r);

  __m256d p = _mm256_set1_pd(1.26177193074810590878e-4);
  p = _mm256_fmadd_pd(p, rr, _mm256_set1_pd(3.02994407707441961300e-2));
  p = _mm256_fmadd_pd(p, rr, _mm256_set1_pd(9.99999999999999999910e-1));
  p = _mm256_mul_pd(p, r);

  __m256d q = _mm256_set1_pd(3.00198505138664455042e-6);
  q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.52448340349684104192e-3));
  q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.27265548208155028766e-1));
  q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.00000000000000000005e0));

  const __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  __m256d res = _mm256_add_pd(one, _mm256_add_pd(e, e));

  // res * 2^n via exponent-field arithmetic; |n| <= 1075 here.
  const __m128i n32 = _mm256_cvtpd_epi32(n);
  const __m256i n64 = _mm256_cvtepi32_epi64(n32);
  const __m256i bias = _mm256_add_epi64(n64, _mm256_set1_epi64x(1023));
  const __m256d pow2n = _mm256_castsi256_pd(_mm256_slli_epi64(bias, 52));
  return _mm256_mul_pd(res, pow2n);
}

void avx2_sigmoid(const double* z, double* out, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d zi = _mm256_loadu_pd(z + i);
    const __m256d neg_abs = _mm256_sub_pd(zero, _mm256_and_pd(zi, kAbsMask));
    const __m256d e = exp_nonpos_pd(neg_abs);
    const __m256d nonneg = _mm256_cmp_pd(zi, zero, _CMP_GE_OQ);
    const __m256d numer = _mm256_blendv_pd(e, one, nonneg);
    _mm256_storeu_pd(out + i, _mm256_div_pd(numer, _mm256_add_pd(one, e)));
  }
  for (; i < n; ++i) {
    const double e = std::exp(-std::abs(z[i]));
    const double numer = z[i] >= 0.0 ? 1.0 : e;
    out[i] = numer / (1.0 + e);
  }
}

void avx2_weighted_diff(const double* w, const double* a, const double* b,
                        double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(w + i), d));
  }
  for (; i < n; ++i) out[i] = w[i] * (a[i] - b[i]);
}

}  // namespace

const Backend kAvx2Backend = {
    "avx2",    avx2_sum,     avx2_dot,           avx2_dot3,
    avx2_axpy, avx2_sigmoid, avx2_weighted_diff,
};

}  // namespace uplift::kernels

#endif  // UPLIFT_AVX2_BUILD
