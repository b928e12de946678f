#include <cstddef>

#include "dnf/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

namespace dnf::kernels {
namespace {

#define DNF_AVX2 __attribute__((target("avx2,fma")))

// Vectorized exp, Cephes-style rational approximation on the reduced
// argument r = x - n*ln2, scaled by 2^n through direct exponent assembly.
// Inputs are clamped to [-708, 709] so the exponent field stays in range;
// the only consumer is the sigmoid, whose tails saturate either way.
DNF_AVX2 inline __m256d exp_pd(__m256d x) {
  const __m256d clamp_hi = _mm256_set1_pd(709.0);
  const __m256d clamp_lo = _mm256_set1_pd(-708.0);
  x = _mm256_min_pd(x, clamp_hi);
  x = _mm256_max_pd(x, clamp_lo);

  const __m256d log2e = _mm256_set1_pd(1.44269504088896340736);
  const __m256d px = _mm256_floor_pd(_mm256_fmadd_pd(x, log2e, _mm256_set1_pd(0.5)));
  const __m128i n32 = _mm256_cvttpd_epi32(px);

  // r = x - px*ln2, with ln2 split for extra precision
  const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);
  x = _mm256_fnmadd_pd(px, ln2_hi, x);
  x = _mm256_fnmadd_pd(px, ln2_lo, x);

  const __m256d xx = _mm256_mul_pd(x, x);
  __m256d p = _mm256_set1_pd(1.26177193074810590878e-4);
  p = _mm256_fmadd_pd(p, xx, _mm256_set1_pd(3.02994407707441961300e-2));
  p = _mm256_fmadd_pd(p, xx, _mm256_set1_pd(9.99999999999999999910e-1));
  p = _mm256_mul_pd(p, x);

  __m256d q = _mm256_set1_pd(3.00198505138664455042e-6);
  q = _mm256_fmadd_pd(q, xx, _mm256_set1_pd(2.52448340349684104192e-3));
  q = _mm256_fmadd_pd(q, xx, _mm256_set1_pd(2.27265548208155028766e-1));
  q = _mm256_fmadd_pd(q, xx, _mm256_set1_pd(2.00000000000000000005e0));

  // exp(r) = 1 + 2*r*P(r^2) / (Q(r^2) - r*P(r^2))
  __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  e = _mm256_fmadd_pd(_mm256_set1_pd(2.0), e, _mm256_set1_pd(1.0));

  const __m256i n64 = _mm256_cvtepi32_epi64(n32);
  const __m256i pow2 = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(e, _mm256_castsi256_pd(pow2));
}

DNF_AVX2 void sigmoid_avx2(const double* u, double* out, std::size_t n, double mu, double theta) {
  const __m256d neg_mu = _mm256_set1_pd(-mu);
  const __m256d th = _mm256_set1_pd(theta);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // same sub-then-mul order as the scalar kernel
    const __m256d t = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(u + i), th), neg_mu);
    const __m256d e = exp_pd(t);
    _mm256_storeu_pd(out + i, _mm256_div_pd(one, _mm256_add_pd(one, e)));
  }
  for (; i < n; ++i) {
    out[i] = 1.0 / (1.0 + __builtin_exp(-mu * (u[i] - theta)));
  }
}

DNF_AVX2 void scale_avx2(const double* x, double s, double* out, std::size_t n) {
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(sv, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) out[i] = s * x[i];
}

DNF_AVX2 void axpy_avx2(const double* a, const double* b, double tau, double* out, std::size_t n) {
  const __m256d tv = _mm256_set1_pd(tau);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(tv, _mm256_loadu_pd(b + i), _mm256_loadu_pd(a + i)));
  }
  for (; i < n; ++i) out[i] = a[i] + tau * b[i];
}

DNF_AVX2 void axpy2_avx2(const double* a, const double* b, const double* c, double tau,
                         double* out, std::size_t n) {
  const __m256d tv = _mm256_set1_pd(tau);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d bc = _mm256_add_pd(_mm256_loadu_pd(b + i), _mm256_loadu_pd(c + i));
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(tv, bc, _mm256_loadu_pd(a + i)));
  }
  for (; i < n; ++i) out[i] = a[i] + tau * (b[i] + c[i]);
}

// Reductions keep one vector accumulator; lanes are combined left to right,
// then the scalar tail is appended. Order is fixed, results reproducible.
DNF_AVX2 inline double hsum(__m256d acc) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  return ((lanes[0] + lanes[1]) + lanes[2]) + lanes[3];
}

DNF_AVX2 double weighted_sum_avx2(const double* x, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i), acc);
  }
  double total = hsum(acc);
  for (; i < n; ++i) total += w[i] * x[i];
  return total;
}

DNF_AVX2 double weighted_sumsq_avx2(const double* x, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_mul_pd(xv, xv), acc);
  }
  double total = hsum(acc);
  for (; i < n; ++i) total += w[i] * x[i] * x[i];
  return total;
}

DNF_AVX2 double weighted_diffsq_avx2(const double* a, const double* b, const double* w,
                                     std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_mul_pd(d, d), acc);
  }
  double total = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    total += w[i] * d * d;
  }
  return total;
}

#undef DNF_AVX2

constexpr Ops kAvx2Ops = {
    "avx2",
    sigmoid_avx2,
    scale_avx2,
    axpy_avx2,
    axpy2_avx2,
    weighted_sum_avx2,
    weighted_sumsq_avx2,
    weighted_diffsq_avx2,
};

}  // namespace

const Ops* avx2_ops() {
  const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &kAvx2Ops : nullptr;
}

}  // namespace dnf::kernels

#else  // non-x86 builds have no AVX2 variant

namespace dnf::kernels {
const Ops* avx2_ops() { return nullptr; }
}  // namespace dnf::kernels

#endif
