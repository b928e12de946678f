#pragma once

#include <cstddef>

namespace dnf::kernels {

// Data-parallel inner loops, one implementation per instruction set. The
// scalar variant is the reference; SIMD variants are equivalence-tested
// against it. Every variant uses a fixed accumulation order (lane-major for
// SIMD, index order for scalar), so results are reproducible per variant.
struct Ops {
  const char* name;

  // out[i] = 1 / (1 + exp(-mu * (u[i] - theta))); saturates cleanly for
  // large |mu * (u - theta)|.
  void (*sigmoid)(const double* u, double* out, std::size_t n, double mu, double theta);

  // out[i] = s * x[i]
  void (*scale)(const double* x, double s, double* out, std::size_t n);

  // out[i] = a[i] + tau * b[i]
  void (*axpy)(const double* a, const double* b, double tau, double* out, std::size_t n);

  // out[i] = a[i] + tau * (b[i] + c[i])
  void (*axpy2)(const double* a, const double* b, const double* c, double tau,
                double* out, std::size_t n);

  // sum_i w[i] * x[i]
  double (*weighted_sum)(const double* x, const double* w, std::size_t n);

  // sum_i w[i] * x[i]^2
  double (*weighted_sumsq)(const double* x, const double* w, std::size_t n);

  // sum_i w[i] * (a[i] - b[i])^2
  double (*weighted_diffsq)(const double* a, const double* b, const double* w, std::size_t n);
};

/// Reference implementation, always available.
const Ops& scalar_ops();

/// AVX2+FMA implementation, or nullptr when the CPU lacks support.
const Ops* avx2_ops();

/// Variant used by the library. Picked once per process: AVX2 when the CPU
/// supports it, scalar otherwise. Overridable with DNF_KERNELS=scalar|avx2
/// (an unsupported request falls back to scalar).
const Ops& active_ops();

}  // namespace dnf::kernels
