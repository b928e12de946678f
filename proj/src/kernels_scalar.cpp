#include <cmath>
#include <cstddef>

#include "dnf/kernels.hpp"

namespace dnf::kernels {
namespace {

// IEEE semantics make the plain expression saturation-safe: exp overflowing
// to +inf yields 0, exp underflowing to 0 yields 1.
void sigmoid_scalar(const double* u, double* out, std::size_t n, double mu, double theta) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = 1.0 / (1.0 + std::exp(-mu * (u[i] - theta)));
  }
}

void scale_scalar(const double* x, double s, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = s * x[i];
}

void axpy_scalar(const double* a, const double* b, double tau, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + tau * b[i];
}

void axpy2_scalar(const double* a, const double* b, const double* c, double tau,
                  double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + tau * (b[i] + c[i]);
}

double weighted_sum_scalar(const double* x, const double* w, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * x[i];
  return acc;
}

double weighted_sumsq_scalar(const double* x, const double* w, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * x[i] * x[i];
  return acc;
}

double weighted_diffsq_scalar(const double* a, const double* b, const double* w, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += w[i] * d * d;
  }
  return acc;
}

constexpr Ops kScalarOps = {
    "scalar",
    sigmoid_scalar,
    scale_scalar,
    axpy_scalar,
    axpy2_scalar,
    weighted_sum_scalar,
    weighted_sumsq_scalar,
    weighted_diffsq_scalar,
};

}  // namespace

const Ops& scalar_ops() { return kScalarOps; }

}  // namespace dnf::kernels
