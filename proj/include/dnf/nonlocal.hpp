#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "dnf/grid.hpp"
#include "dnf/model.hpp"

namespace dnf {

/// Periodized lateral kernel sampled at grid offsets, together with its
/// cached spectrum (already scaled by h_x so that spectral multiplication
/// realizes the continuum convolution integral).
///
/// Holds FFT plans for its grid size; move-only. Plan creation is
/// serialized internally, and convolve() is safe to call concurrently on a
/// shared table.
class PeriodicKernelTable {
 public:
  PeriodicKernelTable(std::shared_ptr<const Grid> grid, double kappa);
  ~PeriodicKernelTable();
  PeriodicKernelTable(PeriodicKernelTable&&) noexcept;
  PeriodicKernelTable& operator=(PeriodicKernelTable&&) noexcept;
  PeriodicKernelTable(const PeriodicKernelTable&) = delete;
  PeriodicKernelTable& operator=(const PeriodicKernelTable&) = delete;

  const Grid& grid() const;
  const std::shared_ptr<const Grid>& grid_ptr() const;
  double kappa() const;

  /// w_per(d_i) at offsets d_i = i * h_x, i = 0..n_x-1.
  std::span<const double> samples() const;

  /// Spectrum of samples() scaled by h_x (real-to-complex layout, n_x/2+1 bins).
  std::span<const std::complex<double>> fft_cache() const;

  /// out = circular convolution of m with the kernel samples, times h_x.
  /// Both spans have length n_x.
  void convolve(std::span<const double> m, std::span<double> out) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Builds the table for the model's lateral kernel on this grid.
PeriodicKernelTable periodize_kernel(double kappa, std::shared_ptr<const Grid> grid);

/// Nonlocal operator F(u)(x, xi) = ∫∫ W(x, xi, x', xi') S(u(x', xi')) dx' dxi',
/// evaluated through the separable structure: a xi-quadrature collapses
/// S(u) against the somatic profile, an FFT circular convolution applies the
/// lateral coupling, and the dendritic profile spreads the result back out.
/// Throws std::invalid_argument on grid mismatch or non-finite input.
Field apply_F(const Field& u, const ModelSpec& model, const PeriodicKernelTable& ktab);

/// Reference evaluation by the non-separated four-fold quadrature loop, with
/// the same quadrature weights and the same periodized kernel values as
/// apply_F. O((n_x * n_xi)^2); refuses grids with n_x * n_xi > max_nodes.
Field apply_F_direct(const Field& u, const ModelSpec& model, std::size_t max_nodes = 32768);

}  // namespace dnf
