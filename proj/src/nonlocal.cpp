#include "dnf/nonlocal.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <mutex>
#include <stdexcept>

#include "dnf/kernels.hpp"

namespace dnf {
namespace {

// FFTW plan creation/destruction is not thread-safe; executions via the
// new-array interface are.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t bytes) : ptr(fftw_malloc(bytes)) {
    if (!ptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  void* ptr;
};

}  // namespace

struct PeriodicKernelTable::Impl {
  std::shared_ptr<const Grid> grid;
  double kappa = 0.0;
  std::vector<double> samples;
  std::vector<std::complex<double>> fft_cache;  // spectrum of samples * h_x
  fftw_plan fwd = nullptr;                      // r2c, length n_x
  fftw_plan inv = nullptr;                      // c2r, length n_x

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (inv) fftw_destroy_plan(inv);
  }
};

PeriodicKernelTable::PeriodicKernelTable(std::shared_ptr<const Grid> grid, double kappa)
    : impl_(std::make_unique<Impl>()) {
  impl_->grid = std::move(grid);
  impl_->kappa = kappa;

  const Grid& g = *impl_->grid;
  const int n = g.spec.n_x;
  const double hx = g.h_x();
  const double circumference = 2.0 * g.spec.L_x;

  impl_->samples.resize(n);
  for (int i = 0; i < n; ++i) {
    impl_->samples[i] = periodized_exp_kernel(kappa, circumference, i * hx);
  }

  const int n_bins = n / 2 + 1;
  FftwBuffer in(sizeof(double) * n);
  FftwBuffer out(sizeof(fftw_complex) * n_bins);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    // FFTW_ESTIMATE keeps planning deterministic (no timing-dependent choices)
    impl_->fwd = fftw_plan_dft_r2c_1d(n, static_cast<double*>(in.ptr),
                                      static_cast<fftw_complex*>(out.ptr), FFTW_ESTIMATE);
    impl_->inv = fftw_plan_dft_c2r_1d(n, static_cast<fftw_complex*>(out.ptr),
                                      static_cast<double*>(in.ptr), FFTW_ESTIMATE);
  }

  std::memcpy(in.ptr, impl_->samples.data(), sizeof(double) * n);
  fftw_execute_dft_r2c(impl_->fwd, static_cast<double*>(in.ptr),
                       static_cast<fftw_complex*>(out.ptr));
  impl_->fft_cache.resize(n_bins);
  const auto* spec = static_cast<const fftw_complex*>(out.ptr);
  for (int k = 0; k < n_bins; ++k) {
    impl_->fft_cache[k] = std::complex<double>(spec[k][0], spec[k][1]) * hx;
  }
}

PeriodicKernelTable::~PeriodicKernelTable() = default;
PeriodicKernelTable::PeriodicKernelTable(PeriodicKernelTable&&) noexcept = default;
PeriodicKernelTable& PeriodicKernelTable::operator=(PeriodicKernelTable&&) noexcept = default;

const Grid& PeriodicKernelTable::grid() const { return *impl_->grid; }
const std::shared_ptr<const Grid>& PeriodicKernelTable::grid_ptr() const { return impl_->grid; }
double PeriodicKernelTable::kappa() const { return impl_->kappa; }
std::span<const double> PeriodicKernelTable::samples() const { return impl_->samples; }
std::span<const std::complex<double>> PeriodicKernelTable::fft_cache() const {
  return impl_->fft_cache;
}

void PeriodicKernelTable::convolve(std::span<const double> m, std::span<double> out) const {
  const int n = impl_->grid->spec.n_x;
  if (m.size() != static_cast<std::size_t>(n) || out.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("convolve: length mismatch with kernel table");
  }
  const int n_bins = n / 2 + 1;

  // per-call buffers so a shared table can convolve from several threads
  FftwBuffer real_buf(sizeof(double) * n);
  FftwBuffer spec_buf(sizeof(fftw_complex) * n_bins);
  auto* real = static_cast<double*>(real_buf.ptr);
  auto* spec = static_cast<fftw_complex*>(spec_buf.ptr);

  std::memcpy(real, m.data(), sizeof(double) * n);
  fftw_execute_dft_r2c(impl_->fwd, real, spec);
  for (int k = 0; k < n_bins; ++k) {
    const std::complex<double> prod =
        std::complex<double>(spec[k][0], spec[k][1]) * impl_->fft_cache[k];
    spec[k][0] = prod.real();
    spec[k][1] = prod.imag();
  }
  fftw_execute_dft_c2r(impl_->inv, spec, real);

  const double inv_n = 1.0 / n;  // FFTW transforms are unnormalized
  for (int i = 0; i < n; ++i) out[i] = real[i] * inv_n;
}

PeriodicKernelTable periodize_kernel(double kappa, std::shared_ptr<const Grid> grid) {
  return PeriodicKernelTable(std::move(grid), kappa);
}

Field apply_F(const Field& u, const ModelSpec& model, const PeriodicKernelTable& ktab) {
  if (!u.grid_ptr() || u.grid().spec != ktab.grid().spec) {
    throw std::invalid_argument("apply_F: field and kernel table grids differ");
  }
  if (!u.all_finite()) {
    throw std::invalid_argument("apply_F: input field has non-finite entries");
  }
  const auto& ops = kernels::active_ops();
  const Grid& g = u.grid();
  const int nx = g.spec.n_x;
  const int nxi = g.spec.n_xi;
  const double sigma = model.kernel.sigma;

  // quadrature weights folded with the somatic profile delta_sigma(xi')
  std::vector<double> w_soma(nxi);
  for (int j = 0; j < nxi; ++j) {
    w_soma[j] = g.xi_weights[j] * delta_profile(g.xi_nodes[j], sigma);
  }

  std::vector<double> s_row(nxi);
  std::vector<double> m(nx);
  for (int i = 0; i < nx; ++i) {
    ops.sigmoid(u.row(i).data(), s_row.data(), s_row.size(), model.firing.mu, model.firing.theta);
    m[i] = ops.weighted_sum(s_row.data(), w_soma.data(), s_row.size());
  }

  std::vector<double> c(nx);
  ktab.convolve(m, c);

  // dendritic profile delta_sigma(xi - xi0)
  std::vector<double> d_out(nxi);
  for (int j = 0; j < nxi; ++j) {
    d_out[j] = delta_profile(g.xi_nodes[j] - model.kernel.xi0, sigma);
  }

  Field f(u.grid_ptr());
  for (int i = 0; i < nx; ++i) {
    ops.scale(d_out.data(), c[i], f.row(i).data(), d_out.size());
  }
  return f;
}

Field apply_F_direct(const Field& u, const ModelSpec& model, std::size_t max_nodes) {
  const Grid& g = u.grid();
  const int nx = g.spec.n_x;
  const int nxi = g.spec.n_xi;
  const std::size_t nodes = static_cast<std::size_t>(nx) * nxi;
  if (nodes > max_nodes) {
    throw std::invalid_argument("apply_F_direct: grid exceeds the size limit for O(n^2) work");
  }

  const double hx = g.h_x();
  const double circumference = 2.0 * g.spec.L_x;
  const double sigma = model.kernel.sigma;

  // pointwise tables; the quadrature itself stays a non-separated 4-fold loop
  std::vector<double> s(nodes);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < nxi; ++j) {
      s[static_cast<std::size_t>(i) * nxi + j] = firing_rate(u(i, j), model.firing);
    }
  }
  std::vector<double> w_lat(nx);
  for (int d = 0; d < nx; ++d) {
    w_lat[d] = periodized_exp_kernel(model.kernel.kappa, circumference, d * hx);
  }
  std::vector<double> d_out(nxi), d_in(nxi), wq(nxi);
  for (int j = 0; j < nxi; ++j) {
    d_out[j] = delta_profile(g.xi_nodes[j] - model.kernel.xi0, sigma);
    d_in[j] = delta_profile(g.xi_nodes[j], sigma);
    wq[j] = hx * g.xi_weights[j];
  }

  Field f(u.grid_ptr());
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < nxi; ++j) {
      double acc = 0.0;
      for (int ip = 0; ip < nx; ++ip) {
        const double w = w_lat[(i - ip + nx) % nx];
        const double* s_row = s.data() + static_cast<std::size_t>(ip) * nxi;
        for (int jp = 0; jp < nxi; ++jp) {
          acc += wq[jp] * w * d_out[j] * d_in[jp] * s_row[jp];
        }
      }
      f(i, j) = acc;
    }
  }
  return f;
}

}  // namespace dnf
