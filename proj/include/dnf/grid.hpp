#pragma once

#include <memory>
#include <span>
#include <vector>

namespace dnf {

/// Discretization parameters for the domain T x U, where T = R/(2*L_x Z) is
/// the periodic cortical direction and U = (-L_xi, L_xi) the dendritic one.
///
/// x carries n_x equispaced nodes starting at -L_x; the duplicate periodic
/// endpoint +L_x is excluded. xi carries n_xi nodes including both endpoints,
/// so Neumann boundary values are directly observable.
struct GridSpec {
  int n_x = 0;       ///< periodic nodes in x; >= 4 and even
  int n_xi = 0;      ///< nodes in xi, endpoints included; >= 3
  double L_x = 0.0;  ///< half-circumference of the torus
  double L_xi = 0.0; ///< half-length of the dendritic interval

  double h_x() const { return 2.0 * L_x / n_x; }
  double h_xi() const { return 2.0 * L_xi / (n_xi - 1); }

  /// Throws std::invalid_argument listing every violated invariant.
  void validate() const;

  bool operator==(const GridSpec&) const = default;
};

/// Nodes and quadrature weights realizing a GridSpec.
///
/// Quadrature is the periodic rectangle rule in x (uniform weight h_x, exact
/// for trigonometric polynomials below the Nyquist mode) and the trapezoid
/// rule in xi (weight h_xi/2 at the endpoints, h_xi in the interior).
struct Grid {
  GridSpec spec;
  std::vector<double> x_nodes;     ///< x_i = -L_x + i*h_x, i = 0..n_x-1
  std::vector<double> xi_nodes;    ///< xi_j = -L_xi + j*h_xi, j = 0..n_xi-1
  std::vector<double> xi_weights;  ///< trapezoid weights, sum = 2*L_xi

  double h_x() const { return spec.h_x(); }
  double h_xi() const { return spec.h_xi(); }
};

/// Builds nodes and weights for a validated spec. Deterministic.
Grid build_grid(const GridSpec& spec);

/// Convenience for the shared-ownership form used by Field.
std::shared_ptr<const Grid> make_grid(const GridSpec& spec);

/// A real sample array v(x_i, xi_j) bound to a grid. Values are stored
/// row-major with x outermost, so v(x_i, .) is contiguous in memory.
class Field {
 public:
  Field() = default;
  explicit Field(std::shared_ptr<const Grid> grid, double fill = 0.0);

  const Grid& grid() const { return *grid_; }
  const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }

  int nx() const { return grid_->spec.n_x; }
  int nxi() const { return grid_->spec.n_xi; }

  double& operator()(int i, int j) { return values_[idx(i, j)]; }
  double operator()(int i, int j) const { return values_[idx(i, j)]; }

  std::span<double> row(int i) { return {values_.data() + idx(i, 0), static_cast<std::size_t>(nxi())}; }
  std::span<const double> row(int i) const { return {values_.data() + idx(i, 0), static_cast<std::size_t>(nxi())}; }

  std::span<double> data() { return values_; }
  std::span<const double> data() const { return values_; }

  bool all_finite() const;

  /// True when both fields live on grids with equal specs.
  bool compatible_with(const Field& other) const;

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * nxi() + j; }

  std::shared_ptr<const Grid> grid_;
  std::vector<double> values_;
};

/// Discrete squared L2(Omega) norm: sum_i sum_j h_x * w_j * f(i,j)^2.
/// Accumulation is row-major in a fixed order.
double l2_norm_sq(const Field& f);

/// sqrt of l2_norm_sq.
double l2_norm(const Field& f);

/// l2_norm_sq of f - g, computed without materializing the difference.
/// Throws std::invalid_argument when the grids differ.
double l2_distance_sq(const Field& f, const Field& g);

}  // namespace dnf
