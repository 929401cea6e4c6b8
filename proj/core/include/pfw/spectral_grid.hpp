#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace pfw {

using Index3 = std::array<int, 3>;

/// Uniform periodic grid on the unit box [0,1]^N with M = 2P points per axis.
///
/// Nodes sit at x_i = i / M. Storage is row-major with axis 0 slowest.
class PeriodicGrid {
 public:
  PeriodicGrid() = default;

  /// Throws ValidationError unless dims is 1..3 and modes is a power of two >= 8.
  static PeriodicGrid make(int dims, int modes);

  int dims() const noexcept { return dims_; }
  int modes() const noexcept { return modes_; }
  int points() const noexcept { return 2 * modes_; }
  double spacing() const noexcept { return 1.0 / points(); }
  std::size_t size() const noexcept { return size_; }
  std::size_t stride(int axis) const noexcept;

  /// Number of stored half-complex coefficients (last axis keeps M/2 + 1 entries).
  std::size_t spectral_size() const noexcept;
  int spectral_extent(int axis) const noexcept;

  Index3 unravel(std::size_t flat) const noexcept;
  std::size_t ravel(const Index3& idx) const noexcept;
  /// Periodic neighbour of flat index along axis, shift in {-1, +1, ...}.
  std::size_t shifted(std::size_t flat, int axis, int shift) const noexcept;
  double coordinate(int i) const noexcept { return i * spacing(); }

  bool operator==(const PeriodicGrid& o) const noexcept { return dims_ == o.dims_ && modes_ == o.modes_; }
  bool operator!=(const PeriodicGrid& o) const noexcept { return !(*this == o); }

 private:
  int dims_ = 0;
  int modes_ = 0;
  std::size_t size_ = 0;
};

PeriodicGrid make_grid(int dims, int modes);

/// Real nodal values of one scalar quantity.
struct ScalarField {
  PeriodicGrid grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const PeriodicGrid& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}
  ScalarField(const PeriodicGrid& g, std::vector<double> v);

  std::size_t size() const noexcept { return values.size(); }
  double& operator[](std::size_t i) noexcept { return values[i]; }
  double operator[](std::size_t i) const noexcept { return values[i]; }
};

/// Half-complex Fourier coefficients, normalized so that cos(2 pi x) maps to 1/2 at p = +-1.
struct SpectralField {
  PeriodicGrid grid;
  std::vector<std::complex<double>> coeffs;

  SpectralField() = default;
  explicit SpectralField(const PeriodicGrid& g) : grid(g), coeffs(g.spectral_size()) {}

  /// Coefficient of mode p (components beyond dims ignored). Negative last-axis modes
  /// are recovered by conjugate symmetry.
  std::complex<double> coefficient(const Index3& p) const;
  /// Signed mode vector of the stored entry at flat spectral index k.
  Index3 mode(std::size_t k) const noexcept;
  /// |p|^2 of the stored entry at flat spectral index k.
  double mode_squared(std::size_t k) const noexcept;
};

struct VectorField {
  PeriodicGrid grid;
  std::vector<std::vector<double>> comp;

  VectorField() = default;
  explicit VectorField(const PeriodicGrid& g)
      : grid(g), comp(static_cast<std::size_t>(g.dims()), std::vector<double>(g.size(), 0.0)) {}
};

/// Symmetric matrix per node, stored as dims*(dims+1)/2 component arrays.
struct MatrixField {
  PeriodicGrid grid;
  std::vector<std::vector<double>> comp;

  MatrixField() = default;
  explicit MatrixField(const PeriodicGrid& g);

  static int index(int i, int j, int dims) noexcept;
  double at(int i, int j, std::size_t node) const noexcept { return comp[index(i, j, grid.dims())][node]; }
  std::vector<double>& component(int i, int j) noexcept { return comp[index(i, j, grid.dims())]; }
  const std::vector<double>& component(int i, int j) const noexcept {
    return comp[index(i, j, grid.dims())];
  }
};

SpectralField to_spectral(const ScalarField& f);
ScalarField from_spectral(const SpectralField& F);

/// Multiply every coefficient by symbol(|p|^2).
SpectralField apply_symbol(const SpectralField& F, const std::function<double(double)>& symbol);

ScalarField spectral_laplacian(const ScalarField& f);
/// Spectral first derivative; the Nyquist mode is dropped.
ScalarField spectral_partial(const ScalarField& f, int axis);
VectorField spectral_gradient(const ScalarField& f);

/// Per-mode resolvent of one fixed-point sweep, k2 = 4 pi^2 |p|^2.
struct StepMultiplier {
  double uh, uht, muh, muht;
};
StepMultiplier step_multiplier(double k2, double dt, double alpha, double eps) noexcept;

/// u_p = (h_p - dt/(alpha eps^2) k2 ht_p)/(1 + dt k2^2), mu_p = (ht_p + alpha eps^2 k2 h_p)/(1 + dt k2^2).
/// dt = 0 is accepted (pure constitutive update); negative dt, non-positive alpha or eps throw.
std::pair<SpectralField, SpectralField> apply_step_multipliers(const SpectralField& h,
                                                               const SpectralField& ht,
                                                               double dt, double alpha, double eps);

/// Centered second-order periodic difference along one axis.
ScalarField fd_partial(const ScalarField& f, int axis);
std::vector<double> fd_partial(const PeriodicGrid& g, const std::vector<double>& f, int axis);
/// Centered gradient and Hessian H_ij = D_i D_j (symmetric since the D_i commute).
std::pair<VectorField, MatrixField> fd_derivatives(const ScalarField& f);
/// Centered divergence of a vector field, the negative adjoint of the centered gradient.
std::vector<double> fd_divergence(const PeriodicGrid& g, const std::vector<std::vector<double>>& v);

/// Real field whose Fourier modes satisfy |p|_inf <= max_mode, with deterministic
/// uniform random coefficients drawn from seed.
ScalarField band_limited_random(const PeriodicGrid& g, int max_mode, std::uint64_t seed);

double field_mean(const std::vector<double>& v) noexcept;
double field_rms(const std::vector<double>& v) noexcept;
double field_max_abs(const std::vector<double>& v) noexcept;
bool all_finite(const std::vector<double>& v) noexcept;

}  // namespace pfw
