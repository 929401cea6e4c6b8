#include "pfw/spectral_grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>

#include "pfw/errors.hpp"

namespace pfw {

namespace {

constexpr std::size_t kMaxGridPoints = std::size_t{1} << 27;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int signed_mode(int i, int m) { return i <= m / 2 ? i : i - m; }

// FFTW planning is not thread safe, execution with the new-array interface is.
// Plans are created once per grid shape with FFTW_UNALIGNED so that they can be
// applied to arbitrary std::vector storage.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

  PlanPair get(const PeriodicGrid& g) {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_pair(g.dims(), g.points());
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;

    std::vector<int> n(static_cast<std::size_t>(g.dims()), g.points());
    std::vector<double> real(g.size());
    std::vector<fftw_complex> cplx(g.spectral_size());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p;
    p.forward = fftw_plan_dft_r2c(g.dims(), n.data(), real.data(), cplx.data(), flags);
    p.backward = fftw_plan_dft_c2r(g.dims(), n.data(), cplx.data(), real.data(), flags | FFTW_DESTROY_INPUT);
    if (!p.forward || !p.backward) throw Error("FFTW plan creation failed");
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, PlanPair> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void require_same_grid(const PeriodicGrid& a, const PeriodicGrid& b) {
  if (a != b) throw ValidationError("fields live on different grids");
}

}  // namespace

PeriodicGrid PeriodicGrid::make(int dims, int modes) {
  if (dims < 1 || dims > 3) throw ValidationError("grid dims must be 1, 2 or 3, got " + std::to_string(dims));
  if (modes < 8 || !is_power_of_two(modes))
    throw ValidationError("modes must be a power of two >= 8, got " + std::to_string(modes));
  std::size_t total = 1;
  for (int a = 0; a < dims; ++a) {
    total *= static_cast<std::size_t>(2 * modes);
    if (total > kMaxGridPoints) throw ValidationError("grid too large");
  }
  PeriodicGrid g;
  g.dims_ = dims;
  g.modes_ = modes;
  g.size_ = total;
  return g;
}

PeriodicGrid make_grid(int dims, int modes) { return PeriodicGrid::make(dims, modes); }

std::size_t PeriodicGrid::stride(int axis) const noexcept {
  std::size_t s = 1;
  for (int a = dims_ - 1; a > axis; --a) s *= static_cast<std::size_t>(points());
  return s;
}

int PeriodicGrid::spectral_extent(int axis) const noexcept {
  return axis == dims_ - 1 ? points() / 2 + 1 : points();
}

std::size_t PeriodicGrid::spectral_size() const noexcept {
  std::size_t s = 1;
  for (int a = 0; a < dims_; ++a) s *= static_cast<std::size_t>(spectral_extent(a));
  return s;
}

Index3 PeriodicGrid::unravel(std::size_t flat) const noexcept {
  Index3 idx{0, 0, 0};
  const auto m = static_cast<std::size_t>(points());
  for (int a = dims_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % m);
    flat /= m;
  }
  return idx;
}

std::size_t PeriodicGrid::ravel(const Index3& idx) const noexcept {
  std::size_t flat = 0;
  const int m = points();
  for (int a = 0; a < dims_; ++a) {
    const int i = ((idx[a] % m) + m) % m;
    flat = flat * static_cast<std::size_t>(m) + static_cast<std::size_t>(i);
  }
  return flat;
}

std::size_t PeriodicGrid::shifted(std::size_t flat, int axis, int shift) const noexcept {
  const std::size_t s = stride(axis);
  const int m = points();
  const int i = static_cast<int>((flat / s) % static_cast<std::size_t>(m));
  const int j = ((i + shift) % m + m) % m;
  return flat - static_cast<std::size_t>(i) * s + static_cast<std::size_t>(j) * s;
}

ScalarField::ScalarField(const PeriodicGrid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != g.size()) throw ValidationError("field length does not match grid");
}

MatrixField::MatrixField(const PeriodicGrid& g) : grid(g) {
  const int d = g.dims();
  comp.assign(static_cast<std::size_t>(d * (d + 1) / 2), std::vector<double>(g.size(), 0.0));
}

int MatrixField::index(int i, int j, int dims) noexcept {
  if (i > j) std::swap(i, j);
  // row-major upper triangle: (0,0),(0,1),..,(0,d-1),(1,1),..
  return i * dims - i * (i - 1) / 2 + (j - i);
}

Index3 SpectralField::mode(std::size_t k) const noexcept {
  Index3 p{0, 0, 0};
  const int d = grid.dims();
  const int m = grid.points();
  for (int a = d - 1; a >= 0; --a) {
    const auto ext = static_cast<std::size_t>(grid.spectral_extent(a));
    const int i = static_cast<int>(k % ext);
    k /= ext;
    p[a] = a == d - 1 ? i : signed_mode(i, m);
  }
  return p;
}

double SpectralField::mode_squared(std::size_t k) const noexcept {
  const Index3 p = mode(k);
  return static_cast<double>(p[0]) * p[0] + static_cast<double>(p[1]) * p[1] +
         static_cast<double>(p[2]) * p[2];
}

std::complex<double> SpectralField::coefficient(const Index3& p) const {
  const int d = grid.dims();
  const int m = grid.points();
  Index3 q = p;
  bool conj = false;
  int last = ((q[d - 1] % m) + m) % m;
  if (last > m / 2) {
    for (int a = 0; a < d; ++a) q[a] = -q[a];
    conj = true;
    last = ((q[d - 1] % m) + m) % m;
  }
  std::size_t flat = 0;
  for (int a = 0; a < d; ++a) {
    const int i = a == d - 1 ? last : ((q[a] % m) + m) % m;
    flat = flat * static_cast<std::size_t>(grid.spectral_extent(a)) + static_cast<std::size_t>(i);
  }
  return conj ? std::conj(coeffs[flat]) : coeffs[flat];
}

SpectralField to_spectral(const ScalarField& f) {
  const PeriodicGrid& g = f.grid;
  if (f.values.size() != g.size()) throw ValidationError("field length does not match grid");
  SpectralField F(g);
  const PlanPair plans = plan_cache().get(g);
  // The plan was made with an out-of-place layout; the input is only read.
  fftw_execute_dft_r2c(plans.forward, const_cast<double*>(f.values.data()),
                       reinterpret_cast<fftw_complex*>(F.coeffs.data()));
  const double scale = 1.0 / static_cast<double>(g.size());
  for (auto& c : F.coeffs) c *= scale;
  return F;
}

ScalarField from_spectral(const SpectralField& F) {
  const PeriodicGrid& g = F.grid;
  if (F.coeffs.size() != g.spectral_size()) throw ValidationError("spectral length does not match grid");
  std::vector<std::complex<double>> scratch(F.coeffs);
  ScalarField f(g);
  const PlanPair plans = plan_cache().get(g);
  fftw_execute_dft_c2r(plans.backward, reinterpret_cast<fftw_complex*>(scratch.data()), f.values.data());
  return f;
}

SpectralField apply_symbol(const SpectralField& F, const std::function<double(double)>& symbol) {
  SpectralField out(F.grid);
  for (std::size_t k = 0; k < F.coeffs.size(); ++k) out.coeffs[k] = F.coeffs[k] * symbol(F.mode_squared(k));
  return out;
}

ScalarField spectral_laplacian(const ScalarField& f) {
  constexpr double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
  return from_spectral(apply_symbol(to_spectral(f), [](double p2) { return -four_pi2 * p2; }));
}

ScalarField spectral_partial(const ScalarField& f, int axis) {
  SpectralField F = to_spectral(f);
  const int m = f.grid.points();
  const std::complex<double> i2pi(0.0, 2.0 * std::numbers::pi);
  for (std::size_t k = 0; k < F.coeffs.size(); ++k) {
    const int p = F.mode(k)[axis];
    const bool nyquist = p == m / 2 || p == -m / 2;
    F.coeffs[k] *= nyquist ? std::complex<double>(0.0) : i2pi * static_cast<double>(p);
  }
  return from_spectral(F);
}

VectorField spectral_gradient(const ScalarField& f) {
  VectorField v(f.grid);
  for (int a = 0; a < f.grid.dims(); ++a) v.comp[a] = spectral_partial(f, a).values;
  return v;
}

StepMultiplier step_multiplier(double k2, double dt, double alpha, double eps) noexcept {
  const double denom = 1.0 + dt * k2 * k2;
  const double ae2 = alpha * eps * eps;
  return {1.0 / denom, -(dt / ae2) * k2 / denom, ae2 * k2 / denom, 1.0 / denom};
}

std::pair<SpectralField, SpectralField> apply_step_multipliers(const SpectralField& h,
                                                               const SpectralField& ht,
                                                               double dt, double alpha, double eps) {
  require_same_grid(h.grid, ht.grid);
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw ValidationError("time step must be finite and >= 0");
  if (!(alpha > 0.0)) throw ValidationError("alpha must be positive");
  if (!(eps > 0.0)) throw ValidationError("eps must be positive");
  constexpr double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
  SpectralField u(h.grid), mu(h.grid);
  for (std::size_t k = 0; k < h.coeffs.size(); ++k) {
    const StepMultiplier s = step_multiplier(four_pi2 * h.mode_squared(k), dt, alpha, eps);
    u.coeffs[k] = s.uh * h.coeffs[k] + s.uht * ht.coeffs[k];
    mu.coeffs[k] = s.muh * h.coeffs[k] + s.muht * ht.coeffs[k];
  }
  return {std::move(u), std::move(mu)};
}

ScalarField band_limited_random(const PeriodicGrid& g, int max_mode, std::uint64_t seed) {
  if (max_mode < 0 || max_mode >= g.modes()) throw ValidationError("max_mode out of range");
  std::mt19937_64 rng(seed);
  // 53-bit uniforms in [-1/2, 1/2), independent of the standard library's distributions.
  auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5; };
  SpectralField F(g);
  for (std::size_t k = 0; k < F.coeffs.size(); ++k) {
    const Index3 p = F.mode(k);
    bool inside = true;
    for (int a = 0; a < g.dims(); ++a) inside = inside && std::abs(p[a]) <= max_mode;
    const double re = uniform();
    const double im = uniform();
    if (inside) F.coeffs[k] = {re, im};
  }
  // Self-conjugate entries of the last-axis-zero plane must be real.
  for (std::size_t k = 0; k < F.coeffs.size(); ++k) {
    const Index3 p = F.mode(k);
    if (p[g.dims() - 1] != 0) continue;
    bool self = true;
    for (int a = 0; a < g.dims() - 1; ++a) self = self && p[a] == 0;
    if (self) F.coeffs[k].imag(0.0);
  }
  return from_spectral(F);
}

double field_mean(const std::vector<double>& v) noexcept {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double field_rms(const std::vector<double>& v) noexcept {
  double s = 0.0;
  for (double x : v) s += x * x;
  return v.empty() ? 0.0 : std::sqrt(s / static_cast<double>(v.size()));
}

double field_max_abs(const std::vector<double>& v) noexcept {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool all_finite(const std::vector<double>& v) noexcept {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace pfw
