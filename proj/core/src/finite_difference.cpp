#include <cstddef>
#include <vector>

#include "pfw/errors.hpp"
#include "pfw/spectral_grid.hpp"

namespace pfw {

std::vector<double> fd_partial(const PeriodicGrid& g, const std::vector<double>& f, int axis) {
  if (f.size() != g.size()) throw ValidationError("field length does not match grid");
  if (axis < 0 || axis >= g.dims()) throw ValidationError("axis out of range");
  const std::size_t inner = g.stride(axis);
  const auto m = static_cast<std::size_t>(g.points());
  const std::size_t outer = g.size() / (inner * m);
  const double c = 0.5 / g.spacing();
  std::vector<double> out(f.size());
  for (std::size_t o = 0; o < outer; ++o) {
    const std::size_t base = o * m * inner;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t ip = base + ((i + 1) % m) * inner;
      const std::size_t im = base + ((i + m - 1) % m) * inner;
      const std::size_t ic = base + i * inner;
      for (std::size_t k = 0; k < inner; ++k) out[ic + k] = c * (f[ip + k] - f[im + k]);
    }
  }
  return out;
}

ScalarField fd_partial(const ScalarField& f, int axis) {
  return ScalarField(f.grid, fd_partial(f.grid, f.values, axis));
}

std::pair<VectorField, MatrixField> fd_derivatives(const ScalarField& f) {
  const PeriodicGrid& g = f.grid;
  if (g.points() < 4) throw ValidationError("finite differences need at least 4 points per axis");
  VectorField grad(g);
  MatrixField hess(g);
  for (int i = 0; i < g.dims(); ++i) grad.comp[i] = fd_partial(g, f.values, i);
  for (int i = 0; i < g.dims(); ++i)
    for (int j = i; j < g.dims(); ++j) hess.component(i, j) = fd_partial(g, grad.comp[j], i);
  return {std::move(grad), std::move(hess)};
}

std::vector<double> fd_divergence(const PeriodicGrid& g, const std::vector<std::vector<double>>& v) {
  if (v.size() != static_cast<std::size_t>(g.dims())) throw ValidationError("vector field has wrong rank");
  std::vector<double> out(g.size(), 0.0);
  for (int a = 0; a < g.dims(); ++a) {
    const std::vector<double> d = fd_partial(g, v[a], a);
    for (std::size_t n = 0; n < out.size(); ++n) out[n] += d[n];
  }
  return out;
}

}  // namespace pfw
