#include "pfw/profiles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>

#include "pfw/errors.hpp"

namespace pfw {

double well(double s, int order) {
  switch (order) {
    case 0: {
      const double t = s * (1.0 - s);
      return 0.5 * t * t;
    }
    case 1: return s * (1.0 - s) * (1.0 - 2.0 * s);
    case 2: return 1.0 - 6.0 * s + 6.0 * s * s;
    case 3: return -6.0 + 12.0 * s;
    case 4: return 12.0;
    default: throw ValidationError("well derivative order must be 0..4");
  }
}

double well_sup(int order) {
  if (order < 0 || order > 4) throw ValidationError("well derivative order must be 0..4");
  static std::once_flag once;
  static std::array<double, 5> sup{};
  std::call_once(once, [] {
    constexpr int n = 1 << 20;
    for (int i = 0; i <= n; ++i) {
      const double s = static_cast<double>(i) / n;
      for (int k = 0; k < 5; ++k) sup[k] = std::max(sup[k], std::abs(well(s, k)));
    }
  });
  return sup[order];
}

double profile_q(double t, int order) {
  // q = (1 - tanh(t/2))/2. The sech/tanh forms avoid cancellation in 1 - q.
  const double th = std::tanh(0.5 * t);
  const double c = std::cosh(0.5 * t);
  const double sech2 = std::isinf(c) ? 0.0 : 1.0 / (c * c);
  switch (order) {
    case 0: return t > 0.0 ? std::exp(-t) / (1.0 + std::exp(-t)) : 1.0 / (1.0 + std::exp(t));
    case 1: return -0.25 * sech2;
    case 2: return 0.25 * sech2 * th;
    default: throw ValidationError("profile derivative order must be 0..2");
  }
}

double eta2(double z) { return 0.5 * z * profile_q(z, 1); }

double SampledProfile::operator()(double x) const {
  if (z.size() < 2 || x < -L || x > L) return 0.0;
  const double h = spacing();
  const double f = (x + L) / h;
  const auto i = std::min(static_cast<std::size_t>(f), z.size() - 2);
  const double w = f - static_cast<double>(i);
  return (1.0 - w) * values[i] + w * values[i + 1];
}

SampledProfile solve_eta1(double L, int nodes) {
  if (!(L >= 20.0)) throw ValidationError("eta1 domain half-length must be >= 20");
  if (nodes < 2000) throw ValidationError("eta1 needs at least 2000 nodes");
  if (nodes % 2 == 0) ++nodes;
  const int half = (nodes - 1) / 2;  // intervals on [0, L]
  const double h = L / half;
  const double h2 = h * h;

  // Unknowns are interior nodes 1..half-1 of [0, L]; Thomas algorithm.
  const int n = half - 1;
  std::vector<double> diag(n), rhs(n), cp(n), x(n);
  for (int i = 0; i < n; ++i) {
    const double z = (i + 1) * h;
    diag[i] = -2.0 / h2 - well(profile_q(z, 0), 2);
    rhs[i] = z * profile_q(z, 1);
  }
  const double off = 1.0 / h2;
  double denom = diag[0];
  if (denom == 0.0) throw Error("eta1 system is singular");
  cp[0] = off / denom;
  x[0] = rhs[0] / denom;
  for (int i = 1; i < n; ++i) {
    denom = diag[i] - off * cp[i - 1];
    if (denom == 0.0 || !std::isfinite(denom)) throw Error("eta1 system is singular");
    cp[i] = off / denom;
    x[i] = (rhs[i] - off * x[i - 1]) / denom;
  }
  for (int i = n - 2; i >= 0; --i) x[i] -= cp[i] * x[i + 1];

  SampledProfile out;
  out.L = L;
  out.z.resize(static_cast<std::size_t>(nodes));
  out.values.assign(static_cast<std::size_t>(nodes), 0.0);
  for (int k = 0; k < nodes; ++k) out.z[k] = -L + k * h;
  for (int i = 0; i < n; ++i) {
    out.values[half + i + 1] = x[i];
    out.values[half - i - 1] = -x[i];
  }
  return out;
}

double eta1_residual(const SampledProfile& eta1) {
  const double h = eta1.spacing();
  double r = 0.0;
  for (std::size_t k = 1; k + 1 < eta1.z.size(); ++k) {
    const double z = eta1.z[k];
    const double d2 = (eta1.values[k + 1] - 2.0 * eta1.values[k] + eta1.values[k - 1]) / (h * h);
    const double res = d2 - well(profile_q(z, 0), 2) * eta1.values[k] - z * profile_q(z, 1);
    r = std::max(r, std::abs(res));
  }
  return r;
}

namespace {

template <class F>
double trapezoid(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) s += f(a + i * h);
  return s * h;
}

}  // namespace

ProfileIntegrals profile_integrals() {
  ProfileIntegrals r{};
  // integral of s(1-s) over [0,1]
  r.c0 = 1.0 / 6.0;
  // Integrands decay like e^{-|z|}; the trapezoid rule is spectrally accurate here.
  constexpr double a = -40.0, b = 40.0;
  constexpr int n = 16000;
  r.S = trapezoid([](double z) { const double d = profile_q(z, 1); return d * d; }, a, b, n);
  r.zqq = trapezoid([](double z) { return z * profile_q(z, 2) * profile_q(z, 1); }, a, b, n);

  const SampledProfile eta1 = solve_eta1();
  double w3 = 0.0;
  const double h = eta1.spacing();
  for (std::size_t k = 0; k < eta1.z.size(); ++k) {
    const double z = eta1.z[k];
    const double d = profile_q(z, 1);
    const double wk = (k == 0 || k + 1 == eta1.z.size()) ? 0.5 : 1.0;
    w3 += wk * well(profile_q(z, 0), 3) * eta1.values[k] * d * d;
  }
  r.w3 = w3 * h;
  return r;
}

}  // namespace pfw
