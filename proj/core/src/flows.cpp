#include "pfw/flows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pfw/errors.hpp"
#include "pfw/profiles.hpp"

namespace pfw {

FlowKind parse_flow_kind(const std::string& name) {
  if (name == "classical") return FlowKind::classical;
  if (name == "mugnai") return FlowKind::mugnai;
  if (name == "allen_cahn") return FlowKind::allen_cahn;
  throw ValidationError("unknown flow kind '" + name + "'");
}

std::string to_string(FlowKind kind) {
  switch (kind) {
    case FlowKind::classical: return "classical";
    case FlowKind::mugnai: return "mugnai";
    case FlowKind::allen_cahn: return "allen_cahn";
  }
  return "?";
}

void validate(const ModelParams& p, const PeriodicGrid& grid) {
  if (!(p.eps > 0.0) || !std::isfinite(p.eps)) throw ValidationError("eps must be positive");
  if (!(p.eps >= 2.0 * grid.spacing())) throw ValidationError("eps must be at least 2 dx");
  if (!(p.alpha > 0.0) || !std::isfinite(p.alpha)) throw ValidationError("alpha must be positive");
  if (!(p.dt > 0.0) || !std::isfinite(p.dt)) throw ValidationError("dt must be positive");
  if (!(p.sigma > 0.0 && p.sigma < 1.0)) throw ValidationError("sigma must lie in (0, 1)");
  if (!(p.tol > 0.0 && p.tol <= 1e-4)) throw ValidationError("tol must lie in (0, 1e-4]");
  if (p.max_iter < 1) throw ValidationError("max_iter must be >= 1");
}

FlowSession FlowSession::start(const ModelParams& params, ScalarField u0, ScalarField mu0, double t0) {
  if (u0.grid != mu0.grid) throw ValidationError("u and mu live on different grids");
  validate(params, u0.grid);
  if (!all_finite(u0.values) || !all_finite(mu0.values)) throw ValidationError("initial fields are not finite");
  FlowSession s;
  s.grid = u0.grid;
  s.params = params;
  s.u = std::move(u0);
  s.mu = std::move(mu0);
  s.t0 = t0;
  s.t = t0;
  return s;
}

void FlowSession::record(const EnergyParams& eparams) {
  EnergyParams ep = eparams;
  ep.reg.sigma = params.sigma;
  history.push_back({t, n, eval_all(u, params.eps, ep)});
}

namespace {

double diff_rms(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(a.size()));
}

StepInfo fixed_point_step(FlowSession& s, const std::vector<double>* penalty) {
  const ModelParams& p = s.params;
  const double e2 = p.eps * p.eps;
  const double ae2 = p.alpha * e2;
  const double c_mu = p.dt / (p.alpha * e2 * e2);
  const std::size_t n = s.grid.size();

  const std::vector<double>& un = s.u.values;
  if (!all_finite(un) || !all_finite(s.mu.values))
    throw Divergence("non-finite values in the state at step " + std::to_string(s.n));
  ScalarField uk = s.u;
  ScalarField mk(s.grid);
  for (std::size_t i = 0; i < n; ++i) mk[i] = ae2 * s.mu[i];

  ScalarField h(s.grid), ht(s.grid);
  double residual = 0.0;
  for (int it = 1; it <= p.max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      h[i] = un[i] - c_mu * well(uk[i], 2) * mk[i];
      if (penalty) h[i] += (*penalty)[i];
      ht[i] = p.alpha * well(uk[i], 1);
    }
    auto [U, M] = apply_step_multipliers(to_spectral(h), to_spectral(ht), p.dt, p.alpha, p.eps);
    ScalarField u1 = from_spectral(U);
    ScalarField m1 = from_spectral(M);
    // A blown-up iterate is a failed solve; the committed state is still finite.
    if (!all_finite(u1.values) || !all_finite(m1.values))
      throw NonConvergence(std::numeric_limits<double>::infinity(), it);
    residual = diff_rms(u1.values, uk.values) + diff_rms(m1.values, mk.values);
    uk = std::move(u1);
    mk = std::move(m1);
    if (residual <= p.tol) {
      s.u = std::move(uk);
      for (std::size_t i = 0; i < n; ++i) s.mu[i] = mk[i] / ae2;
      ++s.n;
      s.t = s.t0 + static_cast<double>(s.n) * p.dt;
      s.fp_iters.push_back(it);
      return {it, residual};
    }
    if (!std::isfinite(residual)) throw NonConvergence(residual, it);
  }
  throw NonConvergence(residual, p.max_iter);
}

}  // namespace

StepInfo step_classical(FlowSession& s) {
  if (s.params.kind != FlowKind::classical) throw ValidationError("session is not a classical flow");
  return fixed_point_step(s, nullptr);
}

StepInfo step_mugnai(FlowSession& s) {
  if (s.params.kind != FlowKind::mugnai) throw ValidationError("session is not a Mugnai flow");
  const double eps = s.params.eps;
  RegParams reg;
  reg.sigma = s.params.sigma;
  // Explicit in time: dt W'(u^n) B_sigma(u^n) / eps^2.
  std::vector<double> pen = grad_mugnai_penalty(s.u, eps, reg).values;
  const double c = s.params.dt / (eps * eps);
  for (double& x : pen) x *= c;
  return fixed_point_step(s, &pen);
}

StepInfo step_allen_cahn(FlowSession& s) {
  if (s.params.kind != FlowKind::allen_cahn) throw ValidationError("session is not an Allen-Cahn flow");
  const ModelParams& p = s.params;
  const std::size_t n = s.grid.size();
  ScalarField rhs(s.grid);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = s.u[i] - p.dt / p.eps * well(s.u[i], 1);
  constexpr double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
  const double c = p.dt * p.eps * four_pi2;
  ScalarField u1 = from_spectral(apply_symbol(to_spectral(rhs), [c](double p2) { return 1.0 / (1.0 + c * p2); }));
  if (!all_finite(u1.values)) throw Divergence("non-finite values at step " + std::to_string(s.n + 1));
  const ScalarField lap = spectral_laplacian(u1);
  const double inv_e2 = 1.0 / (p.eps * p.eps);
  for (std::size_t i = 0; i < n; ++i) s.mu[i] = well(u1[i], 1) * inv_e2 - lap[i];
  s.u = std::move(u1);
  ++s.n;
  s.t = s.t0 + static_cast<double>(s.n) * p.dt;
  s.fp_iters.push_back(1);
  return {1, 0.0};
}

StepInfo step(FlowSession& s) {
  switch (s.params.kind) {
    case FlowKind::classical: return step_classical(s);
    case FlowKind::mugnai: return step_mugnai(s);
    case FlowKind::allen_cahn: return step_allen_cahn(s);
  }
  throw ValidationError("unknown flow kind");
}

StabilityReport stability_limits(const ModelParams& p, const PeriodicGrid& grid, double C) {
  StabilityReport r;
  r.M1 = well_sup(1);
  r.M2 = well_sup(2);
  r.M3 = well_sup(3);
  r.M4 = well_sup(4);
  const double e4 = std::pow(p.eps, 4);
  const double dx = grid.spacing();
  const double N = grid.dims();
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double a = p.alpha * r.M2;
  const double b = p.dt / e4 * r.M3 * (r.M1 + std::pow(N, 1.5) * pi2 * p.eps * p.eps / std::pow(dx, 2.5));
  const double c = p.dt / (p.alpha * e4) * r.M2;
  const double lhs = std::max(a * a + 2.0 * b * b, 2.0 * c * c);
  // Both propositions share the same left-hand side; the explicit penalty does not enter it.
  r.lhs_classical = lhs;
  r.lhs_mugnai = lhs;
  r.classical_satisfied = lhs < StabilityReport::kSmall;
  r.mugnai_satisfied = lhs < 1.0;
  r.heuristic_dt_max = C * std::min(p.eps * p.eps * dx * dx, e4);
  r.heuristic_satisfied = p.dt <= r.heuristic_dt_max;
  return r;
}

}  // namespace pfw
