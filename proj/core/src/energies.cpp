#include "pfw/energies.hpp"

#include <algorithm>
#include <cmath>

#include "pfw/errors.hpp"
#include "pfw/profiles.hpp"

namespace pfw {

namespace {

using Vec = std::vector<double>;

void require_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ValidationError("eps must be positive");
}

// Centered-difference gradient, Hessian and regularized normal of u.
struct Normals {
  int d = 0;
  std::size_t n = 0;
  VectorField grad;
  MatrixField hess;
  Vec s;               // sqrt(|grad u|^2 + sigma^2)
  Vec gnorm;           // |grad u|
  std::vector<Vec> v;  // grad u / s
};

Normals normals(const ScalarField& u, const RegParams& reg) {
  Normals out;
  out.d = u.grid.dims();
  out.n = u.size();
  auto [g, h] = fd_derivatives(u);
  out.grad = std::move(g);
  out.hess = std::move(h);
  out.s.resize(out.n);
  out.gnorm.resize(out.n);
  out.v.assign(static_cast<std::size_t>(out.d), Vec(out.n));
  const double s2 = reg.sigma * reg.sigma;
  for (std::size_t k = 0; k < out.n; ++k) {
    double g2 = 0.0;
    for (int a = 0; a < out.d; ++a) g2 += out.grad.comp[a][k] * out.grad.comp[a][k];
    out.gnorm[k] = std::sqrt(g2);
    out.s[k] = std::sqrt(g2 + s2);
    for (int a = 0; a < out.d; ++a) out.v[a][k] = out.grad.comp[a][k] / out.s[k];
  }
  return out;
}

double hnn(const Normals& nm, std::size_t k) {
  double r = 0.0;
  for (int i = 0; i < nm.d; ++i)
    for (int j = 0; j < nm.d; ++j) r += nm.hess.at(i, j, k) * nm.v[i][k] * nm.v[j][k];
  return r;
}

Vec laplacian(const ScalarField& u, LaplacianKind lap) {
  if (lap == LaplacianKind::spectral) return spectral_laplacian(u).values;
  auto [g, h] = fd_derivatives(u);
  Vec out(u.size(), 0.0);
  for (int a = 0; a < u.grid.dims(); ++a) {
    const Vec& haa = h.component(a, a);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += haa[k];
  }
  return out;
}

Vec laplacian(const PeriodicGrid& g, const Vec& f, LaplacianKind lap) {
  return laplacian(ScalarField(g, f), lap);
}

// sum_ij D_i D_j M_ij for a symmetric matrix field.
Vec double_divergence(const PeriodicGrid& g, const std::vector<Vec>& m, int d) {
  std::vector<Vec> row(static_cast<std::size_t>(d), Vec(g.size(), 0.0));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Vec dj = fd_partial(g, m[MatrixField::index(i, j, d)], j);
      for (std::size_t k = 0; k < dj.size(); ++k) row[i][k] += dj[k];
    }
  return fd_divergence(g, row);
}

// (I - v v^T) a / s applied to a per-node vector field.
std::vector<Vec> project(const Normals& nm, const std::vector<Vec>& a) {
  std::vector<Vec> out(static_cast<std::size_t>(nm.d), Vec(nm.n));
  for (std::size_t k = 0; k < nm.n; ++k) {
    double va = 0.0;
    for (int i = 0; i < nm.d; ++i) va += nm.v[i][k] * a[i][k];
    for (int i = 0; i < nm.d; ++i) out[i][k] = (a[i][k] - nm.v[i][k] * va) / nm.s[k];
  }
  return out;
}

Vec fd_div_v(const PeriodicGrid& g, const Normals& nm) { return fd_divergence(g, nm.v); }

}  // namespace

EnergyKind parse_energy_kind(const std::string& name) {
  if (name == "perimeter") return EnergyKind::perimeter;
  if (name == "classical") return EnergyKind::classical;
  if (name == "mugnai") return EnergyKind::mugnai;
  if (name == "bellettini") return EnergyKind::bellettini;
  if (name == "err") return EnergyKind::err;
  throw ValidationError("unknown energy kind '" + name + "'");
}

std::string to_string(EnergyKind kind) {
  switch (kind) {
    case EnergyKind::perimeter: return "perimeter";
    case EnergyKind::classical: return "classical";
    case EnergyKind::mugnai: return "mugnai";
    case EnergyKind::bellettini: return "bellettini";
    case EnergyKind::err: return "err";
  }
  return "?";
}

double eval_perimeter(const ScalarField& u, double eps) {
  require_eps(eps);
  const VectorField g = spectral_gradient(u);
  double s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    double g2 = 0.0;
    for (const auto& c : g.comp) g2 += c[k] * c[k];
    s += 0.5 * eps * g2 + well(u[k], 0) / eps;
  }
  return s / static_cast<double>(u.size());
}

Discrepancy eval_discrepancy(const ScalarField& u, double eps) {
  require_eps(eps);
  const VectorField g = spectral_gradient(u);
  Discrepancy out{ScalarField(u.grid), 0.0};
  double mass = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    double g2 = 0.0;
    for (const auto& c : g.comp) g2 += c[k] * c[k];
    out.xi[k] = 0.5 * eps * g2 - well(u[k], 0) / eps;
    mass += std::abs(out.xi[k]);
  }
  out.mass = mass / static_cast<double>(u.size());
  return out;
}

double eval_classical(const ScalarField& u, double eps, LaplacianKind lap) {
  require_eps(eps);
  const Vec l = laplacian(u, lap);
  double s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double r = eps * l[k] - well(u[k], 1) / eps;
    s += r * r;
  }
  return s / (2.0 * eps * static_cast<double>(u.size()));
}

double eval_mugnai(const ScalarField& u, double eps, const RegParams& reg) {
  require_eps(eps);
  const Normals nm = normals(u, reg);
  double s = 0.0;
  for (std::size_t k = 0; k < nm.n; ++k) {
    const double c = well(u[k], 1) / eps;
    for (int i = 0; i < nm.d; ++i)
      for (int j = 0; j < nm.d; ++j) {
        const double vij = eps * nm.hess.at(i, j, k) - c * nm.v[i][k] * nm.v[j][k];
        s += vij * vij;
      }
  }
  return s / (2.0 * eps * static_cast<double>(nm.n));
}

double eval_bellettini(const ScalarField& u, double eps, const RegParams& reg) {
  require_eps(eps);
  const Normals nm = normals(u, reg);
  const Vec K = fd_div_v(u.grid, nm);
  double s = 0.0;
  for (std::size_t k = 0; k < nm.n; ++k) {
    if (nm.gnorm[k] <= reg.eta_grad) continue;
    const double h = 0.5 * eps * nm.gnorm[k] * nm.gnorm[k] + well(u[k], 0) / eps;
    s += 0.5 * K[k] * K[k] * h;
  }
  return s / static_cast<double>(nm.n);
}

namespace {

double eval_j(const ScalarField& u, double eps, double alpha_exp, const Normals& nm) {
  double s = 0.0;
  for (std::size_t k = 0; k < nm.n; ++k) {
    const double z = eps * hnn(nm, k) - well(u[k], 1) / eps;
    s += z * z;
  }
  return s / static_cast<double>(nm.n) / std::pow(eps, 1.0 + alpha_exp);
}

}  // namespace

double eval_err(const ScalarField& u, double eps, double alpha_exp, double beta, const RegParams& reg) {
  require_eps(eps);
  if (!(beta >= 0.0)) throw ValidationError("beta must be >= 0");
  const double w = eval_classical(u, eps);
  if (beta == 0.0) return w;
  return w + beta * eval_j(u, eps, alpha_exp, normals(u, reg));
}

JTerms eval_j_terms(const ScalarField& u, double eps, const RegParams& reg, LaplacianKind lap) {
  require_eps(eps);
  const Normals nm = normals(u, reg);
  const Vec l = laplacian(u, lap);
  JTerms t;
  for (std::size_t k = 0; k < nm.n; ++k) {
    const double a = eps * l[k];
    const double hn = hnn(nm, k);
    const double b = eps * hn;
    const double c = well(u[k], 1) / eps;
    t.J1 += (a - c) * c;
    t.J2 += (a - b) * c;
    t.J3 += (a - c) * b;
    t.J4 += (a - b) * b;
    t.zeta_sq += (b - c) * (b - c);

    double hv2 = 0.0;
    for (int i = 0; i < nm.d; ++i) {
      double hv = 0.0;
      for (int j = 0; j < nm.d; ++j) {
        hv += nm.hess.at(i, j, k) * nm.v[j][k];
      }
      hv2 += hv * hv;
    }
    // |(I - v v^T) H|^2 / s^2 times |grad u|^2
    double ph2 = 0.0;
    for (int j = 0; j < nm.d; ++j) {
      double vh = 0.0;
      for (int i = 0; i < nm.d; ++i) vh += nm.v[i][k] * nm.hess.at(i, j, k);
      for (int i = 0; i < nm.d; ++i) {
        const double p = nm.hess.at(i, j, k) - nm.v[i][k] * vh;
        ph2 += p * p;
      }
    }
    const double g2s2 = nm.gnorm[k] * nm.gnorm[k] / (nm.s[k] * nm.s[k]);
    t.split_geo += 0.5 * eps * ph2 * g2s2;
    t.split_soft += 0.5 * eps * (hv2 - hn * hn);
  }
  const double inv = 1.0 / static_cast<double>(nm.n);
  t.J1 *= -2.0 / eps * inv;
  t.J2 *= -2.0 / eps * inv;
  t.J3 *= -2.0 / eps * inv;
  t.J4 *= -2.0 / eps * inv;
  t.split_normal = t.zeta_sq * inv / (2.0 * eps);
  t.zeta_sq *= 2.0 / eps * inv;
  t.split_geo *= inv;
  t.split_soft *= inv;
  return t;
}

ScalarField split_soft_density(const ScalarField& u, double eps, const RegParams& reg) {
  require_eps(eps);
  const Normals nm = normals(u, reg);
  ScalarField out(u.grid);
  for (std::size_t k = 0; k < nm.n; ++k) {
    double hv2 = 0.0;
    for (int i = 0; i < nm.d; ++i) {
      double hv = 0.0;
      for (int j = 0; j < nm.d; ++j) hv += nm.hess.at(i, j, k) * nm.v[j][k];
      hv2 += hv * hv;
    }
    const double hn = hnn(nm, k);
    out[k] = 0.5 * eps * (hv2 - hn * hn);
  }
  return out;
}

EnergyReport eval_all(const ScalarField& u, double eps, const EnergyParams& p) {
  EnergyReport r;
  r.perimeter = eval_perimeter(u, eps);
  r.classical = eval_classical(u, eps, p.laplacian);
  r.mugnai = eval_mugnai(u, eps, p.reg);
  r.bellettini = eval_bellettini(u, eps, p.reg);
  r.err = r.classical + (p.beta == 0.0 ? 0.0 : p.beta * eval_j(u, eps, p.alpha_exp, normals(u, p.reg)));
  r.discrepancy_mass = eval_discrepancy(u, eps).mass;
  return r;
}

double energy_value(EnergyKind kind, const ScalarField& u, double eps, const EnergyParams& p) {
  switch (kind) {
    case EnergyKind::perimeter: return eval_perimeter(u, eps);
    case EnergyKind::classical: return eval_classical(u, eps, p.laplacian);
    case EnergyKind::mugnai: return eval_mugnai(u, eps, p.reg);
    case EnergyKind::bellettini: return eval_bellettini(u, eps, p.reg);
    case EnergyKind::err: {
      require_eps(eps);
      const double w = eval_classical(u, eps, p.laplacian);
      return p.beta == 0.0 ? w : w + p.beta * eval_j(u, eps, p.alpha_exp, normals(u, p.reg));
    }
  }
  return 0.0;
}

ClassicalGradient grad_classical(const ScalarField& u, double eps, LaplacianKind lap) {
  require_eps(eps);
  const Vec l = laplacian(u, lap);
  ClassicalGradient out{ScalarField(u.grid), ScalarField(u.grid)};
  for (std::size_t k = 0; k < u.size(); ++k) out.mu[k] = well(u[k], 1) - eps * eps * l[k];
  const Vec lmu = laplacian(u.grid, out.mu.values, lap);
  const double inv_e2 = 1.0 / (eps * eps);
  for (std::size_t k = 0; k < u.size(); ++k) out.rhs[k] = lmu[k] - well(u[k], 2) * out.mu[k] * inv_e2;
  return out;
}

namespace {

// Gradient of the Mugnai energy; see grad_mugnai for the flow scaling.
Vec mugnai_gradient(const ScalarField& u, double eps, const RegParams& reg) {
  const Normals nm = normals(u, reg);
  const PeriodicGrid& g = u.grid;
  const int d = nm.d;
  std::vector<Vec> V(nm.hess.comp.size(), Vec(nm.n));
  Vec vn(nm.n);
  std::vector<Vec> flux(static_cast<std::size_t>(d), Vec(nm.n));
  for (std::size_t k = 0; k < nm.n; ++k) {
    const double c = well(u[k], 1) / eps;
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j)
        V[MatrixField::index(i, j, d)][k] = eps * nm.hess.at(i, j, k) - c * nm.v[i][k] * nm.v[j][k];
    double vv[3] = {0.0, 0.0, 0.0};
    double vnk = 0.0;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) vv[i] += V[MatrixField::index(i, j, d)][k] * nm.v[j][k];
      vnk += vv[i] * nm.v[i][k];
    }
    vn[k] = vnk;
    // (2 W'/eps^2) (I - v v^T) V v / s
    const double coef = 2.0 * well(u[k], 1) / (eps * eps) / nm.s[k];
    for (int i = 0; i < d; ++i) flux[i][k] = coef * (vv[i] - nm.v[i][k] * vnk);
  }
  Vec out = double_divergence(g, V, d);
  const Vec dflux = fd_divergence(g, flux);
  const double inv_e2 = 1.0 / (eps * eps);
  for (std::size_t k = 0; k < nm.n; ++k) out[k] += dflux[k] - well(u[k], 2) * inv_e2 * vn[k];
  return out;
}

Vec bellettini_gradient(const ScalarField& u, double eps, const RegParams& reg) {
  const Normals nm = normals(u, reg);
  const PeriodicGrid& g = u.grid;
  const int d = nm.d;
  const Vec K = fd_div_v(g, nm);
  Vec kh(nm.n), half_k2(nm.n, 0.0);
  for (std::size_t k = 0; k < nm.n; ++k) {
    if (nm.gnorm[k] <= reg.eta_grad) {
      kh[k] = 0.0;
      continue;
    }
    const double h = 0.5 * eps * nm.gnorm[k] * nm.gnorm[k] + well(u[k], 0) / eps;
    kh[k] = K[k] * h;
    half_k2[k] = 0.5 * K[k] * K[k];
  }
  std::vector<Vec> gkh(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) gkh[a] = fd_partial(g, kh, a);
  std::vector<Vec> f1 = project(nm, gkh);
  std::vector<Vec> f2(static_cast<std::size_t>(d), Vec(nm.n));
  for (int a = 0; a < d; ++a)
    for (std::size_t k = 0; k < nm.n; ++k) f2[a][k] = half_k2[k] * eps * nm.grad.comp[a][k];
  Vec out = fd_divergence(g, f1);
  const Vec d2 = fd_divergence(g, f2);
  for (std::size_t k = 0; k < nm.n; ++k) out[k] += -d2[k] + half_k2[k] * well(u[k], 1) / eps;
  return out;
}

Vec j_gradient(const ScalarField& u, double eps, double alpha_exp, const RegParams& reg) {
  const Normals nm = normals(u, reg);
  const PeriodicGrid& g = u.grid;
  const int d = nm.d;
  Vec zeta(nm.n);
  std::vector<Vec> zn(nm.hess.comp.size(), Vec(nm.n));
  std::vector<Vec> flux(static_cast<std::size_t>(d), Vec(nm.n));
  for (std::size_t k = 0; k < nm.n; ++k) {
    const double z = eps * hnn(nm, k) - well(u[k], 1) / eps;
    zeta[k] = z;
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) zn[MatrixField::index(i, j, d)][k] = z * nm.v[i][k] * nm.v[j][k];
    double hv[3] = {0.0, 0.0, 0.0};
    double vhv = 0.0;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) hv[i] += nm.hess.at(i, j, k) * nm.v[j][k];
      vhv += hv[i] * nm.v[i][k];
    }
    // 2 eps zeta (I - v v^T) H v / s
    const double coef = 2.0 * eps * z / nm.s[k];
    for (int i = 0; i < d; ++i) flux[i][k] = coef * (hv[i] - nm.v[i][k] * vhv);
  }
  Vec out = double_divergence(g, zn, d);
  const Vec dflux = fd_divergence(g, flux);
  const double scale = 2.0 / std::pow(eps, 1.0 + alpha_exp);
  for (std::size_t k = 0; k < nm.n; ++k)
    out[k] = scale * (eps * out[k] - dflux[k] - well(u[k], 2) * zeta[k] / eps);
  return out;
}

Vec perimeter_gradient(const ScalarField& u, double eps) {
  const Vec l = spectral_laplacian(u).values;
  Vec out(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = -eps * l[k] + well(u[k], 1) / eps;
  return out;
}

}  // namespace

ScalarField grad_mugnai(const ScalarField& u, double eps, const RegParams& reg) {
  require_eps(eps);
  Vec g = mugnai_gradient(u, eps, reg);
  for (double& x : g) x *= -eps;
  return ScalarField(u.grid, std::move(g));
}

ScalarField grad_mugnai_penalty(const ScalarField& u, double eps, const RegParams& reg) {
  require_eps(eps);
  const Normals nm = normals(u, reg);
  const PeriodicGrid& g = u.grid;
  const int d = nm.d;
  // dv[i][j] = D_j v_i
  std::vector<std::vector<Vec>> dv(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) dv[i].push_back(fd_partial(g, nm.v[i], j));
  ScalarField out(g);
  for (std::size_t k = 0; k < nm.n; ++k) {
    double div = 0.0, tr = 0.0;
    for (int i = 0; i < d; ++i) {
      div += dv[i][i][k];
      for (int j = 0; j < d; ++j) tr += dv[i][j][k] * dv[j][i][k];
    }
    out[k] = well(u[k], 1) * (div * div - tr);
  }
  return out;
}

ScalarField grad_bellettini(const ScalarField& u, double eps, const RegParams& reg) {
  require_eps(eps);
  Vec g = bellettini_gradient(u, eps, reg);
  for (double& x : g) x *= -1.0 / eps;
  return ScalarField(u.grid, std::move(g));
}

ScalarField grad_err(const ScalarField& u, double eps, double alpha_exp, double beta, const RegParams& reg) {
  require_eps(eps);
  if (!(beta >= 0.0)) throw ValidationError("beta must be >= 0");
  ScalarField rhs = grad_classical(u, eps).rhs;
  if (beta == 0.0) return rhs;
  const Vec gj = j_gradient(u, eps, alpha_exp, reg);
  for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] -= beta * eps * gj[k];
  return rhs;
}

ScalarField energy_gradient(EnergyKind kind, const ScalarField& u, double eps, const EnergyParams& p) {
  require_eps(eps);
  switch (kind) {
    case EnergyKind::perimeter: return ScalarField(u.grid, perimeter_gradient(u, eps));
    case EnergyKind::classical: {
      ScalarField r = grad_classical(u, eps, p.laplacian).rhs;
      for (double& x : r.values) x *= -1.0 / eps;
      return r;
    }
    case EnergyKind::mugnai: return ScalarField(u.grid, mugnai_gradient(u, eps, p.reg));
    case EnergyKind::bellettini: return ScalarField(u.grid, bellettini_gradient(u, eps, p.reg));
    case EnergyKind::err: {
      ScalarField r = grad_classical(u, eps, p.laplacian).rhs;
      for (double& x : r.values) x *= -1.0 / eps;
      if (p.beta != 0.0) {
        const Vec gj = j_gradient(u, eps, p.alpha_exp, p.reg);
        for (std::size_t k = 0; k < r.size(); ++k) r[k] += p.beta * gj[k];
      }
      return r;
    }
  }
  return ScalarField(u.grid);
}

double check_gradient(EnergyKind kind, const ScalarField& u, double eps, const EnergyParams& p,
                      const ScalarField& w, double h) {
  if (u.grid != w.grid) throw ValidationError("direction lives on a different grid");
  if (!(h > 0.0)) throw ValidationError("step h must be positive");
  const ScalarField g = energy_gradient(kind, u, eps, p);
  double analytic = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) analytic += g[k] * w[k];
  analytic /= static_cast<double>(u.size());

  ScalarField up(u), um(u);
  for (std::size_t k = 0; k < u.size(); ++k) {
    up[k] += h * w[k];
    um[k] -= h * w[k];
  }
  const double e0 = energy_value(kind, u, eps, p);
  const double fd = (energy_value(kind, up, eps, p) - energy_value(kind, um, eps, p)) / (2.0 * h);
  const double diff = std::abs(analytic - fd);
  // Cancellation in E(u+hw) - E(u-hw) limits the attainable agreement.
  const double floor = 1e-14 * (1.0 + std::abs(e0)) / h;
  const double scale = std::max({std::abs(analytic), std::abs(fd), floor});
  if (analytic == 0.0 && fd == 0.0) return 0.0;
  return diff / scale;
}

double gradient_oracle(EnergyKind kind, std::uint64_t seed, const EnergyParams& params, int fields, int modes,
                       double eps, double h) {
  const PeriodicGrid g = make_grid(2, modes);
  double worst = 0.0;
  for (int f = 0; f < fields; ++f) {
    ScalarField u = band_limited_random(g, 4, seed + 2 * static_cast<std::uint64_t>(f));
    const double amp = field_max_abs(u.values);
    for (double& x : u.values) x = 0.5 + 0.4 * x / amp;
    ScalarField w = band_limited_random(g, 4, seed + 2 * static_cast<std::uint64_t>(f) + 1);
    const double r = field_rms(w.values);
    for (double& x : w.values) x /= r;
    worst = std::max(worst, check_gradient(kind, u, eps, params, w, h));
  }
  return worst;
}

double gradient_tolerance(EnergyKind kind) {
  switch (kind) {
    case EnergyKind::perimeter:
    case EnergyKind::classical:
    case EnergyKind::err: return 1e-5;
    case EnergyKind::mugnai:
    case EnergyKind::bellettini: return 1e-3;
  }
  return 1e-3;
}

}  // namespace pfw
