#pragma once

#include <cstdint>
#include <string>

#include "pfw/spectral_grid.hpp"

namespace pfw {

/// Regularization of unit normals: v = grad u / sqrt(|grad u|^2 + sigma^2). The
/// Bellettini integrand is dropped where |grad u| <= eta_grad.
struct RegParams {
  double sigma = 1e-3;
  double eta_grad = 1e-6;
};

enum class LaplacianKind { spectral, fd_trace };

enum class EnergyKind { perimeter, classical, mugnai, bellettini, err };

EnergyKind parse_energy_kind(const std::string& name);
std::string to_string(EnergyKind kind);

/// Knobs shared by the energy evaluators and gradients.
struct EnergyParams {
  RegParams reg;
  double alpha_exp = 0.0;  // J is scaled by eps^-(1 + alpha_exp)
  double beta = 1.0;
  /// Laplacian used by the classical energy and the J terms. fd_trace uses the trace
  /// of the finite-difference Hessian, which makes the algebraic identities exact.
  LaplacianKind laplacian = LaplacianKind::spectral;
};

struct EnergyReport {
  double perimeter = 0.0;
  double classical = 0.0;
  double mugnai = 0.0;
  double bellettini = 0.0;
  double err = 0.0;
  double discrepancy_mass = 0.0;
};

struct Discrepancy {
  ScalarField xi;
  double mass = 0.0;
};

struct JTerms {
  double J1 = 0.0, J2 = 0.0, J3 = 0.0, J4 = 0.0;
  double split_geo = 0.0;
  double split_soft = 0.0;
  /// (1/(2 eps)) * integral of (eps H:N - W'/eps)^2, the remaining piece of the split.
  double split_normal = 0.0;
  /// (2/eps) * integral of (eps H:N - W'/eps)^2.
  double zeta_sq = 0.0;
};

double eval_perimeter(const ScalarField& u, double eps);
Discrepancy eval_discrepancy(const ScalarField& u, double eps);
double eval_classical(const ScalarField& u, double eps, LaplacianKind lap = LaplacianKind::spectral);
double eval_mugnai(const ScalarField& u, double eps, const RegParams& reg = {});
double eval_bellettini(const ScalarField& u, double eps, const RegParams& reg = {});
double eval_err(const ScalarField& u, double eps, double alpha_exp, double beta, const RegParams& reg = {});
JTerms eval_j_terms(const ScalarField& u, double eps, const RegParams& reg = {},
                    LaplacianKind lap = LaplacianKind::spectral);
/// Pointwise (eps/2)(|H v|^2 - (H:N)^2), before quadrature.
ScalarField split_soft_density(const ScalarField& u, double eps, const RegParams& reg = {});
EnergyReport eval_all(const ScalarField& u, double eps, const EnergyParams& params = {});

double energy_value(EnergyKind kind, const ScalarField& u, double eps, const EnergyParams& params);
/// L2 gradient with respect to the grid-mean inner product, exact adjoint of the
/// discrete energy.
ScalarField energy_gradient(EnergyKind kind, const ScalarField& u, double eps, const EnergyParams& params);

struct ClassicalGradient {
  ScalarField mu;   // W'(u) - eps^2 Laplacian(u)
  ScalarField rhs;  // Laplacian(mu) - W''(u) mu / eps^2, so that eps^2 du/dt = rhs
};
ClassicalGradient grad_classical(const ScalarField& u, double eps, LaplacianKind lap = LaplacianKind::spectral);

/// -eps times the gradient of the Mugnai energy (same scaling as the classical rhs).
ScalarField grad_mugnai(const ScalarField& u, double eps, const RegParams& reg = {});

/// W'(u) B_sigma(u) with B_sigma = (div v)^2 - tr(grad v grad v), evaluated with
/// centered differences. For a level set this is W'(u)(H^2 - |A|^2).
ScalarField grad_mugnai_penalty(const ScalarField& u, double eps, const RegParams& reg = {});

/// Right-hand side of the Bellettini flow du/dt = -grad E / eps.
ScalarField grad_bellettini(const ScalarField& u, double eps, const RegParams& reg = {});

/// Classical rhs minus beta * eps * grad J, so beta = 0 gives grad_classical(u).rhs.
ScalarField grad_err(const ScalarField& u, double eps, double alpha_exp, double beta, const RegParams& reg = {});

/// |<grad E, w> - (E(u+hw) - E(u-hw))/(2h)| / max(|<grad E, w>|, |FD|, floor).
/// Returns 0 when both sides vanish.
double check_gradient(EnergyKind kind, const ScalarField& u, double eps, const EnergyParams& params,
                      const ScalarField& w, double h);

/// Runs check_gradient on `fields` random band-limited states u = 1/2 + 0.4 r/max|r|
/// (modes |p| <= 4) on a 2D grid with 2*modes points per axis, each against its own
/// random unit-rms direction. Returns the largest relative error.
double gradient_oracle(EnergyKind kind, std::uint64_t seed, const EnergyParams& params = {}, int fields = 10,
                       int modes = 32, double eps = 0.0625, double h = 1e-6);

/// Acceptance tolerance of the gradient oracle: 1e-5 for the spectral energies,
/// 1e-3 for the ones built on regularized normals.
double gradient_tolerance(EnergyKind kind);

}  // namespace pfw
