#pragma once

#include <vector>

namespace pfw {

/// Double well W(s) = s^2 (1-s)^2 / 2 and its derivatives, order 0..4.
double well(double s, int order);

/// sup over [0,1] of |W^(order)|, found by dense sampling and cached.
double well_sup(int order);

/// Optimal profile q(t) = 1/(1+e^t) (order 0), q' (order 1), q'' (order 2).
double profile_q(double t, int order);

/// Second-order corrector eta2(z) = z q'(z) / 2.
double eta2(double z);

/// Uniformly sampled function on [-L, L].
struct SampledProfile {
  double L = 0.0;
  std::vector<double> z;
  std::vector<double> values;

  double spacing() const { return z.size() > 1 ? z[1] - z[0] : 0.0; }
  /// Linear interpolation; zero outside [-L, L].
  double operator()(double x) const;
};

/// Solves eta1'' - W''(q) eta1 = z q'(z) with eta1 -> 0 at infinity.
///
/// The source is odd and the operator even, so the problem is posed on [0, L] with
/// eta1(0) = eta1(L) = 0 and extended oddly. This keeps the translation mode q' out
/// of the discrete kernel. nodes counts points on [-L, L] and is rounded up to odd.
SampledProfile solve_eta1(double L = 30.0, int nodes = 20001);

/// Max-norm residual of the discrete eta1 equation on interior nodes.
double eta1_residual(const SampledProfile& eta1);

struct ProfileIntegrals {
  double c0;   // integral of sqrt(2W) over [0,1]
  double S;    // integral of q'^2
  double zqq;  // integral of z q'' q'
  double w3;   // integral of W'''(q) eta1 q'^2
};

ProfileIntegrals profile_integrals();

}  // namespace pfw
