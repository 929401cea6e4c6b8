#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pfw/energies.hpp"
#include "pfw/spectral_grid.hpp"

namespace pfw {

enum class FlowKind : std::uint8_t { classical = 0, mugnai = 1, allen_cahn = 2 };

FlowKind parse_flow_kind(const std::string& name);
std::string to_string(FlowKind kind);

struct ModelParams {
  double eps = 0.0;
  double alpha = 1.0;  // conditioning of the split system; the continuous flow does not depend on it
  double dt = 0.0;
  double sigma = 1e-3;
  double tol = 1e-8;
  int max_iter = 100;
  FlowKind kind = FlowKind::classical;
};

/// Throws ValidationError when a parameter is out of range for the grid.
void validate(const ModelParams& p, const PeriodicGrid& grid);

struct HistoryEntry {
  double t = 0.0;
  long step = 0;
  EnergyReport energies;
};

/// State of one running flow. mu is stored in the scaling mu = W'(u)/eps^2 - Laplacian(u).
struct FlowSession {
  PeriodicGrid grid;
  ModelParams params;
  ScalarField u;
  ScalarField mu;
  double t0 = 0.0;  // time at step 0; t = t0 + n dt avoids accumulated rounding
  double t = 0.0;
  long n = 0;
  std::vector<HistoryEntry> history;
  std::vector<int> fp_iters;

  static FlowSession start(const ModelParams& params, ScalarField u0, ScalarField mu0, double t0 = 0.0);
  /// Appends an energy record for the current state.
  void record(const EnergyParams& eparams = {});
};

struct StepInfo {
  int iterations = 0;
  double residual = 0.0;
};

/// One step of the semi-implicit classical scheme, solved by fixed-point sweeps
///   h  = u^n - dt/(alpha eps^4) W''(u_k) m_k [+ dt W'(u^n) B_sigma(u^n) / eps^2]
///   ht = alpha W'(u_k)
/// followed by the spectral resolvent of apply_step_multipliers, with m = alpha eps^2 mu.
/// The session is only modified when the loop converges.
StepInfo step_classical(FlowSession& s);
/// Same loop with the explicit penalty term frozen at u^n.
StepInfo step_mugnai(FlowSession& s);
/// u^{n+1} = (I - dt eps Laplacian)^{-1} (u^n - dt/eps W'(u^n)).
StepInfo step_allen_cahn(FlowSession& s);
StepInfo step(FlowSession& s);

struct StabilityReport {
  double lhs_classical = 0.0;
  double lhs_mugnai = 0.0;
  double heuristic_dt_max = 0.0;
  double M1 = 0.0, M2 = 0.0, M3 = 0.0, M4 = 0.0;
  /// lhs below this counts as "much smaller than one".
  static constexpr double kSmall = 0.1;
  bool classical_satisfied = false;
  bool mugnai_satisfied = false;
  bool heuristic_satisfied = false;
};

StabilityReport stability_limits(const ModelParams& p, const PeriodicGrid& grid, double C = 1.0);

}  // namespace pfw
