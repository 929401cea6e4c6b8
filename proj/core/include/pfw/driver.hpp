#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pfw/analysis.hpp"
#include "pfw/config.hpp"
#include "pfw/flows.hpp"

namespace pfw {

enum class RunStatus { ok, nonconvergence, divergence };

struct RunOptions {
  /// Overrides the configured output directory when non-empty.
  std::string out_dir;
  /// Snapshot to continue from instead of the scene's initial state.
  std::string resume;
  bool write_files = true;
  /// Called after every accepted step.
  std::function<void(const FlowSession&)> on_step;
  /// Called for every warning produced during setup.
  std::function<void(const std::string&)> on_warning;
};

struct Trajectory {
  std::vector<SeriesPoint> series;
  std::vector<std::string> snapshots;
  FlowSession final_state;
  RunStatus status = RunStatus::ok;
  std::string message;
};

/// Initial session for a configuration (scene fields or a resumed snapshot).
FlowSession initial_session(const RunConfig& cfg, const std::string& resume = {},
                            std::vector<std::string>* warnings = nullptr);

/// Runs the configured flow to time T, recording observables every record_every
/// steps and snapshots every snapshot_every steps. Non-convergence and divergence
/// stop the run; whatever was recorded is still written and the status is set.
Trajectory run_flow(const RunConfig& cfg, const RunOptions& opts = {});

}  // namespace pfw
