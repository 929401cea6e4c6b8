#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pfw/energies.hpp"
#include "pfw/flows.hpp"
#include "pfw/geometry.hpp"

namespace pfw {

/// Which energies are evaluated for the series output.
struct EnergyFlags {
  bool perimeter = true;
  bool classical = true;
  bool mugnai = true;
};

struct RunConfig {
  std::string scene = "circle";
  SceneParams scene_params;
  int dims = 2;
  int modes = 64;
  ModelParams model;
  EnergyParams energy;
  double heuristic_C = 1.0;
  double T = 0.0;
  long snapshot_every = 0;  // 0: first and last state only
  long record_every = 0;    // 0: same as snapshot_every
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  EnergyFlags energies;

  long steps() const;
  PeriodicGrid grid() const { return make_grid(dims, modes); }
};

/// Parses the line-oriented `key = value` format with `[section]` headers and `#`
/// comments. Numeric values accept plain numbers, `k/P` (P = modes) and `k*eps`;
/// `dt` also accepts auto_fig2 (eps^2/(2P^2)), auto_fig3 (P^-4), auto_fig13
/// (eps^2/(8P^2)) and auto_3d (eps^2/(10P^2)). A top-level `preset` fills defaults
/// for one of the named experiments. Errors carry the offending line number.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

std::vector<std::string> config_presets();

}  // namespace pfw
