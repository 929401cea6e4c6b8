#pragma once

#include <array>
#include <optional>
#include <vector>

#include "pfw/energies.hpp"
#include "pfw/flows.hpp"
#include "pfw/spectral_grid.hpp"

namespace pfw {

struct Polyline {
  /// Points in unwrapped box coordinates; consecutive points are at most one cell apart.
  std::vector<std::array<double, 2>> points;
  /// False for curves that wrap around the periodic box. Closed curves do not repeat
  /// their first point.
  bool closed = false;
};

struct Contour {
  std::vector<Polyline> lines;
  double level = 0.5;
  double time = 0.0;
};

/// Periodic marching squares on a 2D field. A node is inside when u > level; saddle
/// cells are resolved by the mean of their four corners.
Contour extract_contour(const ScalarField& u, double level);

double polyline_length(const Polyline& line);
double contour_length(const Contour& c);

/// Radius of the ball whose measure equals the integral of u: 1D half-length,
/// 2D sqrt(m/pi), 3D (3m/(4 pi))^(1/3). Throws ValidationError when mean(u) <= 0.
double estimate_radius(const ScalarField& u);

/// Connected components of {u > level} (or {u < level}) under periodic face adjacency.
int count_components(const ScalarField& u, double level, bool above = true);

/// Minimum periodic point-to-segment distance between distinct polylines.
/// Throws ValidationError with fewer than two polylines.
double min_pair_distance(const Contour& c);

struct SeriesPoint {
  double t = 0.0;
  std::optional<double> R_est;
  EnergyReport energies;
  std::optional<int> components;
  std::optional<double> min_pair_distance;
  int fp_iters = 0;
};

/// Observables of the current state. fp_iters is the largest fixed-point count of the
/// steps taken since step index `since`.
SeriesPoint observe(const FlowSession& s, std::size_t since = 0, const EnergyParams& eparams = {});

std::vector<SeriesPoint> assemble_series(const std::vector<SeriesPoint>& ticks);

}  // namespace pfw
