#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pfw/analysis.hpp"
#include "pfw/flows.hpp"

namespace pfw {

/// Binary state file, little-endian:
///   "PFWF" | u32 version=1 | u8 dims | u32 points per axis (dims times) |
///   f64 eps | f64 alpha | f64 time | u8 flow kind | f64 u[...] | f64 mu[...]
struct Snapshot {
  static constexpr std::uint32_t kVersion = 1;
  int dims = 0;
  std::vector<std::uint32_t> points;
  double eps = 0.0;
  double alpha = 1.0;
  double time = 0.0;
  FlowKind kind = FlowKind::classical;
  std::vector<double> u;
  std::vector<double> mu;

  static Snapshot from_session(const FlowSession& s);
  PeriodicGrid grid() const;
};

void write_snapshot(const std::string& path, const Snapshot& s);
Snapshot read_snapshot(const std::string& path);

inline const char* kSeriesHeader = "t,R_est,E_perimeter,E_classical,E_mugnai,components,min_pair_distance,fp_iters";

struct SeriesColumns {
  bool perimeter = true;
  bool classical = true;
  bool mugnai = true;
};

void write_series(const std::string& path, const std::vector<SeriesPoint>& series, const SeriesColumns& cols = {});
/// Reads a series file back; energies not present in the file are left at zero.
std::vector<SeriesPoint> read_series(const std::string& path);
std::string format_series_row(const SeriesPoint& p, const SeriesColumns& cols = {});

/// CSV with header `polyline,closed,x,y`, one point per row.
void write_contour(const std::string& path, const Contour& c);

/// Writes the whole file to a temporary sibling and renames it into place.
void write_file_atomic(const std::string& path, const std::string& bytes);

}  // namespace pfw
