#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pfw/errors.hpp"
#include "pfw/io.hpp"

namespace pfw {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

std::string format_series_row(const SeriesPoint& p, const SeriesColumns& cols) {
  std::string row = num(p.t);
  row += ',';
  if (p.R_est) row += num(*p.R_est);
  row += ',';
  if (cols.perimeter) row += num(p.energies.perimeter);
  row += ',';
  if (cols.classical) row += num(p.energies.classical);
  row += ',';
  if (cols.mugnai) row += num(p.energies.mugnai);
  row += ',';
  if (p.components) row += std::to_string(*p.components);
  row += ',';
  if (p.min_pair_distance) row += num(*p.min_pair_distance);
  row += ',';
  row += std::to_string(p.fp_iters);
  return row;
}

void write_series(const std::string& path, const std::vector<SeriesPoint>& series, const SeriesColumns& cols) {
  std::string out = kSeriesHeader;
  out += '\n';
  for (const auto& p : series) {
    out += format_series_row(p, cols);
    out += '\n';
  }
  write_file_atomic(path, out);
}

std::vector<SeriesPoint> read_series(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FormatError(FormatError::Kind::io, "cannot open series '" + path + "'");
  std::string line;
  if (!std::getline(f, line) || line != kSeriesHeader)
    throw FormatError(FormatError::Kind::bad_magic, "series file has an unexpected header");
  std::vector<SeriesPoint> out;
  int lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != 8) throw FormatError(FormatError::Kind::truncated, "series line " + std::to_string(lineno) + " has wrong column count");
    auto d = [](const std::string& s) { return std::strtod(s.c_str(), nullptr); };
    SeriesPoint p;
    p.t = d(c[0]);
    if (!c[1].empty()) p.R_est = d(c[1]);
    if (!c[2].empty()) p.energies.perimeter = d(c[2]);
    if (!c[3].empty()) p.energies.classical = d(c[3]);
    if (!c[4].empty()) p.energies.mugnai = d(c[4]);
    if (!c[5].empty()) p.components = std::atoi(c[5].c_str());
    if (!c[6].empty()) p.min_pair_distance = d(c[6]);
    p.fp_iters = c[7].empty() ? 0 : std::atoi(c[7].c_str());
    out.push_back(p);
  }
  return out;
}

void write_contour(const std::string& path, const Contour& c) {
  std::string out = "polyline,closed,x,y\n";
  for (std::size_t i = 0; i < c.lines.size(); ++i) {
    const auto& l = c.lines[i];
    for (const auto& p : l.points) {
      out += std::to_string(i);
      out += l.closed ? ",1," : ",0,";
      out += num(p[0]);
      out += ',';
      out += num(p[1]);
      out += '\n';
    }
  }
  write_file_atomic(path, out);
}

}  // namespace pfw
