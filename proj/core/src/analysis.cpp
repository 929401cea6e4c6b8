#include "pfw/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "pfw/errors.hpp"

namespace pfw {

namespace {

using P2 = std::array<double, 2>;

struct Segment {
  std::size_t a, b;  // edge ids
};

double wrap(double d) { return d - std::round(d); }

}  // namespace

Contour extract_contour(const ScalarField& u, double level) {
  const PeriodicGrid& g = u.grid;
  if (g.dims() != 2) throw ValidationError("contour extraction needs a 2D field");
  const int m = g.points();
  const double dx = g.spacing();
  auto val = [&](int i, int j) { return u[static_cast<std::size_t>(((i + m) % m) * m + (j + m) % m)]; };
  // Edge ids: 2*(i*m+j) runs along axis 0 from node (i,j), 2*(i*m+j)+1 along axis 1.
  auto edge_a = [m](int i, int j) { return 2 * static_cast<std::size_t>(((i % m) * m + (j % m))); };
  auto edge_b = [m](int i, int j) { return 2 * static_cast<std::size_t>(((i % m) * m + (j % m))) + 1; };

  std::vector<Segment> segs;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double v[4] = {val(i, j), val(i + 1, j), val(i + 1, j + 1), val(i, j + 1)};
      bool in[4];
      for (int c = 0; c < 4; ++c) in[c] = v[c] > level;
      const std::size_t e[4] = {edge_a(i, j), edge_b(i + 1, j), edge_a(i, j + 1), edge_b(i, j)};
      // Edge k joins corners k and k+1.
      std::vector<int> crossed;
      for (int k = 0; k < 4; ++k)
        if (in[k] != in[(k + 1) % 4]) crossed.push_back(k);
      if (crossed.empty()) continue;
      if (crossed.size() == 2) {
        segs.push_back({e[crossed[0]], e[crossed[1]]});
        continue;
      }
      // Saddle: cut off the corners whose state differs from the cell centre.
      const bool centre_in = 0.25 * (v[0] + v[1] + v[2] + v[3]) > level;
      for (int c = 0; c < 4; ++c)
        if (in[c] != centre_in) segs.push_back({e[(c + 3) % 4], e[c]});
    }
  }

  auto edge_point = [&](std::size_t id) -> P2 {
    const std::size_t node = id / 2;
    const int i = static_cast<int>(node / static_cast<std::size_t>(m));
    const int j = static_cast<int>(node % static_cast<std::size_t>(m));
    const double a = val(i, j);
    if (id % 2 == 0) {
      const double b = val(i + 1, j);
      const double t = (level - a) / (b - a);
      return {(i + t) * dx, j * dx};
    }
    const double b = val(i, j + 1);
    const double t = (level - a) / (b - a);
    return {i * dx, (j + t) * dx};
  };

  std::unordered_map<std::size_t, std::array<std::size_t, 2>> by_edge;
  by_edge.reserve(segs.size() * 2);
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  for (std::size_t s = 0; s < segs.size(); ++s) {
    for (std::size_t e : {segs[s].a, segs[s].b}) {
      auto it = by_edge.find(e);
      if (it == by_edge.end())
        by_edge.emplace(e, std::array<std::size_t, 2>{s, none});
      else
        it->second[1] = s;
    }
  }

  Contour out;
  out.level = level;
  std::vector<char> used(segs.size(), 0);
  for (std::size_t s0 = 0; s0 < segs.size(); ++s0) {
    if (used[s0]) continue;
    Polyline line;
    const std::size_t start_edge = segs[s0].a;
    P2 start = edge_point(start_edge);
    line.points.push_back(start);
    std::size_t seg = s0;
    std::size_t edge = segs[s0].b;
    P2 prev = start;
    bool closed_chain = false;
    while (true) {
      used[seg] = 1;
      P2 p = edge_point(edge);
      for (int a = 0; a < 2; ++a) p[a] = prev[a] + wrap(p[a] - prev[a]);
      if (edge == start_edge) {
        closed_chain = true;
        const bool same = std::abs(p[0] - start[0]) < 1e-9 && std::abs(p[1] - start[1]) < 1e-9;
        line.closed = same;
        if (!same) line.points.push_back(p);
        break;
      }
      line.points.push_back(p);
      prev = p;
      const auto& adj = by_edge[edge];
      const std::size_t next = adj[0] == seg ? adj[1] : adj[0];
      if (next == none || used[next]) break;
      seg = next;
      edge = segs[seg].a == edge ? segs[seg].b : segs[seg].a;
    }
    if (!closed_chain) line.closed = false;
    out.lines.push_back(std::move(line));
  }
  return out;
}

double polyline_length(const Polyline& line) {
  double len = 0.0;
  const auto& p = line.points;
  for (std::size_t k = 1; k < p.size(); ++k) len += std::hypot(p[k][0] - p[k - 1][0], p[k][1] - p[k - 1][1]);
  if (line.closed && p.size() > 1) len += std::hypot(p.front()[0] - p.back()[0], p.front()[1] - p.back()[1]);
  return len;
}

double contour_length(const Contour& c) {
  double len = 0.0;
  for (const auto& l : c.lines) len += polyline_length(l);
  return len;
}

double estimate_radius(const ScalarField& u) {
  const double m = field_mean(u.values);
  if (!(m > 0.0)) throw ValidationError("radius undefined: mean(u) <= 0");
  switch (u.grid.dims()) {
    case 1: return 0.5 * m;
    case 2: return std::sqrt(m / std::numbers::pi);
    default: return std::cbrt(3.0 * m / (4.0 * std::numbers::pi));
  }
}

int count_components(const ScalarField& u, double level, bool above) {
  const PeriodicGrid& g = u.grid;
  const std::size_t n = g.size();
  std::vector<char> in(n);
  for (std::size_t k = 0; k < n; ++k) in[k] = above ? u[k] > level : u[k] < level;
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack;
  int count = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!in[k] || seen[k]) continue;
    ++count;
    seen[k] = 1;
    stack.push_back(k);
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      for (int a = 0; a < g.dims(); ++a)
        for (int s : {-1, 1}) {
          const std::size_t nb = g.shifted(c, a, s);
          if (in[nb] && !seen[nb]) {
            seen[nb] = 1;
            stack.push_back(nb);
          }
        }
    }
  }
  return count;
}

namespace {

double point_segment_periodic(const P2& p, const P2& a, const P2& b) {
  // Move p to the image nearest to a; segments are shorter than one cell.
  const P2 q{a[0] + wrap(p[0] - a[0]), a[1] + wrap(p[1] - a[1])};
  const double bx = b[0] - a[0], by = b[1] - a[1];
  const double qx = q[0] - a[0], qy = q[1] - a[1];
  const double l2 = bx * bx + by * by;
  double t = l2 > 0.0 ? (qx * bx + qy * by) / l2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(qx - t * bx, qy - t * by);
}

double line_to_line(const Polyline& A, const Polyline& B) {
  double best = std::numeric_limits<double>::infinity();
  const auto& q = B.points;
  const std::size_t nseg = B.closed ? q.size() : (q.size() > 0 ? q.size() - 1 : 0);
  for (const P2& p : A.points) {
    if (q.size() == 1) {
      best = std::min(best, std::hypot(wrap(p[0] - q[0][0]), wrap(p[1] - q[0][1])));
      continue;
    }
    for (std::size_t k = 0; k < nseg; ++k) best = std::min(best, point_segment_periodic(p, q[k], q[(k + 1) % q.size()]));
  }
  return best;
}

}  // namespace

double min_pair_distance(const Contour& c) {
  if (c.lines.size() < 2) throw ValidationError("min_pair_distance needs at least two polylines");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.lines.size(); ++i)
    for (std::size_t j = i + 1; j < c.lines.size(); ++j) {
      best = std::min(best, line_to_line(c.lines[i], c.lines[j]));
      best = std::min(best, line_to_line(c.lines[j], c.lines[i]));
    }
  return best;
}

SeriesPoint observe(const FlowSession& s, std::size_t since, const EnergyParams& eparams) {
  SeriesPoint p;
  p.t = s.t;
  EnergyParams ep = eparams;
  ep.reg.sigma = s.params.sigma;
  p.energies = eval_all(s.u, s.params.eps, ep);
  const double m = field_mean(s.u.values);
  if (m > 0.0) p.R_est = estimate_radius(s.u);
  p.components = count_components(s.u, 0.5);
  if (s.grid.dims() == 2) {
    const Contour c = extract_contour(s.u, 0.5);
    if (c.lines.size() >= 2) p.min_pair_distance = min_pair_distance(c);
  }
  for (std::size_t k = since; k < s.fp_iters.size(); ++k) p.fp_iters = std::max(p.fp_iters, s.fp_iters[k]);
  return p;
}

std::vector<SeriesPoint> assemble_series(const std::vector<SeriesPoint>& ticks) {
  std::vector<SeriesPoint> out;
  out.reserve(ticks.size());
  for (const auto& p : ticks)
    if (out.empty() || p.t > out.back().t) out.push_back(p);
  return out;
}

}  // namespace pfw
