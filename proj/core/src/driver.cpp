#include "pfw/driver.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "pfw/errors.hpp"
#include "pfw/geometry.hpp"
#include "pfw/io.hpp"

namespace pfw {

FlowSession initial_session(const RunConfig& cfg, const std::string& resume, std::vector<std::string>* warnings) {
  const PeriodicGrid grid = cfg.grid();
  if (!resume.empty()) {
    const Snapshot snap = read_snapshot(resume);
    if (snap.grid() != grid) throw ValidationError("resume snapshot grid does not match the configuration");
    if (snap.kind != cfg.model.kind) throw ValidationError("resume snapshot flow kind does not match the configuration");
    if (snap.eps != cfg.model.eps) throw ValidationError("resume snapshot eps does not match the configuration");
    FlowSession s = FlowSession::start(cfg.model, ScalarField(grid, snap.u), ScalarField(grid, snap.mu), snap.time);
    s.n = static_cast<long>(std::llround(snap.time / cfg.model.dt));
    return s;
  }
  const ShapePtr shape = builtin_scene(cfg.scene, cfg.scene_params);
  InitPair init = init_fields(shape, grid, cfg.model.eps);
  if (warnings) *warnings = init.warnings;
  return FlowSession::start(cfg.model, std::move(init.u0), std::move(init.mu0));
}

Trajectory run_flow(const RunConfig& cfg, const RunOptions& opts) {
  namespace fs = std::filesystem;
  std::vector<std::string> warnings;
  FlowSession s = initial_session(cfg, opts.resume, &warnings);
  if (opts.on_warning)
    for (const auto& w : warnings) opts.on_warning(w);

  const std::string dir = opts.out_dir.empty() ? cfg.out_dir : opts.out_dir;
  const long record_every = cfg.record_every > 0 ? cfg.record_every : cfg.snapshot_every;
  const long total = cfg.steps();
  const long first = s.n;
  const SeriesColumns cols{cfg.energies.perimeter, cfg.energies.classical, cfg.energies.mugnai};

  Trajectory traj;
  std::size_t since = s.fp_iters.size();
  long last_snap = -1;
  auto snapshot = [&]() {
    if (!opts.write_files || s.n == last_snap) return;
    last_snap = s.n;
    char name[64];
    std::snprintf(name, sizeof name, "snap_%08ld.pfwf", s.n);
    const std::string path = (fs::path(dir) / name).string();
    write_snapshot(path, Snapshot::from_session(s));
    traj.snapshots.push_back(path);
  };
  auto record = [&]() {
    traj.series.push_back(observe(s, since, cfg.energy));
    since = s.fp_iters.size();
  };
  auto flush = [&]() {
    traj.series = assemble_series(traj.series);
    if (opts.write_files) write_series((fs::path(dir) / "series.csv").string(), traj.series, cols);
  };

  record();
  snapshot();
  try {
    while (s.n < total) {
      step(s);
      if (opts.on_step) opts.on_step(s);
      const long done = s.n - first;
      const bool last = s.n >= total;
      if (last || (record_every > 0 && done % record_every == 0)) record();
      if (!last && cfg.snapshot_every > 0 && done % cfg.snapshot_every == 0) snapshot();
    }
    snapshot();
  } catch (const NonConvergence& e) {
    traj.status = RunStatus::nonconvergence;
    traj.message = e.what();
  } catch (const Divergence& e) {
    traj.status = RunStatus::divergence;
    traj.message = e.what();
  }
  flush();
  traj.final_state = std::move(s);
  return traj;
}

}  // namespace pfw
