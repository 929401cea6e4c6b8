// Command-line front end: run flows, inspect snapshots, print diagnostics.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

#include "pfw/analysis.hpp"
#include "pfw/config.hpp"
#include "pfw/driver.hpp"
#include "pfw/energies.hpp"
#include "pfw/errors.hpp"
#include "pfw/flows.hpp"
#include "pfw/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitSolver = 2;

int cmd_run(const std::string& config, const std::string& out, const std::string& resume) {
  const pfw::RunConfig cfg = pfw::load_config(config);
  pfw::RunOptions opts;
  opts.out_dir = out;
  opts.resume = resume;
  opts.on_warning = [](const std::string& w) { std::cerr << "warning: " << w << "\n"; };
  const pfw::Trajectory traj = pfw::run_flow(cfg, opts);
  const auto& s = traj.final_state;
  std::printf("steps=%ld t=%.17g snapshots=%zu series_rows=%zu\n", s.n, s.t, traj.snapshots.size(),
              traj.series.size());
  if (traj.status != pfw::RunStatus::ok) {
    std::cerr << "error: " << traj.message << "\n";
    return kExitSolver;
  }
  return kExitOk;
}

int cmd_energies(const std::string& path, double sigma, double beta, double alpha_exp) {
  const pfw::Snapshot snap = pfw::read_snapshot(path);
  const pfw::ScalarField u(snap.grid(), snap.u);
  pfw::EnergyParams p;
  p.reg.sigma = sigma;
  p.beta = beta;
  p.alpha_exp = alpha_exp;
  const pfw::EnergyReport r = pfw::eval_all(u, snap.eps, p);
  std::printf("t,E_perimeter,E_classical,E_mugnai,E_bellettini,E_err,discrepancy_mass\n");
  std::printf("%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", snap.time, r.perimeter, r.classical, r.mugnai,
              r.bellettini, r.err, r.discrepancy_mass);
  return kExitOk;
}

int cmd_contour(const std::string& path, double level, const std::string& out) {
  const pfw::Snapshot snap = pfw::read_snapshot(path);
  const pfw::ScalarField u(snap.grid(), snap.u);
  if (u.grid.dims() != 2) throw pfw::ValidationError("contour needs a 2D snapshot");
  pfw::Contour c = pfw::extract_contour(u, level);
  c.time = snap.time;
  pfw::write_contour(out, c);
  std::printf("polylines=%zu length=%.17g\n", c.lines.size(), pfw::contour_length(c));
  return kExitOk;
}

int cmd_check(const std::string& config) {
  const pfw::RunConfig cfg = pfw::load_config(config);
  const pfw::StabilityReport r = pfw::stability_limits(cfg.model, cfg.grid(), cfg.heuristic_C);
  std::printf("eps = %.17g\ndt = %.17g\nsteps = %ld\n", cfg.model.eps, cfg.model.dt, cfg.steps());
  std::printf("M1 = %.17g\nM2 = %.17g\nM3 = %.17g\nM4 = %.17g\n", r.M1, r.M2, r.M3, r.M4);
  std::printf("lhs_classical = %.17g\nclassical_satisfied = %s\n", r.lhs_classical,
              r.classical_satisfied ? "true" : "false");
  std::printf("lhs_mugnai = %.17g\nmugnai_satisfied = %s\n", r.lhs_mugnai, r.mugnai_satisfied ? "true" : "false");
  std::printf("heuristic_dt_max = %.17g\nheuristic_satisfied = %s\n", r.heuristic_dt_max,
              r.heuristic_satisfied ? "true" : "false");
  return kExitOk;
}

int cmd_gradcheck(const std::string& energy, std::uint64_t seed) {
  const pfw::EnergyKind kind = pfw::parse_energy_kind(energy);
  pfw::EnergyParams p;
  p.alpha_exp = 0.0;
  p.beta = 1.0;
  const double err = pfw::gradient_oracle(kind, seed, p);
  const double tol = pfw::gradient_tolerance(kind);
  std::printf("energy=%s max_rel_error=%.3e tolerance=%.0e\n", energy.c_str(), err, tol);
  return err <= tol ? kExitOk : kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-field Willmore flow engine"};
  app.require_subcommand(1);

  std::string config, out, resume, snapshot, energy = "classical";
  double level = 0.5, sigma = 1e-3, beta = 1.0, alpha_exp = 0.0;
  std::uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "run a flow from a config file");
  run->add_option("--config", config, "config file")->required();
  run->add_option("--out", out, "output directory (overrides the config)");
  run->add_option("--resume", resume, "snapshot to continue from");

  auto* energies = app.add_subcommand("energies", "print the energies of a snapshot as CSV");
  energies->add_option("--snapshot", snapshot, "snapshot file")->required();
  energies->add_option("--sigma", sigma, "normal regularization");
  energies->add_option("--beta", beta, "weight of the J penalty");
  energies->add_option("--alpha-exp", alpha_exp, "exponent of the J penalty");

  auto* contour = app.add_subcommand("contour", "extract a level line of a 2D snapshot");
  contour->add_option("--snapshot", snapshot, "snapshot file")->required();
  contour->add_option("--level", level, "iso level");
  contour->add_option("--out", out, "output CSV")->required();

  auto* check = app.add_subcommand("check", "print time-step diagnostics for a config");
  check->add_option("--config", config, "config file")->required();

  auto* grad = app.add_subcommand("gradcheck", "finite-difference check of an energy gradient");
  grad->add_option("--energy", energy, "classical, mugnai, bellettini, err or perimeter");
  grad->add_option("--seed", seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*run) return cmd_run(config, out, resume);
    if (*energies) return cmd_energies(snapshot, sigma, beta, alpha_exp);
    if (*contour) return cmd_contour(snapshot, level, out);
    if (*check) return cmd_check(config);
    if (*grad) return cmd_gradcheck(energy, seed);
  } catch (const pfw::NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const pfw::Divergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
