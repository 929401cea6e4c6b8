#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "pfw/analysis.hpp"
#include "pfw/errors.hpp"
#include "pfw/flows.hpp"
#include "pfw/geometry.hpp"
#include "pfw/profiles.hpp"

using namespace pfw;

namespace {

// eps = 0.008 keeps the periodic kink of the slab at 31 eps from both interfaces.
constexpr double kFlatEps = 0.008;

FlowSession flat_session(FlowKind kind, double dt = 1e-9) {
  SceneParams sp;
  sp.dims = 1;
  sp.eps = kFlatEps;
  auto init = init_fields(builtin_scene("slab", sp), make_grid(1, 256), kFlatEps);
  ModelParams p;
  p.eps = kFlatEps;
  p.dt = dt;
  p.kind = kind;
  return FlowSession::start(p, std::move(init.u0), std::move(init.mu0));
}

FlowSession circle_session(FlowKind kind, int modes, double R, double alpha = 1.0) {
  const auto g = make_grid(2, modes);
  const double eps = 2.0 / modes;
  auto init = init_fields(make_ball({0.5, 0.5, 0}, R), g, eps);
  ModelParams p;
  p.eps = eps;
  p.alpha = alpha;
  p.dt = eps * eps / (2.0 * modes * modes);
  p.kind = kind;
  return FlowSession::start(p, std::move(init.u0), std::move(init.mu0));
}

double max_change(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) m = std::max(m, std::abs(a[n] - b[n]));
  return m;
}

}  // namespace

TEST(FlowKind, ParseAndPrint) {
  for (auto k : {FlowKind::classical, FlowKind::mugnai, FlowKind::allen_cahn})
    EXPECT_EQ(parse_flow_kind(to_string(k)), k);
  EXPECT_THROW(parse_flow_kind("willmore"), ValidationError);
}

TEST(Classical, FlatProfileIsStationary) {
  FlowSession s = flat_session(FlowKind::classical);
  for (int i = 0; i < 5; ++i) {
    const ScalarField before = s.u;
    const StepInfo info = step(s);
    EXPECT_LE(info.iterations, 3);
    EXPECT_LE(max_change(before, s.u), 1e-8);
  }
  EXPECT_EQ(s.n, 5);
  EXPECT_DOUBLE_EQ(s.t, 5e-9);
}

TEST(Mugnai, FlatProfileIsStationary) {
  FlowSession s = flat_session(FlowKind::mugnai);
  for (int i = 0; i < 5; ++i) {
    const ScalarField before = s.u;
    EXPECT_LE(step(s).iterations, 3);
    EXPECT_LE(max_change(before, s.u), 1e-8);
  }
}

TEST(AllenCahn, ZeroIsAFixedPoint) {
  ModelParams p;
  p.eps = 0.1;
  p.dt = 0.01;
  p.kind = FlowKind::allen_cahn;
  const auto g = make_grid(2, 16);
  FlowSession s = FlowSession::start(p, ScalarField(g), ScalarField(g));
  for (int i = 0; i < 10; ++i) step(s);
  EXPECT_EQ(field_max_abs(s.u.values), 0.0);
}

TEST(AllenCahn, FlatProfileIsStationary) {
  FlowSession s = flat_session(FlowKind::allen_cahn, 1e-4);
  for (int i = 0; i < 5; ++i) {
    const ScalarField before = s.u;
    step(s);
    EXPECT_LE(max_change(before, s.u), 1e-8);
  }
}

TEST(AllenCahn, ShrinksACircle) {
  // Descent direction: mean-curvature motion shrinks a disk.
  const auto g = make_grid(2, 32);
  const double eps = 2.0 / 32;
  auto init = init_fields(make_ball({0.5, 0.5, 0}, 0.25), g, eps);
  ModelParams p;
  p.eps = eps;
  p.dt = 0.05 * eps;
  p.kind = FlowKind::allen_cahn;
  FlowSession s = FlowSession::start(p, std::move(init.u0), std::move(init.mu0));
  const double r0 = estimate_radius(s.u);
  for (int i = 0; i < 20; ++i) step(s);
  EXPECT_LT(estimate_radius(s.u), r0);
}

TEST(Classical, HugeStepDoesNotConverge) {
  FlowSession s = circle_session(FlowKind::classical, 16, 0.2);
  s.params.dt = 1.0;
  s.params.max_iter = 20;
  const ScalarField before = s.u;
  EXPECT_THROW(step(s), NonConvergence);
  EXPECT_EQ(s.n, 0);
  EXPECT_EQ(s.u.values, before.values);
}

TEST(Classical, NonFiniteStateDiverges) {
  FlowSession s = circle_session(FlowKind::classical, 16, 0.2);
  s.u[3] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(step(s), Divergence);
}

TEST(AllenCahn, OversizedStepDiverges) {
  const auto g = make_grid(2, 16);
  ScalarField u = band_limited_random(g, 3, 5);
  for (double& x : u.values) x *= 50.0;
  ModelParams p;
  p.eps = 0.2;
  p.dt = 1e3;
  p.kind = FlowKind::allen_cahn;
  FlowSession s = FlowSession::start(p, u, ScalarField(g));
  EXPECT_THROW(
      {
        for (int i = 0; i < 50; ++i) step(s);
      },
      Divergence);
}

TEST(Steppers, RejectMismatchedKind) {
  FlowSession s = circle_session(FlowKind::classical, 16, 0.2);
  EXPECT_THROW(step_mugnai(s), ValidationError);
  EXPECT_THROW(step_allen_cahn(s), ValidationError);
  s.params.kind = FlowKind::mugnai;
  EXPECT_THROW(step_classical(s), ValidationError);
}

TEST(Classical, AlphaOnlyConditionsTheSolve) {
  FlowSession a = circle_session(FlowKind::classical, 32, 0.2, 1.0);
  FlowSession b = circle_session(FlowKind::classical, 32, 0.2, 2.0);
  a.params.tol = b.params.tol = 1e-12;
  for (int i = 0; i < 10; ++i) {
    step(a);
    step(b);
  }
  EXPECT_LE(max_change(a.u, b.u), 1e-9);
  EXPECT_LE(max_change(a.mu, b.mu), 1e-9 * field_max_abs(a.mu.values));
}

TEST(Classical, EnergyDecreasesOnACircle) {
  FlowSession s = circle_session(FlowKind::classical, 32, 0.2);
  double prev = eval_classical(s.u, s.params.eps);
  for (int i = 0; i < 40; ++i) {
    step(s);
    const double e = eval_classical(s.u, s.params.eps);
    EXPECT_LE(e, prev + 1e-6 * (1 + std::abs(prev))) << "step " << i;
    prev = e;
  }
}

TEST(Classical, CircleGrows) {
  FlowSession s = circle_session(FlowKind::classical, 32, 0.2);
  const double r0 = estimate_radius(s.u);
  for (int i = 0; i < 40; ++i) step(s);
  EXPECT_GT(estimate_radius(s.u), r0);
}

TEST(Steppers, Deterministic) {
  for (auto kind : {FlowKind::classical, FlowKind::mugnai, FlowKind::allen_cahn}) {
    FlowSession a = circle_session(kind, 16, 0.2), b = circle_session(kind, 16, 0.2);
    for (int i = 0; i < 5; ++i) {
      step(a);
      step(b);
    }
    EXPECT_EQ(a.u.values, b.u.values) << to_string(kind);
    EXPECT_EQ(a.mu.values, b.mu.values) << to_string(kind);
  }
}

TEST(Session, ResumedTimeStartsAtT0) {
  const auto g = make_grid(2, 16);
  auto init = init_fields(make_ball({0.5, 0.5, 0}, 0.2), g, 2.0 / 16);
  ModelParams p;
  p.eps = 2.0 / 16;
  p.dt = 1e-6;
  FlowSession s = FlowSession::start(p, init.u0, init.mu0, 0.5);
  step(s);
  step(s);
  EXPECT_DOUBLE_EQ(s.t, 0.5 + 2e-6);
}

TEST(Session, RecordsEnergies) {
  FlowSession s = circle_session(FlowKind::classical, 16, 0.2);
  s.record();
  step(s);
  s.record();
  ASSERT_EQ(s.history.size(), 2u);
  EXPECT_EQ(s.history[1].step, 1);
  EXPECT_GT(s.history[0].energies.perimeter, 0.0);
}

TEST(Validate, RejectsBadParameters) {
  const auto g = make_grid(2, 32);
  ModelParams ok;
  ok.eps = 2.0 / 64;
  ok.dt = 1e-7;
  EXPECT_NO_THROW(validate(ok, g));
  auto bad = [&](auto mutate) {
    ModelParams p = ok;
    mutate(p);
    EXPECT_THROW(validate(p, g), ValidationError);
  };
  bad([](ModelParams& p) { p.eps = 1.0 / 64; });
  bad([](ModelParams& p) { p.eps = 0.0; });
  bad([](ModelParams& p) { p.dt = 0.0; });
  bad([](ModelParams& p) { p.dt = -1e-7; });
  bad([](ModelParams& p) { p.alpha = 0.0; });
  bad([](ModelParams& p) { p.sigma = 0.0; });
  bad([](ModelParams& p) { p.tol = 1e-3; });
  bad([](ModelParams& p) { p.max_iter = 0; });

  ScalarField u(g), mu(make_grid(2, 16));
  EXPECT_THROW(FlowSession::start(ok, u, mu), ValidationError);
  ScalarField nan_u(g, std::numeric_limits<double>::quiet_NaN());
  EXPECT_THROW(FlowSession::start(ok, nan_u, ScalarField(g)), ValidationError);
}

TEST(Stability, WellConstants) {
  ModelParams p;
  p.eps = 2.0 / 128;
  p.dt = 1e-12;
  const auto r = stability_limits(p, make_grid(2, 128));
  EXPECT_NEAR(r.M1, std::sqrt(3.0) / 18, 1e-10);
  EXPECT_EQ(r.M2, 1.0);
  EXPECT_EQ(r.M3, 6.0);
  EXPECT_EQ(r.M4, 12.0);
}

TEST(Stability, AlphaTermAloneForTinyStep) {
  const auto g = make_grid(2, 128);
  ModelParams p;
  p.eps = 2.0 / 128;
  p.dt = 1e-30;
  const auto one = stability_limits(p, g);
  EXPECT_NEAR(one.lhs_classical, 1.0, 1e-12);
  EXPECT_FALSE(one.classical_satisfied);

  p.alpha = 0.1;
  const auto small = stability_limits(p, g);
  EXPECT_NEAR(small.lhs_classical, 0.01, 1e-12);
  EXPECT_TRUE(small.classical_satisfied);
  EXPECT_TRUE(small.mugnai_satisfied);
}

TEST(Stability, HeuristicStep) {
  // eps = 2/128 and dx = 1/256: eps^2 dx^2 = 3.73e-9 is below eps^4 = 5.96e-8.
  const auto g = make_grid(2, 128);
  ModelParams p;
  p.eps = 2.0 / 128;
  p.dt = 1e-9;
  const auto r = stability_limits(p, g);
  const double e2dx2 = p.eps * p.eps * g.spacing() * g.spacing();
  EXPECT_DOUBLE_EQ(r.heuristic_dt_max, e2dx2);
  EXPECT_NEAR(r.heuristic_dt_max, 3.725e-9, 1e-12);
  EXPECT_TRUE(r.heuristic_satisfied);
  EXPECT_DOUBLE_EQ(stability_limits(p, g, 2.0).heuristic_dt_max, 2 * e2dx2);
  p.dt = 1e-8;
  EXPECT_FALSE(stability_limits(p, g).heuristic_satisfied);
}

TEST(Stability, GrossStepViolatesCondition) {
  ModelParams p;
  p.eps = 2.0 / 128;
  p.dt = 1.0;
  EXPECT_GT(stability_limits(p, make_grid(2, 128)).lhs_classical, 1e10);
}
