#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "smc/analysis.hpp"
#include "smc/density.hpp"

using namespace smc;

namespace
{
const RectDomain square(2000.0, 2000.0);

/// Single-agent trajectory sampled at t = 0, dt, 2 dt, ...
Trajectory path(const std::vector<Vec2>& points, double dt = 1.0)
{
  Trajectory t;
  t.domain = square;
  t.sim.dt = dt;
  for (std::size_t i = 0; i < points.size(); ++i)
  {
    t.times.push_back(static_cast<double>(i) * dt);
    t.positions.push_back({points[i]});
    t.metric.push_back(0.0);
    t.control_norms.push_back({0.0});
  }
  return t;
}

ControlConfig contracting(double k, double sigma = 0.0)
{
  ControlConfig c;
  c.variant = ControlVariant::StochasticContraction;
  c.k_contraction = k;
  c.sigma = sigma;
  return c;
}

}  // namespace

TEST(Manifold, ParseRoundTrip)
{
  for (auto k : {ManifoldKind::AxisX0, ManifoldKind::AxisY0, ManifoldKind::MidlineX,
                 ManifoldKind::MidlineY, ManifoldKind::DiagonalMain, ManifoldKind::DiagonalAnti,
                 ManifoldKind::Origin})
  {
    EXPECT_EQ(parse_manifold(to_string(k)), k);
  }
  EXPECT_THROW(parse_manifold("Circle"), ConfigError);
}

TEST(Manifold, DiagonalNeedsSquareDomain)
{
  const RectDomain wide(3000.0, 2000.0);
  EXPECT_THROW(Manifold(ManifoldKind::DiagonalMain, wide), ConfigError);
  EXPECT_THROW(Manifold(ManifoldKind::DiagonalAnti, wide), ConfigError);
  EXPECT_NO_THROW(Manifold(ManifoldKind::MidlineX, wide));
}

TEST(Manifold, DistanceExamples)
{
  const Vec2 p(3.0, 7.0);
  EXPECT_DOUBLE_EQ(manifold_distance(p, {ManifoldKind::AxisX0, square}), 3.0);
  EXPECT_DOUBLE_EQ(manifold_distance(p, {ManifoldKind::AxisY0, square}), 7.0);
  EXPECT_DOUBLE_EQ(manifold_distance(p, {ManifoldKind::MidlineX, square}), 997.0);
  EXPECT_DOUBLE_EQ(manifold_distance(p, {ManifoldKind::MidlineY, square}), 993.0);
  EXPECT_DOUBLE_EQ(manifold_distance(p, {ManifoldKind::DiagonalMain, square}),
                   2.0 * std::numbers::sqrt2);
  EXPECT_DOUBLE_EQ(manifold_distance(p, {ManifoldKind::DiagonalAnti, square}),
                   1990.0 / std::numbers::sqrt2);
  EXPECT_DOUBLE_EQ(manifold_distance(p, {ManifoldKind::Origin, square}), std::sqrt(58.0));
  EXPECT_EQ(manifold_distance({1000.0, 1000.0}, {ManifoldKind::DiagonalAnti, square}), 0.0);
}

TEST(Manifold, DistanceIsZeroOnTheSet)
{
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 2000.0);
  for (int i = 0; i < 1000; ++i)
  {
    const double s = u(rng);
    EXPECT_EQ(manifold_distance({0.0, s}, {ManifoldKind::AxisX0, square}), 0.0);
    EXPECT_EQ(manifold_distance({s, 0.0}, {ManifoldKind::AxisY0, square}), 0.0);
    EXPECT_EQ(manifold_distance({1000.0, s}, {ManifoldKind::MidlineX, square}), 0.0);
    EXPECT_EQ(manifold_distance({s, 1000.0}, {ManifoldKind::MidlineY, square}), 0.0);
    EXPECT_EQ(manifold_distance({s, s}, {ManifoldKind::DiagonalMain, square}), 0.0);
  }
}

TEST(EscapeTime, Examples)
{
  const Trajectory t = path({{5.0, 0.0}, {6.0, 0.5}, {7.0, 1.5}, {8.0, 3.0}});
  const Manifold axis(ManifoldKind::AxisY0, square);
  EXPECT_EQ(escape_time(t, 0, axis, 1.0), 2.0);
  EXPECT_EQ(escape_time(t, 0, axis, 0.25), 1.0);
  EXPECT_EQ(escape_time(t, 0, axis, 3.0), std::nullopt);
  EXPECT_EQ(escape_time(t, 0, axis, 5.0), std::nullopt);
  EXPECT_EQ(escape_time(t, 0, {ManifoldKind::AxisX0, square}, 1.0), 0.0);
}

TEST(EscapeTime, Errors)
{
  const Trajectory t = path({{5.0, 0.0}});
  const Manifold axis(ManifoldKind::AxisY0, square);
  EXPECT_THROW(escape_time(Trajectory{}, 0, axis, 1.0), MisuseError);
  EXPECT_THROW(escape_time(t, 1, axis, 1.0), ConfigError);
  EXPECT_THROW(escape_time(t, 0, axis, 0.0), ParameterError);
  EXPECT_THROW(escape_time(t, 0, axis, -1.0), ParameterError);
}

TEST(EscapeTime, MonotoneInRadius)
{
  std::mt19937_64 rng(2);
  std::normal_distribution<double> step(0.0, 0.3);
  std::vector<Vec2> points = {{1000.0, 1000.0}};
  for (int i = 0; i < 500; ++i)
  {
    points.push_back(points.back() + Vec2(step(rng), step(rng)));
  }
  const Trajectory t = path(points);
  const Manifold mid(ManifoldKind::MidlineX, square);
  double previous = 0.0;
  for (double delta = 0.05; delta < 20.0; delta *= 1.3)
  {
    const auto e = escape_time(t, 0, mid, delta);
    if (!e)
    {
      previous = INFINITY;
      continue;
    }
    EXPECT_GE(*e, previous);
    previous = *e;
  }
}

TEST(MsbBound, Examples)
{
  const ControlConfig c = contracting(1e-3, 1e-5);
  const std::vector<Vec2> corners = {{0, 0}, {2000, 2000}};
  EXPECT_NEAR(msb_bound(c, corners), 1e8 + 2e-7, 1e-6);
  const std::vector<Vec2> far = {{2e4, 0.0}};
  EXPECT_EQ(msb_bound(c, far), 4e8);
  ControlConfig fast = contracting(0.1, 2.0);
  fast.u_max = 1.0;
  EXPECT_DOUBLE_EQ(msb_bound(fast, std::span<const Vec2>{}), 100.0 + 80.0);
  EXPECT_THROW(msb_bound(contracting(0.0), corners), ParameterError);
}

TEST(MsbBound, MonotoneInParameters)
{
  const std::vector<Vec2> p = {{100.0, 100.0}};
  double previous = 0.0;
  for (double sigma = 0.0; sigma < 10.0; sigma += 0.5)
  {
    const double b = msb_bound(contracting(1e-2, sigma), p);
    EXPECT_GE(b, previous);
    previous = b;
  }
  previous = INFINITY;
  for (double k = 1e-4; k < 1.0; k *= 2.0)
  {
    const double b = msb_bound(contracting(k, 1.0), p);
    EXPECT_LE(b, previous);
    EXPECT_GE(b, p[0].squaredNorm());
    previous = b;
  }
}

TEST(MsbCheck, Examples)
{
  const std::vector<Trajectory> zeros = {path({{0, 0}, {0, 0}}), path({{0, 0}, {0, 0}})};
  const MsbReport ok = msb_check(zeros, 0, 1.0);
  EXPECT_TRUE(ok.passed);
  EXPECT_EQ(ok.sup_mean_sq, 0.0);
  EXPECT_EQ(ok.sample_count, 2u);

  const std::vector<Trajectory> spread = {path({{0, 0}, {3, 4}}), path({{0, 0}, {0, 5}})};
  EXPECT_EQ(msb_check(spread, 0, 25.0).sup_mean_sq, 25.0);
  EXPECT_TRUE(msb_check(spread, 0, 25.0).passed);
  EXPECT_FALSE(msb_check(spread, 0, 24.0).passed);
  EXPECT_TRUE(msb_check(spread, 0, 24.0, 1.1).passed);

  std::vector<Vec2> diverging;
  for (int i = 0; i < 50; ++i)
  {
    diverging.push_back({std::exp(0.2 * i), 0.0});
  }
  const std::vector<Trajectory> blowup = {path(diverging)};
  EXPECT_FALSE(msb_check(blowup, 0, 1e6).passed);
}

TEST(MsbCheck, Errors)
{
  const std::vector<Trajectory> one = {path({{0, 0}, {1, 1}})};
  EXPECT_THROW(msb_check(std::span<const Trajectory>{}, 0, 1.0), MisuseError);
  EXPECT_THROW(msb_check(one, 0, 1.0, 0.5), ParameterError);
  EXPECT_THROW(msb_check(one, 3, 1.0), ConfigError);
  const std::vector<Trajectory> mismatched = {path({{0, 0}, {1, 1}}), path({{0, 0}, {1, 1}}, 0.5)};
  EXPECT_THROW(msb_check(mismatched, 0, 1.0), MisuseError);
}

TEST(DeterministicBound, Misuse)
{
  Trajectory t = path({{10.0, 10.0}});
  t.sim.boundary = BoundaryPolicy::None;
  EXPECT_THROW(deterministic_bound_check(t, 0, contracting(1e-3, 1e-5)), MisuseError);
  ControlConfig regular;
  regular.variant = ControlVariant::Regularized;
  EXPECT_THROW(deterministic_bound_check(t, 0, regular), MisuseError);
  t.sim.boundary = BoundaryPolicy::Reflect;
  EXPECT_THROW(deterministic_bound_check(t, 0, contracting(1e-3)), MisuseError);
  t.sim.boundary = BoundaryPolicy::None;
  EXPECT_NO_THROW(deterministic_bound_check(t, 0, contracting(1e-3)));
}

TEST(DeterministicBound, PureDecayAndRadialDrive)
{
  const double k = 1e-2;
  const double dt = 0.1;
  const ControlConfig c = contracting(k);

  // No input: Euler decay of the contraction term alone.
  std::vector<Vec2> decay = {{1500.0, 800.0}};
  // Input of full magnitude pointing away from the center: the extremal case.
  std::vector<Vec2> radial = {{30.0, 40.0}};
  for (int i = 0; i < 3000; ++i)
  {
    decay.push_back(decay.back() * (1.0 - k * dt));
    const Vec2 p = radial.back();
    radial.push_back(p + (c.u_max * p.normalized() - k * p) * dt);
  }
  Trajectory a = path(decay, dt);
  Trajectory b = path(radial, dt);
  a.sim.boundary = b.sim.boundary = BoundaryPolicy::None;
  EXPECT_TRUE(deterministic_bound_check(a, 0, c));
  EXPECT_TRUE(deterministic_bound_check(b, 0, c));

  // Twice the admissible speed breaks the bound.
  std::vector<Vec2> fast = {{30.0, 40.0}};
  for (int i = 0; i < 3000; ++i)
  {
    const Vec2 p = fast.back();
    fast.push_back(p + (2 * c.u_max * p.normalized() - k * p) * dt);
  }
  Trajectory f = path(fast, dt);
  f.sim.boundary = BoundaryPolicy::None;
  EXPECT_FALSE(deterministic_bound_check(f, 0, c));
}

TEST(DeterministicBound, HoldsForSimulatedRuns)
{
  const ModeSet modes(10, 10);
  const GaussianMixture rho = make_quadrimodal(square, 100.0);
  const SpectralModel model{square, modes, target_coefficients(rho, modes, square, {256, 256})};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pos(0.0, 2000.0);
  std::uniform_real_distribution<double> log_k(std::log(1e-4), std::log(1e-1));
  for (int trial = 0; trial < 10; ++trial)
  {
    const ControlConfig c = contracting(std::exp(log_k(rng)));
    SimConfig s;
    s.horizon = 50.0;
    s.boundary = BoundaryPolicy::None;
    const std::vector<Vec2> initial = {{pos(rng), pos(rng)}, {pos(rng), pos(rng)}};
    const Trajectory t = run_scenario(model, c, s, initial);
    EXPECT_TRUE(deterministic_bound_check(t, 0, c));
    EXPECT_TRUE(deterministic_bound_check(t, 1, c));
  }
}

TEST(StallDetector, Examples)
{
  EXPECT_TRUE(stall_detector(path(std::vector<Vec2>(30, Vec2(1.0, 1.0))), 0, 10.0, 1.0));

  std::vector<Vec2> moving;
  for (int i = 0; i < 30; ++i)
  {
    moving.push_back({10.0 + i, 10.0});
  }
  EXPECT_FALSE(stall_detector(path(moving), 0, 10.0, 1.0));

  std::vector<Vec2> creeping;
  for (int i = 0; i < 30; ++i)
  {
    creeping.push_back({10.0 + 0.01 * i, 10.0});
  }
  EXPECT_TRUE(stall_detector(path(creeping), 0, 10.0, 1.0));
  EXPECT_FALSE(stall_detector(path(creeping), 0, 10.0, 0.05));

  // Moving for a while and then halting is not a stall.
  std::vector<Vec2> halting = moving;
  halting.resize(40, moving.back());
  EXPECT_FALSE(stall_detector(path(halting), 0, 10.0, 1.0));

  // Back-and-forth jitter counts its full path length.
  std::vector<Vec2> jitter;
  for (int i = 0; i < 30; ++i)
  {
    jitter.push_back({10.0 + (i % 2), 10.0});
  }
  EXPECT_FALSE(stall_detector(path(jitter), 0, 10.0, 1.0));
}

TEST(StallDetector, ShortRunsUseWholeRun)
{
  EXPECT_TRUE(stall_detector(path({{1, 1}, {1.2, 1}}), 0, 10.0, 1.0));
  EXPECT_FALSE(stall_detector(path({{1, 1}, {3, 1}}), 0, 10.0, 1.0));
  EXPECT_TRUE(stall_detector(path({{1, 1}}), 0, 10.0, 1.0));
}

TEST(StallDetector, Errors)
{
  const Trajectory t = path({{1, 1}, {1, 1}});
  EXPECT_THROW(stall_detector(t, 0, 0.0, 1.0), ParameterError);
  EXPECT_THROW(stall_detector(t, 2, 1.0, 1.0), ConfigError);
}

TEST(BoundaryViolations, Counts)
{
  Trajectory t = path({{1, 1}, {-1, 1}, {2001, 3000}, {2000, 2000}});
  EXPECT_EQ(boundary_violations(t), 2u);
  EXPECT_EQ(boundary_violations(Trajectory{}), 0u);
}
