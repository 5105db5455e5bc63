#include "smc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace smc
{
std::string_view to_string(BoundaryPolicy p) noexcept
{
  switch (p)
  {
    case BoundaryPolicy::Reflect:
      return "Reflect";
    case BoundaryPolicy::Project:
      return "Project";
    case BoundaryPolicy::None:
      return "None";
  }
  return "?";
}

BoundaryPolicy parse_boundary(std::string_view s)
{
  for (auto p : {BoundaryPolicy::Reflect, BoundaryPolicy::Project, BoundaryPolicy::None})
  {
    if (s == to_string(p))
    {
      return p;
    }
  }
  throw ConfigError("unknown boundary policy '" + std::string(s) + "'");
}

long SimConfig::steps() const
{
  return static_cast<long>(std::floor(horizon / dt * (1.0 + 1e-12)));
}

void SimConfig::validate() const
{
  if (!(dt > 0.0) || !std::isfinite(dt))
  {
    throw ParameterError("dt must be positive");
  }
  if (!(horizon >= dt) || !std::isfinite(horizon))
  {
    throw ParameterError("horizon must be at least one time step");
  }
  if (record_stride < 1)
  {
    throw ParameterError("record_stride must be a positive integer");
  }
}

namespace
{
double reflect(double x, double length)
{
  if (std::abs(x) > 4.0 * length)
  {
    x = std::fmod(x, 2.0 * length);
  }
  while (x < 0.0 || x > length)
  {
    x = x < 0.0 ? -x : 2.0 * length - x;
  }
  return x;
}

}  // namespace

Vec2 apply_boundary(const Vec2& p, const RectDomain& domain, BoundaryPolicy policy)
{
  if (!std::isfinite(p.x()) || !std::isfinite(p.y()))
  {
    throw NumericalError("non-finite agent position");
  }
  switch (policy)
  {
    case BoundaryPolicy::Reflect:
      return {reflect(p.x(), domain.lx()), reflect(p.y(), domain.ly())};
    case BoundaryPolicy::Project:
      return {std::clamp(p.x(), 0.0, domain.lx()), std::clamp(p.y(), 0.0, domain.ly())};
    case BoundaryPolicy::None:
      break;
  }
  return p;
}

Simulation::Simulation(const SpectralModel& model, const ControlConfig& control,
                       const SimConfig& sim, std::vector<Vec2> initial)
  : model_(&model)
  , control_(control)
  , sim_(sim)
  , positions_(std::move(initial))
  , coverage_(model.domain, model.modes, positions_.size())
{
  control_.validate();
  sim_.validate();
  check_aligned(model.mu, model.modes, "target coefficients");
  for (std::size_t i = 0; i < positions_.size(); ++i)
  {
    if (!model.domain.contains(positions_[i]))
    {
      throw ConfigError("initial position of agent " + std::to_string(i) +
                        " lies outside the domain");
    }
  }
  rngs_.reserve(positions_.size());
  normals_.resize(positions_.size());
  for (std::size_t i = 0; i < positions_.size(); ++i)
  {
    std::seed_seq seq{static_cast<std::uint32_t>(sim_.seed),
                      static_cast<std::uint32_t>(sim_.seed >> 32),
                      static_cast<std::uint32_t>(i)};
    rngs_.emplace_back(seq);
  }
}

Simulation::Snapshot Simulation::evaluate() const
{
  const SpectralModel& model = *model_;
  const std::size_t n = positions_.size();
  Snapshot snap;
  snap.bases.resize(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    snap.bases[i].fill(positions_[i], model.domain, model.modes);
  }
  snap.c = coverage_.coefficients(std::span<const PointBasis>(snap.bases));
  snap.metric = ergodicity_metric(snap.c, model.mu, model.modes);

  const std::vector<double> w = weighted_mismatch(snap.c, model.mu, model.modes);
  snap.gradient.resize(n);
  snap.input.resize(n);
  snap.drift.resize(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    snap.gradient[i] = spectral_gradient(snap.bases[i], w, model.modes, model.domain);
    snap.input[i] = control_input(snap.gradient[i], control_);
    snap.drift[i] = drift(positions_[i], snap.input[i], control_);
  }
  return snap;
}

void Simulation::advance(const Snapshot& snap)
{
  const double dt = sim_.dt;
  const double noise_scale = control_.noisy() ? control_.sigma * std::sqrt(dt) : 0.0;

  for (std::size_t i = 0; i < positions_.size(); ++i)
  {
    Vec2 next = positions_[i] + snap.drift[i] * dt;
    if (noise_scale > 0.0)
    {
      const double xi_x = normals_[i](rngs_[i]);
      const double xi_y = normals_[i](rngs_[i]);
      next += noise_scale * Vec2(xi_x, xi_y);
    }
    if (!std::isfinite(next.x()) || !std::isfinite(next.y()))
    {
      throw NumericalError("agent " + std::to_string(i) + " position became non-finite at step " +
                               std::to_string(step_),
                           step_);
    }
    positions_[i] = apply_boundary(next, model_->domain, sim_.boundary);
  }
  coverage_.accumulate(std::span<const PointBasis>(snap.bases), dt);
  ++step_;
}

Trajectory run_scenario(const SpectralModel& model, const ControlConfig& control,
                        const SimConfig& sim, const std::vector<Vec2>& initial)
{
  Simulation simulation(model, control, sim, initial);
  const long steps = sim.steps();

  Trajectory traj;
  traj.domain = model.domain;
  traj.control = control;
  traj.sim = sim;
  const std::size_t expected = static_cast<std::size_t>(steps / sim.record_stride + 2);
  traj.times.reserve(expected);
  traj.positions.reserve(expected);

  for (long s = 0;; ++s)
  {
    const Simulation::Snapshot snap = simulation.evaluate();
    if (s % sim.record_stride == 0 || s == steps)
    {
      traj.times.push_back(simulation.time());
      traj.positions.push_back(simulation.positions());
      traj.metric.push_back(snap.metric);
      std::vector<double> norms(snap.input.size());
      for (std::size_t i = 0; i < norms.size(); ++i)
      {
        norms[i] = snap.input[i].norm();
      }
      traj.control_norms.push_back(std::move(norms));
    }
    if (s == steps)
    {
      break;
    }
    simulation.advance(snap);
  }
  return traj;
}

}  // namespace smc
