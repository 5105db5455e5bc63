#include "smc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace smc
{
std::string_view to_string(ManifoldKind kind) noexcept
{
  switch (kind)
  {
    case ManifoldKind::AxisX0:
      return "AxisX0";
    case ManifoldKind::AxisY0:
      return "AxisY0";
    case ManifoldKind::MidlineX:
      return "MidlineX";
    case ManifoldKind::MidlineY:
      return "MidlineY";
    case ManifoldKind::DiagonalMain:
      return "DiagonalMain";
    case ManifoldKind::DiagonalAnti:
      return "DiagonalAnti";
    case ManifoldKind::Origin:
      return "Origin";
  }
  return "?";
}

ManifoldKind parse_manifold(std::string_view s)
{
  for (auto k : {ManifoldKind::AxisX0, ManifoldKind::AxisY0, ManifoldKind::MidlineX,
                 ManifoldKind::MidlineY, ManifoldKind::DiagonalMain, ManifoldKind::DiagonalAnti,
                 ManifoldKind::Origin})
  {
    if (s == to_string(k))
    {
      return k;
    }
  }
  throw ConfigError("unknown manifold '" + std::string(s) + "'");
}

Manifold::Manifold(ManifoldKind kind, const RectDomain& domain) : kind_(kind), domain_(domain)
{
  if ((kind == ManifoldKind::DiagonalMain || kind == ManifoldKind::DiagonalAnti) &&
      !domain.square())
  {
    throw ConfigError("diagonal manifolds need a square domain");
  }
}

double manifold_distance(const Vec2& p, const Manifold& manifold)
{
  const RectDomain& d = manifold.domain();
  switch (manifold.kind())
  {
    case ManifoldKind::AxisX0:
      return std::abs(p.x());
    case ManifoldKind::AxisY0:
      return std::abs(p.y());
    case ManifoldKind::MidlineX:
      return std::abs(p.x() - 0.5 * d.lx());
    case ManifoldKind::MidlineY:
      return std::abs(p.y() - 0.5 * d.ly());
    case ManifoldKind::DiagonalMain:
      return std::abs(p.y() - p.x()) / std::numbers::sqrt2;
    case ManifoldKind::DiagonalAnti:
      return std::abs(p.y() - (d.lx() - p.x())) / std::numbers::sqrt2;
    case ManifoldKind::Origin:
      return p.norm();
  }
  return 0.0;
}

namespace
{
void check_agent(const Trajectory& traj, std::size_t agent)
{
  if (agent >= traj.agents())
  {
    throw ConfigError("agent index " + std::to_string(agent) + " out of range (" +
                      std::to_string(traj.agents()) + " agents)");
  }
}

}  // namespace

std::optional<double> escape_time(const Trajectory& traj, std::size_t agent,
                                  const Manifold& manifold, double delta)
{
  if (traj.samples() == 0)
  {
    throw MisuseError("escape time of an empty trajectory");
  }
  check_agent(traj, agent);
  if (!(delta > 0.0))
  {
    throw ParameterError("escape radius must be positive");
  }
  for (std::size_t s = 0; s < traj.samples(); ++s)
  {
    if (manifold_distance(traj.positions[s][agent], manifold) > delta)
    {
      return traj.times[s];
    }
  }
  return std::nullopt;
}

double msb_bound(const ControlConfig& config, std::span<const Vec2> initial)
{
  const double k = config.k_contraction;
  if (!(k > 0.0))
  {
    throw ParameterError("mean-square bound needs a positive contraction gain");
  }
  const double asymptotic =
      config.u_max * config.u_max / (k * k) + 2.0 * config.sigma * config.sigma / k;
  double bound = asymptotic;
  for (const Vec2& p : initial)
  {
    bound = std::max(bound, p.squaredNorm());
  }
  return bound;
}

MsbReport msb_check(std::span<const Trajectory> ensemble, std::size_t agent, double bound,
                    double slack)
{
  if (ensemble.empty())
  {
    throw MisuseError("mean-square check over an empty ensemble");
  }
  if (!(slack >= 1.0))
  {
    throw ParameterError("slack must be at least 1");
  }
  const Trajectory& first = ensemble.front();
  for (const Trajectory& traj : ensemble)
  {
    check_agent(traj, agent);
    if (traj.times != first.times)
    {
      throw MisuseError("ensemble members do not share a time grid");
    }
  }

  MsbReport report;
  report.bound = bound;
  report.sample_count = first.samples();
  const double members = static_cast<double>(ensemble.size());
  for (std::size_t s = 0; s < first.samples(); ++s)
  {
    double sum = 0.0;
    for (const Trajectory& traj : ensemble)
    {
      sum += traj.positions[s][agent].squaredNorm();
    }
    report.sup_mean_sq = std::max(report.sup_mean_sq, sum / members);
  }
  report.passed = report.sup_mean_sq <= slack * bound;
  return report;
}

bool deterministic_bound_check(const Trajectory& traj, std::size_t agent,
                               const ControlConfig& config)
{
  if (config.noisy() || config.sigma != 0.0)
  {
    throw MisuseError("pathwise bound applies to noise-free runs only");
  }
  if (!config.contracting() || !(config.k_contraction > 0.0))
  {
    throw MisuseError("pathwise bound needs a positive contraction gain");
  }
  if (traj.sim.boundary != BoundaryPolicy::None)
  {
    throw MisuseError("pathwise bound applies to free-space runs only");
  }
  check_agent(traj, agent);
  if (traj.samples() == 0)
  {
    return true;
  }

  const double k = config.k_contraction;
  const double u = config.u_max;
  const double slack = (u + k * (traj.domain.lx() + traj.domain.ly())) * traj.sim.dt;
  const Vec2& center = config.contraction_center;
  const double r0 = (traj.positions.front()[agent] - center).norm();
  const double t0 = traj.times.front();
  for (std::size_t s = 0; s < traj.samples(); ++s)
  {
    const double decay = std::exp(-k * (traj.times[s] - t0));
    const double bound = r0 * decay + (u / k) * (1.0 - decay) + slack;
    if ((traj.positions[s][agent] - center).norm() > bound)
    {
      return false;
    }
  }
  return true;
}

bool stall_detector(const Trajectory& traj, std::size_t agent, double window, double tol)
{
  check_agent(traj, agent);
  if (!(window > 0.0))
  {
    throw ParameterError("stall window must be positive");
  }
  const std::size_t n = traj.samples();
  if (n < 2)
  {
    return true;
  }

  // Cumulative path length, so the distance covered between any two samples
  // is a difference of two entries.
  std::vector<double> travelled(n, 0.0);
  for (std::size_t s = 1; s < n; ++s)
  {
    travelled[s] =
        travelled[s - 1] + (traj.positions[s][agent] - traj.positions[s - 1][agent]).norm();
  }

  const double slop = 1e-9 * window;
  const double t_end = traj.times.back();
  if (t_end - traj.times.front() <= window + slop)
  {
    return travelled.back() < tol;
  }
  std::size_t end = 0;
  for (std::size_t start = 0; start < n; ++start)
  {
    const double limit = traj.times[start] + window;
    if (limit > t_end + slop)
    {
      break;
    }
    end = std::max(end, start);
    while (end + 1 < n && traj.times[end + 1] <= limit + slop)
    {
      ++end;
    }
    if (!(travelled[end] - travelled[start] < tol))
    {
      return false;
    }
  }
  return true;
}

std::size_t boundary_violations(const Trajectory& traj)
{
  std::size_t count = 0;
  for (const auto& sample : traj.positions)
  {
    for (const Vec2& p : sample)
    {
      if (!traj.domain.contains(p))
      {
        ++count;
      }
    }
  }
  return count;
}

}  // namespace smc
