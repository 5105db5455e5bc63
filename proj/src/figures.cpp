#include "smc/figures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "smc/analysis.hpp"

namespace smc
{
bool FigureReport::passed() const noexcept
{
  return std::all_of(checks.begin(), checks.end(), [](const FigureCheck& c) { return c.passed; });
}

const std::vector<std::string>& figure_ids()
{
  static const std::vector<std::string> ids = {"fig1a", "fig1b", "fig2a", "fig2b"};
  return ids;
}

std::string figure_scenario(std::string_view figure)
{
  for (const std::string& id : figure_ids())
  {
    if (id == figure)
    {
      return id;
    }
  }
  throw ConfigError("unknown figure '" + std::string(figure) +
                    "' (expected fig1a, fig1b, fig2a or fig2b)");
}

namespace
{
FigureCheck make_check(std::string name, std::string claim, double value, std::string cmp,
                       double threshold)
{
  bool passed = false;
  if (cmp == "<")
  {
    passed = value < threshold;
  }
  else if (cmp == "<=")
  {
    passed = value <= threshold;
  }
  else if (cmp == ">=")
  {
    passed = value >= threshold;
  }
  else
  {
    passed = value == threshold;
  }
  return {std::move(name), std::move(claim), value, std::move(cmp), threshold, passed};
}

std::size_t agent_starting_at(const Scenario& s, const Vec2& p)
{
  for (std::size_t i = 0; i < s.agents.size(); ++i)
  {
    if (s.agents[i] == p)
    {
      return i;
    }
  }
  throw ConfigError("scenario '" + s.name + "' has no agent starting at (" +
                    std::to_string(p.x()) + ", " + std::to_string(p.y()) + ")");
}

/// Index of the first recorded sample at or after time t.
std::size_t sample_at(const Trajectory& traj, double t)
{
  const double slop = 1e-9 * std::max(1.0, std::abs(t));
  for (std::size_t s = 0; s < traj.samples(); ++s)
  {
    if (traj.times[s] >= t - slop)
    {
      return s;
    }
  }
  throw ConfigError("trajectory ends before t = " + std::to_string(t));
}

double max_distance(const Trajectory& traj, std::size_t agent, const Manifold& m)
{
  double worst = 0.0;
  for (const auto& sample : traj.positions)
  {
    worst = std::max(worst, manifold_distance(sample[agent], m));
  }
  return worst;
}

std::vector<FigureCheck> fig1a_checks(const Scenario& s, const Trajectory& traj)
{
  const RectDomain& d = s.domain;
  const double tol = 1e-9 * d.lx();
  std::vector<FigureCheck> out;

  const std::size_t origin = agent_starting_at(s, {0.0, 0.0});
  double moved = 0.0;
  for (const auto& sample : traj.positions)
  {
    moved = std::max(moved, (sample[origin] - traj.positions.front()[origin]).norm());
  }
  out.push_back(make_check("origin_agent_stalled",
                           "agent starting at the origin never moves (B = 0 there)", moved, "<",
                           tol));

  const std::size_t top = agent_starting_at(s, {0.0, d.ly()});
  out.push_back(make_check("axis_agent_x0_confined",
                           "agent starting at (0, Ly) stays on the axis x = 0",
                           max_distance(traj, top, Manifold(ManifoldKind::AxisX0, d)), "<=", tol));

  const std::size_t right = agent_starting_at(s, {d.lx(), 0.0});
  out.push_back(make_check("axis_agent_y0_confined",
                           "agent starting at (Lx, 0) stays on the axis y = 0",
                           max_distance(traj, right, Manifold(ManifoldKind::AxisY0, d)), "<=",
                           tol));

  const std::size_t corner = agent_starting_at(s, {d.lx(), d.ly()});
  out.push_back(make_check("diagonal_agent_confined",
                           "agent starting at (Lx, Ly) stays on the diagonal y = x",
                           max_distance(traj, corner, Manifold(ManifoldKind::DiagonalMain, d)),
                           "<=", tol));
  return out;
}

std::vector<FigureCheck> fig1b_checks(const Scenario& s, const Trajectory& traj)
{
  const RectDomain& d = s.domain;
  std::vector<FigureCheck> out;

  std::size_t right = 0;
  for (std::size_t i = 1; i < s.agents.size(); ++i)
  {
    if (s.agents[i].x() > s.agents[right].x())
    {
      right = i;
    }
  }
  // Highest x reached before the agent first falls back by more than 10 units.
  double peak = -std::numeric_limits<double>::infinity();
  for (const auto& sample : traj.positions)
  {
    const double x = sample[right].x();
    if (peak - x > 10.0)
    {
      break;
    }
    peak = std::max(peak, x);
  }
  out.push_back(make_check("right_agent_reaches_wall",
                           "right-most agent moves horizontally to x = Lx before turning back",
                           peak, ">=", d.lx() - 1.0));

  const std::size_t early = sample_at(traj, 10.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < s.agents.size(); ++i)
  {
    if (i == right)
    {
      continue;
    }
    const Vec2 delta = traj.positions[early][i] - traj.positions.front()[i];
    const double ratio = std::abs(delta.x()) > 0.0
                             ? std::abs(delta.y()) / std::abs(delta.x())
                             : std::numeric_limits<double>::infinity();
    worst = std::max(worst, ratio);
  }
  out.push_back(make_check("left_agents_axis_aligned",
                           "left agents' |dy| over the first 10 s is below 10% of their |dx|",
                           worst, "<", 0.1));
  return out;
}

std::vector<FigureCheck> fig2_checks(const Scenario& s, const Trajectory& traj)
{
  std::vector<FigureCheck> out;
  double stalled = 0.0;
  for (std::size_t i = 0; i < traj.agents(); ++i)
  {
    if (stall_detector(traj, i, s.analyses.stall_window, s.analyses.stall_tol))
    {
      stalled += 1.0;
    }
  }
  out.push_back(make_check("no_agent_stalled",
                           "perturbation frees every agent (stall window " +
                               nlohmann::json(s.analyses.stall_window).dump() + " s, tol " +
                               nlohmann::json(s.analyses.stall_tol).dump() + ")",
                           stalled, "==", 0.0));
  out.push_back(make_check("agents_inside_domain", "all agents remain bounded within the domain",
                           static_cast<double>(boundary_violations(traj)), "==", 0.0));

  const std::size_t one = sample_at(traj, 1.0);
  const double ratio = traj.metric.back() / traj.metric[one];
  out.push_back(make_check("coverage_progress",
                           "ergodicity metric at the horizon is below its value at t = 1 s",
                           ratio, "<", 1.0));
  return out;
}

}  // namespace

std::vector<FigureCheck> figure_checks(std::string_view figure, const Scenario& scenario,
                                       const Trajectory& traj)
{
  if (traj.samples() == 0 || traj.agents() != scenario.agents.size())
  {
    throw ConfigError("trajectory does not belong to scenario '" + scenario.name + "'");
  }
  const std::string id = figure_scenario(figure);
  if (id == "fig1a")
  {
    return fig1a_checks(scenario, traj);
  }
  if (id == "fig1b")
  {
    return fig1b_checks(scenario, traj);
  }
  return fig2_checks(scenario, traj);
}

std::string report_json(const FigureReport& report)
{
  nlohmann::ordered_json root;
  root["figure"] = report.figure;
  root["scenario"] = report.scenario;
  root["seed"] = report.seed;
  root["passed"] = report.passed();
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const FigureCheck& c : report.checks)
  {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["claim"] = c.claim;
    j["value"] = std::isfinite(c.value) ? nlohmann::ordered_json(c.value)
                                        : nlohmann::ordered_json(std::to_string(c.value));
    j["comparison"] = c.comparison;
    j["threshold"] = c.threshold;
    j["passed"] = c.passed;
    checks.push_back(j);
  }
  root["checks"] = checks;
  return root.dump(2) + "\n";
}

}  // namespace smc
