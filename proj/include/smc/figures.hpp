#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "smc/scenario.hpp"
#include "smc/simulator.hpp"

namespace smc
{
/// One thresholded assertion about a figure. `value` is compared with
/// `threshold` using `comparison` ("<", "<=", ">=" or "==").
struct FigureCheck
{
  std::string name;
  std::string claim;
  double value = 0.0;
  std::string comparison;
  double threshold = 0.0;
  bool passed = false;
};

struct FigureReport
{
  std::string figure;
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<FigureCheck> checks;

  bool passed() const noexcept;
};

/// Figure identifiers understood by figure_checks(): fig1a, fig1b, fig2a, fig2b.
const std::vector<std::string>& figure_ids();

/// Bundled scenario a figure is reproduced from.
std::string figure_scenario(std::string_view figure);

/// Evaluates the figure's qualitative claims on a finished run of `scenario`.
/// Agents are identified by their initial positions, so the scenario must use
/// the figure's layout; otherwise ConfigError.
std::vector<FigureCheck> figure_checks(std::string_view figure, const Scenario& scenario,
                                       const Trajectory& traj);

/// Machine-readable report (JSON text, stable key order).
std::string report_json(const FigureReport& report);

}  // namespace smc
