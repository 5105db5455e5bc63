#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "smc/control.hpp"
#include "smc/simulator.hpp"

namespace smc
{
enum class ManifoldKind
{
  AxisX0,        ///< x = 0
  AxisY0,        ///< y = 0
  MidlineX,      ///< x = Lx / 2
  MidlineY,      ///< y = Ly / 2
  DiagonalMain,  ///< y = x (square domains only)
  DiagonalAnti,  ///< y = Lx - x (square domains only)
  Origin,        ///< the single point (0, 0)
};

std::string_view to_string(ManifoldKind kind) noexcept;
ManifoldKind parse_manifold(std::string_view s);

/// One of the symmetry sets of a rectangle. Constructing a diagonal on a
/// non-square domain throws ConfigError.
class Manifold
{
public:
  Manifold(ManifoldKind kind, const RectDomain& domain);

  ManifoldKind kind() const noexcept { return kind_; }
  const RectDomain& domain() const noexcept { return domain_; }

private:
  ManifoldKind kind_;
  RectDomain domain_;
};

/// Euclidean distance from `p` to the set.
double manifold_distance(const Vec2& p, const Manifold& manifold);

/// First recorded time at which the agent is farther than `delta` from the
/// set, or nullopt if it never is.
std::optional<double> escape_time(const Trajectory& traj, std::size_t agent,
                                  const Manifold& manifold, double delta);

/// max over agents of max{|x_i(0)|^2, u_max^2 / k^2 + 2 sigma^2 / k}.
double msb_bound(const ControlConfig& config, std::span<const Vec2> initial);

struct MsbReport
{
  double sup_mean_sq = 0.0;  ///< sup over recorded times of the ensemble mean of |x|^2
  double bound = 0.0;
  std::size_t sample_count = 0;
  bool passed = false;
};

/// Ensemble mean of |x_agent(t)|^2 at every recorded time; passes iff its
/// supremum is at most slack * bound. All trajectories must share their time
/// grid.
MsbReport msb_check(std::span<const Trajectory> ensemble, std::size_t agent, double bound,
                    double slack = 1.0);

/// |x(t)| <= |x(0)| e^(-kt) + (u_max / k)(1 - e^(-kt)) + c dt at every
/// recorded time, with c = u_max + k (Lx + Ly) covering one Euler step.
/// Defined only for noise-free contracting runs without boundary handling;
/// anything else throws MisuseError. Distances are taken from the
/// contraction center.
bool deterministic_bound_check(const Trajectory& traj, std::size_t agent,
                               const ControlConfig& config);

/// True iff the distance the agent travels within every window of the given
/// length stays below `tol`, i.e. it never gets going over the whole run.
bool stall_detector(const Trajectory& traj, std::size_t agent, double window, double tol);

/// Number of (sample, agent) pairs lying outside the domain.
std::size_t boundary_violations(const Trajectory& traj);

}  // namespace smc
