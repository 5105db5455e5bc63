#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "smc/control.hpp"
#include "smc/coverage.hpp"
#include "smc/spectral.hpp"

namespace smc
{
enum class BoundaryPolicy
{
  Reflect,  ///< mirror back into the rectangle
  Project,  ///< clamp each coordinate
  None,     ///< free space; positions may leave the rectangle
};

std::string_view to_string(BoundaryPolicy p) noexcept;
BoundaryPolicy parse_boundary(std::string_view s);

struct SimConfig
{
  double dt = 0.1;
  double horizon = 150.0;
  std::uint64_t seed = 0;
  BoundaryPolicy boundary = BoundaryPolicy::Reflect;
  int record_stride = 1;

  /// floor(horizon / dt), tolerant of the rounding in e.g. 150 / 0.1.
  long steps() const;
  void validate() const;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Maps a point back into the domain under `policy`. Throws NumericalError
/// for non-finite input.
Vec2 apply_boundary(const Vec2& p, const RectDomain& domain, BoundaryPolicy policy);

/// Domain, mode set and target coefficients shared by every run of a scenario.
struct SpectralModel
{
  RectDomain domain;
  ModeSet modes;
  SpectralCoefficients mu;
};

/// Recorded samples of one run, plus the configuration that produced it.
struct Trajectory
{
  std::vector<double> times;
  std::vector<std::vector<Vec2>> positions;        ///< [sample][agent]
  std::vector<double> metric;                      ///< ergodicity metric per sample
  std::vector<std::vector<double>> control_norms;  ///< [sample][agent] |u_i|

  RectDomain domain{1.0, 1.0};
  ControlConfig control;
  SimConfig sim;

  std::size_t samples() const noexcept { return times.size(); }
  std::size_t agents() const noexcept { return positions.empty() ? 0 : positions.front().size(); }
};

/// One coupled agent/coverage system advanced by Euler (deterministic
/// variants) or Euler-Maruyama (noisy variants).
///
/// Every agent's input in a step is computed from the same coefficient
/// snapshot; positions are then updated, and the coverage integral takes the
/// left-endpoint contribution of the positions the step started from. Each
/// agent draws noise from its own generator seeded from (seed, agent index).
class Simulation
{
public:
  struct Snapshot
  {
    SpectralCoefficients c;
    double metric = 0.0;
    std::vector<PointBasis> bases;
    std::vector<Vec2> gradient;
    std::vector<Vec2> input;
    std::vector<Vec2> drift;
  };

  Simulation(const SpectralModel& model, const ControlConfig& control, const SimConfig& sim,
             std::vector<Vec2> initial);

  /// Coefficients, spectral gradients, inputs and drifts at the current state.
  Snapshot evaluate() const;
  /// Applies one step using a snapshot taken from the current state.
  void advance(const Snapshot& snap);
  void step() { advance(evaluate()); }

  const std::vector<Vec2>& positions() const noexcept { return positions_; }
  const CoverageAccumulator& coverage() const noexcept { return coverage_; }
  long step_index() const noexcept { return step_; }
  double time() const noexcept { return static_cast<double>(step_) * sim_.dt; }

private:
  const SpectralModel* model_;
  ControlConfig control_;
  SimConfig sim_;
  std::vector<Vec2> positions_;
  CoverageAccumulator coverage_;
  std::vector<std::mt19937_64> rngs_;
  std::vector<std::normal_distribution<double>> normals_;
  long step_ = 0;
};

/// Runs floor(T/dt) steps and records every record_stride-th state plus the
/// final one.
Trajectory run_scenario(const SpectralModel& model, const ControlConfig& control,
                        const SimConfig& sim, const std::vector<Vec2>& initial);

}  // namespace smc
