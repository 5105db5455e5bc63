#pragma once

#include <cstdint>
#include <vector>

#include "smc/simulator.hpp"

namespace smc
{
/// Seed of ensemble member i: master XOR i.
inline std::uint64_t member_seed(std::uint64_t master, std::size_t i) noexcept
{
  return master ^ static_cast<std::uint64_t>(i);
}

struct EnsembleOptions
{
  std::size_t members = 2;
  std::uint64_t master_seed = 0;
  /// Worker threads; 0 uses the hardware concurrency.
  unsigned threads = 0;
};

/// Runs `members` copies of the scenario that differ only in their seed, on
/// a bounded worker pool. Results are ordered by member index and do not
/// depend on the thread count. A failing member is reported with its seed;
/// NumericalError keeps its type and step.
std::vector<Trajectory> run_ensemble(const SpectralModel& model, const ControlConfig& control,
                                     const SimConfig& sim, const std::vector<Vec2>& initial,
                                     const EnsembleOptions& options);

}  // namespace smc
