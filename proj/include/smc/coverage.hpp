#pragma once

#include <span>
#include <vector>

#include "smc/spectral.hpp"

namespace smc
{
/// Running trajectory integrals S_k = int_0^t sum_j f_k(x_j) dt, discretized
/// with the left-endpoint rule.
class CoverageAccumulator
{
public:
  CoverageAccumulator(const RectDomain& domain, const ModeSet& modes, std::size_t agents);

  /// S_k += dt * sum_j f_k(p_j); t += dt. Positions must lie in the domain.
  void accumulate(std::span<const Vec2> positions, double dt);

  /// Same as accumulate() with basis factors already evaluated at each agent.
  /// No domain check; the simulator uses this in free-space runs.
  void accumulate(std::span<const PointBasis> bases, double dt);

  /// c_k = S_k / (N t) for t > 0. At t = 0 the t -> 0+ limit, the spatial
  /// average of f_k over `initial`, is returned instead.
  SpectralCoefficients coefficients(std::span<const Vec2> initial) const;
  SpectralCoefficients coefficients(std::span<const PointBasis> initial) const;

  double time() const noexcept { return t_; }
  std::size_t agents() const noexcept { return agents_; }
  const std::vector<double>& sums() const noexcept { return sums_; }
  const ModeSet& modes() const noexcept { return modes_; }

private:
  void check_count(std::size_t n) const;
  std::vector<double> spatial_sum(std::span<const PointBasis> bases) const;

  RectDomain domain_;
  ModeSet modes_;
  std::size_t agents_;
  std::vector<double> sums_;
  double t_ = 0.0;
};

inline SpectralCoefficients time_avg_coefficients(const CoverageAccumulator& acc,
                                                  std::span<const Vec2> positions_at_t0)
{
  return acc.coefficients(positions_at_t0);
}

}  // namespace smc
