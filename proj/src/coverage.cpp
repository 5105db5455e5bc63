#include "smc/coverage.hpp"

#include <string>

namespace smc
{
namespace
{
std::vector<PointBasis> bases_at(std::span<const Vec2> positions, const RectDomain& domain,
                                 const ModeSet& modes)
{
  std::vector<PointBasis> out(positions.size());
  for (std::size_t j = 0; j < positions.size(); ++j)
  {
    if (!domain.contains(positions[j]))
    {
      throw DomainError("agent " + std::to_string(j) + " lies outside the domain");
    }
    out[j].fill(positions[j], domain, modes);
  }
  return out;
}

}  // namespace

CoverageAccumulator::CoverageAccumulator(const RectDomain& domain, const ModeSet& modes,
                                         std::size_t agents)
  : domain_(domain), modes_(modes), agents_(agents), sums_(modes.size(), 0.0)
{
  if (agents == 0)
  {
    throw ParameterError("ensemble must contain at least one agent");
  }
}

void CoverageAccumulator::check_count(std::size_t n) const
{
  if (n != agents_)
  {
    throw ConfigError("expected " + std::to_string(agents_) + " agent positions, got " +
                      std::to_string(n));
  }
}

std::vector<double> CoverageAccumulator::spatial_sum(std::span<const PointBasis> bases) const
{
  const int kx = modes_.kx();
  const int ky = modes_.ky();
  std::vector<double> out(modes_.size(), 0.0);
  for (const PointBasis& b : bases)
  {
    for (int m = 0; m < kx; ++m)
    {
      double* row = &out[modes_.index(m, 0)];
      const double cm = b.cx[static_cast<std::size_t>(m)];
      for (int n = 0; n < ky; ++n)
      {
        row[n] += cm * b.cy[static_cast<std::size_t>(n)];
      }
    }
  }
  return out;
}

void CoverageAccumulator::accumulate(std::span<const Vec2> positions, double dt)
{
  check_count(positions.size());
  const auto bases = bases_at(positions, domain_, modes_);
  accumulate(std::span<const PointBasis>(bases), dt);
}

void CoverageAccumulator::accumulate(std::span<const PointBasis> bases, double dt)
{
  check_count(bases.size());
  if (!(dt > 0.0))
  {
    throw ParameterError("time step must be positive");
  }
  const std::vector<double> inc = spatial_sum(bases);
  for (std::size_t k = 0; k < sums_.size(); ++k)
  {
    sums_[k] += dt * inc[k];
  }
  t_ += dt;
}

SpectralCoefficients CoverageAccumulator::coefficients(std::span<const Vec2> initial) const
{
  if (t_ > 0.0)
  {
    return coefficients(std::span<const PointBasis>{});
  }
  check_count(initial.size());
  const auto bases = bases_at(initial, domain_, modes_);
  return coefficients(std::span<const PointBasis>(bases));
}

SpectralCoefficients CoverageAccumulator::coefficients(std::span<const PointBasis> initial) const
{
  SpectralCoefficients c{std::vector<double>(modes_.size())};
  const double n = static_cast<double>(agents_);
  if (t_ > 0.0)
  {
    const double scale = n * t_;
    for (std::size_t k = 0; k < sums_.size(); ++k)
    {
      c[k] = sums_[k] / scale;
    }
    return c;
  }
  check_count(initial.size());
  const std::vector<double> s = spatial_sum(initial);
  for (std::size_t k = 0; k < s.size(); ++k)
  {
    c[k] = s[k] / n;
  }
  return c;
}

}  // namespace smc
