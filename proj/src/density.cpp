#include "smc/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace smc
{
namespace
{
// Sum in ascending order so the result depends only on the multiset of terms.
double sorted_sum(std::span<double> terms)
{
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms)
  {
    s += t;
  }
  return s;
}

double peak(const GaussianComponent& c)
{
  return c.weight / (2.0 * std::numbers::pi * c.sigma * c.sigma);
}

double gauss_factor(double offset, double sigma)
{
  return std::exp(-(offset * offset) / (2.0 * sigma * sigma));
}

// exp(-d^2 / 2s^2) at the midpoints of `cells` cells over [0, length], with the
// offset formed as (length (2i+1) - 2 cells mean) / (2 cells).
std::vector<double> axis_factors(double length, int cells, double mean, double sigma)
{
  std::vector<double> out(static_cast<std::size_t>(cells));
  const double twice = 2.0 * cells;
  const double shift = twice * mean;
  for (int i = 0; i < cells; ++i)
  {
    const double offset = (length * (2.0 * i + 1.0) - shift) / twice;
    out[static_cast<std::size_t>(i)] = gauss_factor(offset, sigma);
  }
  return out;
}

}  // namespace

GaussianMixture::GaussianMixture(const RectDomain& domain, std::vector<GaussianComponent> components,
                                 int normalization_cells)
  : domain_(domain), components_(std::move(components))
{
  if (components_.empty())
  {
    throw ParameterError("mixture needs at least one component");
  }
  double total = 0.0;
  for (const auto& c : components_)
  {
    if (!(c.sigma > 0.0) || !std::isfinite(c.sigma))
    {
      throw ParameterError("component standard deviation must be positive");
    }
    if (!(c.weight >= 0.0))
    {
      throw ParameterError("component weights must be non-negative");
    }
    if (!domain_.contains(c.mean))
    {
      throw ParameterError("component mean lies outside the domain");
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12)
  {
    throw ParameterError("component weights must sum to 1");
  }
  if (normalization_cells <= 0)
  {
    throw ParameterError("normalization grid must have at least one cell");
  }

  const QuadratureGrid grid{normalization_cells, normalization_cells};
  const std::vector<double> raw = raw_grid(grid);
  double mass = 0.0;
  for (double v : raw)
  {
    mass += v;
  }
  z_ = mass * (domain_.lx() / grid.nx) * (domain_.ly() / grid.ny);
  if (!(z_ > 0.0))
  {
    throw ParameterError("mixture has no mass inside the domain");
  }
}

double GaussianMixture::eval(const Vec2& p) const
{
  std::vector<double> terms(components_.size());
  for (std::size_t c = 0; c < components_.size(); ++c)
  {
    const auto& g = components_[c];
    terms[c] = peak(g) * (gauss_factor(p.x() - g.mean.x(), g.sigma) *
                          gauss_factor(p.y() - g.mean.y(), g.sigma));
  }
  return sorted_sum(terms) / z_;
}

std::vector<double> GaussianMixture::raw_grid(const QuadratureGrid& grid) const
{
  const std::size_t nc = components_.size();
  std::vector<std::vector<double>> fx(nc), fy(nc);
  for (std::size_t c = 0; c < nc; ++c)
  {
    const auto& g = components_[c];
    fx[c] = axis_factors(domain_.lx(), grid.nx, g.mean.x(), g.sigma);
    fy[c] = axis_factors(domain_.ly(), grid.ny, g.mean.y(), g.sigma);
  }

  std::vector<double> out(static_cast<std::size_t>(grid.nx) * grid.ny);
  std::vector<double> terms(nc);
  for (int i = 0; i < grid.nx; ++i)
  {
    for (int j = 0; j < grid.ny; ++j)
    {
      for (std::size_t c = 0; c < nc; ++c)
      {
        terms[c] = peak(components_[c]) * (fx[c][i] * fy[c][j]);
      }
      out[static_cast<std::size_t>(i) * grid.ny + j] = sorted_sum(terms);
    }
  }
  return out;
}

std::vector<double> GaussianMixture::eval_grid(const QuadratureGrid& grid) const
{
  std::vector<double> out = raw_grid(grid);
  for (double& v : out)
  {
    v /= z_;
  }
  return out;
}

GaussianMixture make_quadrimodal(const RectDomain& domain, double sigma_rho)
{
  if (!(sigma_rho > 0.0))
  {
    throw ParameterError("sigma_rho must be positive");
  }
  const double qx = domain.lx() / 4.0;
  const double qy = domain.ly() / 4.0;
  std::vector<GaussianComponent> comps = {
      {0.25, Vec2(qx, qy), sigma_rho},
      {0.25, Vec2(qx, 3.0 * qy), sigma_rho},
      {0.25, Vec2(3.0 * qx, qy), sigma_rho},
      {0.25, Vec2(3.0 * qx, 3.0 * qy), sigma_rho},
  };
  return GaussianMixture(domain, std::move(comps));
}

}  // namespace smc
