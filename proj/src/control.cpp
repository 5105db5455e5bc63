#include "smc/control.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace smc
{
std::string_view to_string(ControlVariant v) noexcept
{
  switch (v)
  {
    case ControlVariant::Classical:
      return "Classical";
    case ControlVariant::Regularized:
      return "Regularized";
    case ControlVariant::Stochastic:
      return "Stochastic";
    case ControlVariant::StochasticContraction:
      return "StochasticContraction";
  }
  return "?";
}

ControlVariant parse_variant(std::string_view s)
{
  for (auto v : {ControlVariant::Classical, ControlVariant::Regularized, ControlVariant::Stochastic,
                 ControlVariant::StochasticContraction})
  {
    if (s == to_string(v))
    {
      return v;
    }
  }
  throw ConfigError("unknown control variant '" + std::string(s) + "'");
}

void ControlConfig::validate() const
{
  if (!(u_max > 0.0) || !std::isfinite(u_max))
  {
    throw ParameterError("u_max must be positive");
  }
  if (variant != ControlVariant::Classical && !(epsilon > 0.0))
  {
    throw ParameterError("epsilon must be positive for the regularized input");
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
  {
    throw ParameterError("sigma must be non-negative");
  }
  if (!(k_contraction >= 0.0) || !std::isfinite(k_contraction))
  {
    throw ParameterError("contraction gain must be non-negative");
  }
  switch (variant)
  {
    case ControlVariant::Classical:
    case ControlVariant::Regularized:
      if (sigma != 0.0)
      {
        throw ParameterError("deterministic variants take sigma = 0");
      }
      break;
    case ControlVariant::Stochastic:
      if (!(sigma > 0.0))
      {
        throw ParameterError("stochastic variant needs sigma > 0");
      }
      break;
    case ControlVariant::StochasticContraction:
      // sigma = 0 is the deterministic contracting system.
      if (!(k_contraction > 0.0))
      {
        throw ParameterError("contracting variant needs k > 0");
      }
      break;
  }
}

std::vector<double> weighted_mismatch(const SpectralCoefficients& c,
                                      const SpectralCoefficients& mu, const ModeSet& modes)
{
  check_aligned(c, modes, "empirical coefficients");
  check_aligned(mu, modes, "target coefficients");
  std::vector<double> w(modes.size());
  for (std::size_t k = 0; k < w.size(); ++k)
  {
    w[k] = modes.lambda(k) * (c[k] - mu[k]);
  }
  return w;
}

Vec2 spectral_gradient(const Vec2& p, const SpectralCoefficients& c,
                       const SpectralCoefficients& mu, const ModeSet& modes,
                       const RectDomain& domain)
{
  if (!domain.contains(p))
  {
    throw DomainError("agent position lies outside the domain");
  }
  PointBasis basis;
  basis.fill(p, domain, modes);
  const std::vector<double> w = weighted_mismatch(c, mu, modes);
  return spectral_gradient(basis, w, modes, domain);
}

Vec2 spectral_gradient(const PointBasis& basis, std::span<const double> weights,
                       const ModeSet& modes, const RectDomain& domain)
{
  if (weights.size() != modes.size())
  {
    throw AlignmentError("mode weights do not match the mode set");
  }
  const int kx = modes.kx();
  const int ky = modes.ky();
  const double step_x = std::numbers::pi / domain.lx();
  const double step_y = std::numbers::pi / domain.ly();

  double bx = 0.0;
  for (int m = 1; m < kx; ++m)
  {
    const double* row = &weights[modes.index(m, 0)];
    double inner = 0.0;
    for (int n = 0; n < ky; ++n)
    {
      inner += row[n] * basis.cy[static_cast<std::size_t>(n)];
    }
    bx += (m * step_x * basis.sx[static_cast<std::size_t>(m)]) * inner;
  }

  double by = 0.0;
  for (int n = 1; n < ky; ++n)
  {
    double inner = 0.0;
    for (int m = 0; m < kx; ++m)
    {
      inner += weights[modes.index(m, n)] * basis.cx[static_cast<std::size_t>(m)];
    }
    by += (n * step_y * basis.sy[static_cast<std::size_t>(n)]) * inner;
  }
  return {-bx, -by};
}

Vec2 classical_control(const Vec2& b, const ControlConfig& cfg, double stall_tol)
{
  const double norm = b.norm();
  if (!(norm > stall_tol))
  {
    return Vec2::Zero();
  }
  return -cfg.u_max * (b / norm);
}

Vec2 regularized_control(const Vec2& b, const ControlConfig& cfg)
{
  const double denom = std::sqrt(b.squaredNorm() + cfg.epsilon * cfg.epsilon);
  return -cfg.u_max * (b / denom);
}

Vec2 control_input(const Vec2& b, const ControlConfig& cfg)
{
  if (cfg.variant == ControlVariant::Classical)
  {
    return classical_control(b, cfg, default_stall_tol(cfg));
  }
  return regularized_control(b, cfg);
}

Vec2 drift(const Vec2& p, const Vec2& u, const ControlConfig& cfg)
{
  if (cfg.contracting())
  {
    return u - cfg.k_contraction * (p - cfg.contraction_center);
  }
  return u;
}

}  // namespace smc
