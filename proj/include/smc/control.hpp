#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "smc/spectral.hpp"

namespace smc
{
enum class ControlVariant
{
  Classical,              ///< -u_max B / |B|
  Regularized,            ///< -u_max B / sqrt(|B|^2 + eps^2)
  Stochastic,             ///< regularized input plus additive noise
  StochasticContraction,  ///< regularized input, -k (x - center) drift, additive noise
};

std::string_view to_string(ControlVariant v) noexcept;
ControlVariant parse_variant(std::string_view s);

struct ControlConfig
{
  ControlVariant variant = ControlVariant::Classical;
  double u_max = 10.0;
  double epsilon = 1e-3;
  double k_contraction = 0.0;
  double sigma = 0.0;
  /// Point the contraction term pulls toward; the coordinate origin by default.
  Vec2 contraction_center = Vec2::Zero();

  /// Throws ParameterError when a field violates the variant's requirements.
  void validate() const;

  bool noisy() const noexcept
  {
    return (variant == ControlVariant::Stochastic ||
            variant == ControlVariant::StochasticContraction) &&
           sigma > 0.0;
  }
  bool contracting() const noexcept { return variant == ControlVariant::StochasticContraction; }

  friend bool operator==(const ControlConfig&, const ControlConfig&) = default;
};

/// lambda_k (c_k - mu_k), the per-mode weights shared by every agent in a step.
std::vector<double> weighted_mismatch(const SpectralCoefficients& c,
                                      const SpectralCoefficients& mu, const ModeSet& modes);

/// B = sum_k lambda_k grad f_k(p) (c_k - mu_k) at a point in the domain.
Vec2 spectral_gradient(const Vec2& p, const SpectralCoefficients& c,
                       const SpectralCoefficients& mu, const ModeSet& modes,
                       const RectDomain& domain);

/// Same sum from precomputed basis factors and weighted_mismatch(). Each
/// component is summed with the derivative direction as the outer index, so
/// on a square domain with symmetric weights the x and y components of a point
/// on the diagonal are computed by identical operation sequences.
Vec2 spectral_gradient(const PointBasis& basis, std::span<const double> weights,
                       const ModeSet& modes, const RectDomain& domain);

/// Stall threshold for the classical law: 1e-12 u_max.
inline double default_stall_tol(const ControlConfig& cfg) noexcept { return 1e-12 * cfg.u_max; }

/// Zero when |B| <= stall_tol, otherwise -u_max B / |B|.
Vec2 classical_control(const Vec2& b, const ControlConfig& cfg, double stall_tol);

Vec2 regularized_control(const Vec2& b, const ControlConfig& cfg);

/// The input prescribed by cfg.variant.
Vec2 control_input(const Vec2& b, const ControlConfig& cfg);

/// Deterministic part of dx/dt: u, minus k (x - center) for the contracting variant.
Vec2 drift(const Vec2& p, const Vec2& u, const ControlConfig& cfg);

}  // namespace smc
