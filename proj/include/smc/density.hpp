#pragma once

#include <vector>

#include "smc/common.hpp"
#include "smc/spectral.hpp"

namespace smc
{
struct GaussianComponent
{
  double weight = 0.0;
  Vec2 mean = Vec2::Zero();
  double sigma = 0.0;  ///< isotropic standard deviation
};

/// Mixture of isotropic Gaussians truncated to a rectangle and renormalized so
/// that its midpoint-rule integral over the rectangle is one.
///
/// Component contributions are summed in sorted order, so the value at a point
/// depends only on the multiset of contributions. A mixture that is mapped onto
/// itself by a reflection or by the x/y exchange therefore evaluates to the
/// same bits at mirrored points whenever the mirrored coordinates are exact.
class GaussianMixture
{
public:
  /// `normalization_cells` is the per-axis cell count of the midpoint grid
  /// used to compute the truncation constant.
  GaussianMixture(const RectDomain& domain, std::vector<GaussianComponent> components,
                  int normalization_cells = 1024);

  double eval(const Vec2& p) const;

  /// Density at the cell midpoints of `grid`, row-major with x as the slow
  /// index. Offsets to component means are formed from integer multiples of
  /// the cell half-width so mirrored cells see mirrored offsets.
  std::vector<double> eval_grid(const QuadratureGrid& grid) const;

  const RectDomain& domain() const noexcept { return domain_; }
  const std::vector<GaussianComponent>& components() const noexcept { return components_; }
  /// Mass of the untruncated mixture inside the domain.
  double normalization() const noexcept { return z_; }

private:
  std::vector<double> raw_grid(const QuadratureGrid& grid) const;

  RectDomain domain_;
  std::vector<GaussianComponent> components_;
  double z_ = 1.0;
};

inline double density_eval(const GaussianMixture& mixture, const Vec2& p)
{
  return mixture.eval(p);
}

/// Four equal-weight modes at the quarter points of the domain, i.e. at
/// (500,500), (500,1500), (1500,500), (1500,1500) on a 2000 x 2000 square.
GaussianMixture make_quadrimodal(const RectDomain& domain, double sigma_rho);

}  // namespace smc
