#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "smc/common.hpp"

namespace smc
{
class GaussianMixture;

/// Rectangle [0, lx] x [0, ly].
class RectDomain
{
public:
  RectDomain(double lx, double ly);

  double lx() const noexcept { return lx_; }
  double ly() const noexcept { return ly_; }
  bool square() const noexcept { return lx_ == ly_; }
  bool contains(const Vec2& p) const noexcept;

  friend bool operator==(const RectDomain&, const RectDomain&) = default;

private:
  double lx_;
  double ly_;
};

struct ModeIndex
{
  int m = 0;
  int n = 0;
  friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

/// Truncated cosine index set {0..kx-1} x {0..ky-1}, row-major (m outer).
class ModeSet
{
public:
  ModeSet(int kx, int ky);

  int kx() const noexcept { return kx_; }
  int ky() const noexcept { return ky_; }
  std::size_t size() const noexcept { return lambdas_.size(); }

  ModeIndex mode(std::size_t k) const noexcept
  {
    return {static_cast<int>(k) / ky_, static_cast<int>(k) % ky_};
  }
  std::size_t index(int m, int n) const noexcept
  {
    return static_cast<std::size_t>(m) * ky_ + n;
  }
  double lambda(std::size_t k) const noexcept { return lambdas_[k]; }
  std::span<const double> lambdas() const noexcept { return lambdas_; }

private:
  int kx_;
  int ky_;
  std::vector<double> lambdas_;
};

/// Per-mode coefficients aligned with a ModeSet.
struct SpectralCoefficients
{
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t k) const noexcept { return values[k]; }
  double& operator[](std::size_t k) noexcept { return values[k]; }
};

/// Tensor-product midpoint grid with nx x ny cells. Both counts must be even.
struct QuadratureGrid
{
  int nx = 512;
  int ny = 512;
};

struct SinCos
{
  double sin;
  double cos;
};

/// sin(pi t) and cos(pi t) with exact argument reduction: integer and
/// half-integer arguments give exact 0 / +-1.
SinCos sincospi(double t) noexcept;

/// cos(m pi x / lx) cos(n pi y / ly).
double basis_eval(ModeIndex mode, const Vec2& p, const RectDomain& domain);

/// Analytic gradient of basis_eval.
Vec2 basis_grad(ModeIndex mode, const Vec2& p, const RectDomain& domain);

/// Sobolev-type weight (1 + m^2 + n^2)^(-3/2).
double lambda_weight(ModeIndex mode) noexcept;

/// Separable factors of every basis function at one point:
/// f_mn = cx[m] * cy[n], d/dx f_mn = -kx[m] * sx[m] * cy[n], and so on.
///
/// `fill` does not check the point against the domain; outside the rectangle
/// it evaluates the even periodic extension of the basis.
struct PointBasis
{
  std::vector<double> cx, sx, cy, sy;

  void fill(const Vec2& p, const RectDomain& domain, const ModeSet& modes);
};

/// Fourier coefficients mu_k = int f_k rho over the domain.
///
/// Midpoint rule on `grid`. The sum is folded about both midlines and averaged
/// over both summation orders, so a density that is exactly mirror-symmetric
/// yields exact zeros for odd modes, and an exchange-symmetric density on a
/// square grid yields mu_mn == mu_nm bit for bit.
SpectralCoefficients target_coefficients(const GaussianMixture& density, const ModeSet& modes,
                                         const RectDomain& domain, const QuadratureGrid& grid);

/// sum_k lambda_k (c_k - mu_k)^2
double ergodicity_metric(const SpectralCoefficients& c, const SpectralCoefficients& mu,
                         const ModeSet& modes);

void check_aligned(const SpectralCoefficients& c, const ModeSet& modes, const char* what);

}  // namespace smc
