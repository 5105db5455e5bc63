#include "smc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "smc/density.hpp"

namespace smc
{
namespace
{
void check_point(const Vec2& p, const RectDomain& domain)
{
  if (!domain.contains(p))
  {
    throw DomainError("point (" + std::to_string(p.x()) + ", " + std::to_string(p.y()) +
                      ") lies outside the domain");
  }
}

}  // namespace

RectDomain::RectDomain(double lx, double ly) : lx_(lx), ly_(ly)
{
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
  {
    throw ParameterError("domain side lengths must be positive and finite");
  }
}

bool RectDomain::contains(const Vec2& p) const noexcept
{
  return p.x() >= 0.0 && p.x() <= lx_ && p.y() >= 0.0 && p.y() <= ly_;
}

ModeSet::ModeSet(int kx, int ky) : kx_(kx), ky_(ky)
{
  if (kx < 1 || ky < 1)
  {
    throw ParameterError("mode truncation must keep at least the constant mode");
  }
  lambdas_.resize(static_cast<std::size_t>(kx) * ky);
  for (int m = 0; m < kx; ++m)
  {
    for (int n = 0; n < ky; ++n)
    {
      lambdas_[index(m, n)] = lambda_weight({m, n});
    }
  }
}

SinCos sincospi(double t) noexcept
{
  // remainder() and the subtraction below are exact, so the only rounding is
  // in the final sin/cos of a reduced angle in [-pi/4, pi/4].
  const double r = std::remainder(t, 2.0);
  const double a = 2.0 * r;
  const double q = std::nearbyint(a);
  const double f = a - q;
  const double theta = 0.5 * std::numbers::pi * f;
  const double s = f == 0.0 ? 0.0 : std::sin(theta);
  const double c = f == 0.0 ? 1.0 : std::cos(theta);

  switch (static_cast<int>(q))
  {
    case 0:
      return {s, c};
    case 1:
      return {c, -s};
    case -1:
      return {-c, s};
    default:  // +-2
      return {-s, -c};
  }
}

double basis_eval(ModeIndex mode, const Vec2& p, const RectDomain& domain)
{
  check_point(p, domain);
  return sincospi(mode.m * (p.x() / domain.lx())).cos *
         sincospi(mode.n * (p.y() / domain.ly())).cos;
}

Vec2 basis_grad(ModeIndex mode, const Vec2& p, const RectDomain& domain)
{
  check_point(p, domain);
  const SinCos tx = sincospi(mode.m * (p.x() / domain.lx()));
  const SinCos ty = sincospi(mode.n * (p.y() / domain.ly()));
  const double kx = mode.m * (std::numbers::pi / domain.lx());
  const double ky = mode.n * (std::numbers::pi / domain.ly());
  return {-kx * tx.sin * ty.cos, -ky * tx.cos * ty.sin};
}

double lambda_weight(ModeIndex mode) noexcept
{
  return std::pow(1.0 + mode.m * mode.m + mode.n * mode.n, -1.5);
}

void PointBasis::fill(const Vec2& p, const RectDomain& domain, const ModeSet& modes)
{
  const auto kx = static_cast<std::size_t>(modes.kx());
  const auto ky = static_cast<std::size_t>(modes.ky());
  cx.resize(kx);
  sx.resize(kx);
  cy.resize(ky);
  sy.resize(ky);

  const double rx = p.x() / domain.lx();
  const double ry = p.y() / domain.ly();
  for (std::size_t m = 0; m < kx; ++m)
  {
    const SinCos t = sincospi(static_cast<double>(m) * rx);
    cx[m] = t.cos;
    sx[m] = t.sin;
  }
  for (std::size_t n = 0; n < ky; ++n)
  {
    const SinCos t = sincospi(static_cast<double>(n) * ry);
    cy[n] = t.cos;
    sy[n] = t.sin;
  }
}

SpectralCoefficients target_coefficients(const GaussianMixture& density, const ModeSet& modes,
                                         const RectDomain& domain, const QuadratureGrid& grid)
{
  if (!(density.domain() == domain))
  {
    throw ConfigError("density was normalized on a different domain");
  }
  if (grid.nx <= 0 || grid.ny <= 0 || grid.nx % 2 != 0 || grid.ny % 2 != 0)
  {
    throw ResolutionError("quadrature cell counts must be positive and even");
  }
  // At least four cells per half-wavelength L/m of the highest mode.
  if (grid.nx < 4 * (modes.kx() - 1) || grid.ny < 4 * (modes.ky() - 1))
  {
    throw ResolutionError("quadrature grid " + std::to_string(grid.nx) + "x" +
                          std::to_string(grid.ny) + " is too coarse for " +
                          std::to_string(modes.kx()) + "x" + std::to_string(modes.ky()) +
                          " modes");
  }

  const std::vector<double> rho = density.eval_grid(grid);
  const int nx = grid.nx;
  const int ny = grid.ny;
  const int hx = nx / 2;
  const int hy = ny / 2;
  const auto at = [&](int i, int j) { return rho[static_cast<std::size_t>(i) * ny + j]; };

  // Cosines at the cell midpoints of the lower half of each axis.
  const auto cos_table = [](int k_count, int cells) {
    std::vector<double> table(static_cast<std::size_t>(k_count) * (cells / 2));
    for (int k = 0; k < k_count; ++k)
    {
      for (int i = 0; i < cells / 2; ++i)
      {
        table[static_cast<std::size_t>(k) * (cells / 2) + i] =
            sincospi(k * ((2.0 * i + 1.0) / (2.0 * cells))).cos;
      }
    }
    return table;
  };
  const std::vector<double> cxt = cos_table(modes.kx(), nx);
  const std::vector<double> cyt = cos_table(modes.ky(), ny);

  SpectralCoefficients mu{std::vector<double>(modes.size(), 0.0)};
  const double cell = (domain.lx() / nx) * (domain.ly() / ny);

  std::vector<double> folded(static_cast<std::size_t>(hx) * hy);
  std::vector<double> by_rows(modes.size(), 0.0);
  std::vector<double> partial(static_cast<std::size_t>(hx));
  std::vector<double> partial_t(static_cast<std::size_t>(hy));

  for (int p = 0; p < 2; ++p)
  {
    for (int q = 0; q < 2; ++q)
    {
      // f_mn(L - x, y) = (-1)^m f_mn(x, y): fold the four quadrants with the
      // parity signs of (m, n). The grouping is symmetric under i <-> j.
      for (int i = 0; i < hx; ++i)
      {
        const int ir = nx - 1 - i;
        for (int j = 0; j < hy; ++j)
        {
          const int jr = ny - 1 - j;
          const double diag = at(i, j) + ((p ^ q) ? -at(ir, jr) : at(ir, jr));
          const double off = (p ? -at(ir, j) : at(ir, j)) + (q ? -at(i, jr) : at(i, jr));
          folded[static_cast<std::size_t>(i) * hy + j] = diag + off;
        }
      }

      // Row-first order: T_n[i] = sum_j c_n(y_j) F[i][j], then sum_i c_m(x_i) T_n[i].
      for (int n = q; n < modes.ky(); n += 2)
      {
        const double* cn = &cyt[static_cast<std::size_t>(n) * hy];
        for (int i = 0; i < hx; ++i)
        {
          const double* row = &folded[static_cast<std::size_t>(i) * hy];
          double s = 0.0;
          for (int j = 0; j < hy; ++j)
          {
            s += cn[j] * row[j];
          }
          partial[i] = s;
        }
        for (int m = p; m < modes.kx(); m += 2)
        {
          const double* cm = &cxt[static_cast<std::size_t>(m) * hx];
          double s = 0.0;
          for (int i = 0; i < hx; ++i)
          {
            s += cm[i] * partial[i];
          }
          by_rows[modes.index(m, n)] = s;
        }
      }
      // Column-first order, the transpose of the above.
      for (int m = p; m < modes.kx(); m += 2)
      {
        const double* cm = &cxt[static_cast<std::size_t>(m) * hx];
        std::fill(partial_t.begin(), partial_t.end(), 0.0);
        for (int i = 0; i < hx; ++i)
        {
          const double* row = &folded[static_cast<std::size_t>(i) * hy];
          for (int j = 0; j < hy; ++j)
          {
            partial_t[j] += cm[i] * row[j];
          }
        }
        for (int n = q; n < modes.ky(); n += 2)
        {
          const double* cn = &cyt[static_cast<std::size_t>(n) * hy];
          double s = 0.0;
          for (int j = 0; j < hy; ++j)
          {
            s += cn[j] * partial_t[j];
          }
          const std::size_t k = modes.index(m, n);
          mu[k] = 0.5 * (by_rows[k] + s) * cell;
        }
      }
    }
  }
  return mu;
}

void check_aligned(const SpectralCoefficients& c, const ModeSet& modes, const char* what)
{
  if (c.size() != modes.size())
  {
    throw AlignmentError(std::string(what) + " has " + std::to_string(c.size()) +
                         " entries, mode set has " + std::to_string(modes.size()));
  }
}

double ergodicity_metric(const SpectralCoefficients& c, const SpectralCoefficients& mu,
                         const ModeSet& modes)
{
  check_aligned(c, modes, "empirical coefficients");
  check_aligned(mu, modes, "target coefficients");
  double sum = 0.0;
  for (std::size_t k = 0; k < modes.size(); ++k)
  {
    const double d = c[k] - mu[k];
    sum += modes.lambda(k) * d * d;
  }
  return sum;
}

}  // namespace smc
