#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "smc/density.hpp"

using namespace smc;

namespace
{
const RectDomain square(2000.0, 2000.0);

/// Untruncated mixture density, coded directly from the Gaussian formula.
double raw_mixture(const std::vector<GaussianComponent>& comps, const Vec2& p)
{
  double v = 0.0;
  for (const auto& c : comps)
  {
    const double r2 = (p - c.mean).squaredNorm();
    v += c.weight * std::exp(-r2 / (2 * c.sigma * c.sigma)) /
         (2 * std::numbers::pi * c.sigma * c.sigma);
  }
  return v;
}

}  // namespace

TEST(GaussianMixture, Validation)
{
  EXPECT_THROW(GaussianMixture(square, {}), ParameterError);
  EXPECT_THROW(GaussianMixture(square, {{1.0, {10.0, 10.0}, 0.0}}), ParameterError);
  EXPECT_THROW(GaussianMixture(square, {{1.0, {-10.0, 10.0}, 5.0}}), ParameterError);
  EXPECT_THROW(GaussianMixture(square, {{0.5, {10.0, 10.0}, 5.0}}), ParameterError);
  EXPECT_THROW(GaussianMixture(square, {{1.5, {10.0, 10.0}, 5.0}, {-0.5, {20.0, 10.0}, 5.0}}),
               ParameterError);
  EXPECT_THROW(make_quadrimodal(square, 0.0), ParameterError);
  EXPECT_THROW(make_quadrimodal(square, -3.0), ParameterError);
}

TEST(GaussianMixture, QuadrimodalLayout)
{
  const GaussianMixture rho = make_quadrimodal(square, 100.0);
  ASSERT_EQ(rho.components().size(), 4u);
  std::vector<Vec2> means;
  for (const auto& c : rho.components())
  {
    EXPECT_EQ(c.weight, 0.25);
    EXPECT_EQ(c.sigma, 100.0);
    means.push_back(c.mean);
  }
  for (const Vec2& expected : {Vec2(500, 500), Vec2(500, 1500), Vec2(1500, 500), Vec2(1500, 1500)})
  {
    EXPECT_NE(std::find(means.begin(), means.end(), expected), means.end());
  }

  const GaussianMixture scaled = make_quadrimodal(RectDomain(400.0, 800.0), 20.0);
  EXPECT_EQ(scaled.components()[3].mean, Vec2(300.0, 600.0));
}

TEST(GaussianMixture, MatchesFormulaUpToNormalization)
{
  const GaussianMixture rho = make_quadrimodal(square, 150.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-200.0, 2200.0);
  for (int i = 0; i < 500; ++i)
  {
    const Vec2 p(u(rng), u(rng));
    const double expected = raw_mixture(rho.components(), p) / rho.normalization();
    EXPECT_NEAR(rho.eval(p), expected, 1e-14 * std::max(expected, 1e-300) + 1e-300);
    EXPECT_GE(rho.eval(p), 0.0);
  }
}

TEST(GaussianMixture, IntegratesToOneOverDomain)
{
  // Gaussians near the edges lose mass outside the domain; the normalization
  // puts it back.
  const std::vector<GaussianComponent> comps = {{0.7, {50.0, 80.0}, 120.0},
                                                {0.3, {1900.0, 1000.0}, 300.0}};
  const GaussianMixture rho(square, comps);
  EXPECT_LT(rho.normalization(), 0.9);

  // Exact mass of each truncated component from the error function.
  const auto box = [](double mean, double sigma, double length) {
    return 0.5 * (std::erf((length - mean) / (sigma * std::numbers::sqrt2)) -
                  std::erf(-mean / (sigma * std::numbers::sqrt2)));
  };
  double exact = 0.0;
  for (const auto& c : comps)
  {
    exact += c.weight * box(c.mean.x(), c.sigma, 2000.0) * box(c.mean.y(), c.sigma, 2000.0);
  }
  // The integral of the normalized density is exact / normalization. A mode
  // 50 units from an edge leaves an O(h^2) midpoint error of a few 1e-6.
  EXPECT_NEAR(exact / rho.normalization(), 1.0, 1e-5);

  const GaussianMixture centred = make_quadrimodal(square, 100.0);
  double centred_exact = 0.0;
  for (const auto& c : centred.components())
  {
    centred_exact += c.weight * box(c.mean.x(), c.sigma, 2000.0) * box(c.mean.y(), c.sigma, 2000.0);
  }
  EXPECT_NEAR(centred_exact / centred.normalization(), 1.0, 1e-9);
}

TEST(GaussianMixture, EvalGridMatchesPointwise)
{
  const GaussianMixture rho = make_quadrimodal(square, 100.0);
  const QuadratureGrid grid{32, 16};
  const std::vector<double> values = rho.eval_grid(grid);
  ASSERT_EQ(values.size(), 32u * 16u);
  for (int i = 0; i < grid.nx; ++i)
  {
    for (int j = 0; j < grid.ny; ++j)
    {
      const Vec2 p((i + 0.5) * 2000.0 / grid.nx, (j + 0.5) * 2000.0 / grid.ny);
      EXPECT_NEAR(values[i * grid.ny + j], rho.eval(p), 1e-15 + 1e-13 * rho.eval(p));
    }
  }
}

TEST(GaussianMixture, MirrorSymmetryIsExact)
{
  // Dyadic points keep the mirrored coordinates exact, so the symmetric
  // mixture must return identical bits at all images of a point.
  const GaussianMixture rho = make_quadrimodal(square, 100.0);
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> u(0, 2000 * 64);
  for (int i = 0; i < 2000; ++i)
  {
    const double x = u(rng) / 64.0;
    const double y = u(rng) / 64.0;
    const double v = rho.eval({x, y});
    EXPECT_EQ(v, rho.eval({2000.0 - x, y}));
    EXPECT_EQ(v, rho.eval({x, 2000.0 - y}));
    EXPECT_EQ(v, rho.eval({y, x}));
  }
}

TEST(GaussianMixture, DensityEvalWrapper)
{
  const GaussianMixture rho = make_quadrimodal(square, 100.0);
  EXPECT_EQ(density_eval(rho, {500.0, 500.0}), rho.eval({500.0, 500.0}));
  EXPECT_GT(density_eval(rho, {500.0, 500.0}), density_eval(rho, {1000.0, 1000.0}));
}
