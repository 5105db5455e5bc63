#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "smc/density.hpp"
#include "smc/spectral.hpp"

using namespace smc;

namespace
{
const RectDomain square(2000.0, 2000.0);

double rel_err(double a, double b)
{
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

TEST(RectDomain, RejectsNonPositiveSides)
{
  EXPECT_THROW(RectDomain(0.0, 1.0), ParameterError);
  EXPECT_THROW(RectDomain(1.0, -2.0), ParameterError);
  EXPECT_THROW(RectDomain(std::nan(""), 1.0), ParameterError);
  EXPECT_NO_THROW(RectDomain(1.0, 3.0));
}

TEST(RectDomain, ContainsIsClosed)
{
  EXPECT_TRUE(square.contains({0.0, 0.0}));
  EXPECT_TRUE(square.contains({2000.0, 2000.0}));
  EXPECT_FALSE(square.contains({-1e-12, 5.0}));
  EXPECT_FALSE(square.contains({5.0, 2000.000001}));
}

TEST(ModeSet, RowMajorOrdering)
{
  const ModeSet modes(3, 4);
  ASSERT_EQ(modes.size(), 12u);
  EXPECT_EQ(modes.index(2, 1), 9u);
  EXPECT_EQ(modes.mode(9), (ModeIndex{2, 1}));
  for (std::size_t k = 0; k < modes.size(); ++k)
  {
    const ModeIndex mi = modes.mode(k);
    EXPECT_EQ(modes.index(mi.m, mi.n), k);
    EXPECT_EQ(modes.lambda(k), lambda_weight(mi));
  }
  EXPECT_THROW(ModeSet(0, 3), ParameterError);
}

TEST(BasisEval, Examples)
{
  EXPECT_EQ(basis_eval({0, 0}, {123.0, 456.0}, square), 1.0);
  EXPECT_EQ(basis_eval({1, 0}, {0.0, 0.0}, square), 1.0);
  EXPECT_EQ(basis_eval({1, 0}, {2000.0, 7.0}, square), -1.0);
  EXPECT_EQ(basis_eval({1, 1}, {1000.0, 300.0}, square), 0.0);
  EXPECT_NEAR(basis_eval({2, 3}, {250.0, 500.0}, square),
              std::cos(2 * std::numbers::pi / 8) * std::cos(3 * std::numbers::pi / 4), 1e-15);
}

TEST(BasisEval, OutsideDomainThrows)
{
  EXPECT_THROW(basis_eval({1, 1}, {-1.0, 5.0}, square), DomainError);
  EXPECT_THROW(basis_grad({1, 1}, {5.0, 2001.0}, square), DomainError);
}

TEST(BasisEval, BoundedByOne)
{
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 2000.0);
  std::uniform_int_distribution<int> k(0, 40);
  for (int i = 0; i < 2000; ++i)
  {
    const double v = basis_eval({k(rng), k(rng)}, {u(rng), u(rng)}, square);
    EXPECT_LE(std::abs(v), 1.0);
  }
}

TEST(BasisGrad, VanishesOnAxesAndCorners)
{
  const RectDomain d(2000.0, 1500.0);
  for (int m = 0; m < 30; ++m)
  {
    for (int n = 0; n < 30; ++n)
    {
      EXPECT_EQ(basis_grad({m, n}, {0.0, 0.0}, d), Vec2::Zero());
      EXPECT_EQ(basis_grad({m, n}, {2000.0, 1500.0}, d), Vec2::Zero());
      EXPECT_EQ(basis_grad({m, n}, {0.0, 321.0}, d).x(), 0.0);
      EXPECT_EQ(basis_grad({m, n}, {2000.0, 321.0}, d).x(), 0.0);
      EXPECT_EQ(basis_grad({m, n}, {777.0, 0.0}, d).y(), 0.0);
      EXPECT_EQ(basis_grad({m, n}, {777.0, 1500.0}, d).y(), 0.0);
    }
  }
}

TEST(BasisGrad, MatchesFiniteDifferences)
{
  // Central differences of the analytic basis, independently coded.
  const RectDomain d(2000.0, 1300.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(1.0, 1999.0);
  std::uniform_real_distribution<double> uy(1.0, 1299.0);
  std::uniform_int_distribution<int> k(0, 24);
  const auto f = [&](int m, int n, double x, double y) {
    return std::cos(m * std::numbers::pi * x / d.lx()) * std::cos(n * std::numbers::pi * y / d.ly());
  };
  const double h = 1e-3;
  for (int i = 0; i < 1000; ++i)
  {
    const int m = k(rng);
    const int n = k(rng);
    const Vec2 p(ux(rng), uy(rng));
    const Vec2 g = basis_grad({m, n}, p, d);
    const double fdx = (f(m, n, p.x() + h, p.y()) - f(m, n, p.x() - h, p.y())) / (2 * h);
    const double fdy = (f(m, n, p.x(), p.y() + h) - f(m, n, p.x(), p.y() - h)) / (2 * h);
    const double scale = std::max({std::abs(fdx), std::abs(fdy), 1e-3 * (m + n + 1) / d.lx()});
    EXPECT_LT(std::abs(g.x() - fdx) / scale, 1e-5) << m << "," << n;
    EXPECT_LT(std::abs(g.y() - fdy) / scale, 1e-5) << m << "," << n;
  }
}

TEST(LambdaWeight, ValuesAndMonotonicity)
{
  EXPECT_EQ(lambda_weight({0, 0}), 1.0);
  EXPECT_NEAR(lambda_weight({1, 0}), std::pow(2.0, -1.5), 1e-16);
  EXPECT_NEAR(lambda_weight({2, 3}), std::pow(14.0, -1.5), 1e-16);
  for (int m = 0; m < 50; ++m)
  {
    for (int n = 0; n < 50; ++n)
    {
      const double l = lambda_weight({m, n});
      EXPECT_GT(l, 0.0);
      EXPECT_LE(lambda_weight({m + 1, n}), l);
      EXPECT_LE(lambda_weight({m, n + 1}), l);
      EXPECT_EQ(lambda_weight({n, m}), l);
    }
  }
}

TEST(SinCosPi, ExactAtQuarterTurns)
{
  for (int i = -40; i <= 40; ++i)
  {
    const SinCos a = sincospi(i);
    EXPECT_EQ(a.sin, 0.0);
    EXPECT_EQ(std::abs(a.cos), 1.0);
    const SinCos b = sincospi(i + 0.5);
    EXPECT_EQ(b.cos, 0.0);
    EXPECT_EQ(std::abs(b.sin), 1.0);
  }
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int i = 0; i < 1000; ++i)
  {
    const double t = u(rng);
    const SinCos s = sincospi(t);
    EXPECT_NEAR(s.sin, std::sin(std::numbers::pi * t), 1e-12);
    EXPECT_NEAR(s.cos, std::cos(std::numbers::pi * t), 1e-12);
  }
}

TEST(PointBasis, MatchesBasisEval)
{
  const ModeSet modes(7, 5);
  const Vec2 p(321.5, 1777.25);
  PointBasis b;
  b.fill(p, square, modes);
  for (std::size_t k = 0; k < modes.size(); ++k)
  {
    const ModeIndex mi = modes.mode(k);
    EXPECT_NEAR(b.cx[mi.m] * b.cy[mi.n], basis_eval(mi, p, square), 1e-15);
  }
}

TEST(TargetCoefficients, QuadrimodalSanity)
{
  const GaussianMixture rho = make_quadrimodal(square, 100.0);
  const ModeSet modes(25, 25);
  const SpectralCoefficients mu = target_coefficients(rho, modes, square, {512, 512});
  ASSERT_EQ(mu.size(), modes.size());
  EXPECT_NEAR(mu[0], 1.0, 1e-6);
  for (std::size_t k = 0; k < modes.size(); ++k)
  {
    const ModeIndex mi = modes.mode(k);
    if (mi.m % 2 == 1 || mi.n % 2 == 1)
    {
      EXPECT_NEAR(mu[k], 0.0, 1e-5) << mi.m << "," << mi.n;
    }
    EXPECT_LE(std::abs(mu[k]), 1.0 + 1e-9);
    EXPECT_EQ(mu[k], mu[modes.index(mi.n, mi.m)]);
  }
}

TEST(TargetCoefficients, SingleGaussianMatchesRefinedQuadrature)
{
  const GaussianMixture rho(square, {{1.0, {500.0, 500.0}, 100.0}});
  const ModeSet modes(2, 2);
  const double mu11 = target_coefficients(rho, modes, square, {512, 512})[modes.index(1, 1)];

  // Independent brute-force midpoint rule on a 2048^2 grid, normalized on the
  // same grid.
  const int n = 2048;
  const double h = 2000.0 / n;
  double mass = 0.0;
  double moment = 0.0;
  for (int i = 0; i < n; ++i)
  {
    const double x = (i + 0.5) * h;
    const double gx = std::exp(-0.5 * std::pow((x - 500.0) / 100.0, 2));
    const double cx = std::cos(std::numbers::pi * x / 2000.0);
    for (int j = 0; j < n; ++j)
    {
      const double y = (j + 0.5) * h;
      const double g = gx * std::exp(-0.5 * std::pow((y - 500.0) / 100.0, 2));
      mass += g;
      moment += g * cx * std::cos(std::numbers::pi * y / 2000.0);
    }
  }
  EXPECT_NEAR(mu11, moment / mass, 1e-5);

  // Closed form for the untruncated Gaussian: cos(a m) exp(-a^2 s^2 / 2) per axis.
  const double a = std::numbers::pi / 2000.0;
  const double axis = std::cos(a * 500.0) * std::exp(-0.5 * a * a * 100.0 * 100.0);
  EXPECT_NEAR(mu11, axis * axis, 1e-5);
}

TEST(TargetCoefficients, ResolutionGuard)
{
  const GaussianMixture rho = make_quadrimodal(square, 100.0);
  EXPECT_THROW(target_coefficients(rho, ModeSet(25, 25), square, {64, 64}), ResolutionError);
  EXPECT_THROW(target_coefficients(rho, ModeSet(3, 3), square, {63, 64}), ResolutionError);
  EXPECT_NO_THROW(target_coefficients(rho, ModeSet(25, 25), square, {96, 96}));
  EXPECT_THROW(target_coefficients(rho, ModeSet(3, 3), RectDomain(2000.0, 1000.0), {64, 64}),
               ConfigError);
}

TEST(TargetCoefficients, ConvergesUnderRefinement)
{
  const GaussianMixture rho = make_quadrimodal(square, 100.0);
  const ModeSet modes(9, 9);
  const auto coarse = target_coefficients(rho, modes, square, {256, 256});
  const auto fine = target_coefficients(rho, modes, square, {1024, 1024});
  for (std::size_t k = 0; k < modes.size(); ++k)
  {
    EXPECT_NEAR(coarse[k], fine[k], 1e-6);
  }
}

TEST(ErgodicityMetric, Examples)
{
  const ModeSet modes(3, 3);
  SpectralCoefficients mu{std::vector<double>(modes.size(), 0.25)};
  SpectralCoefficients c = mu;
  EXPECT_EQ(ergodicity_metric(c, mu, modes), 0.0);
  c[0] += 0.5;
  EXPECT_DOUBLE_EQ(ergodicity_metric(c, mu, modes), 0.25);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial)
  {
    for (std::size_t k = 0; k < modes.size(); ++k)
    {
      c[k] = u(rng);
    }
    double expected = 0.0;
    for (std::size_t k = 0; k < modes.size(); ++k)
    {
      expected += modes.lambda(k) * (c[k] - mu[k]) * (c[k] - mu[k]);
    }
    EXPECT_LT(rel_err(ergodicity_metric(c, mu, modes), expected), 1e-14);
    EXPECT_GT(ergodicity_metric(c, mu, modes), 0.0);
  }
}

TEST(ErgodicityMetric, AlignmentMismatchThrows)
{
  const ModeSet modes(3, 3);
  SpectralCoefficients mu{std::vector<double>(modes.size(), 0.0)};
  SpectralCoefficients c{std::vector<double>(modes.size() - 1, 0.0)};
  EXPECT_THROW(ergodicity_metric(c, mu, modes), AlignmentError);
}
