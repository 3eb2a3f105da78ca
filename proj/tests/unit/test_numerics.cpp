#include "copulabounds/numerics.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

using namespace cbounds;

TEST(NormalDistribution, QuantileInvertsCdf) {
  for (double p : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.77, 0.999, 1.0 - 1e-9}) {
    EXPECT_NEAR(norm_cdf(norm_quantile(p)), p, 1e-14 + 1e-12 * p) << p;
  }
  EXPECT_NEAR(norm_cdf(0.1), 0.539827837277029, 1e-14);
}

TEST(BivariateNormal, MatchesSingleIntegral) {
  const std::array<double, 7> rhos = {-0.95, -0.7, -0.3, 0.0, 0.4, 0.8, 0.99};
  const std::array<std::array<double, 2>, 5> points = {{{0.0, 0.0}, {-1.2, 0.7}, {2.1, -0.4},
                                                        {-2.5, -2.0}, {1.5, 1.9}}};
  for (double rho : rhos) {
    for (const auto& p : points) {
      EXPECT_NEAR(bivariate_normal_cdf(p[0], p[1], rho), oracle::bvn(p[0], p[1], rho), 1e-8)
          << "rho=" << rho << " h=" << p[0] << " k=" << p[1];
    }
  }
}

TEST(BivariateNormal, ExtremeCorrelations) {
  EXPECT_DOUBLE_EQ(bivariate_normal_cdf(0.3, -0.2, 1.0), norm_cdf(-0.2));
  EXPECT_DOUBLE_EQ(bivariate_normal_cdf(0.3, -0.2, -1.0), std::max(0.0, norm_cdf(0.3) - norm_cdf(0.2)));
  EXPECT_NEAR(bivariate_normal_cdf(0.0, 0.0, 0.5), 1.0 / 3.0, 1e-14);
}

TEST(Quadrature, EndpointSingularities) {
  QuadratureOptions opt;
  opt.panels = 50;
  EXPECT_NEAR(integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, {}, opt), 2.0 / 3.0, 1e-11);
  EXPECT_NEAR(integrate([](double x) { return -std::log(x); }, 0.0, 1.0, {}, opt), 1.0, 1e-9);
  EXPECT_NEAR(integrate([](double x) { return -std::log1p(-x); }, 0.0, 1.0, {}, opt), 1.0, 1e-9);
}

TEST(Quadrature, KinksAtBreakpointsAreExact) {
  QuadratureOptions opt;
  opt.panels = 7;
  const std::array<double, 2> breaks = {0.37, 0.81};
  auto f = [](double x) { return std::abs(x - 0.37) + std::max(0.0, x - 0.81); };
  const double exact = (0.37 * 0.37 + 0.63 * 0.63) / 2.0 + 0.19 * 0.19 / 2.0;
  EXPECT_NEAR(integrate(f, 0.0, 1.0, breaks, opt), exact, 1e-15);
}

TEST(Quadrature, RejectsNonFiniteIntegrand) {
  EXPECT_THROW(integrate([](double x) { return x > 0.5 ? std::numeric_limits<double>::quiet_NaN() : x; },
                         0.0, 1.0, {}, {}),
               QuadratureError);
  QuadratureOptions bad;
  bad.panels = 0;
  EXPECT_THROW(integrate([](double x) { return x; }, 0.0, 1.0, {}, bad), QuadratureError);
}

TEST(Quadrature, SameLatticeSameNodes) {
  std::vector<double> first, second;
  QuadratureOptions opt;
  opt.grading_levels = 0;
  integrate_on_lattice([&](double x) { first.push_back(x); return x; }, 0.0, 1.0, 0.0, 0.1, {}, opt,
                       false, false);
  integrate_on_lattice([&](double x) { second.push_back(x); return x; }, 0.0, 1.0, 0.0, 0.1, {}, opt,
                       false, false);
  EXPECT_EQ(first, second);
}

TEST(SignChanges, FindsEveryCrossing) {
  std::vector<double> roots;
  append_sign_changes([](double x) { return std::cos(x); }, 0.0, 10.0, 64, roots);
  ASSERT_EQ(roots.size(), 3u);
  EXPECT_NEAR(roots[0], std::numbers::pi / 2, 1e-12);
  EXPECT_NEAR(roots[2], 5 * std::numbers::pi / 2, 1e-12);
}

TEST(MonotoneRoot, FlatStretchReturnsExtremeRoot) {
  // Zero on [0.3, 0.6]: the rightmost root is 0.6, the leftmost 0.3.
  auto g = [](double t) { return t < 0.3 ? t - 0.3 : (t > 0.6 ? t - 0.6 : 0.0); };
  EXPECT_NEAR(monotone_root(g, 0.0, 1.0, 1e-12, RootSide::rightmost), 0.6, 1e-11);
  EXPECT_NEAR(monotone_root(g, 0.0, 1.0, 1e-12, RootSide::leftmost), 0.3, 1e-11);
  EXPECT_NEAR(monotone_root_bisect(g, 0.0, 1.0, 1e-12, RootSide::rightmost), 0.6, 1e-11);
  EXPECT_NEAR(monotone_root_bisect(g, 0.0, 1.0, 1e-12, RootSide::leftmost), 0.3, 1e-11);
}

TEST(MonotoneRoot, BracketEdges) {
  auto neg = [](double) { return -1.0; };
  auto pos = [](double) { return 1.0; };
  EXPECT_EQ(monotone_root(neg, 0.0, 1.0, 1e-12, RootSide::rightmost), 1.0);
  EXPECT_EQ(monotone_root(pos, 0.0, 1.0, 1e-12, RootSide::leftmost), 0.0);
}

TEST(MonotoneRoot, AgreesWithBisectionOnRandomPlateaus) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    double p = unif(gen), q = unif(gen);
    if (p > q) std::swap(p, q);
    const double scale = 0.01 + 10.0 * unif(gen);
    const double level = unif(gen) < 0.3 ? 0.0 : 0.2 * (unif(gen) - 0.5);
    // Nondecreasing, flat at `level` on [p, q], kinked and curved elsewhere.
    auto g = [&](double t) {
      if (t < p) return level - scale * (p - t) * (1.0 + (p - t));
      if (t > q) return level + scale * std::sqrt(t - q);
      return level;
    };
    for (RootSide side : {RootSide::rightmost, RootSide::leftmost}) {
      const double a = monotone_root(g, 0.0, 1.0, 1e-12, side);
      const double b = monotone_root_bisect(g, 0.0, 1.0, 1e-12, side);
      EXPECT_NEAR(a, b, 1e-10) << "trial " << trial;
    }
  }
}
