#include "copulabounds/copula.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

using namespace cbounds;

namespace {

double max_grid_gap(const CopulaSurface& a, const CopulaSurface& b, int n) {
  double worst = 0.0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double u = static_cast<double>(i) / n, v = static_cast<double>(j) / n;
      worst = std::max(worst, std::abs(a(u, v) - b(u, v)));
    }
  }
  return worst;
}

}  // namespace

TEST(FrechetBounds, ClosedForms) {
  EXPECT_EQ(frechet_lower(0.3, 0.4), 0.0);
  EXPECT_EQ(frechet_upper(0.3, 0.4), 0.3);
  EXPECT_DOUBLE_EQ(frechet_lower(0.7, 1.0), 0.7);
  EXPECT_THROW(lower_frechet()(1.2, 0.5), std::domain_error);
}

TEST(Volume, KnownRectangles) {
  EXPECT_NEAR(volume(upper_frechet(), Rectangle::make(1.0 / 3, 2.0 / 3, 1.0 / 3, 2.0 / 3)), 1.0 / 3, 1e-15);
  for (const auto& c : {lower_frechet(), upper_frechet(), independence(), gaussian_copula(0.3)}) {
    EXPECT_NEAR(volume(c, Rectangle::make(0, 1, 0, 1)), 1.0, 1e-15);
  }
  EXPECT_THROW(Rectangle::make(0.5, 0.4, 0.0, 1.0), std::invalid_argument);
}

TEST(OnePointBounds, ExtremeThetaGivesFrechetBounds) {
  EXPECT_EQ(max_grid_gap(one_point_upper(0.5, 0.5, 0.5), upper_frechet(), 100), 0.0);
  EXPECT_EQ(max_grid_gap(one_point_lower(0.5, 0.5, 0.0), lower_frechet(), 100), 0.0);
}

TEST(OnePointBounds, MatchTheConstraint) {
  EXPECT_DOUBLE_EQ(one_point_upper(0.5, 0.5, 0.25)(0.5, 0.5), 0.25);
  EXPECT_DOUBLE_EQ(one_point_lower(0.5, 0.5, 0.25)(0.5, 0.5), 0.25);
  EXPECT_THROW(one_point_upper(0.5, 0.5, 0.6), std::invalid_argument);
  EXPECT_THROW(one_point_lower(0.2, 0.3, -0.01), std::invalid_argument);
}

TEST(OnePointBounds, RandomPointsAreOrderedCopulas) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = unif(gen), b = unif(gen);
    const double theta = frechet_lower(a, b) + unif(gen) * (frechet_upper(a, b) - frechet_lower(a, b));
    const auto up = one_point_upper(a, b, theta), lo = one_point_lower(a, b, theta);
    EXPECT_TRUE(up.is_copula());
    EXPECT_TRUE(validate_copula(up, 100).passed);
    EXPECT_TRUE(validate_copula(lo, 100).passed);
    for (int i = 0; i <= 50; ++i) {
      for (int j = 0; j <= 50; ++j) EXPECT_LE(lo(i / 50.0, j / 50.0), up(i / 50.0, j / 50.0) + 1e-15);
    }
  }
}

TEST(BarTransform, ClosedForms) {
  EXPECT_NEAR(bar_transform(upper_frechet())(0.7, 0.6), 0.3, 1e-15);
  EXPECT_NEAR(bar_transform(lower_frechet())(0.2, 0.9), 0.2, 1e-15);
  EXPECT_TRUE(bar_transform(independence()).is_copula());
}

TEST(BarTransform, Involution) {
  const auto g = gaussian_copula(0.5);
  EXPECT_LE(max_grid_gap(bar_transform(bar_transform(g)), g, 100), 1e-12);
}

TEST(Survival, ClosedForms) {
  EXPECT_NEAR(survival_value(upper_frechet(), 0.4, 0.4), 0.4, 1e-15);
  EXPECT_NEAR(survival_value(independence(), 0.5, 0.5), 0.25, 1e-15);
  EXPECT_NEAR(survival_value(lower_frechet(), 0.3, 0.5), 0.0, 1e-15);
}

TEST(Gaussian, SpecialValues) {
  EXPECT_NEAR(gaussian_copula(0.0)(0.3, 0.7), 0.21, 1e-15);
  EXPECT_EQ(gaussian_copula(1.0)(0.4, 0.5), 0.4);
  EXPECT_EQ(gaussian_copula(-1.0)(0.4, 0.5), 0.0);
  EXPECT_NEAR(gaussian_copula(0.5)(0.5, 0.5), 1.0 / 3.0, 1e-14);
  EXPECT_THROW(gaussian_copula(1.01), std::invalid_argument);
}

TEST(Gaussian, MatchesSingleIntegralOracle) {
  for (double rho : {-0.8, -0.2, 0.6}) {
    const auto c = gaussian_copula(rho);
    for (double u : {0.05, 0.4, 0.9}) {
      for (double v : {0.1, 0.5, 0.97}) {
        EXPECT_NEAR(c(u, v), oracle::gaussian_copula(u, v, rho), 1e-8) << rho << ' ' << u << ' ' << v;
      }
    }
  }
}

TEST(Gaussian, ConcordanceOrderedInRho) {
  const std::vector<double> rhos = {-0.9, -0.5, 0.0, 0.5, 0.9};
  for (std::size_t k = 0; k + 1 < rhos.size(); ++k) {
    const auto lo = gaussian_copula(rhos[k]), hi = gaussian_copula(rhos[k + 1]);
    for (int i = 0; i <= 40; ++i) {
      for (int j = 0; j <= 40; ++j) EXPECT_LE(lo(i / 40.0, j / 40.0), hi(i / 40.0, j / 40.0) + 1e-14);
    }
  }
}

TEST(Validation, KnownCopulasPass) {
  for (const auto& c : {upper_frechet(), lower_frechet(), independence(), gaussian_copula(-0.7)}) {
    EXPECT_TRUE(validate_quasi_copula(c, 100).passed) << c.label();
    EXPECT_TRUE(validate_copula(c, 100).passed) << c.label();
  }
}

TEST(Validation, ReportsNegativeVolume) {
  // A^{S,Q} for S = {(1/3,1/3,0), (2/3,2/3,1/3)} written out by hand.
  const CopulaSurface a(
      [](double u, double v) {
        const double p = std::max(u - 1.0 / 3, 0.0) + std::max(v - 1.0 / 3, 0.0);
        const double q = 1.0 / 3 + std::max(u - 2.0 / 3, 0.0) + std::max(v - 2.0 / 3, 0.0);
        return std::min({u, v, p, q});
      },
      Provenance::unverified);
  EXPECT_TRUE(validate_quasi_copula(a, 3).passed);
  const auto rep = validate_copula(a, 3);
  EXPECT_FALSE(rep.passed);
  EXPECT_EQ(rep.worst_check, "volume");
  EXPECT_NEAR(rep.min_cell_volume, -1.0 / 3, 1e-15);
  EXPECT_NEAR(rep.cell_u, 1.0 / 3, 1e-15);
  EXPECT_NEAR(rep.cell_v, 1.0 / 3, 1e-15);
}

TEST(Validation, ReportsBoundaryAndLipschitzFailures) {
  const CopulaSurface shifted([](double u, double v) { return std::min(u, v) + 0.01; }, Provenance::unverified);
  EXPECT_EQ(validate_quasi_copula(shifted, 10).worst_check, "boundary");
  // Correct margins, but dC/du = v + 0.8 cos(pi u) sin(pi v) exceeds 1 near u = 0.
  const CopulaSurface steep(
      [](double u, double v) {
        return u * v + 0.8 * std::sin(std::numbers::pi * u) * std::sin(std::numbers::pi * v) / std::numbers::pi;
      },
      Provenance::unverified);
  EXPECT_FALSE(validate_quasi_copula(steep, 20).passed);
}

TEST(Memoize, SameValuesUnderConcurrency) {
  const auto g = gaussian_copula(0.3);
  const auto m = memoize(g);
  std::vector<std::thread> workers;
  std::vector<double> worst(4, 0.0);
  for (int t = 0; t < 4; ++t) {
    workers.emplace_back([&, t] {
      for (int i = 0; i <= 60; ++i) {
        for (int j = 0; j <= 60; ++j) {
          worst[t] = std::max(worst[t], std::abs(m(i / 60.0, j / 60.0) - g(i / 60.0, j / 60.0)));
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  for (double w : worst) EXPECT_EQ(w, 0.0);
}
