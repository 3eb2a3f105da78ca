#include "copulabounds/constrained_bounds.hpp"
#include "copulabounds/functional_bounds.hpp"
#include "copulabounds/pricing.hpp"

#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

using namespace cbounds;

namespace {

const Marginal kX = Marginal::lognormal(0.2, 100.0, 1.0);
const Marginal kY = Marginal::lognormal(0.3, 100.0, 1.0);

void BM_BivariateNormal(benchmark::State& state) {
  double h = -1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bivariate_normal_cdf(h, 0.3, -0.7));
    h = h > 1.0 ? -1.0 : h + 1e-3;
  }
}
BENCHMARK(BM_BivariateNormal);

void BM_ConstrainedUpperBound(benchmark::State& state) {
  std::vector<PointConstraint> pts;
  const auto n = static_cast<int>(state.range(0));
  const auto g = gaussian_copula(-0.7);
  for (int i = 1; i <= n; ++i) {
    const double a = static_cast<double>(i) / (n + 1);
    pts.push_back({a, a, g(a, a)});
  }
  const auto a = upper_bound(ConstraintSet(pts));
  double u = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(a(u, 0.5));
    u = u > 0.999 ? 0.0 : u + 1e-3;
  }
}
BENCHMARK(BM_ConstrainedUpperBound)->Arg(2)->Arg(400);

void BM_PriceSpread(benchmark::State& state) {
  PricingOptions opt;
  opt.path_panels = static_cast<int>(state.range(0));
  opt.quadrature.panels = opt.path_panels;
  const auto f = PayoffSpec::spread(0.0);
  const auto g = gaussian_copula(-0.7);
  for (auto _ : state) benchmark::DoNotOptimize(price(f, g, kX, kY, opt));
}
BENCHMARK(BM_PriceSpread)->Arg(401)->Arg(2001)->Unit(benchmark::kMillisecond);

void BM_PriceCallOnMaxUnderM(benchmark::State& state) {
  const auto f = PayoffSpec::call_on_max(100.0);
  const auto m = upper_frechet();
  for (auto _ : state) benchmark::DoNotOptimize(price(f, m, kX, kY));
}
BENCHMARK(BM_PriceCallOnMaxUnderM)->Unit(benchmark::kMillisecond);

void BM_RhoPlus(benchmark::State& state) {
  const ExpectationFunctional f(PayoffSpec::spread(0.0), kX, kY);
  double theta = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.rho_plus(0.4, 0.6, theta));
    theta = theta > 0.35 ? 0.05 : theta + 1e-3;
  }
}
BENCHMARK(BM_RhoPlus)->Unit(benchmark::kMicrosecond);

void BM_LevelBoundPoint(benchmark::State& state) {
  const auto f = std::make_shared<const ExpectationFunctional>(PayoffSpec::spread(0.0), kX, kY);
  const double r = f->value(gaussian_copula(-0.7));
  double u = 0.1;
  for (auto _ : state) {
    // Fresh surfaces each round, so the memo never answers.
    const auto b = bound_surfaces_for_level(f, r);
    benchmark::DoNotOptimize(b.upper(u, 0.5));
    u = u > 0.9 ? 0.1 : u + 1e-3;
  }
}
BENCHMARK(BM_LevelBoundPoint)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
