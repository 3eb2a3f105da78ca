#include "copulabounds/scenarios.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace cbounds;

namespace {

ScenarioConfig small(ScenarioKind kind) {
  ScenarioConfig cfg;
  cfg.scenario = kind;
  cfg.panels = 401;
  cfg.functional_panels = 401;
  cfg.grid = 20;
  cfg.threads = 1;
  return cfg;
}

}  // namespace

TEST(Config, ParsesKeyValueLines) {
  ScenarioConfig cfg;
  std::istringstream in(
      "# comment\n"
      "scenario = single-price\n"
      "rho=-0.7   # trailing comment\n"
      "\n"
      "strike-steps=10\n"
      "constraint-maturities = 1, 2.5\n");
  load_config(cfg, in);
  ASSERT_TRUE(cfg.scenario);
  EXPECT_EQ(*cfg.scenario, ScenarioKind::single_price);
  EXPECT_EQ(cfg.rho, -0.7);
  EXPECT_EQ(cfg.constraint_maturities, (std::vector<double>{1.0, 2.5}));
  const auto g = cfg.sweep();
  EXPECT_EQ(g.min, 50.0);
  EXPECT_EQ(g.max, 150.0);
  EXPECT_EQ(g.steps, 10);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, RejectsBadInput) {
  ScenarioConfig cfg;
  EXPECT_THROW(apply_setting(cfg, "nonsense", "1"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "rho", "abc"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "panels", "2.5"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "scenario", "fig-9"), ConfigError);
  std::istringstream missing_eq("rho 0.3\n");
  EXPECT_THROW(load_config(cfg, missing_eq), ConfigError);
  EXPECT_THROW(load_config_file(cfg, "/nonexistent/path.cfg"), ConfigError);
  EXPECT_THROW(cfg.validate(), ConfigError);  // no scenario
  cfg.scenario = ScenarioKind::max_known;
  cfg.rho = 1.5;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.rho = 0.0;
  cfg.constraint_strikes = 1;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Config, DefaultSweeps) {
  ScenarioConfig cfg;
  cfg.scenario = ScenarioKind::second_to_default;
  EXPECT_EQ(cfg.sweep().values().size(), 101u);
  EXPECT_EQ(cfg.sweep().values()[20], 2.0);
  cfg.scenario = ScenarioKind::max_known;
  EXPECT_EQ(cfg.sweep().min, -50.0);
  cfg.scenario = ScenarioKind::log_correlation;
  EXPECT_EQ(cfg.sweep().values().back(), 1.0);
}

TEST(SecondToDefault, CollapsesAtConstraintMaturities) {
  auto cfg = small(ScenarioKind::second_to_default);
  cfg.rho = -0.7;
  const auto rows = run_scenario(cfg);
  ASSERT_EQ(rows.size(), 101u);
  EXPECT_EQ(rows.front().frechet_upper, 0.0);
  EXPECT_EQ(rows.front().improved_lower, 0.0);
  for (const auto& r : rows) {
    EXPECT_TRUE(ordered(r, 1e-9)) << r.axis;
    if (r.axis == 2.0 || r.axis == 3.0) {
      EXPECT_NEAR(r.improved_lower, r.reference, 1e-9);
      EXPECT_NEAR(r.improved_upper, r.reference, 1e-9);
    }
  }
  EXPECT_TRUE(validate_scenario(cfg, rows).passed);
}

TEST(MaxKnown, OrderedAndDeterministic) {
  auto cfg = small(ScenarioKind::max_known);
  cfg.strikes.steps = 8;
  const auto rows = run_scenario(cfg);
  for (const auto& r : rows) EXPECT_TRUE(ordered(r, 1e-6)) << r.axis;
  std::ostringstream first, second;
  write_csv(first, rows);
  cfg.threads = 3;
  write_csv(second, run_scenario(cfg));
  EXPECT_EQ(first.str(), second.str());
  EXPECT_EQ(first.str().substr(0, first.str().find('\n')), kCsvHeader);
}

TEST(MaxKnown, FarStrikesAreWorthless) {
  auto cfg = small(ScenarioKind::max_known);
  cfg.strikes.min = 900.0;
  cfg.strikes.max = 1000.0;
  cfg.strikes.steps = 1;
  for (const auto& r : run_scenario(cfg)) {
    EXPECT_LT(r.frechet_upper, 1e-6);
    EXPECT_GE(r.frechet_lower, -1e-9);
  }
}

TEST(SinglePrice, ReferenceInsideImprovedInterval) {
  auto cfg = small(ScenarioKind::single_price);
  cfg.rho = -0.7;
  cfg.strikes.steps = 4;
  const auto rows = run_scenario(cfg);
  for (const auto& r : rows) {
    EXPECT_TRUE(ordered(r, 1e-6)) << r.axis;
    EXPECT_LE(r.improved_upper - r.improved_lower, r.frechet_upper - r.frechet_lower + 1e-6);
  }
}

TEST(LogCorrelation, CollapsesAtExtremeCorrelations) {
  auto cfg = small(ScenarioKind::log_correlation);
  cfg.correlations.steps = 2;
  const auto rows = run_scenario(cfg);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) EXPECT_TRUE(r.feasible) << r.axis;
  // rho0 = -1 pins the countermonotone price, rho0 = +1 the comonotone one.
  EXPECT_NEAR(rows[0].improved_lower, rows[0].improved_upper, 1e-4 * rows[0].frechet_upper);
  EXPECT_NEAR(rows[2].improved_lower, rows[2].improved_upper, 1e-4 * rows[0].frechet_upper);
  EXPECT_LT(rows[1].improved_lower, rows[1].reference);
  EXPECT_GT(rows[1].improved_upper, rows[1].reference);
}
