#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cbounds {

/// Bad or inconsistent scenario configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ScenarioKind { second_to_default, max_known, single_price, log_correlation };

ScenarioKind parse_scenario(const std::string& name);
const char* to_string(ScenarioKind k);

/// Points min + i * (max - min) / steps for i = 0..steps.
struct SweepGrid {
  double min = 0.0;
  double max = 0.0;
  int steps = 0;

  std::vector<double> values() const;
};

/// Sweep settings given by the user; unset fields take the scenario default.
struct SweepOverride {
  std::optional<double> min;
  std::optional<double> max;
  std::optional<int> steps;

  SweepGrid over(SweepGrid fallback) const {
    return {min.value_or(fallback.min), max.value_or(fallback.max), steps.value_or(fallback.steps)};
  }
};

struct ScenarioConfig {
  std::optional<ScenarioKind> scenario;
  double rho = 0.0;  ///< correlation of the Gaussian reference model

  double lambda_x = 0.2;  ///< default intensities (second-to-default)
  double lambda_y = 0.3;
  double sigma_x = 0.2;  ///< lognormal marginals (other scenarios)
  double sigma_y = 0.3;
  double spot = 100.0;
  double maturity = 1.0;

  std::vector<double> constraint_maturities{2.0, 3.0};
  int constraint_strikes = 400;

  SweepOverride maturities;    ///< default 0..10, 100 steps
  SweepOverride strikes;       ///< default -50..50 (max-known), 50..150 (single-price)
  SweepOverride correlations;  ///< default -1..1, 20 steps

  int panels = 2001;            ///< quadrature panels for closed-form surfaces
  int functional_panels = 2001; ///< panels when pricing level-constrained surfaces
  int grid = 101;               ///< validation grid for bound surfaces
  double tol = 1e-10;           ///< inversion tolerance in theta
  int threads = 0;              ///< 0: hardware concurrency
  std::string out;

  /// Sweep grid in effect for the configured scenario.
  SweepGrid sweep() const;

  /// Throws ConfigError on any violated invariant.
  void validate() const;
};

/// Applies one key=value setting; keys match the long command-line flags.
void apply_setting(ScenarioConfig& cfg, const std::string& key, const std::string& value);

/// Flat key=value lines; '#' starts a comment.
void load_config(ScenarioConfig& cfg, std::istream& in);
void load_config_file(ScenarioConfig& cfg, const std::string& path);

struct CurveRow {
  double axis;
  double frechet_lower;
  double improved_lower;
  double reference;
  double improved_upper;
  double frechet_upper;
  bool feasible = true;  ///< false when the constraint level was unattainable
};

/// frechet_lower <= improved_lower <= reference <= improved_upper <= frechet_upper within tol.
bool ordered(const CurveRow& row, double tol);

std::vector<CurveRow> run_second_to_default(const ScenarioConfig& cfg);
std::vector<CurveRow> run_max_known(const ScenarioConfig& cfg);
std::vector<CurveRow> run_single_price(const ScenarioConfig& cfg);
std::vector<CurveRow> run_log_correlation(const ScenarioConfig& cfg);
std::vector<CurveRow> run_scenario(const ScenarioConfig& cfg);

inline constexpr const char* kCsvHeader =
    "axis,frechet_lower,improved_lower,reference,improved_upper,frechet_upper";

void write_csv(std::ostream& os, const std::vector<CurveRow>& rows);

struct ValidationSummary {
  bool passed = true;
  std::vector<std::string> messages;
};

/// Row ordering, collapse at constraint points and quasi-copula checks of the
/// bound surfaces used by the scenario.
ValidationSummary validate_scenario(const ScenarioConfig& cfg, const std::vector<CurveRow>& rows);

}  // namespace cbounds
