#include "copulabounds/scenarios.hpp"

#include "copulabounds/constrained_bounds.hpp"
#include "copulabounds/copula.hpp"
#include "copulabounds/functional_bounds.hpp"
#include "copulabounds/marginal.hpp"
#include "copulabounds/parallel.hpp"
#include "copulabounds/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace cbounds {

ScenarioKind parse_scenario(const std::string& name) {
  if (name == "second-to-default") return ScenarioKind::second_to_default;
  if (name == "max-known") return ScenarioKind::max_known;
  if (name == "single-price") return ScenarioKind::single_price;
  if (name == "log-correlation") return ScenarioKind::log_correlation;
  throw ConfigError("unknown scenario '" + name +
                    "' (expected second-to-default, max-known, single-price or log-correlation)");
}

const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::second_to_default: return "second-to-default";
    case ScenarioKind::max_known: return "max-known";
    case ScenarioKind::single_price: return "single-price";
    case ScenarioKind::log_correlation: return "log-correlation";
  }
  return "?";
}

std::vector<double> SweepGrid::values() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) {
    out.push_back(steps == 0 ? min : min + i * (max - min) / steps);
  }
  return out;
}

SweepGrid ScenarioConfig::sweep() const {
  if (!scenario) throw ConfigError("no scenario selected");
  switch (*scenario) {
    case ScenarioKind::second_to_default: return maturities.over({0.0, 10.0, 100});
    case ScenarioKind::max_known: return strikes.over({-50.0, 50.0, 100});
    case ScenarioKind::single_price: return strikes.over({50.0, 150.0, 50});
    case ScenarioKind::log_correlation: return correlations.over({-1.0, 1.0, 20});
  }
  return {};
}

void ScenarioConfig::validate() const {
  if (!scenario) throw ConfigError("no scenario selected (use --scenario)");
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  need(std::abs(rho) <= 1.0, "rho must lie in [-1, 1]");
  need(lambda_x > 0 && lambda_y > 0, "intensities must be positive");
  need(sigma_x > 0 && sigma_y > 0 && spot > 0 && maturity > 0,
       "sigma, spot and maturity must be positive");
  need(!constraint_maturities.empty(), "at least one constraint maturity is required");
  for (double t : constraint_maturities) need(t >= 0.0 && std::isfinite(t), "constraint maturities must be >= 0");
  need(constraint_strikes >= 2, "constraint-strikes must be >= 2");
  need(panels >= 1 && functional_panels >= 1, "panel counts must be positive");
  need(grid >= 2, "grid must be >= 2");
  need(tol > 0.0 && tol < 1e-3, "tol must lie in (0, 1e-3)");
  need(threads >= 0, "threads must be >= 0");
  const auto g = sweep();
  need(g.steps >= 0, "sweep steps must be >= 0");
  need(std::isfinite(g.min) && std::isfinite(g.max) && g.max >= g.min,
       "sweep range must be finite with max >= min");
  if (*scenario == ScenarioKind::second_to_default) need(g.min >= 0.0, "maturities must be >= 0");
  if (*scenario == ScenarioKind::single_price) need(g.min >= 0.0, "call-on-max strikes must be >= 0");
  if (*scenario == ScenarioKind::log_correlation) {
    need(g.min >= -1.0 && g.max <= 1.0, "correlations must lie in [-1, 1]");
  }
}

namespace {

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw ConfigError(key + ": not a number: '" + v + "'");
  return d;
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d) || std::abs(d) > 1e9) throw ConfigError(key + ": not an integer: '" + v + "'");
  return static_cast<int>(d);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

void apply_setting(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "scenario") { cfg.scenario = parse_scenario(v); return; }
  if (key == "rho") { cfg.rho = to_double(key, v); return; }
  if (key == "out") { cfg.out = v; return; }
  if (key == "lambda-x") { cfg.lambda_x = to_double(key, v); return; }
  if (key == "lambda-y") { cfg.lambda_y = to_double(key, v); return; }
  if (key == "sigma-x") { cfg.sigma_x = to_double(key, v); return; }
  if (key == "sigma-y") { cfg.sigma_y = to_double(key, v); return; }
  if (key == "spot") { cfg.spot = to_double(key, v); return; }
  if (key == "maturity") { cfg.maturity = to_double(key, v); return; }
  if (key == "constraint-strikes") { cfg.constraint_strikes = to_int(key, v); return; }
  if (key == "panels") { cfg.panels = to_int(key, v); return; }
  if (key == "functional-panels") { cfg.functional_panels = to_int(key, v); return; }
  if (key == "grid") { cfg.grid = to_int(key, v); return; }
  if (key == "tol") { cfg.tol = to_double(key, v); return; }
  if (key == "threads") { cfg.threads = to_int(key, v); return; }
  if (key == "constraint-maturities") {
    cfg.constraint_maturities.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) cfg.constraint_maturities.push_back(to_double(key, trim(item)));
    return;
  }
  if (key == "maturity-min") { cfg.maturities.min = to_double(key, v); return; }
  if (key == "maturity-max") { cfg.maturities.max = to_double(key, v); return; }
  if (key == "maturity-steps") { cfg.maturities.steps = to_int(key, v); return; }
  if (key == "strike-min") { cfg.strikes.min = to_double(key, v); return; }
  if (key == "strike-max") { cfg.strikes.max = to_double(key, v); return; }
  if (key == "strike-steps") { cfg.strikes.steps = to_int(key, v); return; }
  if (key == "correlation-min") { cfg.correlations.min = to_double(key, v); return; }
  if (key == "correlation-max") { cfg.correlations.max = to_double(key, v); return; }
  if (key == "correlation-steps") { cfg.correlations.steps = to_int(key, v); return; }
  throw ConfigError("unknown setting '" + key + "'");
}

void load_config(ScenarioConfig& cfg, std::istream& in) {
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(n) + ": expected key=value");
    }
    apply_setting(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

void load_config_file(ScenarioConfig& cfg, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path);
  load_config(cfg, f);
}

bool ordered(const CurveRow& row, double tol) {
  if (!row.feasible) {
    return row.frechet_lower <= row.reference + tol && row.reference <= row.frechet_upper + tol;
  }
  return row.frechet_lower <= row.improved_lower + tol && row.improved_lower <= row.reference + tol &&
         row.reference <= row.improved_upper + tol && row.improved_upper <= row.frechet_upper + tol;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Prices under W, B, reference, A, M placed into curve order; for
// 2-decreasing pay-offs the roles of the surfaces swap.
CurveRow price_row(double axis, int sign, double pw, double pb, double ref, double pa, double pm) {
  if (sign > 0) return {axis, pw, pb, ref, pa, pm};
  return {axis, pm, pa, ref, pb, pw};
}

PricingOptions pricing_options(int panels) {
  PricingOptions po;
  po.path_panels = panels;
  po.quadrature.panels = panels;
  return po;
}

Marginal lognormal_x(const ScenarioConfig& c) { return Marginal::lognormal(c.sigma_x, c.spot, c.maturity); }
Marginal lognormal_y(const ScenarioConfig& c) { return Marginal::lognormal(c.sigma_y, c.spot, c.maturity); }

BoundPair second_to_default_bounds(const ScenarioConfig& cfg, const CopulaSurface& ref,
                                   const Marginal& mx, const Marginal& my) {
  std::vector<MaturityPrice> prices;
  for (double t : cfg.constraint_maturities) {
    prices.push_back({t, digital_default_prices(ref, mx, my, t).second});
  }
  return bounds_from_second_to_default(prices, mx, my);
}

std::vector<double> constraint_strike_grid(const ScenarioConfig& cfg, const Marginal& mx,
                                           const Marginal& my) {
  constexpr double kLevel = 1e-6;
  const double lo = std::min(mx.quantile(kLevel), my.quantile(kLevel));
  const double hi = std::max(mx.quantile(1.0 - kLevel), my.quantile(1.0 - kLevel));
  std::vector<double> out;
  const int n = cfg.constraint_strikes;
  for (int i = 0; i < n; ++i) out.push_back(lo + i * (hi - lo) / (n - 1));
  return out;
}

BoundPair max_known_bounds(const ScenarioConfig& cfg, const CopulaSurface& ref,
                           const Marginal& mx, const Marginal& my) {
  const auto grid = constraint_strike_grid(cfg, mx, my);
  return bounds_from_max_options([&](double k) { return ref(mx.cdf(k), my.cdf(k)); }, mx, my, grid);
}

FunctionalOptions functional_options(const ScenarioConfig& cfg) {
  FunctionalOptions fo;
  fo.pricing = pricing_options(cfg.panels);
  return fo;
}

struct LevelModel {
  std::shared_ptr<const ExpectationFunctional> functional;
  double level;
};

LevelModel single_price_level(const ScenarioConfig& cfg, const CopulaSurface& ref,
                              const Marginal& mx, const Marginal& my) {
  auto f = std::make_shared<const ExpectationFunctional>(PayoffSpec::spread(0.0), mx, my,
                                                         functional_options(cfg));
  return {f, f->value(ref)};
}

double mean_log(double sigma, double spot, double t) { return std::log(spot) - 0.5 * sigma * sigma * t; }

// Constraint level for log-return correlation rho0:
// E[log X log Y] = rho0 sd(log X) sd(log Y) + E[log X] E[log Y].
double log_level(const ScenarioConfig& cfg, double rho0) {
  return rho0 * cfg.sigma_x * cfg.sigma_y * cfg.maturity +
         mean_log(cfg.sigma_x, cfg.spot, cfg.maturity) * mean_log(cfg.sigma_y, cfg.spot, cfg.maturity);
}

// Model-generated levels can miss [rho(W), rho(M)] by quadrature error;
// anything further out is unattainable.
std::optional<double> attainable(const MonotoneFunctional& f, double r) {
  const double lo = f.at_lower(), hi = f.at_upper();
  const double slack = 1e-6 * std::max(1.0, hi - lo);
  if (r < lo - slack || r > hi + slack) return std::nullopt;
  return std::clamp(r, lo, hi);
}

}  // namespace

std::vector<CurveRow> run_second_to_default(const ScenarioConfig& cfg) {
  cfg.validate();
  const auto mx = Marginal::exponential(cfg.lambda_x);
  const auto my = Marginal::exponential(cfg.lambda_y);
  const auto ref = gaussian_copula(cfg.rho);
  const auto bounds = second_to_default_bounds(cfg, ref, mx, my);
  std::vector<CurveRow> rows;
  for (double t : cfg.sweep().values()) {
    const double u = mx.cdf(t), v = my.cdf(t);
    rows.push_back({t, frechet_lower(u, v), bounds.lower(u, v),
                    digital_default_prices(ref, mx, my, t).second, bounds.upper(u, v),
                    frechet_upper(u, v)});
  }
  return rows;
}

std::vector<CurveRow> run_max_known(const ScenarioConfig& cfg) {
  cfg.validate();
  const auto mx = lognormal_x(cfg), my = lognormal_y(cfg);
  const auto ref = memoize(gaussian_copula(cfg.rho));
  const auto bounds = max_known_bounds(cfg, ref, mx, my);
  const auto po = pricing_options(cfg.panels);
  const auto w = lower_frechet(), m = upper_frechet();
  const auto ks = cfg.sweep().values();
  std::vector<CurveRow> rows(ks.size());
  parallel_for(ks.size(), [&](std::size_t i) {
    const auto f = PayoffSpec::spread(ks[i]);
    rows[i] = price_row(ks[i], f.concordance_sign(), price(f, w, mx, my, po),
                        price(f, bounds.lower, mx, my, po), price(f, ref, mx, my, po),
                        price(f, bounds.upper, mx, my, po), price(f, m, mx, my, po));
  }, static_cast<unsigned>(cfg.threads));
  return rows;
}

std::vector<CurveRow> run_single_price(const ScenarioConfig& cfg) {
  cfg.validate();
  const auto mx = lognormal_x(cfg), my = lognormal_y(cfg);
  const auto ref = memoize(gaussian_copula(cfg.rho));
  const auto model = single_price_level(cfg, ref, mx, my);
  const auto bounds = bound_surfaces_for_level(model.functional, model.level, cfg.tol);
  const auto po = pricing_options(cfg.functional_panels);
  const auto w = lower_frechet(), m = upper_frechet();
  const auto ks = cfg.sweep().values();
  std::vector<CurveRow> rows(ks.size());
  parallel_for(ks.size(), [&](std::size_t i) {
    const auto f = PayoffSpec::call_on_max(ks[i]);
    rows[i] = price_row(ks[i], f.concordance_sign(), price(f, w, mx, my, po),
                        price(f, bounds.lower, mx, my, po), price(f, ref, mx, my, po),
                        price(f, bounds.upper, mx, my, po), price(f, m, mx, my, po));
  }, static_cast<unsigned>(cfg.threads));
  return rows;
}

std::vector<CurveRow> run_log_correlation(const ScenarioConfig& cfg) {
  cfg.validate();
  const auto mx = lognormal_x(cfg), my = lognormal_y(cfg);
  auto functional = std::make_shared<const ExpectationFunctional>(
      PayoffSpec::log_product(), mx, my, functional_options(cfg));
  const auto po = pricing_options(cfg.functional_panels);
  const auto spread = PayoffSpec::spread(0.0);
  const int sign = spread.concordance_sign();
  const double pw = price(spread, lower_frechet(), mx, my, po);
  const double pm = price(spread, upper_frechet(), mx, my, po);
  const auto rhos = cfg.sweep().values();
  std::vector<CurveRow> rows(rhos.size());
  parallel_for(rhos.size(), [&](std::size_t i) {
    const double rho0 = rhos[i];
    const double ref = price(spread, gaussian_copula(rho0), mx, my, po);
    const auto level = attainable(*functional, log_level(cfg, rho0));
    if (!level) {
      rows[i] = price_row(rho0, sign, pw, kNaN, ref, kNaN, pm);
      rows[i].feasible = false;
      return;
    }
    const auto bounds = bound_surfaces_for_level(functional, *level, cfg.tol);
    rows[i] = price_row(rho0, sign, pw, price(spread, bounds.lower, mx, my, po), ref,
                        price(spread, bounds.upper, mx, my, po), pm);
  }, static_cast<unsigned>(cfg.threads));
  return rows;
}

std::vector<CurveRow> run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  switch (*cfg.scenario) {
    case ScenarioKind::second_to_default: return run_second_to_default(cfg);
    case ScenarioKind::max_known: return run_max_known(cfg);
    case ScenarioKind::single_price: return run_single_price(cfg);
    case ScenarioKind::log_correlation: return run_log_correlation(cfg);
  }
  return {};
}

void write_csv(std::ostream& os, const std::vector<CurveRow>& rows) {
  os << kCsvHeader << '\n';
  os << std::setprecision(12);
  for (const auto& r : rows) {
    os << r.axis << ',' << r.frechet_lower << ',' << r.improved_lower << ',' << r.reference << ','
       << r.improved_upper << ',' << r.frechet_upper << '\n';
  }
}

ValidationSummary validate_scenario(const ScenarioConfig& cfg, const std::vector<CurveRow>& rows) {
  cfg.validate();
  ValidationSummary out;
  auto fail = [&](std::string msg) {
    out.passed = false;
    out.messages.push_back("FAIL " + std::move(msg));
  };
  auto note = [&](std::string msg) { out.messages.push_back("ok   " + std::move(msg)); };

  const bool probability = *cfg.scenario == ScenarioKind::second_to_default;
  const double tol = probability ? 1e-9 : 1e-6;
  std::size_t bad = 0;
  for (const auto& r : rows) {
    if (!ordered(r, tol)) {
      ++bad;
      std::ostringstream os;
      os << std::setprecision(12) << "row axis=" << r.axis << " breaks the curve ordering";
      fail(os.str());
    }
    if (r.feasible && r.improved_upper - r.improved_lower > r.frechet_upper - r.frechet_lower + tol) {
      std::ostringstream os;
      os << "row axis=" << r.axis << ": improved interval wider than the Frechet interval";
      fail(os.str());
    }
  }
  if (bad == 0) note("curve ordering on " + std::to_string(rows.size()) + " rows");

  auto check_surface = [&](const CopulaSurface& s, const std::string& name) {
    const auto rep = s.is_copula() ? validate_copula(s, cfg.grid) : validate_quasi_copula(s, cfg.grid);
    const std::string kind = s.is_copula() ? "copula" : "quasi-copula";
    if (rep.passed) {
      note(name + " passes the " + kind + " checks");
    } else {
      fail(name + " fails the " + rep.worst_check + " check by " + std::to_string(rep.worst_violation));
    }
  };

  switch (*cfg.scenario) {
    case ScenarioKind::second_to_default: {
      const auto mx = Marginal::exponential(cfg.lambda_x);
      const auto my = Marginal::exponential(cfg.lambda_y);
      const auto b = second_to_default_bounds(cfg, gaussian_copula(cfg.rho), mx, my);
      check_surface(b.lower, "lower bound");
      check_surface(b.upper, "upper bound");
      for (const auto& r : rows) {
        for (double t : cfg.constraint_maturities) {
          if (std::abs(r.axis - t) > 1e-12) continue;
          const double spread = std::max(std::abs(r.improved_lower - r.reference),
                                         std::abs(r.improved_upper - r.reference));
          if (spread > 1e-9) {
            fail("bounds do not collapse at constraint maturity " + std::to_string(t));
          } else {
            note("bounds collapse at constraint maturity " + std::to_string(t));
          }
        }
      }
      break;
    }
    case ScenarioKind::max_known: {
      const auto mx = lognormal_x(cfg), my = lognormal_y(cfg);
      const auto b = max_known_bounds(cfg, gaussian_copula(cfg.rho), mx, my);
      check_surface(b.lower, "lower bound");
      check_surface(b.upper, "upper bound");
      break;
    }
    case ScenarioKind::single_price: {
      const auto mx = lognormal_x(cfg), my = lognormal_y(cfg);
      const auto model = single_price_level(cfg, gaussian_copula(cfg.rho), mx, my);
      const auto b = bound_surfaces_for_level(model.functional, model.level, cfg.tol);
      check_surface(b.lower, "lower bound");
      check_surface(b.upper, "upper bound");
      break;
    }
    case ScenarioKind::log_correlation: {
      const auto mx = lognormal_x(cfg), my = lognormal_y(cfg);
      auto f = std::make_shared<const ExpectationFunctional>(PayoffSpec::log_product(), mx, my,
                                                             functional_options(cfg));
      const double rho0 = 0.5 * (cfg.sweep().min + cfg.sweep().max);
      if (const auto level = attainable(*f, log_level(cfg, rho0))) {
        const auto b = bound_surfaces_for_level(f, *level, cfg.tol);
        check_surface(b.lower, "lower bound at the middle correlation");
        check_surface(b.upper, "upper bound at the middle correlation");
      } else {
        fail("middle correlation level is unattainable");
      }
      break;
    }
  }
  return out;
}

}  // namespace cbounds
