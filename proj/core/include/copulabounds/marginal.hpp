#pragma once

#include "copulabounds/numerics.hpp"

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cbounds {

struct ExponentialLaw {
  double rate;
};

/// Terminal value S0 * exp(sigma W_T - sigma^2 T / 2) of a driftless
/// geometric Brownian motion.
struct LognormalLaw {
  double sigma;
  double spot;
  double maturity;
};

/// Right-continuous step CDF through sorted (x, F(x)) knots. F is 0 left of
/// the first knot; mass above the last knot's level sits at +infinity.
struct TabulatedLaw {
  std::vector<double> x;
  std::vector<double> level;
};

/// One-dimensional risk-factor distribution on [0, infinity). Immutable.
class Marginal {
 public:
  static Marginal exponential(double rate);
  static Marginal lognormal(double sigma, double spot, double maturity);
  static Marginal tabulated(std::vector<std::pair<double, double>> knots);

  double cdf(double x) const;

  /// Generalized inverse inf{x : F(x) >= u}, u in (0, 1]; +infinity when u
  /// exceeds the mass a tabulated law attains.
  double quantile(double u) const;

  /// quantile() with u clamped to [kTailEpsilon, 1 - kTailEpsilon]; what the
  /// integrators use so truncated tails never produce infinities.
  double quantile_clamped(double u) const;

  double mean() const;

  /// Levels at which quantile() jumps (tabulated laws only).
  std::span<const double> jump_levels() const;

  const auto& law() const { return law_; }
  std::string describe() const;

 private:
  using Law = std::variant<ExponentialLaw, LognormalLaw, TabulatedLaw>;
  explicit Marginal(Law law);
  Law law_;
};

/// Tabulated CDF recovered from undiscounted-by-the-caller call prices
/// P(K) = e^{-rT} E[(X-K)^+]: F(K) = 1 + e^{rT} dP/dK, with central
/// differences inside the grid and second-order one-sided differences at the
/// ends, clamped to [0, 1] and made nondecreasing.
Marginal from_call_prices(std::span<const double> strikes, std::span<const double> prices,
                          double rate, double maturity);

enum class Direction { co, counter };

/// Integral over u in (0,1) of g(F1^{-1}(u), F2^{-1}(u)) (co) or
/// g(F1^{-1}(1-u), F2^{-1}(u)) (counter). `breakpoints` are extra u-locations
/// where g has kinks.
double expect_on_diagonal(const Marginal& m1, const Marginal& m2,
                          const std::function<double(double, double)>& g, Direction direction,
                          std::span<const double> breakpoints = {},
                          const QuadratureOptions& opt = {});

/// Single-variable expectation E[g(X)] by quantile transform.
double expect(const Marginal& m, const std::function<double(double)>& g,
              std::span<const double> breakpoints = {}, const QuadratureOptions& opt = {});

}  // namespace cbounds
