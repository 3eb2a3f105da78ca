#pragma once

#include "copulabounds/constrained_bounds.hpp"
#include "copulabounds/copula.hpp"
#include "copulabounds/marginal.hpp"
#include "copulabounds/payoff.hpp"
#include "copulabounds/pricing.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace cbounds {

/// [W(a,b), M(a,b)], the values a copula can take at (a, b).
struct ThetaInterval {
  double a, b, lo, hi;

  static ThetaInterval at(double a, double b) {
    return {a, b, frechet_lower(a, b), frechet_upper(a, b)};
  }
};

/// A map from copulas to reals, nondecreasing in the concordance order.
class MonotoneFunctional {
 public:
  virtual ~MonotoneFunctional() = default;

  virtual double value(const CopulaSurface& c) const = 0;

  /// Value at the one-point upper / lower bound copulas for C(a,b) = theta.
  virtual double rho_plus(double a, double b, double theta) const;
  virtual double rho_minus(double a, double b, double theta) const;

  /// Values at W and M.
  virtual double at_lower() const { return value(lower_frechet()); }
  virtual double at_upper() const { return value(upper_frechet()); }

  /// Level tolerance 1e-9 * max(1, |rho(M) - rho(W)|).
  double level_tolerance() const;
};

struct FunctionalOptions {
  QuadratureOptions table{};            ///< diagonal tables and nested integrals
  int table_cells = 1024;               ///< cells of the cumulative diagonal tables
  QuadratureOptions segment{16, 30, 0.5};  ///< shifted-diagonal pieces of rho_plus/minus
  int kink_scan = 16;                   ///< samples per piece when locating pay-off kinks
  int nested_panels = 48;               ///< per-axis panels for independence/Gaussian values
  PricingOptions pricing{};             ///< generic copulas go through the pricing route
};

/// rho(C) = s * E_C[f0(X, Y)] with s the pay-off's concordance sign, so rho
/// is nondecreasing in C whether f0 is 2-increasing or 2-decreasing.
class ExpectationFunctional final : public MonotoneFunctional {
 public:
  ExpectationFunctional(PayoffSpec f0, Marginal mx, Marginal my, FunctionalOptions opt = {});
  ~ExpectationFunctional() override;

  double value(const CopulaSurface& c) const override;
  double rho_plus(double a, double b, double theta) const override;
  double rho_minus(double a, double b, double theta) const override;
  double at_lower() const override { return rho_w_; }
  double at_upper() const override { return rho_m_; }

  const PayoffSpec& integrand() const { return f0_; }
  int sign() const { return sign_; }

 private:
  class Table;

  double f(double u, double v) const;
  // Integral over u in [lo, hi] of f0 along v = c + slope * u.
  double segment(double lo, double hi, double c, int slope) const;

  PayoffSpec f0_;
  Marginal mx_, my_;
  FunctionalOptions opt_;
  int sign_;
  std::unique_ptr<Table> diag_, anti_;
  double rho_w_ = 0.0, rho_m_ = 0.0;
};

/// rho(C) = sum_i (C(a_i, b_i) - theta_i)^+. Zero exactly on the copulas
/// lying below every constraint.
class PointPenaltyFunctional final : public MonotoneFunctional {
 public:
  explicit PointPenaltyFunctional(std::vector<PointConstraint> points);
  double value(const CopulaSurface& c) const override;

 private:
  std::vector<PointConstraint> points_;
};

/// rho(C) for a surface carrying the copula tag.
double rho_of(const MonotoneFunctional& f, const CopulaSurface& c);

/// max{theta in [W, M] : rho_minus(a, b, theta) = r}, computed as the
/// rightmost theta with rho_minus <= r + eps_r. Empty when r is not attained.
std::optional<double> rho_inverse_minus(const MonotoneFunctional& f, double a, double b, double r,
                                        double tol = 1e-10);

/// min{theta in [W, M] : rho_plus(a, b, theta) = r}, the leftmost theta with
/// rho_plus >= r - eps_r. Empty when r is not attained.
std::optional<double> rho_inverse_plus(const MonotoneFunctional& f, double a, double b, double r,
                                       double tol = 1e-10);

/// Pointwise best-possible bounds on copulas with rho(C) = r:
///   upper A^r(u,v) = rho_inverse_minus(u,v,r) if r <= rho_minus(u,v,M(u,v)), else M(u,v)
///   lower B^r(u,v) = rho_inverse_plus(u,v,r)  if r >= rho_plus(u,v,W(u,v)),  else W(u,v)
/// Both surfaces are memoized and tagged quasi-copula.
BoundPair bound_surfaces_for_level(std::shared_ptr<const MonotoneFunctional> f, double r,
                                   double tol = 1e-10);

}  // namespace cbounds
