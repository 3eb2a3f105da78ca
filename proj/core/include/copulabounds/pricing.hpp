#pragma once

#include "copulabounds/copula.hpp"
#include "copulabounds/marginal.hpp"
#include "copulabounds/numerics.hpp"
#include "copulabounds/payoff.hpp"

#include <stdexcept>

namespace cbounds {

/// Raised when a price does not exist (divergent boundary expectation,
/// infinite marginal mass) or its numerical value is unusable.
class IntegrabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PricingOptions {
  QuadratureOptions quadrature{};  ///< probability-space integrals
  int path_panels = 2001;          ///< panels across [0, x_max] for the path integrals of G
  int product_panels = 100;        ///< per-axis panels of the 2-D product-xy quadrature
};

/// G(x, y) = 1 - F_X(x) - F_Y(y) + C(F_X(x), F_Y(y)).
double survival_weight(const CopulaSurface& c, const Marginal& mx, const Marginal& my, double x,
                       double y);

/// -f(0,0) + E f(X,0) + E f(0,Y) + (integral of G against the pay-off's
/// induced measure). Needs only pointwise values of c, so quasi-copulas work.
double price(const PayoffSpec& payoff, const CopulaSurface& c, const Marginal& mx,
             const Marginal& my, const PricingOptions& opt = {});

/// E f(X, Y) directly along the comonotone / countermonotone diagonal.
double price_under_M(const PayoffSpec& payoff, const Marginal& mx, const Marginal& my,
                         const PricingOptions& opt = {});
double price_under_W(const PayoffSpec& payoff, const Marginal& mx, const Marginal& my,
                         const PricingOptions& opt = {});

struct PriceInterval {
  double lower;
  double upper;
  CopulaSurface lower_surface;  ///< surface whose price is `lower`
  CopulaSurface upper_surface;
  bool sharp_lower;
  bool sharp_upper;

  double width() const { return upper - lower; }
};

/// Price range over every copula between `lower_surface` and `upper_surface`.
/// For 2-decreasing pay-offs the surfaces swap roles. Throws std::logic_error
/// when the two prices cross by more than quadrature noise.
PriceInterval price_interval(const PayoffSpec& payoff, const CopulaSurface& lower_surface,
                             const CopulaSurface& upper_surface, const Marginal& mx,
                             const Marginal& my, const PricingOptions& opt = {});

struct DefaultPrices {
  double first;   ///< P(min(tau_X, tau_Y) <= T)
  double second;  ///< P(max(tau_X, tau_Y) <= T)
};

DefaultPrices digital_default_prices(const CopulaSurface& c, const Marginal& mx,
                                     const Marginal& my, double maturity);

}  // namespace cbounds
