#pragma once

#include "copulabounds/constrained_bounds.hpp"
#include "copulabounds/marginal.hpp"

#include <istream>
#include <stdexcept>
#include <string>

namespace cbounds {

class FormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two-column CSV whose header is either "strike,price" (call prices,
/// reconstructed with from_call_prices at the given rate and maturity) or
/// "x,F" (tabulated CDF knots).
Marginal read_marginal_csv(std::istream& in, double rate = 0.0, double maturity = 1.0);
Marginal read_marginal_csv(const std::string& path, double rate = 0.0, double maturity = 1.0);

/// Three-column "a,b,theta" constraints, or two-column "T,price"
/// second-to-default prices mapped through the marginals.
ConstraintSet read_constraints_csv(std::istream& in, const Marginal& mx, const Marginal& my);
ConstraintSet read_constraints_csv(const std::string& path, const Marginal& mx, const Marginal& my);

}  // namespace cbounds
