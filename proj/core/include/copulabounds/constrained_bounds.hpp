#pragma once

#include "copulabounds/copula.hpp"
#include "copulabounds/marginal.hpp"

#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cbounds {

/// Known value theta = C(a, b) of the copula at one point.
struct PointConstraint {
  double a;
  double b;
  double theta;
};

/// Raised for a constraint set no quasi-copula can match; names the pair.
class IncompatibleConstraints : public std::invalid_argument {
 public:
  IncompatibleConstraints(const std::string& what, std::size_t first, std::size_t second)
      : std::invalid_argument(what), first_(first), second_(second) {}
  std::size_t first() const { return first_; }
  std::size_t second() const { return second_; }

 private:
  std::size_t first_, second_;
};

/// Finite set of point constraints, validated on construction: every theta in
/// [W(a,b), M(a,b)] and every ordered pair satisfying
/// theta_j <= theta_i + (a_j - a_i)^+ + (b_j - b_i)^+, which is exactly what
/// the lower and upper bound surfaces need to agree at every constraint.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  explicit ConstraintSet(std::vector<PointConstraint> points, double tol = 1e-12);

  const std::vector<PointConstraint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  /// {(a, 1-b)} with values a - theta; exchanges increasing and decreasing sets.
  ConstraintSet reflected() const;

 private:
  std::vector<PointConstraint> points_;
};

enum class SetClass { increasing, decreasing, neither };

const char* to_string(SetClass c);

/// Increasing when every pair is ordered the same way in both coordinates,
/// decreasing when every pair is ordered oppositely. Ties satisfy both, so
/// sets of size <= 1 and collinear axis-parallel chains report increasing.
SetClass classify(std::span<const PointConstraint> points);
inline SetClass classify(const ConstraintSet& s) { return classify(s.points()); }

/// Pointwise best-possible quasi-copula bounds matching every constraint.
/// Upper: min(u, v, min_k theta_k + (u-a_k)^+ + (v-b_k)^+), tagged a copula
/// when the set is decreasing. Lower: max(0, u+v-1, max_k theta_k - (a_k-u)^+ - (b_k-v)^+),
/// tagged a copula when the set is increasing.
CopulaSurface upper_bound(const ConstraintSet& s);
CopulaSurface lower_bound(const ConstraintSet& s);

struct BoundPair {
  CopulaSurface lower;
  CopulaSurface upper;
};

struct MaturityPrice {
  double maturity;
  double price;
};

/// Second-to-default digital prices P_k = C(F_X(T_k), F_Y(T_k)) turned into
/// constraints on the copula.
BoundPair bounds_from_second_to_default(std::span<const MaturityPrice> prices, const Marginal& mx,
                                        const Marginal& my);

/// Joint CDF on the diagonal K -> F(K, K) (recoverable from options on the
/// maximum) sampled on a strike grid and turned into constraints.
BoundPair bounds_from_max_options(const std::function<double(double)>& diagonal_cdf,
                                  const Marginal& mx, const Marginal& my,
                                  std::span<const double> strike_grid);

}  // namespace cbounds
