#include "copulabounds/constrained_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace cbounds {

ConstraintSet::ConstraintSet(std::vector<PointConstraint> points, double tol)
    : points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!(p.a >= 0.0 && p.a <= 1.0 && p.b >= 0.0 && p.b <= 1.0)) {
      throw IncompatibleConstraints("constraint point outside [0,1]^2", i, i);
    }
    if (!(p.theta >= frechet_lower(p.a, p.b) - tol && p.theta <= frechet_upper(p.a, p.b) + tol)) {
      std::ostringstream os;
      os << "constraint " << i << " value " << p.theta << " outside Frechet interval ["
         << frechet_lower(p.a, p.b) << ", " << frechet_upper(p.a, p.b) << "]";
      throw IncompatibleConstraints(os.str(), i, i);
    }
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = 0; j < points_.size(); ++j) {
      const auto& p = points_[i];
      const auto& q = points_[j];
      const double reach = p.theta + std::max(0.0, q.a - p.a) + std::max(0.0, q.b - p.b);
      if (q.theta > reach + tol) {
        std::ostringstream os;
        os << "constraints " << i << " and " << j << " cannot both hold for a quasi-copula";
        throw IncompatibleConstraints(os.str(), i, j);
      }
    }
  }
}

ConstraintSet ConstraintSet::reflected() const {
  std::vector<PointConstraint> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back({p.a, 1.0 - p.b, p.a - p.theta});
  ConstraintSet s;
  s.points_ = std::move(out);
  return s;
}

const char* to_string(SetClass c) {
  switch (c) {
    case SetClass::increasing: return "increasing";
    case SetClass::decreasing: return "decreasing";
    case SetClass::neither: return "neither";
  }
  return "?";
}

SetClass classify(std::span<const PointConstraint> points) {
  bool increasing = true;
  bool decreasing = true;
  for (std::size_t i = 0; i < points.size() && (increasing || decreasing); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double da = points[j].a - points[i].a;
      const double db = points[j].b - points[i].b;
      if (!((da <= 0 && db <= 0) || (da >= 0 && db >= 0))) increasing = false;
      if (!((da <= 0 && db >= 0) || (da >= 0 && db <= 0))) decreasing = false;
    }
  }
  if (increasing) return SetClass::increasing;
  if (decreasing) return SetClass::decreasing;
  return SetClass::neither;
}

CopulaSurface upper_bound(const ConstraintSet& s) {
  if (s.empty()) return upper_frechet();
  auto pts = std::make_shared<const std::vector<PointConstraint>>(s.points());
  auto eval = [pts](double u, double v) {
    double best = std::min(u, v);
    for (const auto& p : *pts) {
      best = std::min(best, p.theta + std::max(0.0, u - p.a) + std::max(0.0, v - p.b));
    }
    return best;
  };
  const auto cls = classify(s);
  const bool copula = cls == SetClass::decreasing || s.size() == 1;
  return {eval, copula ? Provenance::known_copula : Provenance::quasi_copula, shape::Generic{},
          "A^S"};
}

CopulaSurface lower_bound(const ConstraintSet& s) {
  if (s.empty()) return lower_frechet();
  auto pts = std::make_shared<const std::vector<PointConstraint>>(s.points());
  auto eval = [pts](double u, double v) {
    double best = std::max(0.0, u + v - 1.0);
    for (const auto& p : *pts) {
      best = std::max(best, p.theta - std::max(0.0, p.a - u) - std::max(0.0, p.b - v));
    }
    return best;
  };
  const auto cls = classify(s);
  const bool copula = cls == SetClass::increasing || s.size() == 1;
  return {eval, copula ? Provenance::known_copula : Provenance::quasi_copula, shape::Generic{},
          "B^S"};
}

BoundPair bounds_from_second_to_default(std::span<const MaturityPrice> prices, const Marginal& mx,
                                        const Marginal& my) {
  std::vector<PointConstraint> pts;
  pts.reserve(prices.size());
  for (const auto& [t, p] : prices) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("maturity must be finite and >= 0");
    pts.push_back({mx.cdf(t), my.cdf(t), p});
  }
  const ConstraintSet s(std::move(pts));
  return {lower_bound(s), upper_bound(s)};
}

BoundPair bounds_from_max_options(const std::function<double(double)>& diagonal_cdf,
                                  const Marginal& mx, const Marginal& my,
                                  std::span<const double> strike_grid) {
  std::vector<PointConstraint> pts;
  pts.reserve(strike_grid.size());
  for (double k : strike_grid) pts.push_back({mx.cdf(k), my.cdf(k), diagonal_cdf(k)});
  const ConstraintSet s(std::move(pts));
  return {lower_bound(s), upper_bound(s)};
}

}  // namespace cbounds
