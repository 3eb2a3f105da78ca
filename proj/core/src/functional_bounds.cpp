#include "copulabounds/functional_bounds.hpp"

#include "copulabounds/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cbounds {

double MonotoneFunctional::rho_plus(double a, double b, double theta) const {
  return value(one_point_upper(a, b, theta));
}

double MonotoneFunctional::rho_minus(double a, double b, double theta) const {
  return value(one_point_lower(a, b, theta));
}

double MonotoneFunctional::level_tolerance() const {
  return 1e-9 * std::max(1.0, std::abs(at_upper() - at_lower()));
}

// Cumulative integral s -> int_0^s g on a fixed cell partition of [0, 1].
class ExpectationFunctional::Table {
 public:
  Table(std::function<double(double)> g, const std::vector<double>& breaks, int cells,
        const QuadratureOptions& opt)
      : g_(std::move(g)), opt_(opt), width_(1.0 / cells) {
    if (cells < 2) throw QuadratureError("table needs at least two cells");
    knots_ = panel_boundaries(0.0, 1.0, 0.0, 1.0 / cells, breaks);
    const std::size_t n = knots_.size() - 1;
    cum_.assign(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) cum_[j + 1] = cum_[j] + cell(j);
  }

  double operator()(double s) const {
    if (s <= 0.0) return 0.0;
    const std::size_t n = knots_.size() - 1;
    if (s >= 1.0) return cum_[n];
    auto it = std::upper_bound(knots_.begin(), knots_.end(), s);
    const std::size_t k = static_cast<std::size_t>(it - knots_.begin()) - 1;
    if (s == knots_[k]) return cum_[k];
    if (near_hi(k)) return cum_[k + 1] + detail::graded(g_, knots_[k + 1], s, opt_);
    if (near_lo(k)) return cum_[k] + detail::graded(g_, knots_[k], s, opt_);
    return cum_[k] + detail::gauss5(g_, knots_[k], s);
  }

 private:
  // Cells within one nominal width of an end are graded towards that end.
  bool near_lo(std::size_t j) const { return knots_[j] < width_; }
  bool near_hi(std::size_t j) const { return knots_[j + 1] > 1.0 - width_; }

  double cell(std::size_t j) const {
    const double a = knots_[j], b = knots_[j + 1];
    if (near_lo(j) && near_hi(j)) {
      const double m = 0.5 * (a + b);
      return detail::graded(g_, a, m, opt_) - detail::graded(g_, b, m, opt_);
    }
    if (near_lo(j)) return detail::graded(g_, a, b, opt_);
    if (near_hi(j)) return -detail::graded(g_, b, a, opt_);
    return detail::gauss5(g_, a, b);
  }

  mutable std::function<double(double)> g_;
  QuadratureOptions opt_;
  double width_;
  std::vector<double> knots_, cum_;
};

namespace {

std::vector<double> kink_locations(const PayoffSpec& f0,
                                   const std::function<std::pair<double, double>(double)>& xy,
                                   double lo, double hi, int samples) {
  std::vector<double> out;
  std::array<double, 3> kv{};
  const int n = f0.kink_values(1.0, 1.0, kv);
  for (int i = 0; i < n; ++i) {
    append_sign_changes(
        [&](double t) {
          const auto [x, y] = xy(t);
          std::array<double, 3> k{};
          f0.kink_values(x, y, k);
          return k[static_cast<std::size_t>(i)];
        },
        lo, hi, samples, out);
  }
  return out;
}

// Mixed second differences of s * f0 on a few quantile rectangles.
void spot_check_supermodular(const PayoffSpec& f0, int sign, const Marginal& mx,
                             const Marginal& my) {
  const double levels[] = {0.05, 0.2, 0.4, 0.6, 0.8, 0.95};
  for (double u1 : levels) {
    for (double u2 : levels) {
      if (u2 <= u1) continue;
      for (double v1 : levels) {
        for (double v2 : levels) {
          if (v2 <= v1) continue;
          const double x1 = mx.quantile_clamped(u1), x2 = mx.quantile_clamped(u2);
          const double y1 = my.quantile_clamped(v1), y2 = my.quantile_clamped(v2);
          const double vol = f0(x2, y2) + f0(x1, y1) - f0(x1, y2) - f0(x2, y1);
          const double scale = std::abs(f0(x2, y2)) + std::abs(f0(x1, y1)) + 1.0;
          if (sign * vol < -1e-9 * scale) {
            throw std::invalid_argument(f0.name() + " is not monotone in the concordance order");
          }
        }
      }
    }
  }
}

}  // namespace

ExpectationFunctional::ExpectationFunctional(PayoffSpec f0, Marginal mx, Marginal my,
                                             FunctionalOptions opt)
    : f0_(f0), mx_(std::move(mx)), my_(std::move(my)), opt_(opt), sign_(f0.concordance_sign()) {
  spot_check_supermodular(f0_, sign_, mx_, my_);
  std::vector<double> jumps;
  for (double l : mx_.jump_levels()) jumps.push_back(l);
  for (double l : my_.jump_levels()) jumps.push_back(l);

  const int scan = opt_.table.panels;
  auto diag_xy = [this](double u) {
    return std::pair{mx_.quantile_clamped(u), my_.quantile_clamped(u)};
  };
  auto anti_xy = [this](double u) {
    return std::pair{mx_.quantile_clamped(u), my_.quantile_clamped(1.0 - u)};
  };
  auto db = kink_locations(f0_, diag_xy, 0.0, 1.0, scan);
  db.insert(db.end(), jumps.begin(), jumps.end());
  std::vector<double> ab = kink_locations(f0_, anti_xy, 0.0, 1.0, scan);
  for (double l : mx_.jump_levels()) ab.push_back(l);
  for (double l : my_.jump_levels()) ab.push_back(1.0 - l);

  diag_ = std::make_unique<Table>([this](double u) { return f(u, u); }, db, opt_.table_cells,
                                  opt_.table);
  anti_ = std::make_unique<Table>([this](double u) { return f(u, 1.0 - u); }, ab,
                                  opt_.table_cells, opt_.table);
  rho_m_ = sign_ * (*diag_)(1.0);
  rho_w_ = sign_ * (*anti_)(1.0);
  if (!std::isfinite(rho_m_) || !std::isfinite(rho_w_)) {
    throw IntegrabilityError(f0_.name() + ": functional is not finite at W or M");
  }
}

ExpectationFunctional::~ExpectationFunctional() = default;

double ExpectationFunctional::f(double u, double v) const {
  return f0_(mx_.quantile_clamped(u), my_.quantile_clamped(v));
}

double ExpectationFunctional::segment(double lo, double hi, double c, int slope) const {
  if (!(hi > lo)) return 0.0;
  constexpr double kSnap = 1e-14;
  if (slope > 0 && std::abs(c) <= kSnap) return (*diag_)(hi) - (*diag_)(lo);
  if (slope < 0 && std::abs(c - 1.0) <= kSnap) return (*anti_)(hi) - (*anti_)(lo);

  auto v_of = [c, slope](double u) { return std::clamp(c + slope * u, 0.0, 1.0); };
  auto g = [&](double u) { return f(u, v_of(u)); };
  auto breaks = kink_locations(
      f0_, [&](double u) { return std::pair{mx_.quantile_clamped(u), my_.quantile_clamped(v_of(u))}; },
      lo, hi, opt_.kink_scan);
  for (double l : mx_.jump_levels()) breaks.push_back(l);
  for (double l : my_.jump_levels()) breaks.push_back((l - c) / slope);

  const auto& q = opt_.segment;
  const double w = (hi - lo) / q.panels;
  // Grade only ends where a quantile is near its singular endpoint.
  auto near_edge = [w](double t) { return t < 2.0 * w || t > 1.0 - 2.0 * w; };
  const bool grade_lo = near_edge(lo) || near_edge(v_of(lo));
  const bool grade_hi = near_edge(hi) || near_edge(v_of(hi));
  return integrate_on_lattice(g, lo, hi, lo, w, breaks, q, grade_lo, grade_hi);
}

namespace {

double checked_theta(double a, double b, double theta) {
  if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0)) {
    throw std::invalid_argument("(a, b) outside the unit square");
  }
  const double lo = frechet_lower(a, b), hi = frechet_upper(a, b);
  if (!(theta >= lo - 1e-12 && theta <= hi + 1e-12)) {
    throw std::invalid_argument("theta outside [W(a,b), M(a,b)]");
  }
  return std::clamp(theta, lo, hi);
}

}  // namespace

double ExpectationFunctional::rho_plus(double a, double b, double theta) const {
  theta = checked_theta(a, b, theta);
  const double e = a + b - theta;
  const double s = (*diag_)(theta) + segment(theta, a, b - theta, 1) +
                   segment(a, e, theta - a, 1) + ((*diag_)(1.0) - (*diag_)(e));
  return sign_ * s;
}

double ExpectationFunctional::rho_minus(double a, double b, double theta) const {
  theta = checked_theta(a, b, theta);
  const double s1 = a - theta, s2 = 1.0 - b + theta;
  const double s = (*anti_)(s1) + segment(s1, a, a + b - theta, -1) +
                   segment(a, s2, 1.0 + theta, -1) + ((*anti_)(1.0) - (*anti_)(s2));
  return sign_ * s;
}

double ExpectationFunctional::value(const CopulaSurface& c) const {
  const auto& sh = c.shape();
  if (std::holds_alternative<shape::Upper>(sh)) return rho_m_;
  if (std::holds_alternative<shape::Lower>(sh)) return rho_w_;
  if (const auto* p = std::get_if<shape::OnePointUpper>(&sh)) return rho_plus(p->a, p->b, p->theta);
  if (const auto* p = std::get_if<shape::OnePointLower>(&sh)) return rho_minus(p->a, p->b, p->theta);
  if (f0_.kind() != PayoffKind::log_product) {
    return sign_ * price(f0_, c, mx_, my_, opt_.pricing);
  }

  // Independence and Gaussian copulas have explicit conditional quantiles;
  // integrate over (u, w) with v = Phi(rho Phi^-1(u) + sqrt(1-rho^2) Phi^-1(w)).
  double rho;
  if (std::holds_alternative<shape::Independence>(sh)) {
    rho = 0.0;
  } else if (const auto* g = std::get_if<shape::Gaussian>(&sh)) {
    rho = g->rho;
  } else {
    throw std::invalid_argument(f0_.name() + ": no evaluation route for copula " + c.label());
  }
  const double s = std::sqrt(1.0 - rho * rho);
  QuadratureOptions q = opt_.table;
  q.panels = opt_.nested_panels;
  auto clamp01 = [](double t) { return std::clamp(t, kTailEpsilon, 1.0 - kTailEpsilon); };
  auto outer = [&](double u) {
    const double zu = norm_quantile(clamp01(u));
    auto v_of = [&](double w) {
      return rho == 0.0 ? w : norm_cdf(rho * zu + s * norm_quantile(clamp01(w)));
    };
    auto breaks = kink_locations(
        f0_, [&](double w) { return std::pair{mx_.quantile_clamped(u), my_.quantile_clamped(v_of(w))}; },
        0.0, 1.0, 4 * opt_.kink_scan);
    return integrate([&](double w) { return f(u, v_of(w)); }, 0.0, 1.0, breaks, q);
  };
  return sign_ * integrate(outer, 0.0, 1.0, {}, q);
}

PointPenaltyFunctional::PointPenaltyFunctional(std::vector<PointConstraint> points)
    : points_(std::move(points)) {
  for (const auto& p : points_) {
    if (!(p.a >= 0.0 && p.a <= 1.0 && p.b >= 0.0 && p.b <= 1.0)) {
      throw std::invalid_argument("penalty point outside the unit square");
    }
  }
}

double PointPenaltyFunctional::value(const CopulaSurface& c) const {
  double s = 0.0;
  for (const auto& p : points_) s += std::max(0.0, c(p.a, p.b) - p.theta);
  return s;
}

double rho_of(const MonotoneFunctional& f, const CopulaSurface& c) {
  if (!c.is_copula()) {
    throw std::invalid_argument("rho_of needs a surface tagged as a copula, got " + c.label());
  }
  return f.value(c);
}

std::optional<double> rho_inverse_minus(const MonotoneFunctional& f, double a, double b, double r,
                                        double tol) {
  const auto iv = ThetaInterval::at(a, b);
  const double eps = f.level_tolerance();
  const double top = f.rho_minus(a, b, iv.hi);
  if (r > top + eps || f.rho_minus(a, b, iv.lo) > r + eps) return std::nullopt;
  auto g = [&](double t) { return (t == iv.hi ? top : f.rho_minus(a, b, t)) - (r + eps); };
  return monotone_root(g, iv.lo, iv.hi, tol, RootSide::rightmost);
}

std::optional<double> rho_inverse_plus(const MonotoneFunctional& f, double a, double b, double r,
                                       double tol) {
  const auto iv = ThetaInterval::at(a, b);
  const double eps = f.level_tolerance();
  const double bottom = f.rho_plus(a, b, iv.lo);
  if (r < bottom - eps || f.rho_plus(a, b, iv.hi) < r - eps) return std::nullopt;
  auto g = [&](double t) { return (t == iv.lo ? bottom : f.rho_plus(a, b, t)) - (r - eps); };
  return monotone_root(g, iv.lo, iv.hi, tol, RootSide::leftmost);
}

BoundPair bound_surfaces_for_level(std::shared_ptr<const MonotoneFunctional> f, double r,
                                   double tol) {
  if (!f) throw std::invalid_argument("bound_surfaces_for_level: null functional");
  const double lo = f->at_lower(), hi = f->at_upper();
  const double eps = f->level_tolerance();
  if (!(r >= lo - eps && r <= hi + eps)) {
    throw std::invalid_argument("level " + std::to_string(r) + " outside [rho(W), rho(M)] = [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  r = std::clamp(r, lo, hi);

  auto upper = [f, r, eps, tol](double u, double v) {
    const double w = frechet_lower(u, v), m = frechet_upper(u, v);
    if (m - w <= tol) return m;
    const double top = f->rho_minus(u, v, m);
    if (r > top + eps) return m;
    auto g = [&](double t) { return (t == m ? top : f->rho_minus(u, v, t)) - (r + eps); };
    return monotone_root(g, w, m, tol, RootSide::rightmost);
  };
  auto lower = [f, r, eps, tol](double u, double v) {
    const double w = frechet_lower(u, v), m = frechet_upper(u, v);
    if (m - w <= tol) return w;
    const double bottom = f->rho_plus(u, v, w);
    if (r < bottom - eps) return w;
    auto g = [&](double t) { return (t == w ? bottom : f->rho_plus(u, v, t)) - (r - eps); };
    return monotone_root(g, w, m, tol, RootSide::leftmost);
  };
  return {memoize(CopulaSurface(lower, Provenance::quasi_copula, shape::Generic{}, "B^r")),
          memoize(CopulaSurface(upper, Provenance::quasi_copula, shape::Generic{}, "A^r"))};
}

}  // namespace cbounds
