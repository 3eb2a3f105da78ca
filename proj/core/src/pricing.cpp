#include "copulabounds/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace cbounds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double upper_cap(const Marginal& m) {
  const double q = m.quantile_clamped(1.0);
  if (!std::isfinite(q)) {
    throw IntegrabilityError("marginal " + m.describe() + " puts mass at infinity");
  }
  return q;
}

// u-locations where the pay-off kinks along u -> g(u).
template <class XY>
std::vector<double> u_kinks(const PayoffSpec& f, XY&& xy, int samples) {
  std::vector<double> out;
  std::array<double, 3> k{};
  const int n = f.kink_values(1.0, 1.0, k);
  for (int i = 0; i < n; ++i) {
    append_sign_changes(
        [&](double u) {
          const auto [x, y] = xy(u);
          std::array<double, 3> kv{};
          f.kink_values(x, y, kv);
          return kv[static_cast<std::size_t>(i)];
        },
        0.0, 1.0, samples, out);
  }
  return out;
}

double boundary_terms(const PayoffSpec& f, const Marginal& mx, const Marginal& my,
                      const PricingOptions& opt) {
  const double f00 = f(0.0, 0.0);
  if (!std::isfinite(f00)) throw IntegrabilityError(f.name() + ": f(0,0) is not finite");
  const int samples = opt.quadrature.panels;
  try {
    const auto bx = u_kinks(f, [&](double u) { return std::pair{mx.quantile_clamped(u), 0.0}; }, samples);
    const auto by = u_kinks(f, [&](double u) { return std::pair{0.0, my.quantile_clamped(u)}; }, samples);
    const double ex = expect(mx, [&](double x) { return f(x, 0.0); }, bx, opt.quadrature);
    const double ey = expect(my, [&](double y) { return f(0.0, y); }, by, opt.quadrature);
    return -f00 + ex + ey;
  } catch (const QuadratureError& e) {
    throw IntegrabilityError(f.name() + ": boundary expectation diverges (" + e.what() + ")");
  }
}

// Straight line y = y0 + sy * x over x in [lo, hi], integrand weighted by `weight`.
struct Path {
  double lo;
  double hi;
  double y0;
  double sy;
  double weight;
};

double path_integral(const Path& p, const CopulaSurface& c, const Marginal& mx, const Marginal& my,
                     const PricingOptions& opt) {
  const double cap_x = upper_cap(mx);
  const double cap_y = upper_cap(my);
  double lo = std::max(p.lo, 0.0);
  double hi = std::min(p.hi, cap_x);
  // Beyond either marginal's truncation quantile G is below the tail epsilon.
  if (p.sy > 0.0) hi = std::min(hi, (cap_y - p.y0) / p.sy);
  if (p.sy < 0.0) lo = std::max(lo, (cap_y - p.y0) / p.sy);
  if (!(hi > lo)) return 0.0;
  if (!std::isfinite(hi)) throw IntegrabilityError("unbounded integration path");

  auto y_of = [&](double x) { return std::max(0.0, p.y0 + p.sy * x); };
  // Breakpoints where G under either Frechet bound kinks; they are the same
  // for every surface without a known shape, so such surfaces priced on one
  // path share a node set.
  std::vector<double> breaks;
  append_sign_changes([&](double x) { return mx.cdf(x) - my.cdf(y_of(x)); }, lo, hi,
                      opt.path_panels, breaks);
  append_sign_changes([&](double x) { return mx.cdf(x) + my.cdf(y_of(x)) - 1.0; }, lo, hi,
                      opt.path_panels, breaks);
  // One-point bound copulas also kink along u = a, v = b and where the
  // Lipschitz piece meets the Frechet bound it is clipped by.
  auto scan = [&](auto&& h) {
    append_sign_changes([&](double x) { return h(mx.cdf(x), my.cdf(y_of(x))); }, lo, hi,
                        opt.path_panels, breaks);
  };
  auto scan_point = [&](double a, double b, auto&& piece, auto&& clip1, auto&& clip2) {
    scan([a](double u, double) { return u - a; });
    scan([b](double, double v) { return v - b; });
    scan([&](double u, double v) { return piece(u, v) - clip1(u, v); });
    scan([&](double u, double v) { return piece(u, v) - clip2(u, v); });
  };
  if (const auto* s = std::get_if<shape::OnePointUpper>(&c.shape())) {
    scan_point(
        s->a, s->b,
        [s](double u, double v) { return s->theta + std::max(u - s->a, 0.0) + std::max(v - s->b, 0.0); },
        [](double u, double) { return u; }, [](double, double v) { return v; });
  } else if (const auto* s = std::get_if<shape::OnePointLower>(&c.shape())) {
    scan_point(
        s->a, s->b,
        [s](double u, double v) { return s->theta - std::max(s->a - u, 0.0) - std::max(s->b - v, 0.0); },
        [](double, double) { return 0.0; }, [](double u, double v) { return u + v - 1.0; });
  }
  if (const auto* t = std::get_if<TabulatedLaw>(&mx.law())) {
    breaks.insert(breaks.end(), t->x.begin(), t->x.end());
  }
  if (const auto* t = std::get_if<TabulatedLaw>(&my.law()); t && p.sy != 0.0) {
    for (double yk : t->x) breaks.push_back((yk - p.y0) / p.sy);
  }

  const double scale = std::max(cap_x, cap_y);
  const double step = scale / opt.path_panels;
  auto g = [&](double x) { return survival_weight(c, mx, my, x, y_of(x)); };
  return p.weight *
         integrate_on_lattice(g, lo, hi, 0.0, step, breaks, opt.quadrature, false, false);
}

double product_integral(const CopulaSurface& c, const Marginal& mx, const Marginal& my,
                        const PricingOptions& opt) {
  const double cap_x = upper_cap(mx);
  const double cap_y = upper_cap(my);
  const int n = opt.product_panels;
  if (n < 1) throw QuadratureError("product panel count must be positive");
  std::vector<double> xb, yb;
  if (const auto* t = std::get_if<TabulatedLaw>(&mx.law())) xb = t->x;
  if (const auto* t = std::get_if<TabulatedLaw>(&my.law())) yb = t->x;
  auto inner = [&](double x) {
    const double u = mx.cdf(x);
    std::vector<double> breaks = yb;
    if (u > 0.0) breaks.push_back(my.quantile(u));
    if (u < 1.0) breaks.push_back(my.quantile(1.0 - u));
    return integrate_on_lattice([&](double y) { return survival_weight(c, mx, my, x, y); }, 0.0,
                                cap_y, 0.0, cap_y / n, breaks, opt.quadrature, false, false);
  };
  return integrate_on_lattice(inner, 0.0, cap_x, 0.0, cap_x / n, xb, opt.quadrature, false, false);
}

double mu_integral(const PayoffSpec& f, const CopulaSurface& c, const Marginal& mx,
                   const Marginal& my, const PricingOptions& opt) {
  const double k = f.strike(), k2 = f.strike2();
  switch (f.kind()) {
    case PayoffKind::basket: {
      // Region {z/alpha >= 0, (K - z)/beta >= 0} rewritten in x = z/alpha.
      const double a = f.alpha(), b = f.beta();
      const double sgn = a * b > 0.0 ? 1.0 : -1.0;
      double lo = 0.0, hi = kInf;
      // (K - a x) / b >= 0
      if ((b > 0.0) == (a > 0.0)) {
        if ((b > 0.0 && k < 0.0) || (b < 0.0 && k > 0.0)) return 0.0;
        hi = k / a;
      } else {
        lo = std::max(0.0, k / a);
      }
      return path_integral({lo, hi, k / b, -a / b, sgn * std::abs(a)}, c, mx, my, opt);
    }
    case PayoffKind::call_on_min: return path_integral({k, kInf, 0.0, 1.0, 1.0}, c, mx, my, opt);
    case PayoffKind::call_on_max: return path_integral({k, kInf, 0.0, 1.0, -1.0}, c, mx, my, opt);
    case PayoffKind::put_on_min: return path_integral({0.0, k, 0.0, 1.0, -1.0}, c, mx, my, opt);
    case PayoffKind::put_on_max: return path_integral({0.0, k, 0.0, 1.0, 1.0}, c, mx, my, opt);
    case PayoffKind::worst_off_call:
      return path_integral({k, kInf, k2 - k, 1.0, 1.0}, c, mx, my, opt);
    case PayoffKind::best_off_call:
      return path_integral({k, kInf, k2 - k, 1.0, -1.0}, c, mx, my, opt);
    case PayoffKind::worst_off_put:
      return path_integral({k - std::min(k, k2), k, k2 - k, 1.0, 1.0}, c, mx, my, opt);
    case PayoffKind::best_off_put:
      return path_integral({k - std::min(k, k2), k, k2 - k, 1.0, -1.0}, c, mx, my, opt);
    case PayoffKind::product: return product_integral(c, mx, my, opt);
    case PayoffKind::log_product:
      throw IntegrabilityError("log-product: boundary terms diverge");
  }
  return 0.0;
}

double diagonal_price(const PayoffSpec& f, const Marginal& mx, const Marginal& my,
                      Direction dir, const PricingOptions& opt) {
  auto xy = [&](double u) {
    return std::pair{mx.quantile_clamped(dir == Direction::co ? u : 1.0 - u),
                     my.quantile_clamped(u)};
  };
  const auto breaks = u_kinks(f, xy, opt.quadrature.panels);
  return expect_on_diagonal(mx, my, [&](double x, double y) { return f(x, y); }, dir, breaks,
                            opt.quadrature);
}

}  // namespace

double survival_weight(const CopulaSurface& c, const Marginal& mx, const Marginal& my, double x,
                       double y) {
  const double u = mx.cdf(x);
  const double v = my.cdf(y);
  return 1.0 - u - v + c(u, v);
}

double price(const PayoffSpec& payoff, const CopulaSurface& c, const Marginal& mx,
             const Marginal& my, const PricingOptions& opt) {
  if (opt.path_panels < 1) throw QuadratureError("path panel count must be positive");
  const double boundary = boundary_terms(payoff, mx, my, opt);
  return boundary + mu_integral(payoff, c, mx, my, opt);
}

double price_under_M(const PayoffSpec& payoff, const Marginal& mx, const Marginal& my,
                     const PricingOptions& opt) {
  return diagonal_price(payoff, mx, my, Direction::co, opt);
}

double price_under_W(const PayoffSpec& payoff, const Marginal& mx, const Marginal& my,
                     const PricingOptions& opt) {
  return diagonal_price(payoff, mx, my, Direction::counter, opt);
}

PriceInterval price_interval(const PayoffSpec& payoff, const CopulaSurface& lower_surface,
                             const CopulaSurface& upper_surface, const Marginal& mx,
                             const Marginal& my, const PricingOptions& opt) {
  const double p_low = price(payoff, lower_surface, mx, my, opt);
  const double p_up = price(payoff, upper_surface, mx, my, opt);
  PriceInterval out = payoff.concordance_sign() > 0
                          ? PriceInterval{p_low, p_up, lower_surface, upper_surface,
                                          lower_surface.is_copula(), upper_surface.is_copula()}
                          : PriceInterval{p_up, p_low, upper_surface, lower_surface,
                                          upper_surface.is_copula(), lower_surface.is_copula()};
  const double tol = 1e-8 * std::max({1.0, std::abs(out.lower), std::abs(out.upper)});
  if (out.lower > out.upper + tol) {
    throw std::logic_error("price interval for " + payoff.name() + " is crossed: " +
                           std::to_string(out.lower) + " > " + std::to_string(out.upper));
  }
  return out;
}

DefaultPrices digital_default_prices(const CopulaSurface& c, const Marginal& mx,
                                     const Marginal& my, double maturity) {
  if (!(maturity >= 0.0)) throw std::invalid_argument("maturity must be >= 0");
  const double u = mx.cdf(maturity);
  const double v = my.cdf(maturity);
  const double second = c(u, v);
  return {u + v - second, second};
}

}  // namespace cbounds
