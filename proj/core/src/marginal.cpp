#include "copulabounds/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cbounds {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

Marginal::Marginal(Law law) : law_(std::move(law)) {}

Marginal Marginal::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("exponential marginal: rate must be positive");
  }
  return Marginal(ExponentialLaw{rate});
}

Marginal Marginal::lognormal(double sigma, double spot, double maturity) {
  if (!(sigma > 0.0) || !(spot > 0.0) || !(maturity > 0.0) || !std::isfinite(sigma * spot * maturity)) {
    throw std::invalid_argument("lognormal marginal: sigma, spot and maturity must be positive");
  }
  return Marginal(LognormalLaw{sigma, spot, maturity});
}

Marginal Marginal::tabulated(std::vector<std::pair<double, double>> knots) {
  if (knots.empty()) throw std::invalid_argument("tabulated marginal: no knots");
  TabulatedLaw t;
  double prev_level = 0.0;
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const auto [x, f] = knots[i];
    if (!std::isfinite(x) || x < 0.0) throw std::invalid_argument("tabulated marginal: x must be finite and >= 0");
    if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("tabulated marginal: F outside [0,1]");
    if (i > 0 && !(x > t.x.back())) throw std::invalid_argument("tabulated marginal: x not strictly increasing");
    if (f < prev_level) throw std::invalid_argument("tabulated marginal: F decreasing");
    t.x.push_back(x);
    t.level.push_back(f);
    prev_level = f;
  }
  return Marginal(std::move(t));
}

double Marginal::cdf(double x) const {
  if (!std::isfinite(x)) throw std::domain_error("cdf: non-finite argument");
  return std::visit(
      overloaded{
          [x](const ExponentialLaw& e) { return x <= 0.0 ? 0.0 : -std::expm1(-e.rate * x); },
          [x](const LognormalLaw& l) {
            if (x <= 0.0) return 0.0;
            const double vol = l.sigma * std::sqrt(l.maturity);
            return norm_cdf((std::log(x / l.spot) + 0.5 * vol * vol) / vol);
          },
          [x](const TabulatedLaw& t) {
            const auto it = std::upper_bound(t.x.begin(), t.x.end(), x);
            if (it == t.x.begin()) return 0.0;
            return t.level[static_cast<std::size_t>(it - t.x.begin()) - 1];
          }},
      law_);
}

double Marginal::quantile(double u) const {
  if (!(u > 0.0 && u <= 1.0)) throw std::domain_error("quantile: u must lie in (0,1]");
  return std::visit(
      overloaded{[u](const ExponentialLaw& e) { return u == 1.0 ? kInf : -std::log1p(-u) / e.rate; },
                 [u](const LognormalLaw& l) {
                   if (u == 1.0) return kInf;
                   const double vol = l.sigma * std::sqrt(l.maturity);
                   return l.spot * std::exp(vol * norm_quantile(u) - 0.5 * vol * vol);
                 },
                 [u](const TabulatedLaw& t) {
                   const auto it = std::lower_bound(t.level.begin(), t.level.end(), u);
                   if (it == t.level.end()) return kInf;
                   return t.x[static_cast<std::size_t>(it - t.level.begin())];
                 }},
      law_);
}

double Marginal::quantile_clamped(double u) const {
  return quantile(std::clamp(u, kTailEpsilon, 1.0 - kTailEpsilon));
}

double Marginal::mean() const {
  return std::visit(overloaded{[](const ExponentialLaw& e) { return 1.0 / e.rate; },
                               [](const LognormalLaw& l) { return l.spot; },
                               [](const TabulatedLaw& t) {
                                 if (t.level.back() < 1.0) return kInf;
                                 double s = 0.0, prev = 0.0;
                                 for (std::size_t i = 0; i < t.x.size(); ++i) {
                                   s += t.x[i] * (t.level[i] - prev);
                                   prev = t.level[i];
                                 }
                                 return s;
                               }},
                    law_);
}

std::span<const double> Marginal::jump_levels() const {
  if (const auto* t = std::get_if<TabulatedLaw>(&law_)) return t->level;
  return {};
}

std::string Marginal::describe() const {
  std::ostringstream os;
  std::visit(overloaded{[&os](const ExponentialLaw& e) { os << "exponential(rate=" << e.rate << ")"; },
                        [&os](const LognormalLaw& l) {
                          os << "lognormal(sigma=" << l.sigma << ", spot=" << l.spot
                             << ", T=" << l.maturity << ")";
                        },
                        [&os](const TabulatedLaw& t) { os << "tabulated(" << t.x.size() << " knots)"; }},
             law_);
  return os.str();
}

Marginal from_call_prices(std::span<const double> strikes, std::span<const double> prices,
                          double rate, double maturity) {
  const std::size_t n = strikes.size();
  if (n < 2) throw std::invalid_argument("from_call_prices: need at least two strikes");
  if (prices.size() != n) throw std::invalid_argument("from_call_prices: strikes/prices size mismatch");
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(strikes[i]) || strikes[i] < 0.0 || !std::isfinite(prices[i]) || prices[i] < 0.0) {
      throw std::invalid_argument("from_call_prices: strikes and prices must be finite and >= 0");
    }
    if (i > 0 && !(strikes[i] > strikes[i - 1])) {
      throw std::invalid_argument("from_call_prices: strikes not strictly increasing");
    }
    scale = std::max(scale, prices[i]);
  }
  const double tol = 1e-9 * std::max(1.0, scale);
  for (std::size_t i = 1; i < n; ++i) {
    if (prices[i] > prices[i - 1] + tol) {
      throw std::invalid_argument("from_call_prices: call prices increase with strike (arbitrage)");
    }
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double left = (prices[i] - prices[i - 1]) / (strikes[i] - strikes[i - 1]);
    const double right = (prices[i + 1] - prices[i]) / (strikes[i + 1] - strikes[i]);
    if (right < left - tol) throw std::invalid_argument("from_call_prices: call prices not convex (arbitrage)");
  }
  if (prices.front() - prices.back() <= tol) {
    throw std::invalid_argument("from_call_prices: constant prices carry no distribution");
  }

  const double growth = std::exp(rate * maturity);
  std::vector<double> slope(n);
  const auto& k = strikes;
  const auto& p = prices;
  if (n == 2) {
    slope[0] = slope[1] = (p[1] - p[0]) / (k[1] - k[0]);
  } else {
    // Three-point formulas on a nonuniform grid.
    auto one_sided = [](double x0, double x1, double x2, double y0, double y1, double y2) {
      const double h1 = x1 - x0, h2 = x2 - x0;
      return (-(h1 + h2) / (h1 * h2)) * y0 + (h2 / (h1 * (h2 - h1))) * y1 - (h1 / (h2 * (h2 - h1))) * y2;
    };
    slope[0] = one_sided(k[0], k[1], k[2], p[0], p[1], p[2]);
    slope[n - 1] = one_sided(k[n - 1], k[n - 2], k[n - 3], p[n - 1], p[n - 2], p[n - 3]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double hl = k[i] - k[i - 1], hr = k[i + 1] - k[i];
      slope[i] = (-hr / (hl * (hl + hr))) * p[i - 1] + ((hr - hl) / (hl * hr)) * p[i] +
                 (hl / (hr * (hl + hr))) * p[i + 1];
    }
  }
  std::vector<std::pair<double, double>> knots(n);
  double running = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    running = std::max(running, std::clamp(1.0 + growth * slope[i], 0.0, 1.0));
    knots[i] = {k[i], running};
  }
  return Marginal::tabulated(std::move(knots));
}

namespace {

std::vector<double> merged_breakpoints(const Marginal& m1, const Marginal& m2, Direction direction,
                                       std::span<const double> extra) {
  std::vector<double> out(extra.begin(), extra.end());
  for (double l : m1.jump_levels()) out.push_back(direction == Direction::co ? l : 1.0 - l);
  for (double l : m2.jump_levels()) out.push_back(l);
  return out;
}

// Integral of h over (0, 1) with a divergence check at both ends. The dyadic
// blocks [e, 2e] and [2e, 4e] next to the truncation point e estimate the
// discarded tail geometrically; a block sum that does not decay is charged
// for the ~40 dyadic blocks left below e. A non-negligible tail means the
// expectation does not exist at this truncation.
template <class H>
double integrate_checked(H&& h, std::span<const double> breaks, const QuadratureOptions& opt) {
  const double total = integrate(h, 0.0, 1.0, breaks, opt);
  constexpr double e = kTailEpsilon;
  auto tail = [&](double near, double far) {
    if (std::abs(far) < 1e-300) return std::abs(near);
    const double ratio = std::abs(near / far);
    return ratio >= 0.9 ? 40.0 * std::abs(near) : std::abs(near) * ratio / (1.0 - ratio);
  };
  auto mirrored = [&](double u) { return h(1.0 - u); };
  const double lo = tail(detail::gauss5(h, e, 2 * e), detail::gauss5(h, 2 * e, 4 * e));
  const double hi = tail(detail::gauss5(mirrored, e, 2 * e), detail::gauss5(mirrored, 2 * e, 4 * e));
  if (std::max(lo, hi) > 1e-8 * std::max(1.0, std::abs(total))) {
    throw QuadratureError(std::string("expectation does not converge near u = ") + (lo >= hi ? "0" : "1"));
  }
  return total;
}

}  // namespace

double expect_on_diagonal(const Marginal& m1, const Marginal& m2,
                          const std::function<double(double, double)>& g, Direction direction,
                          std::span<const double> breakpoints, const QuadratureOptions& opt) {
  const auto breaks = merged_breakpoints(m1, m2, direction, breakpoints);
  if (direction == Direction::co) {
    return integrate_checked(
        [&](double u) { return g(m1.quantile_clamped(u), m2.quantile_clamped(u)); }, breaks, opt);
  }
  return integrate_checked(
      [&](double u) { return g(m1.quantile_clamped(1.0 - u), m2.quantile_clamped(u)); }, breaks, opt);
}

double expect(const Marginal& m, const std::function<double(double)>& g,
              std::span<const double> breakpoints, const QuadratureOptions& opt) {
  std::vector<double> breaks(breakpoints.begin(), breakpoints.end());
  for (double l : m.jump_levels()) breaks.push_back(l);
  return integrate_checked([&](double u) { return g(m.quantile_clamped(u)); }, breaks, opt);
}

}  // namespace cbounds
