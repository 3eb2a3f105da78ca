#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cbounds {

/// Raised when an integrand produces a non-finite value or a quadrature
/// setting is unusable.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double norm_cdf(double x);
double norm_quantile(double p);

/// P(X <= h, Y <= k) for a standard bivariate normal pair with correlation
/// rho. Genz's Gauss-Legendre reduction; |rho| = 1 handled exactly.
double bivariate_normal_cdf(double h, double k, double rho);

/// Probability-space truncation: quantiles are never requested closer than
/// this to 0 or 1.
inline constexpr double kTailEpsilon = 1e-12;

struct QuadratureOptions {
  int panels = 2001;          ///< composite panels over the whole interval
  int grading_levels = 30;    ///< geometric refinements of each end panel
  double grading_ratio = 0.5;
};

namespace detail {

inline constexpr std::array<double, 3> kGaussNodes = {0.0, 0.5384693101056831,
                                                      0.9061798459386640};
inline constexpr std::array<double, 3> kGaussWeights = {
    0.5688888888888889, 0.4786286704993665, 0.2369268850561891};

template <class F>
double checked(F& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    throw QuadratureError("integrand is not finite at " + std::to_string(x));
  }
  return y;
}

template <class F>
double gauss5(F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = kGaussWeights[0] * checked(f, mid);
  for (int k = 1; k < 3; ++k) {
    const double dx = half * kGaussNodes[k];
    s += kGaussWeights[k] * (checked(f, mid - dx) + checked(f, mid + dx));
  }
  return s * half;
}

// Geometric refinement of [edge, other] towards `edge`.
template <class F>
double graded(F& f, double edge, double other, const QuadratureOptions& opt) {
  const double w = other - edge;
  double s = 0.0;
  double outer = 1.0;
  for (int k = 0; k < opt.grading_levels; ++k) {
    const double inner = outer * opt.grading_ratio;
    s += gauss5(f, edge + w * inner, edge + w * outer);
    outer = inner;
  }
  s += gauss5(f, edge, edge + w * outer);
  return s;
}

}  // namespace detail

/// Panel boundaries inside (lo, hi): the lattice origin + i*step merged with
/// the supplied breakpoints. Sorted, endpoints included.
std::vector<double> panel_boundaries(double lo, double hi, double origin, double step,
                                     std::span<const double> breakpoints);

/// Composite 5-point Gauss-Legendre over [lo, hi] on an externally anchored
/// lattice. Two calls with the same lattice evaluate identical interior nodes,
/// which is what lets memoized surfaces pay for each node once.
template <class F>
double integrate_on_lattice(F&& f, double lo, double hi, double origin, double step,
                            std::span<const double> breakpoints, const QuadratureOptions& opt,
                            bool grade_lo = true, bool grade_hi = true) {
  if (!(hi > lo)) return 0.0;
  const auto pts = panel_boundaries(lo, hi, origin, step, breakpoints);
  const std::size_t n = pts.size() - 1;
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double a = pts[j];
    const double b = pts[j + 1];
    // Every panel inside the first or last lattice cell is graded towards
    // the nearer end, so a breakpoint next to a singular end cannot leave an
    // ungraded panel beside it.
    const bool near_lo = grade_lo && a < lo + step;
    const bool near_hi = grade_hi && b > hi - step;
    double part;
    if (near_lo && near_hi) {
      const double m = 0.5 * (a + b);
      part = detail::graded(f, a, m, opt) - detail::graded(f, b, m, opt);
    } else if (near_lo) {
      part = detail::graded(f, a, b, opt);
    } else if (near_hi) {
      part = -detail::graded(f, b, a, opt);
    } else {
      part = detail::gauss5(f, a, b);
    }
    // Neumaier summation
    const double t = sum + part;
    comp += std::abs(sum) >= std::abs(part) ? (sum - t) + part : (part - t) + sum;
    sum = t;
  }
  return sum + comp;
}

/// Composite Gauss-Legendre over [lo, hi] with `opt.panels` uniform panels,
/// split at the breakpoints, both ends geometrically graded.
template <class F>
double integrate(F&& f, double lo, double hi, std::span<const double> breakpoints,
                 const QuadratureOptions& opt) {
  if (opt.panels < 1) throw QuadratureError("panel count must be positive");
  if (!(hi > lo)) return 0.0;
  return integrate_on_lattice(f, lo, hi, lo, (hi - lo) / opt.panels, breakpoints, opt);
}

/// Locates a zero of h on [lo, hi] where h(lo) and h(hi) differ in sign.
template <class H>
double bisect_sign_change(H&& h, double lo, double hi, double hlo) {
  for (int it = 0; it < 100 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double hm = h(mid);
    if ((hm > 0) == (hlo > 0)) {
      lo = mid;
      hlo = hm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Sign changes of each kink function along [lo, hi], found by scanning
/// `samples` uniform cells and refining by bisection. Appends to `out`.
template <class H>
void append_sign_changes(H&& h, double lo, double hi, int samples, std::vector<double>& out) {
  if (!(hi > lo) || samples < 1) return;
  const double step = (hi - lo) / samples;
  double prev_x = lo;
  double prev = h(lo);
  for (int i = 1; i <= samples; ++i) {
    const double x = i == samples ? hi : lo + i * step;
    const double cur = h(x);
    if (std::isfinite(prev) && std::isfinite(cur) && prev != 0.0 && cur != 0.0 &&
        (prev > 0) != (cur > 0)) {
      out.push_back(bisect_sign_change(h, prev_x, x, prev));
    }
    prev_x = x;
    prev = cur;
  }
}

enum class RootSide { rightmost, leftmost };

namespace detail {

template <class G>
double rightmost_root(G& g, double lo, double hi, double tol) {
  double ghi = g(hi);
  if (ghi <= 0.0) return hi;
  double glo = g(lo);
  double a = lo, b = hi;
  double fa = glo, fb = ghi;
  int stale = 0;  // -1 after moving a, +1 after moving b
  double width = b - a;
  int slow = 0;
  while (b - a > tol) {
    double t;
    if (slow >= 2 || !(fb > fa)) {
      t = 0.5 * (a + b);
      slow = 0;
    } else {
      t = a - fa * (b - a) / (fb - fa);
      const double guard = 0.25 * tol;
      t = std::clamp(t, a + guard, b - guard);
    }
    const double ft = g(t);
    if (ft <= 0.0) {
      a = t;
      fa = ft;
      if (stale == -1) fb *= 0.5;
      stale = -1;
    } else {
      b = t;
      fb = ft;
      if (stale == 1) fa *= 0.5;
      stale = 1;
    }
    const double next = b - a;
    slow = next > 0.5 * width ? slow + 1 : 0;
    width = next;
  }
  return a;
}

template <class G>
double rightmost_root_bisect(G& g, double lo, double hi, double tol) {
  if (g(hi) <= 0.0) return hi;
  double a = lo, b = hi;
  while (b - a > tol) {
    const double t = 0.5 * (a + b);
    if (g(t) <= 0.0) a = t; else b = t;
  }
  return a;
}

}  // namespace detail

/// Extreme root of a nondecreasing g on [lo, hi].
///   rightmost: sup{t : g(t) <= 0}, requires g(lo) <= 0;
///   leftmost:  inf{t : g(t) >= 0}, requires g(hi) >= 0.
/// Illinois false position with a bisection safeguard; the bracket always
/// straddles the extreme root, so flat stretches of g cannot pull the answer
/// inward. Terminates once the bracket is narrower than tol.
template <class G>
double monotone_root(G&& g, double lo, double hi, double tol, RootSide side) {
  if (side == RootSide::leftmost) {
    auto mirrored = [&g](double s) { return -g(-s); };
    return -detail::rightmost_root(mirrored, -hi, -lo, tol);
  }
  return detail::rightmost_root(g, lo, hi, tol);
}

/// Reference implementation of the same contract by plain bisection.
template <class G>
double monotone_root_bisect(G&& g, double lo, double hi, double tol, RootSide side) {
  if (side == RootSide::leftmost) {
    auto mirrored = [&g](double s) { return -g(-s); };
    return -detail::rightmost_root_bisect(mirrored, -hi, -lo, tol);
  }
  return detail::rightmost_root_bisect(g, lo, hi, tol);
}

}  // namespace cbounds
