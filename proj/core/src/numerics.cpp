#include "copulabounds/numerics.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <limits>
#include <numbers>

namespace cbounds {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double norm_quantile(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("norm_quantile: p outside [0,1]");
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Upper orthant P(X > h, Y > k), after A. Genz's BVNU.
double bvn_upper(double h, double k, double r) {
  static constexpr double w6[] = {0.1713244923791705, 0.3607615730481384, 0.4679139345726904};
  static constexpr double x6[] = {0.9324695142031522, 0.6612093864662647, 0.2386191860831970};
  static constexpr double w12[] = {0.04717533638651177, 0.1069393259953183,
                                   0.1600783285433464,  0.2031674267230659,
                                   0.2334925365383547,  0.2491470458134029};
  static constexpr double x12[] = {0.9815606342467191, 0.9041172563704750,
                                   0.7699026741943050, 0.5873179542866171,
                                   0.3678314989981802, 0.1252334085114692};
  static constexpr double w20[] = {0.01761400713915212, 0.04060142980038694,
                                   0.06267204833410906, 0.08327674157670475,
                                   0.1019301198172404,  0.1181945319615184,
                                   0.1316886384491766,  0.1420961093183821,
                                   0.1491729864726037,  0.1527533871307259};
  static constexpr double x20[] = {0.9931285991850949, 0.9639719272779138,
                                   0.9122344282513259, 0.8391169718222188,
                                   0.7463319064601508, 0.6360536807265150,
                                   0.5108670019508271, 0.3737060887154196,
                                   0.2277858511416451, 0.07652652113349733};
  const double* w;
  const double* x;
  int lg;
  if (std::abs(r) < 0.3) {
    w = w6; x = x6; lg = 3;
  } else if (std::abs(r) < 0.75) {
    w = w12; x = x12; lg = 6;
  } else {
    w = w20; x = x20; lg = 10;
  }

  double hk = h * k;
  double bvn = 0.0;
  if (std::abs(r) < 0.925) {
    const double hs = (h * h + k * k) / 2.0;
    const double asr = std::asin(r) / 2.0;
    for (int i = 0; i < lg; ++i) {
      for (double sgn : {-1.0, 1.0}) {
        const double sn = std::sin(asr * (1.0 + sgn * x[i]));
        bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
      }
    }
    return bvn * asr / kTwoPi + norm_cdf(-h) * norm_cdf(-k);
  }

  if (r < 0.0) {
    k = -k;
    hk = -hk;
  }
  if (std::abs(r) < 1.0) {
    const double as = 1.0 - r * r;
    double a = std::sqrt(as);
    const double bs = (h - k) * (h - k);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 80.0;
    double asr = -(bs / as + hk) / 2.0;
    if (asr > -100.0) {
      bvn = a * std::exp(asr) * (1.0 - c * (bs - as) * (1.0 - d * bs) / 3.0 + c * d * as * as);
    }
    if (hk > -100.0) {
      const double b = std::sqrt(bs);
      const double sp = std::sqrt(kTwoPi) * norm_cdf(-b / a);
      bvn -= std::exp(-hk / 2.0) * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0);
    }
    a /= 2.0;
    double acc = 0.0;
    for (int i = 0; i < lg; ++i) {
      for (double sgn : {-1.0, 1.0}) {
        const double xs = std::pow(a * (1.0 + sgn * x[i]), 2);
        asr = -(bs / xs + hk) / 2.0;
        if (asr > -100.0) {
          const double sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs);
          const double rs = std::sqrt(1.0 - xs);
          const double ep = std::exp(-(hk / 2.0) * xs / ((1.0 + rs) * (1.0 + rs))) / rs;
          acc += w[i] * std::exp(asr) * (sp - ep);
        }
      }
    }
    bvn = (a * acc - bvn) / kTwoPi;
  }
  if (r > 0.0) return bvn + norm_cdf(-std::max(h, k));
  if (h >= k) return -bvn;
  const double l = h < 0.0 ? norm_cdf(k) - norm_cdf(h) : norm_cdf(-h) - norm_cdf(-k);
  return l - bvn;
}

}  // namespace

double bivariate_normal_cdf(double h, double k, double rho) {
  if (std::isnan(h) || std::isnan(k) || !(std::abs(rho) <= 1.0)) {
    throw std::domain_error("bivariate_normal_cdf: invalid argument");
  }
  if (h == -INFINITY || k == -INFINITY) return 0.0;
  if (h == INFINITY) return norm_cdf(k);
  if (k == INFINITY) return norm_cdf(h);
  if (rho == 1.0) return norm_cdf(std::min(h, k));
  if (rho == -1.0) return std::max(0.0, norm_cdf(h) - norm_cdf(-k));
  if (rho == 0.0) return norm_cdf(h) * norm_cdf(k);
  return std::clamp(bvn_upper(-h, -k, rho), 0.0, 1.0);
}

std::vector<double> panel_boundaries(double lo, double hi, double origin, double step,
                                     std::span<const double> breakpoints) {
  std::vector<double> pts;
  pts.push_back(lo);
  if (step > 0.0 && std::isfinite(step)) {
    const double first = std::floor((lo - origin) / step) + 1.0;
    for (double i = first;; i += 1.0) {
      const double p = origin + i * step;
      if (p >= hi) break;
      if (p > lo) pts.push_back(p);
    }
  }
  for (double b : breakpoints) {
    if (b > lo && b < hi) pts.push_back(b);
  }
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  const double min_gap = 1e-14 * std::max({1.0, std::abs(lo), std::abs(hi)});
  std::vector<double> out;
  out.reserve(pts.size());
  for (double p : pts) {
    if (out.empty() || p - out.back() > min_gap) {
      out.push_back(p);
    } else if (p == hi) {
      out.back() = hi;
    }
  }
  if (out.size() < 2) out = {lo, hi};
  return out;
}

}  // namespace cbounds
