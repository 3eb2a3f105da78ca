#pragma once

// Reference computations that share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>

namespace oracle {

inline double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
inline double Phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Inverse of Phi by bisection.
inline double Phi_inv(double p) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (Phi(mid) < p) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Composite Simpson rule with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// P(X <= h, Y <= k), standard normals with correlation |rho| < 1, as
/// the integral of phi(x) Phi((k - rho x) / sqrt(1 - rho^2)) over x <= h.
inline double bvn(double h, double k, double rho) {
  const double lo = -12.0;
  if (h <= lo) return 0.0;
  const double s = std::sqrt(1.0 - rho * rho);
  return simpson([&](double x) { return phi(x) * Phi((k - rho * x) / s); }, lo, h, 40000);
}

inline double gaussian_copula(double u, double v, double rho) {
  if (u <= 0.0 || v <= 0.0) return 0.0;
  if (u >= 1.0) return v;
  if (v >= 1.0) return u;
  return bvn(Phi_inv(u), Phi_inv(v), rho);
}

/// E[(S_T - K)^+] for a driftless lognormal with S_0 = s.
inline double black_scholes_call(double s, double k, double sigma, double t) {
  if (k <= 0.0) return s - k;
  const double sd = sigma * std::sqrt(t);
  const double d1 = (std::log(s / k) + 0.5 * sd * sd) / sd;
  return s * Phi(d1) - k * Phi(d1 - sd);
}

/// Exchange option E[(X - Y)^+] for correlated driftless lognormals.
inline double margrabe(double sx, double sy, double sigx, double sigy, double rho, double t) {
  const double sig = std::sqrt(sigx * sigx + sigy * sigy - 2.0 * rho * sigx * sigy);
  const double sd = sig * std::sqrt(t);
  const double d1 = (std::log(sx / sy) + 0.5 * sd * sd) / sd;
  return sx * Phi(d1) - sy * Phi(d1 - sd);
}

struct Estimate {
  double mean;
  double std_error;
};

/// Monte Carlo E f(X, Y) with lognormal marginals coupled by a Gaussian copula.
inline Estimate monte_carlo(const std::function<double(double, double)>& f, double sigx, double sigy,
                            double spot, double t, double rho, int samples, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z;
  const double s = std::sqrt(1.0 - rho * rho);
  const double rt = std::sqrt(t);
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double z1 = z(gen);
    const double z2 = rho * z1 + s * z(gen);
    const double x = spot * std::exp(sigx * rt * z1 - 0.5 * sigx * sigx * t);
    const double y = spot * std::exp(sigy * rt * z2 - 0.5 * sigy * sigy * t);
    const double v = f(x, y);
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / samples;
  const double var = (sum2 / samples - mean * mean) * samples / (samples - 1.0);
  return {mean, std::sqrt(var / samples)};
}

/// E f(X, Y) under a copula whose conditional law of V given U = u is a
/// single atom (true for the one-point bound copulas). The atom is located
/// by bisection on the finite-difference partial derivative dC/du crossing
/// 1/2, then f is averaged over a midpoint grid in u.
inline double singular_expectation(const std::function<double(double, double)>& copula,
                                   const std::function<double(double, double)>& f,
                                   const std::function<double(double)>& qx,
                                   const std::function<double(double)>& qy, int n) {
  const double h = 0.25 / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = (i + 0.5) / n;
    auto partial = [&](double v) { return (copula(u + h, v) - copula(u - h, v)) / (2.0 * h); };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (partial(mid) < 0.5) lo = mid; else hi = mid;
    }
    const double v = std::clamp(0.5 * (lo + hi), 1e-15, 1.0 - 1e-15);
    sum += f(qx(u), qy(v));
  }
  return sum / n;
}

/// Lognormal quantile S0 exp(sigma sqrt(T) z - sigma^2 T / 2), z = Phi^{-1}(u).
inline double lognormal_quantile(double u, double sigma, double spot, double t) {
  return spot * std::exp(sigma * std::sqrt(t) * Phi_inv(u) - 0.5 * sigma * sigma * t);
}

}  // namespace oracle
